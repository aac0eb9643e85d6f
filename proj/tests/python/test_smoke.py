# GraphRx: graph machine learning core for drug discovery workloads.
# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the Python surface of the C++ core."""

import pytest

import graphrx


PAPER_SMILES = [
    "CCSCCSP(=S)(OC)OC",
    "CCOC(=O)N",
    "N(Nc1ccccc1)c2ccccc2",
    "NC(=O)c1cccnc1",
]


def test_version():
    assert graphrx.__version__ == "1.0.0"
    assert "graphrx" in graphrx.version_line()


def test_molecule_basics():
    mol = graphrx.from_smiles("CCOC(=O)N")
    assert mol.num_atoms == 6
    assert mol.num_bonds == 5
    assert mol.formula == "C3H7NO2"
    assert mol.atom(5)["atomic_number"] == 7
    assert mol.atom(0)["implicit_hydrogens"] == 3
    round_trip = graphrx.from_smiles(mol.to_smiles())
    assert round_trip.num_atoms == 6


def test_parse_error_is_typed():
    with pytest.raises(graphrx.GraphrxError):
        graphrx.from_smiles("C)(")


def test_batch_and_repeat():
    mols = graphrx.from_smiles_batch(PAPER_SMILES)
    assert len(mols) == 4
    doubled = mols.repeat(2)
    assert len(doubled) == 8
    assert doubled.total_nodes == 2 * mols.total_nodes
    members = doubled.unpack()
    assert members[0] == members[4]


def test_featurize_shapes():
    mols = graphrx.from_smiles_batch(PAPER_SMILES)
    features = graphrx.featurize_atoms(mols)
    assert features.shape == (mols.total_nodes, graphrx.ATOM_FEATURE_DIM)
    bonds = graphrx.featurize_bonds(mols)
    assert bonds.shape == (mols.total_edges, graphrx.BOND_FEATURE_DIM)
    assert (features.sum(axis=1) >= 4).all()  # four one-hot blocks per row


def test_graph_operations():
    triangle = graphrx.Graph(3, [(0, 1), (1, 2), (2, 0)])
    ids, count = triangle.connected_components()
    assert count == 1
    cut = triangle.node_mask([True, True, False])
    assert cut.num_nodes == 2
    assert cut.num_edges == 1
    packed = graphrx.PackedGraph.pack([triangle, graphrx.Graph(1, [])])
    assert packed.node_graph_ids() == [0, 0, 0, 1]


def test_ion_to_molecule():
    neutral, changed = graphrx.from_smiles("[NH4+]").ion_to_molecule()
    assert changed == [True]
    assert neutral.atom(0)["formal_charge"] == 0
    assert neutral.atom(0)["implicit_hydrogens"] == 3


def test_murcko():
    assert graphrx.from_smiles("Cc1ccccc1").murcko_scaffold().num_atoms == 6
    assert graphrx.from_smiles("CCCC").murcko_scaffold().num_atoms == 0


def test_kg_pipeline(tmp_path):
    out = str(tmp_path / "kg")
    assert graphrx.run_cli(["gen-kg", "--out", out, "--seed", "1", "entities=10"]) == 0
    store = graphrx.TripletStore.load_dir(out)
    assert store.num_entities == 10
    assert store.num_relations == 3
    model = graphrx.EmbeddingModel("rotate", 8, 3, store.num_entities, store.num_relations)
    curve = graphrx.train_kg(store, model, epochs=30, batch_size=8,
                             negative_mode="filtered", seed=3)
    assert len(curve) == 30
    assert curve[-1] <= curve[0]
    report = graphrx.evaluate_kg(store, model, split="test")
    assert 0 < report["combined"]["mrr"] <= 1
    results = graphrx.query_topk(store, model, "e0", "succ", k=3, include_known=True)
    assert len(results) == 3


def test_property_training():
    smiles = ["N", "CN", "CCN", "NCC", "NC(=O)C", "CNC", "NCCO", "N#CC", "CCCN", "NCCC"]
    smiles += ["C", "CC", "CCC", "CCO", "CC(=O)C", "COC", "OCCO", "C#CC", "CCCO", "OCCC"]
    labels = [1.0] * 10 + [0.0] * 10
    result = graphrx.train_property(smiles * 2, labels * 2, epochs=15, batch_size=8,
                                    hidden=16, seed=1)
    assert result["test_auroc"] is None or result["test_auroc"] >= 0.5


def test_auroc():
    assert graphrx.auroc([0.9, 0.8, 0.3, 0.1], [1, 0, 1, 0]) == pytest.approx(0.75)
    assert graphrx.auroc([0.9, 0.8], [1, 1]) is None
