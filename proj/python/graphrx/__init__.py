# GraphRx: graph machine learning core for drug discovery workloads.
# SPDX-License-Identifier: Apache-2.0
"""Python surface of the graphrx C++ core.

Batch-first molecules and attributed graphs, knowledge-graph embedding
training/evaluation, and molecular property prediction.
"""

from ._core import (  # noqa: F401
    ATOM_FEATURE_DIM,
    BOND_FEATURE_DIM,
    EmbeddingModel,
    Graph,
    GraphrxError,
    Molecule,
    PackedGraph,
    TripletStore,
    __version__,
    auroc,
    evaluate_kg,
    featurize_atoms,
    featurize_bonds,
    from_smiles,
    from_smiles_batch,
    query_topk,
    run_cli,
    train_kg,
    train_property,
    version_line,
)
