// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

#include "graphrx/cli/commands.hpp"
#include "graphrx/error.hpp"
#include "graphrx/gnn/property.hpp"
#include "graphrx/io/formats.hpp"
#include "graphrx/kg/eval.hpp"
#include "graphrx/kg/train.hpp"
#include "graphrx/smiles.hpp"

namespace py = pybind11;
using namespace graphrx;

namespace {

py::array_t<float> tensor_to_numpy(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<float> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

Tensor numpy_to_tensor(py::array_t<float, py::array::c_style | py::array::forcecast> arr) {
  std::vector<int64_t> shape(arr.ndim());
  for (py::ssize_t d = 0; d < arr.ndim(); ++d) shape[size_t(d)] = arr.shape(d);
  std::vector<float> data(arr.data(), arr.data() + arr.size());
  return Tensor::from_data(std::move(shape), std::move(data));
}

std::vector<Edge> edges_from_pairs(const std::vector<std::tuple<int64_t, int64_t>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [h, t] : pairs) edges.emplace_back(h, t);
  return edges;
}

gnn::PropertyDataset dataset_from_lists(const std::vector<std::string>& smiles,
                                        const std::vector<float>& labels) {
  if (smiles.size() != labels.size())
    throw ContractError("smiles and labels differ in length");
  gnn::PropertyDataset dataset;
  for (size_t i = 0; i < smiles.size(); ++i) {
    dataset.molecules.push_back(from_smiles(smiles[i]).graph());
    dataset.labels.push_back(labels[i]);
    dataset.smiles.push_back(smiles[i]);
  }
  return dataset;
}

py::dict direction_dict(const kg::DirectionMetrics& m) {
  py::dict out;
  out["mr"] = m.mr;
  out["mrr"] = m.mrr;
  out["hits1"] = m.hits1;
  out["hits3"] = m.hits3;
  out["hits10"] = m.hits10;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph machine learning core for drug discovery workloads.";
  m.attr("__version__") = "1.0.0";
  m.attr("ATOM_FEATURE_DIM") = kAtomFeatureDim;
  m.attr("BOND_FEATURE_DIM") = kBondFeatureDim;

  py::register_exception<Error>(m, "GraphrxError");

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int64_t num_nodes, const std::vector<std::tuple<int64_t, int64_t>>& edges) {
             return Graph::build(num_nodes, edges_from_pairs(edges));
           }),
           py::arg("num_nodes"), py::arg("edges"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("edges",
           [](const Graph& g) {
             std::vector<std::tuple<int64_t, int64_t, int64_t>> out;
             for (const Edge& e : g.edges()) out.emplace_back(e.head, e.tail, e.relation);
             return out;
           })
      .def("node_mask", &Graph::node_mask, py::arg("keep"))
      .def("edge_mask", &Graph::edge_mask, py::arg("keep"))
      .def("subgraph", &Graph::subgraph, py::arg("nodes"))
      .def("connected_components", &Graph::connected_components)
      .def("degrees",
           [](const Graph& g, const std::string& direction) {
             Direction d = direction == "in"    ? Direction::in
                           : direction == "out" ? Direction::out
                                                : Direction::both;
             return tensor_to_numpy(g.degrees(d));
           },
           py::arg("direction") = "both")
      .def("to_undirected", &Graph::to_undirected)
      .def("with_node_attr",
           [](const Graph& g, const std::string& name, py::array_t<float> value) {
             return g.with_node_attr(name, numpy_to_tensor(value));
           })
      .def("node_attr",
           [](const Graph& g, const std::string& name) { return tensor_to_numpy(g.node_attr(name)); })
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

  py::class_<PackedGraph>(m, "PackedGraph")
      .def_static("pack", &PackedGraph::pack, py::arg("graphs"))
      .def_property_readonly("num_graphs", &PackedGraph::num_graphs)
      .def_property_readonly("total_nodes", &PackedGraph::total_nodes)
      .def_property_readonly("total_edges", &PackedGraph::total_edges)
      .def("unpack", &PackedGraph::unpack)
      .def("member", &PackedGraph::member, py::arg("index"))
      .def("repeat", &PackedGraph::repeat, py::arg("count"))
      .def("select", &PackedGraph::select, py::arg("which"))
      .def("node_graph_ids", &PackedGraph::node_graph_id_list)
      .def("__len__", &PackedGraph::num_graphs)
      .def("__eq__", [](const PackedGraph& a, const PackedGraph& b) { return a == b; });

  py::class_<Molecule>(m, "Molecule")
      .def_property_readonly("num_atoms", &Molecule::num_atoms)
      .def_property_readonly("num_bonds", &Molecule::num_bonds)
      .def_property_readonly("num_components", &Molecule::num_components)
      .def_property_readonly("formula", &Molecule::formula)
      .def_property_readonly("nonstandard_valence", &Molecule::nonstandard_valence)
      .def_property_readonly("graph", &Molecule::graph)
      .def("atom",
           [](const Molecule& m, int64_t i) {
             Molecule::Atom a = m.atom(i);
             py::dict out;
             out["atomic_number"] = a.atomic_number;
             out["formal_charge"] = a.formal_charge;
             out["aromatic"] = a.aromatic;
             out["implicit_hydrogens"] = a.implicit_hydrogens;
             out["isotope"] = a.isotope;
             return out;
           })
      .def("bonds",
           [](const Molecule& m) {
             std::vector<std::tuple<int64_t, int64_t, int>> out;
             for (int64_t b = 0; b < m.num_bonds(); ++b) {
               auto bond = m.bond(b);
               out.emplace_back(bond.a, bond.b, int(bond.type));
             }
             return out;
           })
      .def("to_smiles", [](const Molecule& m) { return to_smiles(m); })
      .def("to_dot", [](const Molecule& m, const std::string& name) { return io::to_dot(m, name); },
           py::arg("name") = "mol")
      .def("ion_to_molecule",
           [](const Molecule& m) {
             auto [neutral, report] = ion_to_molecule(m);
             return py::make_tuple(neutral, report.changed);
           })
      .def("murcko_scaffold", [](const Molecule& m) { return murcko_scaffold(m); })
      .def("__eq__", [](const Molecule& a, const Molecule& b) { return a == b; });

  m.def("from_smiles", [](const std::string& s) { return from_smiles(s); }, py::arg("smiles"));
  m.def("from_smiles_batch",
        [](const std::vector<std::string>& lines) { return from_smiles_batch(lines); },
        py::arg("smiles_list"));
  m.def("featurize_atoms",
        [](const PackedGraph& pg) { return tensor_to_numpy(featurize_atoms(pg)); });
  m.def("featurize_atoms",
        [](const Molecule& mol) { return tensor_to_numpy(featurize_atoms(mol.graph())); });
  m.def("featurize_bonds",
        [](const PackedGraph& pg) { return tensor_to_numpy(featurize_bonds(pg)); });

  py::class_<kg::TripletStore>(m, "TripletStore")
      .def_static("load_dir", &kg::TripletStore::load_dir, py::arg("directory"))
      .def_property_readonly("num_entities", &kg::TripletStore::num_entities)
      .def_property_readonly("num_relations", &kg::TripletStore::num_relations)
      .def_property_readonly("entities", &kg::TripletStore::entities)
      .def_property_readonly("relations", &kg::TripletStore::relations);

  py::class_<kg::EmbeddingModel>(m, "EmbeddingModel")
      .def(py::init([](const std::string& kind, int64_t dim, uint64_t seed, int64_t entities,
                       int64_t relations) {
             return kg::EmbeddingModel({kg::model_kind_from_string(kind), dim, seed}, entities,
                                       relations);
           }),
           py::arg("kind"), py::arg("dim"), py::arg("seed"), py::arg("num_entities"),
           py::arg("num_relations"))
      .def("score_one", &kg::EmbeddingModel::score_one)
      .def_property_readonly("entity_table", [](const kg::EmbeddingModel& model) {
        return tensor_to_numpy(model.entity_table().value);
      });

  m.def(
      "train_kg",
      [](const kg::TripletStore& store, kg::EmbeddingModel& model, int64_t epochs,
         int64_t batch_size, double lr, int64_t negatives, const std::string& loss, double margin,
         const std::string& negative_mode, uint64_t seed) {
        kg::TrainConfig config;
        config.epochs = epochs;
        config.batch_size = batch_size;
        config.lr = float(lr);
        config.negatives = negatives;
        config.loss = kg::loss_kind_from_string(loss);
        config.margin = float(margin);
        config.negative_mode = negative_mode == "filtered" ? kg::NegativeMode::filtered
                                                           : kg::NegativeMode::uniform;
        config.seed = seed;
        return train_kg(store, model, config).epoch_loss;
      },
      py::arg("store"), py::arg("model"), py::arg("epochs") = 200, py::arg("batch_size") = 64,
      py::arg("lr") = 0.05, py::arg("negatives") = 8, py::arg("loss") = "margin",
      py::arg("margin") = 2.0, py::arg("negative_mode") = "uniform", py::arg("seed") = 0);

  m.def(
      "evaluate_kg",
      [](const kg::TripletStore& store, const kg::EmbeddingModel& model, const std::string& split,
         bool filtered) {
        kg::Split which = split == "train"   ? kg::Split::train
                          : split == "valid" ? kg::Split::valid
                                             : kg::Split::test;
        kg::EvalReport report = kg::evaluate_split(store, model, which, filtered);
        py::dict out;
        out["head"] = direction_dict(report.head);
        out["tail"] = direction_dict(report.tail);
        out["combined"] = direction_dict(report.combined);
        out["triples"] = report.triple_count;
        out["filtered"] = report.filtered;
        return out;
      },
      py::arg("store"), py::arg("model"), py::arg("split") = "test", py::arg("filtered") = true);

  m.def(
      "query_topk",
      [](const kg::TripletStore& store, const kg::EmbeddingModel& model, const std::string& head,
         const std::string& relation, int64_t k, bool include_known) {
        std::vector<std::pair<std::string, float>> out;
        for (const auto& entry : kg::query_topk(store, model, head, relation, k, include_known))
          out.emplace_back(store.entity_name(entry.entity), entry.score);
        return out;
      },
      py::arg("store"), py::arg("model"), py::arg("head"), py::arg("relation"), py::arg("k") = 10,
      py::arg("include_known") = false);

  m.def("auroc", [](const std::vector<float>& scores, const std::vector<float>& labels) {
    auto value = gnn::auroc(scores, labels);
    return value ? py::cast(*value) : py::none().cast<py::object>();
  });

  m.def(
      "train_property",
      [](const std::vector<std::string>& smiles, const std::vector<float>& labels,
         const std::string& layer, int64_t layers, int64_t hidden, int64_t epochs,
         int64_t batch_size, double lr, uint64_t seed) {
        gnn::PropertyDataset dataset = dataset_from_lists(smiles, labels);
        gnn::PropertyConfig config;
        config.layer = gnn::layer_kind_from_string(layer);
        config.num_layers = layers;
        config.hidden = hidden;
        config.seed = seed;
        gnn::PropertyModel model(config);
        gnn::SplitIndices split =
            gnn::split_dataset(dataset, {gnn::SplitKind::random, 0.8, 0.1, 0.1, seed});
        gnn::PropertyTrainConfig train_config;
        train_config.epochs = epochs;
        train_config.batch_size = batch_size;
        train_config.lr = float(lr);
        train_config.seed = seed;
        gnn::PropertyTrainResult result =
            gnn::train_property(dataset, model, split, train_config);
        model.load_state(result.best_state);
        gnn::PropertyMetrics test = gnn::evaluate_property(model, dataset, split.test);
        py::dict out;
        out["best_epoch"] = result.best_epoch;
        out["test_auroc"] = test.auroc ? py::cast(*test.auroc) : py::none().cast<py::object>();
        out["test_accuracy"] = test.accuracy;
        return out;
      },
      py::arg("smiles"), py::arg("labels"), py::arg("layer") = "gin", py::arg("layers") = 2,
      py::arg("hidden") = 32, py::arg("epochs") = 30, py::arg("batch_size") = 32,
      py::arg("lr") = 0.01, py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    return cli::run_cli(args, std::cout, std::cerr);
  });
  m.def("version_line", &cli::version_line);
}
