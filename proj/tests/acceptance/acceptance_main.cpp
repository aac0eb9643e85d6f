// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Invoke with the path
// to the graphrx CLI binary:
//
//   graphrx_acceptance /path/to/graphrx

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphrx/error.hpp"
#include "graphrx/gnn/property.hpp"
#include "graphrx/io/formats.hpp"
#include "graphrx/kg/eval.hpp"
#include "graphrx/kg/train.hpp"
#include "graphrx/smiles.hpp"
#include "support/gnn_oracles.hpp"
#include "support/grad_battery.hpp"
#include "support/kg_oracles.hpp"
#include "support/mol_oracles.hpp"
#include "support/oracles.hpp"

using namespace graphrx;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::string g_source_dir = GRAPHRX_SOURCE_DIR;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable: " + path + ">";
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "graphrx_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli_command(const std::string& args) {
  std::string command = g_cli + " " + args + " >/dev/null 2>&1";
  return std::system(command.c_str());
}

// ---------------------------------------------------------------------
// 1. Paper-snippet reproduction.
std::string criterion_paper_snippet() {
  auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> smiles = {"CCSCCSP(=S)(OC)OC", "CCOC(=O)N",
                                           "N(Nc1ccccc1)c2ccccc2", "NC(=O)c1cccnc1"};
  // Hand-derived grammar walk: atom and bond counts per molecule.
  const int64_t expected_atoms[] = {12, 6, 14, 9};
  const int64_t expected_bonds[] = {11, 5, 15, 9};

  PackedGraph batch = from_smiles_batch(smiles);
  if (batch.num_graphs() != 4) return "expected a batch of 4";
  PackedGraph doubled = batch.repeat(2);
  if (doubled.num_graphs() != 8) return "repeat x2 should give a batch of 8";
  for (int64_t i = 0; i < 4; ++i) {
    if (batch.nodes_of(i) != expected_atoms[i])
      return "molecule " + std::to_string(i) + ": " + std::to_string(batch.nodes_of(i)) +
             " atoms, expected " + std::to_string(expected_atoms[i]);
    if (batch.edges_of(i) != 2 * expected_bonds[i])
      return "molecule " + std::to_string(i) + ": " + std::to_string(batch.edges_of(i) / 2) +
             " bonds, expected " + std::to_string(expected_bonds[i]);
    if (doubled.nodes_of(i + 4) != expected_atoms[i]) return "repeated member differs";
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 1.0) return "took " + std::to_string(elapsed) + " s (budget 1 s)";
  return "";
}

// ---------------------------------------------------------------------
// 2. Attribute-maintenance suite: a shadow model tracks sentinel ids
// through randomized operation sequences.
struct ShadowGraph {
  std::vector<double> nodes;                             // sentinel per node
  std::vector<std::tuple<int, int, double>> edges;       // endpoints + sentinel
  double graph_tag = 0;
};

Graph realize(const ShadowGraph& shadow) {
  std::vector<Edge> edges;
  std::vector<float> edge_tags;
  for (auto [a, b, tag] : shadow.edges) {
    edges.emplace_back(a, b);
    edge_tags.push_back(float(tag));
  }
  Graph g = Graph::build(int64_t(shadow.nodes.size()), edges);
  std::vector<float> node_tags(shadow.nodes.begin(), shadow.nodes.end());
  g = g.with_node_attr("sentinel", Tensor::from_data({g.num_nodes()}, node_tags));
  g = g.with_edge_attr("esentinel", Tensor::from_data({g.num_edges()}, edge_tags));
  return g.with_graph_attr("gtag", Tensor::scalar(float(shadow.graph_tag)));
}

std::string compare(const Graph& g, const ShadowGraph& shadow) {
  if (g.num_nodes() != int64_t(shadow.nodes.size())) return "node count differs";
  if (g.num_edges() != int64_t(shadow.edges.size())) return "edge count differs";
  const Tensor& node_tags = g.node_attr("sentinel");
  for (size_t i = 0; i < shadow.nodes.size(); ++i)
    if (double(node_tags.at(int64_t(i))) != shadow.nodes[i])
      return "node sentinel row " + std::to_string(i) + " misaligned";
  const Tensor& edge_tags = g.edge_attr("esentinel");
  for (size_t e = 0; e < shadow.edges.size(); ++e) {
    auto [a, b, tag] = shadow.edges[e];
    if (double(edge_tags.at(int64_t(e))) != tag)
      return "edge sentinel row " + std::to_string(e) + " misaligned";
    if (g.edges()[e].head != a || g.edges()[e].tail != b)
      return "edge " + std::to_string(e) + " endpoints misaligned";
  }
  if (double(g.graph_attr("gtag").item()) != shadow.graph_tag) return "graph attr misaligned";
  return "";
}

std::string criterion_attribute_maintenance() {
  Rng rng(20260809);
  double next_tag = 1;
  for (int sequence = 0; sequence < 1000; ++sequence) {
    // Random batch of shadow graphs.
    std::vector<ShadowGraph> shadows(1 + rng.below(4));
    for (auto& shadow : shadows) {
      int64_t n = 1 + int64_t(rng.below(32));
      for (int64_t i = 0; i < n; ++i) shadow.nodes.push_back(next_tag++);
      int64_t edge_count = rng.below(uint64_t(2 * n));
      for (int64_t e = 0; e < edge_count; ++e)
        shadow.edges.emplace_back(int(rng.below(uint64_t(n))), int(rng.below(uint64_t(n))),
                                  next_tag++);
      shadow.graph_tag = next_tag++;
    }
    std::vector<Graph> graphs;
    for (const auto& shadow : shadows) graphs.push_back(realize(shadow));

    bool packed = false;
    PackedGraph pg;
    for (int step = 0; step < 6; ++step) {
      if (!packed) {
        size_t member = rng.below(shadows.size());
        ShadowGraph& shadow = shadows[member];
        switch (rng.below(4)) {
          case 0: {  // node_mask
            std::vector<bool> keep(shadow.nodes.size());
            for (auto&& k : keep) k = rng.coin();
            std::vector<int> position(shadow.nodes.size(), -1);
            ShadowGraph next;
            for (size_t i = 0; i < shadow.nodes.size(); ++i)
              if (keep[i]) {
                position[i] = int(next.nodes.size());
                next.nodes.push_back(shadow.nodes[i]);
              }
            for (auto [a, b, tag] : shadow.edges)
              if (position[size_t(a)] >= 0 && position[size_t(b)] >= 0)
                next.edges.emplace_back(position[size_t(a)], position[size_t(b)], tag);
            next.graph_tag = shadow.graph_tag;
            graphs[member] = graphs[member].node_mask(keep);
            shadow = next;
            break;
          }
          case 1: {  // edge_mask
            std::vector<bool> keep(shadow.edges.size());
            for (auto&& k : keep) k = rng.coin();
            ShadowGraph next = shadow;
            next.edges.clear();
            for (size_t e = 0; e < shadow.edges.size(); ++e)
              if (keep[e]) next.edges.push_back(shadow.edges[e]);
            graphs[member] = graphs[member].edge_mask(keep);
            shadow = next;
            break;
          }
          case 2: {  // subgraph with a random distinct subset in random order
            std::vector<int64_t> order(shadow.nodes.size());
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            order.resize(rng.below(shadow.nodes.size() + 1));
            std::vector<int> position(shadow.nodes.size(), -1);
            ShadowGraph next;
            for (size_t pos = 0; pos < order.size(); ++pos) {
              position[size_t(order[pos])] = int(pos);
              next.nodes.push_back(shadow.nodes[size_t(order[pos])]);
            }
            for (auto [a, b, tag] : shadow.edges)
              if (position[size_t(a)] >= 0 && position[size_t(b)] >= 0)
                next.edges.emplace_back(position[size_t(a)], position[size_t(b)], tag);
            next.graph_tag = shadow.graph_tag;
            graphs[member] = graphs[member].subgraph(order);
            shadow = next;
            break;
          }
          case 3: {  // pack
            pg = PackedGraph::pack(graphs);
            packed = true;
            break;
          }
        }
      } else {
        switch (rng.below(3)) {
          case 0: {  // unpack
            graphs = pg.unpack();
            packed = false;
            break;
          }
          case 1: {  // repeat
            int64_t k = int64_t(rng.below(3));
            pg = pg.repeat(k);
            std::vector<ShadowGraph> next;
            for (int64_t r = 0; r < k; ++r)
              next.insert(next.end(), shadows.begin(), shadows.end());
            shadows = next;
            break;
          }
          case 2: {  // select
            std::vector<int64_t> which(rng.below(uint64_t(shadows.size() + 2)));
            for (auto& w : which) w = int64_t(rng.below(uint64_t(shadows.size())));
            pg = pg.select(which);
            std::vector<ShadowGraph> next;
            for (int64_t w : which) next.push_back(shadows[size_t(w)]);
            shadows = next;
            break;
          }
        }
        if (packed && shadows.empty()) {
          // refill degenerate empty batches so the walk continues
          graphs.clear();
          packed = false;
          ShadowGraph shadow;
          shadow.nodes.push_back(next_tag++);
          shadow.graph_tag = next_tag++;
          shadows.push_back(shadow);
          graphs.push_back(realize(shadow));
        }
      }
      // verify alignment after every operation
      std::vector<Graph> current = packed ? pg.unpack() : graphs;
      if (current.size() != shadows.size())
        return "sequence " + std::to_string(sequence) + ": member count diverged";
      for (size_t m = 0; m < shadows.size(); ++m) {
        std::string problem = compare(current[m], shadows[m]);
        if (!problem.empty())
          return "sequence " + std::to_string(sequence) + " member " + std::to_string(m) + ": " +
                 problem;
      }
    }
  }
  return "";
}

// ---------------------------------------------------------------------
// 3. Connected-components oracle.
std::string criterion_components_oracle() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(77);
  const float probabilities[] = {0.02f, 0.1f, 0.5f};
  for (int iteration = 0; iteration < 500; ++iteration) {
    int64_t n = 1 + int64_t(rng.below(64));
    float p = probabilities[iteration % 3];
    std::vector<Edge> edges;
    std::vector<std::pair<int64_t, int64_t>> pairs;
    for (int64_t u = 0; u < n; ++u)
      for (int64_t v = 0; v < n; ++v)
        if (rng.uniform() < p) {
          edges.emplace_back(u, v);
          pairs.emplace_back(u, v);
        }
    auto got = Graph::build(n, edges).connected_components();
    auto want = oracle::bfs_components(n, pairs);
    if (got != want) return "mismatch at iteration " + std::to_string(iteration);
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 5.0) return "took " + std::to_string(elapsed) + " s (budget 5 s)";
  return "";
}

// ---------------------------------------------------------------------
// 4. Gradient checks across ops and both full models.
std::string criterion_gradients() {
  for (const auto& result : oracle::run_tensor_op_battery(20260809, 20)) {
    if (!result.ok())
      return result.name + ": " + std::to_string(result.passed) + "/" +
             std::to_string(result.requested) + " (" + result.failure + ")";
  }
  for (const auto& result : oracle::run_kg_score_battery(424242, 20)) {
    if (!result.ok())
      return result.name + ": " + std::to_string(result.passed) + "/" +
             std::to_string(result.requested) + " (" + result.failure + ")";
  }
  for (const auto& result : oracle::run_property_grad_battery(3131, 20)) {
    if (!result.ok())
      return result.name + ": " + std::to_string(result.passed) + "/" +
             std::to_string(result.requested) + " (" + result.failure + ")";
  }
  return "";
}

// ---------------------------------------------------------------------
// 5. Filtered-ranking oracle on exhaustive small stores.
std::string criterion_ranking_oracle() {
  Rng rng(909);
  const kg::ModelKind kinds[] = {kg::ModelKind::transe, kg::ModelKind::distmult,
                                 kg::ModelKind::complex_, kg::ModelKind::rotate,
                                 kg::ModelKind::simple};
  for (int iteration = 0; iteration < 100; ++iteration) {
    int64_t num_entities = 2 + int64_t(rng.below(9));   // <= 10
    int64_t num_relations = 1 + int64_t(rng.below(3));  // <= 3
    std::vector<std::string> entities, relations;
    for (int64_t i = 0; i < num_entities; ++i) entities.push_back("e" + std::to_string(i));
    for (int64_t i = 0; i < num_relations; ++i) relations.push_back("r" + std::to_string(i));
    std::set<std::tuple<int64_t, int64_t, int64_t>> seen;
    std::vector<kg::Triple> train, test;
    auto draw = [&](std::vector<kg::Triple>& out) {
      kg::Triple t{int64_t(rng.below(uint64_t(num_entities))),
                   int64_t(rng.below(uint64_t(num_relations))),
                   int64_t(rng.below(uint64_t(num_entities)))};
      if (seen.insert({t.head, t.relation, t.tail}).second) out.push_back(t);
    };
    for (int i = 0; i < 15; ++i) draw(train);
    for (int i = 0; i < 5; ++i) draw(test);
    if (test.empty()) {
      --iteration;
      continue;
    }
    kg::TripletStore store =
        kg::TripletStore::from_indices(entities, relations, train, {}, test);
    kg::EmbeddingModel model({kinds[iteration % 5], 4, rng.next_u64()}, num_entities,
                             num_relations);
    for (bool filtered : {true, false}) {
      kg::EvalReport implementation = kg::evaluate_ranking(store, model, store.test(), filtered);
      kg::EvalReport reference = oracle::oracle_evaluate(store, model, store.test(), filtered);
      if (!oracle::reports_close(implementation, reference))
        return "mismatch at iteration " + std::to_string(iteration) +
               (filtered ? " (filtered)" : " (raw)");
    }
  }
  return "";
}

// ---------------------------------------------------------------------
// 6. KG end-to-end convergence under the pinned budget.
std::string criterion_kg_convergence() {
  auto start = std::chrono::steady_clock::now();
  fs::path dir = scratch("kg40");
  if (run_cli_command("gen-kg --out " + dir.string() + " --seed 0 entities=40") != 0)
    return "gen-kg failed";
  kg::TripletStore store = kg::TripletStore::load_dir(dir.string());
  if (store.num_entities() != 40 ||
      int64_t(store.train().size() + store.valid().size() + store.test().size()) != 120)
    return "generator did not produce 120 facts over 40 entities";

  std::string failures;
  auto train_and_score = [&](kg::ModelKind kind, kg::TrainConfig config, uint64_t seed) {
    kg::EmbeddingModel model({kind, 32, seed}, store.num_entities(), store.num_relations());
    config.seed = seed;
    kg::train_kg(store, model, config);
    return kg::evaluate_split(store, model, kg::Split::test, true).combined.mrr;
  };

  // margin loss gamma=2 and d=32 are pinned by the criterion; learning
  // rate, negatives, batching and seed are tuning choices.
  kg::TrainConfig transe_config;
  transe_config.epochs = 1000;
  transe_config.batch_size = 96;
  transe_config.lr = 0.1f;
  transe_config.negatives = 39;
  transe_config.loss = kg::LossKind::margin;
  transe_config.margin = 2.f;
  transe_config.negative_mode = kg::NegativeMode::filtered;
  double transe_mrr = train_and_score(kg::ModelKind::transe, transe_config, 0);
  if (transe_mrr < 0.90)
    failures += "transe test MRR " + std::to_string(transe_mrr) + " < 0.90";

  kg::TrainConfig rotate_config = transe_config;
  rotate_config.lr = 0.3f;
  double rotate_mrr = train_and_score(kg::ModelKind::rotate, rotate_config, 3);
  if (rotate_mrr < 0.90) {
    if (!failures.empty()) failures += "; ";
    failures += "rotate test MRR " + std::to_string(rotate_mrr) + " < 0.90";
  }

  double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    if (!failures.empty()) failures += "; ";
    failures += "took " + std::to_string(elapsed) + " s (budget 60 s)";
  }
  return failures;
}

// ---------------------------------------------------------------------
// 7. Property prediction end-to-end on the bundled dataset.
std::string criterion_property_convergence() {
  auto start = std::chrono::steady_clock::now();
  gnn::PropertyDataset dataset =
      io::load_property_csv(g_source_dir + "/data/contains_nitrogen.csv", "label", nullptr);
  if (dataset.size() != 200) return "bundled dataset should have 200 molecules";

  gnn::PropertyConfig config;
  config.layer = gnn::LayerKind::gin;
  config.num_layers = 2;
  config.hidden = 32;
  config.seed = 0;
  gnn::PropertyModel model(config);
  gnn::SplitIndices split =
      gnn::split_dataset(dataset, {gnn::SplitKind::random, 0.8, 0.1, 0.1, 0});

  gnn::PropertyTrainConfig train_config;
  train_config.epochs = 50;
  train_config.batch_size = 32;
  train_config.lr = 0.01f;
  train_config.seed = 0;
  gnn::train_property(dataset, model, split, train_config);

  gnn::PropertyMetrics test = gnn::evaluate_property(model, dataset, split.test);
  if (!test.auroc.has_value()) return "test subset lost a class";
  if (*test.auroc < 0.95) return "test AUROC " + std::to_string(*test.auroc) + " < 0.95";
  double elapsed = seconds_since(start);
  if (elapsed >= 30.0) return "took " + std::to_string(elapsed) + " s (budget 30 s)";
  return "";
}

// ---------------------------------------------------------------------
// 8. SMILES round-trip over the bundled corpus.
std::string criterion_smiles_round_trip() {
  std::ifstream in(g_source_dir + "/data/smiles_corpus.txt");
  if (!in) return "cannot open bundled corpus";
  std::string line;
  int64_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++count;
    Molecule original, reparsed;
    try {
      original = from_smiles(line);
      reparsed = from_smiles(to_smiles(original));
    } catch (const graphrx::Error& e) {
      return line + ": " + e.what();
    }
    bool equivalent = original.num_atoms() <= 20
                          ? oracle::mol_isomorphic(original, reparsed)
                          : oracle::mol_invariants_equal(original, reparsed);
    if (!equivalent) return line + ": round trip not isomorphic";
  }
  if (count < 200) return "corpus has only " + std::to_string(count) + " molecules";
  return "";
}

// ---------------------------------------------------------------------
// 9. CLI determinism: byte-identical reports and checkpoints.
std::string criterion_determinism() {
  fs::path base = scratch("determinism");
  fs::path inputs = base / "inputs";
  fs::create_directories(inputs);
  {
    std::ofstream smi(inputs / "mols.smi");
    smi << "CCO\nc1ccccc1\nNC(=O)c1cccnc1\nbroken)(\n";
    std::ofstream csv(inputs / "props.csv");
    csv << "smiles,label\n";
    const char* pos[] = {"N", "CN", "CCN", "NCC", "CNC", "NCCO"};
    const char* neg[] = {"C", "CC", "CCO", "OCC", "COC", "OCCO"};
    for (const char* s : pos) csv << s << ",1\n";
    for (const char* s : neg) csv << s << ",0\n";
  }
  fs::path kg_data = base / "kg";
  if (run_cli_command("gen-kg --out " + kg_data.string() + " --seed 2 entities=10") != 0)
    return "gen-kg failed";

  struct Step {
    std::string name;
    std::string args;                   // relative to a fresh out dir
    std::vector<std::string> products;  // files to compare
    bool expect_failure = false;
  };
  fs::path out = base / "out";
  fs::path prior_checkpoint = base / "prior_checkpoint.grx";
  const Step steps[] = {
      {"mol-parse",
       "mol-parse --out " + out.string() + " --seed 1 input=" + (inputs / "mols.smi").string(),
       {"report.jsonl"},
       true},
      {"mol-viz",
       "mol-viz --out " + out.string() + " --seed 1 input=" + (inputs / "mols.smi").string(),
       {},
       true},
      {"gen-kg", "gen-kg --out " + out.string() + " --seed 4 entities=10",
       {"train.tsv", "valid.tsv", "test.tsv"}},
      {"kg-train",
       "kg-train --out " + out.string() + " --seed 5 data=" + kg_data.string() +
           " model=rotate dim=6 epochs=3 batch_size=8",
       {"checkpoint.grx", "metrics.jsonl"}},
      {"kg-eval",
       "kg-eval --out " + out.string() + " --seed 5 checkpoint=" +
           prior_checkpoint.string() + " data=" + kg_data.string() + " split=test",
       {"report.jsonl"}},
      {"kg-query",
       "kg-query --out " + out.string() + " --seed 5 checkpoint=" + prior_checkpoint.string() +
           " data=" + kg_data.string() + " head=e1 relation=succ k=4",
       {"report.jsonl"}},
      {"prop-train",
       "prop-train --out " + out.string() + " --seed 6 data=" + (inputs / "props.csv").string() +
           " epochs=3 batch_size=4 hidden=8 train_fraction=0.6 valid_fraction=0.2 "
           "test_fraction=0.2",
       {"checkpoint.grx", "metrics.jsonl"}},
      {"prop-eval",
       "prop-eval --out " + out.string() + " --seed 6 checkpoint=" + prior_checkpoint.string() +
           " data=" + (inputs / "props.csv").string(),
       {"report.jsonl"}},
  };

  for (const Step& step : steps) {
    std::vector<std::string> first_pass;
    for (int round = 0; round < 2; ++round) {
      fs::remove_all(out);
      fs::create_directories(out);
      int code = run_cli_command(step.args);
      if (!step.expect_failure && code != 0) return step.name + " exited with " + std::to_string(code);
      std::vector<std::string> contents;
      if (step.products.empty()) {
        // compare every produced file
        for (const auto& entry : fs::directory_iterator(out))
          contents.push_back(slurp(entry.path().string()));
      } else {
        for (const std::string& product : step.products)
          contents.push_back(slurp((out / product).string()));
      }
      if (round == 0) {
        first_pass = contents;
        // stash checkpoints for the dependent eval/query steps
        if (fs::exists(out / "checkpoint.grx"))
          fs::copy_file(out / "checkpoint.grx", prior_checkpoint,
                        fs::copy_options::overwrite_existing);
      } else if (contents != first_pass) {
        return step.name + ": outputs differ between identical runs";
      }
    }
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-graphrx-cli>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];

  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  const Criterion criteria[] = {
      {"paper-snippet reproduction (batch of 4, repeat x2, counts)", criterion_paper_snippet},
      {"attribute maintenance across 1000 randomized op sequences",
       criterion_attribute_maintenance},
      {"connected components agree with BFS oracle on 500 graphs", criterion_components_oracle},
      {"gradient checks: ops, kg scores, gcn/gin property losses", criterion_gradients},
      {"filtered ranking equals brute force on 100 small stores", criterion_ranking_oracle},
      {"kg end-to-end: transe & rotate reach filtered MRR >= 0.90", criterion_kg_convergence},
      {"property end-to-end: gin 2x32 reaches test AUROC >= 0.95",
       criterion_property_convergence},
      {"smiles round-trip isomorphism over the bundled corpus", criterion_smiles_round_trip},
      {"determinism: byte-identical reports and checkpoints", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = criterion.run();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    double elapsed = seconds_since(start);
    if (problem.empty()) {
      std::printf("[PASS] %-60s (%.1f s)\n", criterion.name, elapsed);
    } else {
      std::printf("[FAIL] %-60s (%.1f s)\n       %s\n", criterion.name, elapsed,
                  problem.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
