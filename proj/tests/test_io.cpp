// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphrx/error.hpp"
#include "graphrx/io/checkpoint.hpp"
#include "graphrx/io/formats.hpp"
#include "graphrx/rng.hpp"
#include "graphrx/smiles.hpp"
#include "support/oracles.hpp"

using namespace graphrx;
namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / ("graphrx_io_test_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("edge list round trip") {
  Graph g = Graph::build(4, {{0, 1, 2}, {1, 2, 0}, {3, 3, 1}}, 3);
  std::string text = io::write_edge_list(g);
  std::istringstream in(text);
  Graph back = io::read_edge_list(in);
  CHECK(back.num_nodes() == 4);
  CHECK(back.edges() == g.edges());
  CHECK(back.num_relations() == 3);
}

TEST_CASE("edge list parsing") {
  std::istringstream in("# a comment\n0\t1\n2\t0\n\n1\t2 # trailing\n");
  Graph g = io::read_edge_list(in);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 3);
  CHECK(g.num_relations() == 0);

  std::istringstream bad("0\n");
  CHECK_THROWS_AS(io::read_edge_list(bad), ParseError);

  std::istringstream mixed("0\t1\t0\n1\t2\n");
  CHECK_THROWS_AS(io::read_edge_list(mixed), ParseError);
}

TEST_CASE("csv parsing handles quotes and embedded separators") {
  std::istringstream in("smiles,label,\"note\"\nCCO,1,\"says \"\"hi, there\"\"\"\nCC,0,plain\n");
  auto rows = io::parse_csv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"smiles", "label", "note"});
  CHECK(rows[1][2] == "says \"hi, there\"");
  CHECK(rows[2][0] == "CC");

  std::istringstream bad("a,\"unterminated\n");
  CHECK_THROWS_AS(io::parse_csv(bad), ParseError);
}

TEST_CASE("property csv loads molecules and counts skips") {
  std::string dir = temp_dir();
  std::string path = dir + "/mols.csv";
  {
    std::ofstream out(path);
    out << "smiles,activity\n";
    out << "CCO,1\n";
    out << "CCX,0\n";       // parse failure
    out << "CCN,\n";        // missing label
    out << "c1ccccc1,0\n";
  }
  io::CsvLoadStats stats;
  auto dataset = io::load_property_csv(path, "activity", &stats);
  CHECK(dataset.size() == 2);
  CHECK(stats.rows == 4);
  CHECK(stats.parse_failures == 1);
  CHECK(stats.missing_label == 1);
  REQUIRE(stats.first_errors.size() == 2);

  CHECK_THROWS_AS(io::load_property_csv(path, "label", nullptr), SchemaError);
}

TEST_CASE("dot export styles bonds by type") {
  std::string formaldehyde = io::to_dot(from_smiles("C=O"), "mol_0");
  CHECK(formaldehyde.find("graph mol_0 {") == 0);
  CHECK(formaldehyde.find("0 -- 1 [label=\"=\"]") != std::string::npos);

  std::string benzene = io::to_dot(from_smiles("c1ccccc1"), "mol_1");
  size_t dashed = 0, from = 0;
  while ((from = benzene.find("[style=dashed]", from)) != std::string::npos) {
    ++dashed;
    ++from;
  }
  CHECK(dashed == 6);

  std::string salt = io::to_dot(from_smiles("[Na+].[Cl-]"), "m");
  CHECK(salt.find("label=\"Na+\"") != std::string::npos);
  CHECK(salt.find("label=\"Cl-\"") != std::string::npos);

  std::string nitrile = io::to_dot(from_smiles("C#N"), "m");
  CHECK(nitrile.find("[label=\"#\"]") != std::string::npos);
  // byte-identical across runs
  CHECK(io::to_dot(from_smiles("C#N"), "m") == nitrile);
}

TEST_CASE("metrics line validation") {
  std::string why;
  CHECK(io::validate_metrics_line(R"({"event":"epoch","epoch":1,"loss":0.5})", &why));
  CHECK(io::validate_metrics_line(
      R"({"event":"summary","parsed":4,"failed":0,"first_errors":[]})", &why));
  CHECK_FALSE(io::validate_metrics_line("not json", &why));
  CHECK_FALSE(io::validate_metrics_line(R"({"no_event":1})", &why));
  CHECK_FALSE(io::validate_metrics_line(R"({"event":"epoch","epoch":1})", &why));
  CHECK(why.find("loss") != std::string::npos);
  CHECK_FALSE(io::validate_metrics_line(R"({"event":"martian"})", &why));
}

TEST_CASE("checkpoint round trip is byte identical") {
  Rng rng(5);
  io::Checkpoint checkpoint;
  checkpoint.model_kind = "rotate";
  checkpoint.config = {{"task", "kg-train"}, {"config", {{"dim", 4}}}};
  checkpoint.meta = {{"seed", 7}, {"epoch", 10}, {"metric", 0.912345}};
  checkpoint.tensors.emplace_back("entity_table", oracle::random_tensor(rng, {5, 8}));
  checkpoint.tensors.emplace_back("relation_table", oracle::random_tensor(rng, {3, 4}));
  checkpoint.entities = {"a", "b", "c", "d", "e"};
  checkpoint.relations = {"r1", "r2", "r3"};

  std::string dir = temp_dir();
  std::string first = dir + "/one.grx";
  std::string second = dir + "/two.grx";
  io::save_checkpoint(first, checkpoint);
  io::Checkpoint loaded = io::load_checkpoint(first);
  io::save_checkpoint(second, loaded);
  CHECK(slurp(first) == slurp(second));

  CHECK(loaded.model_kind == "rotate");
  CHECK(loaded.entities == checkpoint.entities);
  CHECK(loaded.tensor("entity_table").bit_equal(checkpoint.tensors[0].second));
  CHECK(loaded.tensor("relation_table").bit_equal(checkpoint.tensors[1].second));
  CHECK_THROWS_AS(loaded.tensor("missing"), CheckpointError);
}

TEST_CASE("checkpoint rejects corruption") {
  std::string dir = temp_dir();
  std::string path = dir + "/bad.grx";
  {
    std::ofstream out(path);
    out << "NOTMAGIC\n{}\n";
  }
  CHECK_THROWS_AS(io::load_checkpoint(path), CheckpointError);

  // shape/byte mismatch in the directory
  {
    std::ofstream out(path, std::ios::trunc);
    out << "GRXCKPT1\n";
    out << R"({"format_version":1,"model_kind":"transe","config":{},"feature_scheme_version":0,)"
        << R"("meta":{},"entities":[],"relations":[],)"
        << R"("blobs":[{"name":"t","shape":[2,2],"offset":0,"bytes":8}]})" << "\n";
    out << "0123456789abcdef";
  }
  CHECK_THROWS_WITH_AS(io::load_checkpoint(path), doctest::Contains("byte length"),
                       CheckpointError);
}
