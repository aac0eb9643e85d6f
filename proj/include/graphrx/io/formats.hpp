// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <string>
#include <vector>

#include "graphrx/gnn/property.hpp"
#include "graphrx/graph.hpp"
#include "graphrx/molecule.hpp"

namespace graphrx::io {

/// Edge-list text format: one `head<TAB>tail[<TAB>relation]` per line,
/// `#` starts a comment. Node ids are dense indices; the node count is
/// the largest endpoint + 1 unless a larger count is given.
Graph read_edge_list(std::istream& in, int64_t min_nodes = 0);
Graph read_edge_list_file(const std::string& path, int64_t min_nodes = 0);
std::string write_edge_list(const Graph& g);

/// RFC4180-style CSV: quoted fields, embedded commas/quotes/newlines.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

struct CsvLoadStats {
  int64_t rows = 0;
  int64_t missing_label = 0;
  int64_t parse_failures = 0;
  std::vector<std::string> first_errors;  // up to 5, with line numbers
};

/// Molecule CSV with a header row naming `smiles` and the label column.
/// Rows with missing labels or unparsable SMILES are skipped and counted.
gnn::PropertyDataset load_property_csv(const std::string& path, const std::string& label_column,
                                       CsvLoadStats* stats = nullptr);

/// One DOT document per molecule: nodes labeled element with charge,
/// bonds styled single solid, double "=", triple "#", aromatic dashed.
std::string to_dot(const Molecule& m, const std::string& name);

/// Line-delimited metrics record check: a JSON object with a known
/// "event" field and that event's required keys.
bool validate_metrics_line(const std::string& line, std::string* why = nullptr);

}  // namespace graphrx::io
