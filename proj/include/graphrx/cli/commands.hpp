// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "graphrx/cli/config.hpp"

namespace graphrx::cli {

/// Library and container versions, printed by --version.
std::string version_line();

int cmd_mol_parse(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mol_viz(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gen_kg(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_kg_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_kg_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_kg_query(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_prop_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_prop_eval(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry: `graphrx <command> [--config PATH] [--seed N]
/// [--out DIR] [key=value ...]`. Returns the process exit status; 0 means
/// no error-level event occurred (warnings allowed).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphrx::cli
