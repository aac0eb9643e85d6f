// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <vector>

#include "graphrx/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return graphrx::cli::run_cli(args, std::cout, std::cerr);
}
