// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace graphrx::cli {

struct KeySpec {
  enum class Type { integer, real, text, flag };
  std::string name;
  Type type = Type::text;
  bool required = false;
  nlohmann::json fallback;  // ignored when required
};

/// Typed flat key-value configuration for one task. Values resolve with
/// the documented precedence: command-line `key=value` overrides config
/// file keys, which override schema defaults. Unknown keys are rejected.
class RunConfig {
public:
  static const std::map<std::string, std::vector<KeySpec>>& schema();

  static RunConfig assemble(const std::string& task, const std::string& config_path,
                            const std::vector<std::string>& overrides, uint64_t seed,
                            std::string out_dir);

  const std::string& task() const { return task_; }
  uint64_t seed() const { return seed_; }
  const std::string& out_dir() const { return out_dir_; }

  int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  std::string get_text(const std::string& key) const;
  bool get_flag(const std::string& key) const;

  /// The full resolved configuration, echoed into every report.
  nlohmann::json echo() const;

private:
  const KeySpec& spec_for(const std::string& key) const;

  std::string task_;
  uint64_t seed_ = 0;
  std::string out_dir_;
  std::map<std::string, nlohmann::json> values_;
};

}  // namespace graphrx::cli
