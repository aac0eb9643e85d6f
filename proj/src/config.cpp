// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/cli/config.hpp"

#include <fstream>

#include "graphrx/error.hpp"

namespace graphrx::cli {

namespace {

using Type = KeySpec::Type;

nlohmann::json parse_typed(const KeySpec& spec, const std::string& text) {
  try {
    switch (spec.type) {
      case Type::integer: {
        size_t used = 0;
        int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      }
      case Type::real: {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      }
      case Type::flag:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw std::invalid_argument(text);
      case Type::text: return text;
    }
  } catch (const std::exception&) {
    throw ConfigError("key \"" + spec.name + "\" expects a " +
                      (spec.type == Type::integer ? "whole number"
                       : spec.type == Type::real ? "number"
                       : spec.type == Type::flag ? "boolean"
                                                 : "string") +
                      ", got \"" + text + "\"");
  }
  throw ConfigError("bad key type");
}

nlohmann::json check_json_typed(const KeySpec& spec, const nlohmann::json& value) {
  switch (spec.type) {
    case Type::integer:
      if (value.is_number_integer()) return value;
      break;
    case Type::real:
      if (value.is_number()) return double(value);
      break;
    case Type::flag:
      if (value.is_boolean()) return value;
      break;
    case Type::text:
      if (value.is_string()) return value;
      break;
  }
  throw ConfigError("config key \"" + spec.name + "\" has the wrong type");
}

}  // namespace

const std::map<std::string, std::vector<KeySpec>>& RunConfig::schema() {
  using enum KeySpec::Type;
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"mol-parse", {{"input", text, true, {}}}},
      {"mol-viz", {{"input", text, true, {}}}},
      {"gen-kg", {{"entities", integer, false, 40}}},
      {"kg-train",
       {
           {"data", text, true, {}},
           {"model", text, false, "rotate"},
           {"dim", integer, false, 32},
           {"epochs", integer, false, 500},
           {"batch_size", integer, false, 64},
           {"lr", real, false, 0.05},
           {"negatives", integer, false, 8},
           {"loss", text, false, "margin"},
           {"margin", real, false, 2.0},
           {"adversarial_temperature", real, false, 1.0},
           {"negative_mode", text, false, "uniform"},
           {"optimizer", text, false, "adam"},
           {"resume", text, false, ""},
           {"filtered", flag, false, true},
       }},
      {"kg-eval",
       {
           {"checkpoint", text, true, {}},
           {"data", text, true, {}},
           {"split", text, false, "test"},
           {"filtered", flag, false, true},
       }},
      {"kg-query",
       {
           {"checkpoint", text, true, {}},
           {"data", text, true, {}},
           {"head", text, true, {}},
           {"relation", text, true, {}},
           {"k", integer, false, 10},
           {"include_known", flag, false, false},
       }},
      {"prop-train",
       {
           {"data", text, true, {}},
           {"label", text, false, "label"},
           {"task", text, false, "binary"},
           {"layer", text, false, "gin"},
           {"layers", integer, false, 2},
           {"hidden", integer, false, 32},
           {"readout", text, false, "sum"},
           {"split", text, false, "random"},
           {"train_fraction", real, false, 0.8},
           {"valid_fraction", real, false, 0.1},
           {"test_fraction", real, false, 0.1},
           {"epochs", integer, false, 50},
           {"batch_size", integer, false, 32},
           {"lr", real, false, 0.01},
       }},
      {"prop-eval",
       {
           {"checkpoint", text, true, {}},
           {"data", text, true, {}},
       }},
  };
  return table;
}

RunConfig RunConfig::assemble(const std::string& task, const std::string& config_path,
                              const std::vector<std::string>& overrides, uint64_t seed,
                              std::string out_dir) {
  auto schema_it = schema().find(task);
  if (schema_it == schema().end()) throw ConfigError("unknown task \"" + task + "\"");
  const auto& specs = schema_it->second;

  RunConfig config;
  config.task_ = task;
  config.seed_ = seed;
  config.out_dir_ = std::move(out_dir);

  auto spec_of = [&](const std::string& key) -> const KeySpec& {
    for (const KeySpec& spec : specs)
      if (spec.name == key) return spec;
    throw ConfigError("unknown key \"" + key + "\" for task " + task);
  };

  for (const KeySpec& spec : specs)
    if (!spec.required) config.values_[spec.name] = spec.fallback;

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config file " + config_path);
    nlohmann::json file = nlohmann::json::parse(in, nullptr, false);
    if (file.is_discarded() || !file.is_object())
      throw ConfigError("config file " + config_path + " is not a JSON object");
    for (const auto& [key, value] : file.items())
      config.values_[key] = check_json_typed(spec_of(key), value);
  }

  for (const std::string& item : overrides) {
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key=value, got \"" + item + "\"");
    const KeySpec& spec = spec_of(item.substr(0, eq));
    config.values_[spec.name] = parse_typed(spec, item.substr(eq + 1));
  }

  for (const KeySpec& spec : specs) {
    if (spec.required && config.values_.find(spec.name) == config.values_.end())
      throw ConfigError("task " + task + " requires key \"" + spec.name + "\"");
  }
  return config;
}

const KeySpec& RunConfig::spec_for(const std::string& key) const {
  for (const KeySpec& spec : schema().at(task_))
    if (spec.name == key) return spec;
  throw ConfigError("unknown key \"" + key + "\"");
}

int64_t RunConfig::get_int(const std::string& key) const {
  spec_for(key);
  return values_.at(key).get<int64_t>();
}

double RunConfig::get_real(const std::string& key) const {
  spec_for(key);
  return values_.at(key).get<double>();
}

std::string RunConfig::get_text(const std::string& key) const {
  spec_for(key);
  return values_.at(key).get<std::string>();
}

bool RunConfig::get_flag(const std::string& key) const {
  spec_for(key);
  return values_.at(key).get<bool>();
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json config(values_);
  nlohmann::json out;
  out["task"] = task_;
  out["seed"] = seed_;
  out["out"] = out_dir_;
  out["config"] = config;
  return out;
}

}  // namespace graphrx::cli
