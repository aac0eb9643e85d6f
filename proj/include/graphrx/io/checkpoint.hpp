// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphrx/tensor.hpp"

namespace graphrx::io {

inline constexpr int kCheckpointFormatVersion = 1;

/// Single-file model container: a readable JSON header (format version,
/// model kind and config echo, named-blob directory, vocabularies,
/// creation metadata) followed by raw little-endian float32 blobs.
/// Save goes through a temp file and an atomic rename; save -> load ->
/// save is byte-identical.
struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  std::string model_kind;              // "transe", ..., or "property"
  nlohmann::json config;               // effective config echo
  int feature_scheme_version = 0;      // property models only
  nlohmann::json meta;                 // seed, epoch, metric
  std::vector<std::pair<std::string, Tensor>> tensors;
  std::vector<std::string> entities;   // KG vocabularies, empty otherwise
  std::vector<std::string> relations;

  const Tensor& tensor(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace graphrx::io
