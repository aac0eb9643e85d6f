// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace graphrx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape/extent mismatch between tensors or between a tensor and a graph.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An index (row, node, edge, axis) outside its valid range.
class IndexError : public Error {
public:
  using Error::Error;
};

/// Math domain violation, e.g. log of a non-positive value.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Misuse of an operation contract, e.g. backward on a non-scalar loss.
class ContractError : public Error {
public:
  using Error::Error;
};

/// Non-finite value where the contract requires finite numbers.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Attribute table schema mismatch (names, shape suffixes, relations).
class SchemaError : public Error {
public:
  using Error::Error;
};

/// SMILES or file format parse failure. Carries a position when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, long position = -1)
      : Error(position >= 0 ? what + " (at position " + std::to_string(position) + ")" : what),
        position_(position) {}
  long position() const { return position_; }

private:
  long position_;
};

/// Unknown entity/relation name. Carries the nearest vocabulary match.
class VocabError : public Error {
public:
  VocabError(const std::string& what, std::string suggestion = "")
      : Error(suggestion.empty() ? what : what + " (did you mean \"" + suggestion + "\"?)"),
        suggestion_(std::move(suggestion)) {}
  const std::string& suggestion() const { return suggestion_; }

private:
  std::string suggestion_;
};

/// Bad run configuration: missing/unknown keys, empty splits, bad values.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Checkpoint container violations: version, kind or shape mismatches.
class CheckpointError : public Error {
public:
  using Error::Error;
};

/// Filesystem failures, always naming the offending path.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace graphrx
