// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace graphrx {

/// Dense row-major 32-bit float array with an explicit shape.
///
/// Tensors are values: every operation returns a new tensor, and shared
/// instances are never mutated. A rank-0 tensor holds one scalar.
class Tensor {
public:
  Tensor() = default;

  static Tensor zeros(std::vector<int64_t> shape);
  static Tensor full(std::vector<int64_t> shape, float value);
  static Tensor ones(std::vector<int64_t> shape) { return full(std::move(shape), 1.f); }
  static Tensor scalar(float value) { return from_data({}, {value}); }
  static Tensor from_data(std::vector<int64_t> shape, std::vector<float> data);
  /// Identity matrix n x n.
  static Tensor eye(int64_t n);
  /// Row-wise concatenation; all inputs must share trailing extents.
  static Tensor concat_rows(const std::vector<Tensor>& parts);
  /// Adds a leading batch axis over equally shaped inputs.
  static Tensor stack(const std::vector<Tensor>& parts);

  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t rank() const { return int64_t(shape_.size()); }
  int64_t extent(int64_t axis) const { return shape_[size_t(axis)]; }
  int64_t numel() const { return int64_t(data_.size()); }

  /// Rows = first extent (rank >= 1); row_size = product of the rest.
  int64_t rows() const;
  int64_t row_size() const;

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }
  float at(int64_t flat_index) const { return data_[size_t(flat_index)]; }
  float item() const;  // requires numel() == 1

  std::span<const float> row(int64_t r) const;
  /// Rows [begin, end) as a new tensor.
  Tensor slice_rows(int64_t begin, int64_t end) const;
  Tensor reshape(std::vector<int64_t> shape) const;
  /// Drops a leading batch axis entry: stack(xs).index_batch(i) == xs[i].
  Tensor index_batch(int64_t i) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  bool bit_equal(const Tensor& other) const;

  std::string shape_string() const;

private:
  std::vector<int64_t> shape_;
  std::vector<float> data_;
};

int64_t shape_numel(const std::vector<int64_t>& shape);

}  // namespace graphrx
