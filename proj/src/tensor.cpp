// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "graphrx/error.hpp"

namespace graphrx {

int64_t shape_numel(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t e : shape) {
    if (e < 0) throw DimensionError("negative extent in shape");
    n *= e;
  }
  return n;
}

Tensor Tensor::zeros(std::vector<int64_t> shape) { return full(std::move(shape), 0.f); }

Tensor Tensor::full(std::vector<int64_t> shape, float value) {
  Tensor t;
  int64_t n = shape_numel(shape);
  t.shape_ = std::move(shape);
  t.data_.assign(size_t(n), value);
  return t;
}

Tensor Tensor::from_data(std::vector<int64_t> shape, std::vector<float> data) {
  if (shape_numel(shape) != int64_t(data.size())) {
    throw DimensionError("data length " + std::to_string(data.size()) +
                         " does not match shape product " + std::to_string(shape_numel(shape)));
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::eye(int64_t n) {
  Tensor t = zeros({n, n});
  for (int64_t i = 0; i < n; ++i) t.data_[size_t(i * n + i)] = 1.f;
  return t;
}

Tensor Tensor::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) return Tensor::zeros({0});
  std::vector<int64_t> suffix(parts[0].shape_.begin() + (parts[0].rank() > 0 ? 1 : 0),
                              parts[0].shape_.end());
  int64_t total = 0;
  for (const Tensor& p : parts) {
    if (p.rank() == 0) throw DimensionError("cannot row-concat a scalar");
    std::vector<int64_t> s(p.shape_.begin() + 1, p.shape_.end());
    if (s != suffix) {
      throw DimensionError("row-concat suffix mismatch: " + parts[0].shape_string() + " vs " +
                           p.shape_string());
    }
    total += p.extent(0);
  }
  std::vector<int64_t> shape{total};
  shape.insert(shape.end(), suffix.begin(), suffix.end());
  Tensor out = zeros(shape);
  size_t pos = 0;
  for (const Tensor& p : parts) {
    std::copy(p.data_.begin(), p.data_.end(), out.data_.begin() + long(pos));
    pos += p.data_.size();
  }
  return out;
}

Tensor Tensor::stack(const std::vector<Tensor>& parts) {
  if (parts.empty()) return Tensor::zeros({0});
  for (const Tensor& p : parts) {
    if (!p.same_shape(parts[0])) {
      throw DimensionError("stack shape mismatch: " + parts[0].shape_string() + " vs " +
                           p.shape_string());
    }
  }
  std::vector<int64_t> shape{int64_t(parts.size())};
  shape.insert(shape.end(), parts[0].shape_.begin(), parts[0].shape_.end());
  Tensor out = zeros(shape);
  size_t pos = 0;
  for (const Tensor& p : parts) {
    std::copy(p.data_.begin(), p.data_.end(), out.data_.begin() + long(pos));
    pos += p.data_.size();
  }
  return out;
}

int64_t Tensor::rows() const {
  if (rank() == 0) throw DimensionError("scalar tensor has no rows");
  return shape_[0];
}

int64_t Tensor::row_size() const {
  if (rank() == 0) throw DimensionError("scalar tensor has no rows");
  int64_t n = 1;
  for (size_t i = 1; i < shape_.size(); ++i) n *= shape_[i];
  return n;
}

float Tensor::item() const {
  if (numel() != 1) throw ContractError("item() requires a single-element tensor, got shape " + shape_string());
  return data_[0];
}

std::span<const float> Tensor::row(int64_t r) const {
  int64_t w = row_size();
  if (r < 0 || r >= rows()) throw IndexError("row index " + std::to_string(r) + " out of range");
  return std::span<const float>(data_.data() + r * w, size_t(w));
}

Tensor Tensor::slice_rows(int64_t begin, int64_t end) const {
  if (begin < 0 || end < begin || end > rows()) {
    throw IndexError("row slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") out of range for " + shape_string());
  }
  int64_t w = row_size();
  std::vector<int64_t> shape = shape_;
  shape[0] = end - begin;
  std::vector<float> data(data_.begin() + begin * w, data_.begin() + end * w);
  return from_data(std::move(shape), std::move(data));
}

Tensor Tensor::reshape(std::vector<int64_t> shape) const {
  if (shape_numel(shape) != numel()) {
    throw DimensionError("reshape to incompatible shape");
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = data_;
  return t;
}

Tensor Tensor::index_batch(int64_t i) const {
  if (rank() == 0) throw DimensionError("scalar tensor has no batch axis");
  if (i < 0 || i >= shape_[0]) throw IndexError("batch index out of range");
  int64_t w = row_size();
  std::vector<int64_t> shape(shape_.begin() + 1, shape_.end());
  std::vector<float> data(data_.begin() + i * w, data_.begin() + (i + 1) * w);
  return from_data(std::move(shape), std::move(data));
}

bool Tensor::all_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool Tensor::bit_equal(const Tensor& other) const {
  if (shape_ != other.shape_) return false;
  for (size_t i = 0; i < data_.size(); ++i) {
    // Bit comparison distinguishes -0 from +0 and compares NaN payloads.
    if (std::bit_cast<uint32_t>(data_[i]) != std::bit_cast<uint32_t>(other.data_[i])) return false;
  }
  return true;
}

std::string Tensor::shape_string() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << 'x';
    os << shape_[i];
  }
  os << ']';
  return os.str();
}

}  // namespace graphrx
