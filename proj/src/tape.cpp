// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/tape.hpp"

#include <cmath>

#include "graphrx/error.hpp"

namespace graphrx {

namespace {

bool is_scalar_shape(const Tensor& t) { return t.numel() == 1 && t.rank() <= 1; }

// Row-broadcast participant: [n] or [1 x n] against [m x n].
bool is_row_of(const Tensor& row, const Tensor& mat) {
  if (mat.rank() != 2) return false;
  if (row.rank() == 1) return row.extent(0) == mat.extent(1);
  if (row.rank() == 2) return row.extent(0) == 1 && row.extent(1) == mat.extent(1);
  return false;
}

Tensor broadcast_to(const Tensor& t, const Tensor& like) {
  if (t.same_shape(like)) return t;
  Tensor out = Tensor::zeros(like.shape());
  auto dst = out.mutable_data();
  auto src = t.data();
  if (is_scalar_shape(t)) {
    float v = src[0];
    for (float& d : dst) d = v;
    return out;
  }
  // Row against matrix.
  int64_t m = like.extent(0), n = like.extent(1);
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) dst[size_t(i * n + j)] = src[size_t(j)];
  return out;
}

// Sums a gradient of the broadcast output back to the operand's shape.
Tensor reduce_grad_to(const Tensor& grad, const std::vector<int64_t>& target_shape) {
  if (grad.shape() == target_shape) return grad;
  Tensor out = Tensor::zeros(target_shape);
  auto dst = out.mutable_data();
  auto src = grad.data();
  if (shape_numel(target_shape) == 1) {
    double acc = 0;
    for (float v : src) acc += v;
    dst[0] = float(acc);
    return out;
  }
  // Row target: sum over rows of a [m x n] gradient.
  int64_t m = grad.extent(0), n = grad.extent(1);
  for (int64_t j = 0; j < n; ++j) {
    double acc = 0;
    for (int64_t i = 0; i < m; ++i) acc += src[size_t(i * n + j)];
    dst[size_t(j)] = float(acc);
  }
  return out;
}

Tape* tape_for(const Var& a, const Var& b) {
  if (a.tracked() && b.tracked() && a.tape != b.tape)
    throw ContractError("operands belong to different tapes");
  return a.tracked() ? a.tape : b.tape;
}

Var make_result(Tensor value, Tape* tape, Tape::BackwardFn back) {
  Var out(std::move(value));
  if (tape != nullptr) {
    out.tape = tape;
    out.node = tape->record(out.value, std::move(back));
  }
  return out;
}

const char* unary_name(EwUnary op) {
  switch (op) {
    case EwUnary::relu: return "relu";
    case EwUnary::sigmoid: return "sigmoid";
    case EwUnary::exp: return "exp";
    case EwUnary::log: return "log";
    case EwUnary::neg: return "neg";
    case EwUnary::abs: return "abs";
    case EwUnary::sqrt: return "sqrt";
    case EwUnary::sin: return "sin";
    case EwUnary::cos: return "cos";
    case EwUnary::softplus: return "softplus";
  }
  return "?";
}

float stable_softplus(float x) {
  // log(1 + e^x) = max(x, 0) + log1p(e^{-|x|})
  float pos = x > 0 ? x : 0.f;
  return pos + std::log1p(std::exp(-std::fabs(x)));
}

}  // namespace

Var Tape::leaf(const Tensor& value) {
  Var v(value);
  v.tape = this;
  v.node = record(value, nullptr);
  return v;
}

Var Tape::watch(Parameter& p) {
  Var v = leaf(p.value);
  watched_.emplace_back(v.node, &p);
  return v;
}

int Tape::record(Tensor value, BackwardFn back) {
  nodes_.push_back(Node{std::move(value), std::move(back)});
  return int(nodes_.size()) - 1;
}

void Tape::accumulate(int node, const Tensor& grad) {
  auto& slot = grads_[size_t(node)];
  if (!slot.has_value()) {
    if (!grad.same_shape(nodes_[size_t(node)].value))
      throw ContractError("gradient shape " + grad.shape_string() + " does not match value " +
                          nodes_[size_t(node)].value.shape_string());
    slot = grad;
    return;
  }
  Tensor& acc = *slot;
  auto dst = acc.mutable_data();
  auto src = grad.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void Tape::backward(const Var& loss) {
  if (!loss.tracked() || loss.tape != this)
    throw ContractError("loss is not tracked on this tape");
  if (loss.value.numel() != 1 || loss.value.rank() > 1)
    throw ContractError("backward requires a scalar loss, got shape " +
                        loss.value.shape_string());
  grads_.assign(nodes_.size(), std::nullopt);
  accumulate(loss.node, Tensor::ones(loss.value.shape()));
  for (int i = loss.node; i >= 0; --i) {
    if (!grads_[size_t(i)].has_value()) continue;
    if (nodes_[size_t(i)].back) nodes_[size_t(i)].back(*this, *grads_[size_t(i)]);
  }
  for (auto& [node, param] : watched_) {
    if (!grads_[size_t(node)].has_value()) continue;
    auto dst = param->gradient.mutable_data();
    auto src = grads_[size_t(node)]->data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

Tensor Tape::gradient_of(const Var& v) const {
  if (!v.tracked() || v.tape != this) throw ContractError("var is not tracked on this tape");
  const auto& slot = grads_[size_t(v.node)];
  if (!slot.has_value()) return Tensor::zeros(v.value.shape());
  return *slot;
}

Var elementwise(EwBinary op, const Var& a, const Var& b) {
  const Tensor& av = a.value;
  const Tensor& bv = b.value;
  const Tensor* big = nullptr;
  if (av.same_shape(bv)) {
    big = &av;
  } else if (is_scalar_shape(av) || is_row_of(av, bv)) {
    big = &bv;
  } else if (is_scalar_shape(bv) || is_row_of(bv, av)) {
    big = &av;
  } else {
    throw DimensionError("incompatible shapes for elementwise op: " + av.shape_string() +
                         " vs " + bv.shape_string());
  }
  Tensor ax = broadcast_to(av, *big);
  Tensor bx = broadcast_to(bv, *big);
  Tensor out = Tensor::zeros(big->shape());
  auto o = out.mutable_data();
  auto x = ax.data();
  auto y = bx.data();
  switch (op) {
    case EwBinary::add:
      for (size_t i = 0; i < o.size(); ++i) o[i] = x[i] + y[i];
      break;
    case EwBinary::sub:
      for (size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
      break;
    case EwBinary::mul:
      for (size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
      break;
  }

  Tape* tape = tape_for(a, b);
  if (tape == nullptr) return Var(std::move(out));

  int an = a.node, bn = b.node;
  bool a_tracked = a.tracked(), b_tracked = b.tracked();
  auto ashape = av.shape(), bshape = bv.shape();
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    switch (op) {
      case EwBinary::add:
        if (a_tracked) t.accumulate(an, reduce_grad_to(g, ashape));
        if (b_tracked) t.accumulate(bn, reduce_grad_to(g, bshape));
        break;
      case EwBinary::sub: {
        if (a_tracked) t.accumulate(an, reduce_grad_to(g, ashape));
        if (b_tracked) {
          Tensor ng = g;
          for (float& v : ng.mutable_data()) v = -v;
          t.accumulate(bn, reduce_grad_to(ng, bshape));
        }
        break;
      }
      case EwBinary::mul: {
        if (a_tracked) {
          Tensor ga = g;
          auto gd = ga.mutable_data();
          auto yb = bx.data();
          for (size_t i = 0; i < gd.size(); ++i) gd[i] *= yb[i];
          t.accumulate(an, reduce_grad_to(ga, ashape));
        }
        if (b_tracked) {
          Tensor gb = g;
          auto gd = gb.mutable_data();
          auto xa = ax.data();
          for (size_t i = 0; i < gd.size(); ++i) gd[i] *= xa[i];
          t.accumulate(bn, reduce_grad_to(gb, bshape));
        }
        break;
      }
    }
  };
  return make_result(std::move(out), tape, std::move(back));
}

Var elementwise(EwUnary op, const Var& xv) {
  const Tensor& x = xv.value;
  Tensor out = Tensor::zeros(x.shape());
  auto o = out.mutable_data();
  auto in = x.data();
  for (size_t i = 0; i < o.size(); ++i) {
    float v = in[i];
    switch (op) {
      case EwUnary::relu: o[i] = v > 0 ? v : 0.f; break;
      case EwUnary::sigmoid: o[i] = 1.f / (1.f + std::exp(-v)); break;
      case EwUnary::exp: o[i] = std::exp(v); break;
      case EwUnary::log:
        if (v <= 0) throw DomainError("log of non-positive value " + std::to_string(v));
        o[i] = std::log(v);
        break;
      case EwUnary::neg: o[i] = -v; break;
      case EwUnary::abs: o[i] = std::fabs(v); break;
      case EwUnary::sqrt:
        if (v < 0) throw DomainError("sqrt of negative value " + std::to_string(v));
        o[i] = std::sqrt(v);
        break;
      case EwUnary::sin: o[i] = std::sin(v); break;
      case EwUnary::cos: o[i] = std::cos(v); break;
      case EwUnary::softplus: o[i] = stable_softplus(v); break;
    }
  }
  if (!xv.tracked()) return Var(std::move(out));

  int xn = xv.node;
  Tensor saved_in = x;
  Tensor saved_out = out;
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    Tensor gx = g;
    auto gd = gx.mutable_data();
    auto xi = saved_in.data();
    auto oi = saved_out.data();
    for (size_t i = 0; i < gd.size(); ++i) {
      switch (op) {
        case EwUnary::relu: gd[i] *= xi[i] > 0 ? 1.f : 0.f; break;
        case EwUnary::sigmoid: gd[i] *= oi[i] * (1.f - oi[i]); break;
        case EwUnary::exp: gd[i] *= oi[i]; break;
        case EwUnary::log: gd[i] /= xi[i]; break;
        case EwUnary::neg: gd[i] = -gd[i]; break;
        case EwUnary::abs: gd[i] *= xi[i] > 0 ? 1.f : (xi[i] < 0 ? -1.f : 0.f); break;
        case EwUnary::sqrt: gd[i] *= 0.5f / oi[i]; break;
        case EwUnary::sin: gd[i] *= std::cos(xi[i]); break;
        case EwUnary::cos: gd[i] *= -std::sin(xi[i]); break;
        case EwUnary::softplus: gd[i] *= 1.f / (1.f + std::exp(-xi[i])); break;
      }
    }
    t.accumulate(xn, gx);
  };
  (void)unary_name;
  return make_result(std::move(out), xv.tape, std::move(back));
}

Var reduce(ReduceOp op, const Var& xv, std::optional<int64_t> axis) {
  const Tensor& x = xv.value;
  if (axis.has_value() && (*axis < 0 || *axis >= x.rank()))
    throw DimensionError("reduce axis " + std::to_string(*axis) + " out of range for " +
                         x.shape_string());

  int64_t outer = 1, mid, inner = 1;
  std::vector<int64_t> out_shape;
  if (axis.has_value()) {
    for (int64_t i = 0; i < *axis; ++i) outer *= x.extent(i);
    mid = x.extent(*axis);
    for (int64_t i = *axis + 1; i < x.rank(); ++i) inner *= x.extent(i);
    out_shape = x.shape();
    out_shape.erase(out_shape.begin() + *axis);
  } else {
    mid = x.numel();
    out_shape = {};
  }
  if (mid == 0 && op != ReduceOp::sum)
    throw ContractError("cannot reduce an empty extent with mean/max");

  Tensor out = Tensor::zeros(out_shape);
  auto o = out.mutable_data();
  auto in = x.data();
  std::vector<int64_t> argmax(o.size(), 0);
  for (int64_t a = 0; a < outer; ++a) {
    for (int64_t c = 0; c < inner; ++c) {
      int64_t oidx = a * inner + c;
      double acc = 0;
      float best = 0;
      int64_t best_idx = 0;
      for (int64_t b = 0; b < mid; ++b) {
        int64_t flat = (a * mid + b) * inner + c;
        float v = in[size_t(flat)];
        if (op == ReduceOp::max) {
          if (b == 0 || v > best) {
            best = v;
            best_idx = flat;
          }
        } else {
          acc += v;
        }
      }
      switch (op) {
        case ReduceOp::sum: o[size_t(oidx)] = float(acc); break;
        case ReduceOp::mean: o[size_t(oidx)] = float(acc / double(mid)); break;
        case ReduceOp::max:
          o[size_t(oidx)] = best;
          argmax[size_t(oidx)] = best_idx;
          break;
      }
    }
  }
  if (!xv.tracked()) return Var(std::move(out));

  int xn = xv.node;
  auto xshape = x.shape();
  Tape::BackwardFn back = [=, n_mid = mid](Tape& t, const Tensor& g) {
    Tensor gx = Tensor::zeros(xshape);
    auto gd = gx.mutable_data();
    auto gs = g.data();
    switch (op) {
      case ReduceOp::sum:
      case ReduceOp::mean: {
        float scale = op == ReduceOp::mean ? 1.f / float(n_mid) : 1.f;
        for (int64_t a = 0; a < outer; ++a)
          for (int64_t b = 0; b < n_mid; ++b)
            for (int64_t c = 0; c < inner; ++c)
              gd[size_t((a * n_mid + b) * inner + c)] = gs[size_t(a * inner + c)] * scale;
        break;
      }
      case ReduceOp::max:
        // Ties route the whole gradient to the first maximal element.
        for (size_t i = 0; i < argmax.size(); ++i) gd[size_t(argmax[i])] += gs[i];
        break;
    }
    t.accumulate(xn, gx);
  };
  return make_result(std::move(out), xv.tape, std::move(back));
}

Var matmul(const Var& av, const Var& bv) {
  const Tensor& a = av.value;
  const Tensor& b = bv.value;
  if (a.rank() != 2 || b.rank() != 2 || a.extent(1) != b.extent(0))
    throw DimensionError("matmul shape mismatch: " + a.shape_string() + " x " +
                         b.shape_string());
  int64_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
  Tensor out = Tensor::zeros({m, n});
  auto o = out.mutable_data();
  auto pa = a.data();
  auto pb = b.data();
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      double acc = 0;
      for (int64_t p = 0; p < k; ++p) acc += double(pa[size_t(i * k + p)]) * double(pb[size_t(p * n + j)]);
      o[size_t(i * n + j)] = float(acc);
    }
  }
  Tape* tape = tape_for(av, bv);
  if (tape == nullptr) return Var(std::move(out));

  int an = av.node, bn = bv.node;
  bool at = av.tracked(), bt = bv.tracked();
  Tensor sa = a, sb = b;
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    auto gp = g.data();
    if (at) {
      Tensor ga = Tensor::zeros({m, k});
      auto gd = ga.mutable_data();
      auto bp = sb.data();
      for (int64_t i = 0; i < m; ++i)
        for (int64_t p = 0; p < k; ++p) {
          double acc = 0;
          for (int64_t j = 0; j < n; ++j)
            acc += double(gp[size_t(i * n + j)]) * double(bp[size_t(p * n + j)]);
          gd[size_t(i * k + p)] = float(acc);
        }
      t.accumulate(an, ga);
    }
    if (bt) {
      Tensor gb = Tensor::zeros({k, n});
      auto gd = gb.mutable_data();
      auto ap = sa.data();
      for (int64_t p = 0; p < k; ++p)
        for (int64_t j = 0; j < n; ++j) {
          double acc = 0;
          for (int64_t i = 0; i < m; ++i)
            acc += double(ap[size_t(i * k + p)]) * double(gp[size_t(i * n + j)]);
          gd[size_t(p * n + j)] = float(acc);
        }
      t.accumulate(bn, gb);
    }
  };
  return make_result(std::move(out), tape, std::move(back));
}

Var gather_rows(const Var& xv, const std::vector<int64_t>& idx) {
  const Tensor& x = xv.value;
  int64_t n = x.rows();
  int64_t w = x.row_size();
  for (int64_t i : idx)
    if (i < 0 || i >= n)
      throw IndexError("gather_rows index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(n) + ")");
  std::vector<int64_t> out_shape = x.shape();
  out_shape[0] = int64_t(idx.size());
  Tensor out = Tensor::zeros(out_shape);
  auto o = out.mutable_data();
  auto in = x.data();
  for (size_t r = 0; r < idx.size(); ++r)
    std::copy(in.begin() + long(idx[r] * w), in.begin() + long((idx[r] + 1) * w),
              o.begin() + long(int64_t(r) * w));
  if (!xv.tracked()) return Var(std::move(out));

  int xn = xv.node;
  auto xshape = x.shape();
  std::vector<int64_t> saved_idx = idx;
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    Tensor gx = Tensor::zeros(xshape);
    auto gd = gx.mutable_data();
    auto gs = g.data();
    for (size_t r = 0; r < saved_idx.size(); ++r)
      for (int64_t c = 0; c < w; ++c)
        gd[size_t(saved_idx[r] * w + c)] += gs[size_t(int64_t(r) * w + c)];
    t.accumulate(xn, gx);
  };
  return make_result(std::move(out), xv.tape, std::move(back));
}

Var scatter_add_rows(const Var& sv, const std::vector<int64_t>& idx, int64_t num_rows) {
  const Tensor& src = sv.value;
  if (int64_t(idx.size()) != src.rows())
    throw DimensionError("scatter_add_rows needs one index per source row");
  for (int64_t i : idx)
    if (i < 0 || i >= num_rows)
      throw IndexError("scatter_add_rows index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(num_rows) + ")");
  int64_t w = src.row_size();
  std::vector<int64_t> out_shape = src.shape();
  out_shape[0] = num_rows;
  Tensor out = Tensor::zeros(out_shape);
  auto o = out.mutable_data();
  auto in = src.data();
  for (size_t r = 0; r < idx.size(); ++r)
    for (int64_t c = 0; c < w; ++c) o[size_t(idx[r] * w + c)] += in[size_t(int64_t(r) * w + c)];
  if (!sv.tracked()) return Var(std::move(out));

  int xn = sv.node;
  std::vector<int64_t> saved_idx = idx;
  auto sshape = src.shape();
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    Tensor gx = Tensor::zeros(sshape);
    auto gd = gx.mutable_data();
    auto gs = g.data();
    for (size_t r = 0; r < saved_idx.size(); ++r)
      for (int64_t c = 0; c < w; ++c)
        gd[size_t(int64_t(r) * w + c)] = gs[size_t(saved_idx[r] * w + c)];
    t.accumulate(xn, gx);
  };
  return make_result(std::move(out), sv.tape, std::move(back));
}

Var slice_cols(const Var& xv, int64_t begin, int64_t end) {
  const Tensor& x = xv.value;
  if (x.rank() != 2) throw DimensionError("slice_cols requires a rank-2 tensor");
  int64_t m = x.extent(0), d = x.extent(1);
  if (begin < 0 || end < begin || end > d)
    throw IndexError("column slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") out of range for " + x.shape_string());
  Tensor out = Tensor::zeros({m, end - begin});
  auto o = out.mutable_data();
  auto in = x.data();
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = begin; j < end; ++j) o[size_t(i * (end - begin) + (j - begin))] = in[size_t(i * d + j)];
  if (!xv.tracked()) return Var(std::move(out));

  int xn = xv.node;
  Tape::BackwardFn back = [=](Tape& t, const Tensor& g) {
    Tensor gx = Tensor::zeros({m, d});
    auto gd = gx.mutable_data();
    auto gs = g.data();
    for (int64_t i = 0; i < m; ++i)
      for (int64_t j = begin; j < end; ++j)
        gd[size_t(i * d + j)] = gs[size_t(i * (end - begin) + (j - begin))];
    t.accumulate(xn, gx);
  };
  return make_result(std::move(out), xv.tape, std::move(back));
}

}  // namespace graphrx
