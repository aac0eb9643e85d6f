// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0
//
// Finite-difference checks for every differentiable tensor operation.
// Shared by the unit suite and the acceptance suite.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct BatteryResult {
  std::string name;
  int requested = 0;
  int passed = 0;
  std::string failure;
  bool ok() const { return passed == requested; }
};

namespace detail {

using graphrx::Rng;
using graphrx::Tape;
using graphrx::Tensor;
using graphrx::Var;

inline double wsum(const std::vector<double>& values, const Tensor& weights) {
  double acc = 0;
  for (size_t i = 0; i < values.size(); ++i) acc += values[i] * double(weights.data()[i]);
  return acc;
}

// One battery entry: inputs + aux weights are regenerated per instance.
inline BatteryResult run_entry(
    const std::string& name, uint64_t seed, int instances,
    const std::function<std::vector<Tensor>(Rng&)>& make_inputs,
    const std::function<bool(const std::vector<Tensor>&)>& well_conditioned,
    const std::function<ImplFn(Rng&)>& make_impl,
    const std::function<RefFn(Rng&)>& make_ref) {
  BatteryResult result{name, instances, 0, ""};
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    std::vector<Tensor> inputs;
    int tries = 0;
    do {
      inputs = make_inputs(rng);
    } while (!well_conditioned(inputs) && ++tries < 500);
    // Aux draws (weights, indices) must match between impl and ref: clone
    // the generator state for both factories.
    Rng aux1 = rng;
    Rng aux2 = aux1;
    ImplFn impl = make_impl(aux1);
    RefFn ref = make_ref(aux2);
    rng = aux1;
    GradReport rep = check_gradients(impl, ref, inputs);
    if (rep.ok) {
      ++result.passed;
    } else if (result.failure.empty()) {
      result.failure = "instance " + std::to_string(i) + ": " + rep.where;
    }
  }
  return result;
}

inline bool away_from(const Tensor& t, float point, float margin) {
  for (float v : t.data())
    if (std::fabs(v - point) < margin) return false;
  return true;
}

}  // namespace detail

// Checks every differentiable tensor-core operation against central finite
// differences of an independent double-precision recomputation.
inline std::vector<BatteryResult> run_tensor_op_battery(uint64_t seed, int instances) {
  using namespace detail;
  using graphrx::EwBinary;
  using graphrx::EwUnary;
  using graphrx::ReduceOp;
  std::vector<BatteryResult> results;

  auto any = [](const std::vector<Tensor>&) { return true; };

  // Unary elementwise ops: loss = sum(w . op(x)).
  struct UnaryCase {
    const char* name;
    EwUnary op;
    float lo, hi;
    float kink;       // point where the derivative breaks, NAN if none
    double (*fn)(double);
  };
  const UnaryCase unary_cases[] = {
      {"relu", EwUnary::relu, -2.f, 2.f, 0.f, [](double v) { return v > 0 ? v : 0.0; }},
      {"sigmoid", EwUnary::sigmoid, -2.f, 2.f, NAN,
       [](double v) { return 1.0 / (1.0 + std::exp(-v)); }},
      {"exp", EwUnary::exp, -2.f, 2.f, NAN, [](double v) { return std::exp(v); }},
      {"log", EwUnary::log, 0.5f, 2.5f, NAN, [](double v) { return std::log(v); }},
      {"neg", EwUnary::neg, -2.f, 2.f, NAN, [](double v) { return -v; }},
      {"abs", EwUnary::abs, -2.f, 2.f, 0.f, [](double v) { return std::fabs(v); }},
      {"sqrt", EwUnary::sqrt, 0.25f, 4.f, NAN, [](double v) { return std::sqrt(v); }},
      {"sin", EwUnary::sin, -2.f, 2.f, NAN, [](double v) { return std::sin(v); }},
      {"cos", EwUnary::cos, -2.f, 2.f, NAN, [](double v) { return std::cos(v); }},
      {"softplus", EwUnary::softplus, -2.f, 2.f, NAN,
       [](double v) { return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }},
  };
  for (const UnaryCase& c : unary_cases) {
    auto op = c.op;
    auto fn = c.fn;
    results.push_back(run_entry(
        std::string("elementwise/") + c.name, seed, instances,
        [=](Rng& rng) { return std::vector<Tensor>{random_tensor(rng, {4, 5}, c.lo, c.hi)}; },
        [=](const std::vector<Tensor>& in) {
          return std::isnan(c.kink) || away_from(in[0], c.kink, 5e-3f);
        },
        [=](Rng& aux) -> ImplFn {
          Tensor w = random_tensor(aux, {4, 5}, -1.f, 1.f);
          return [=](Tape&, const std::vector<Var>& xs) {
            return reduce_sum(mul(elementwise(op, xs[0]), Var(w)));
          };
        },
        [=](Rng& aux) -> RefFn {
          Tensor w = random_tensor(aux, {4, 5}, -1.f, 1.f);
          return [=](const std::vector<std::vector<double>>& xs) {
            std::vector<double> out(xs[0].size());
            for (size_t i = 0; i < out.size(); ++i) out[i] = fn(xs[0][i]);
            return wsum(out, w);
          };
        }));
  }

  // Binary elementwise ops over equal shapes, scalar and row broadcasts.
  struct BinaryCase {
    const char* name;
    EwBinary op;
    double (*fn)(double, double);
  };
  const BinaryCase binary_cases[] = {
      {"add", EwBinary::add, [](double a, double b) { return a + b; }},
      {"sub", EwBinary::sub, [](double a, double b) { return a - b; }},
      {"mul", EwBinary::mul, [](double a, double b) { return a * b; }},
  };
  const struct {
    const char* suffix;
    std::vector<int64_t> shape_b;
  } broadcast_modes[] = {
      {"equal", {3, 4}},
      {"row", {1, 4}},
      {"scalar", {}},
  };
  for (const BinaryCase& c : binary_cases) {
    for (const auto& mode : broadcast_modes) {
      auto op = c.op;
      auto fn = c.fn;
      auto shape_b = mode.shape_b;
      results.push_back(run_entry(
          std::string("elementwise/") + c.name + "/" + mode.suffix, seed + 17, instances,
          [=](Rng& rng) {
            return std::vector<Tensor>{random_tensor(rng, {3, 4}), random_tensor(rng, shape_b)};
          },
          any,
          [=](Rng& aux) -> ImplFn {
            Tensor w = random_tensor(aux, {3, 4}, -1.f, 1.f);
            return [=](Tape&, const std::vector<Var>& xs) {
              return reduce_sum(mul(elementwise(op, xs[0], xs[1]), Var(w)));
            };
          },
          [=](Rng& aux) -> RefFn {
            Tensor w = random_tensor(aux, {3, 4}, -1.f, 1.f);
            return [=](const std::vector<std::vector<double>>& xs) {
              std::vector<double> out(xs[0].size());
              for (size_t i = 0; i < out.size(); ++i) {
                size_t bi = xs[1].size() == 1 ? 0 : (xs[1].size() == 4 ? i % 4 : i);
                out[i] = fn(xs[0][i], xs[1][bi]);
              }
              return wsum(out, w);
            };
          }));
    }
  }

  // matmul: loss = sum(w . (a x b)).
  results.push_back(run_entry(
      "matmul", seed + 31, instances,
      [](Rng& rng) {
        return std::vector<Tensor>{random_tensor(rng, {3, 4}), random_tensor(rng, {4, 2})};
      },
      any,
      [](Rng& aux) -> ImplFn {
        Tensor w = random_tensor(aux, {3, 2}, -1.f, 1.f);
        return [=](Tape&, const std::vector<Var>& xs) {
          return reduce_sum(mul(matmul(xs[0], xs[1]), Var(w)));
        };
      },
      [](Rng& aux) -> RefFn {
        Tensor w = random_tensor(aux, {3, 2}, -1.f, 1.f);
        return [=](const std::vector<std::vector<double>>& xs) {
          std::vector<double> out(3 * 2, 0.0);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j)
              for (int p = 0; p < 4; ++p) out[size_t(i * 2 + j)] += xs[0][size_t(i * 4 + p)] * xs[1][size_t(p * 2 + j)];
          return wsum(out, w);
        };
      }));

  // Reductions along each axis and over all elements.
  struct ReduceCase {
    const char* name;
    ReduceOp op;
    std::optional<int64_t> axis;
  };
  const ReduceCase reduce_cases[] = {
      {"sum/axis0", ReduceOp::sum, 0},    {"sum/axis1", ReduceOp::sum, 1},
      {"sum/all", ReduceOp::sum, {}},     {"mean/axis0", ReduceOp::mean, 0},
      {"mean/all", ReduceOp::mean, {}},   {"max/axis0", ReduceOp::max, 0},
      {"max/axis1", ReduceOp::max, 1},    {"max/all", ReduceOp::max, {}},
  };
  for (const ReduceCase& c : reduce_cases) {
    auto op = c.op;
    auto axis = c.axis;
    bool needs_gap = c.op == ReduceOp::max;
    results.push_back(run_entry(
        std::string("reduce/") + c.name, seed + 47, instances,
        [](Rng& rng) { return std::vector<Tensor>{random_tensor(rng, {4, 3})}; },
        [=](const std::vector<Tensor>& in) {
          if (!needs_gap) return true;
          // Distinct enough values that the argmax is stable under +-h.
          auto d = in[0].data();
          for (size_t i = 0; i < d.size(); ++i)
            for (size_t j = i + 1; j < d.size(); ++j)
              if (std::fabs(d[i] - d[j]) < 5e-3f) return false;
          return true;
        },
        [=](Rng& aux) -> ImplFn {
          int64_t out_n = !axis ? 1 : (*axis == 0 ? 3 : 4);
          Tensor w = random_tensor(aux, !axis ? std::vector<int64_t>{} : std::vector<int64_t>{out_n}, -1.f, 1.f);
          return [=](Tape&, const std::vector<Var>& xs) {
            return reduce_sum(mul(reduce(op, xs[0], axis), Var(w)));
          };
        },
        [=](Rng& aux) -> RefFn {
          int64_t out_n = !axis ? 1 : (*axis == 0 ? 3 : 4);
          Tensor w = random_tensor(aux, !axis ? std::vector<int64_t>{} : std::vector<int64_t>{out_n}, -1.f, 1.f);
          return [=](const std::vector<std::vector<double>>& xs) {
            const auto& x = xs[0];
            std::vector<double> out;
            if (!axis) {
              double acc = op == ReduceOp::max ? -1e300 : 0;
              for (double v : x) acc = op == ReduceOp::max ? std::max(acc, v) : acc + v;
              if (op == ReduceOp::mean) acc /= double(x.size());
              out = {acc};
            } else if (*axis == 0) {
              out.assign(3, op == ReduceOp::max ? -1e300 : 0);
              for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 3; ++j)
                  out[size_t(j)] = op == ReduceOp::max
                                        ? std::max(out[size_t(j)], x[size_t(i * 3 + j)])
                                        : out[size_t(j)] + x[size_t(i * 3 + j)];
              if (op == ReduceOp::mean)
                for (double& v : out) v /= 4.0;
            } else {
              out.assign(4, op == ReduceOp::max ? -1e300 : 0);
              for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 3; ++j)
                  out[size_t(i)] = op == ReduceOp::max
                                        ? std::max(out[size_t(i)], x[size_t(i * 3 + j)])
                                        : out[size_t(i)] + x[size_t(i * 3 + j)];
              if (op == ReduceOp::mean)
                for (double& v : out) v /= 3.0;
            }
            return wsum(out, w);
          };
        }));
  }

  // gather_rows / scatter_add_rows with random index vectors.
  results.push_back(run_entry(
      "gather_rows", seed + 61, instances,
      [](Rng& rng) { return std::vector<Tensor>{random_tensor(rng, {5, 3})}; }, any,
      [](Rng& aux) -> ImplFn {
        std::vector<int64_t> idx(6);
        for (auto& i : idx) i = int64_t(aux.below(5));
        Tensor w = random_tensor(aux, {6, 3}, -1.f, 1.f);
        return [=](Tape&, const std::vector<Var>& xs) {
          return reduce_sum(mul(gather_rows(xs[0], idx), Var(w)));
        };
      },
      [](Rng& aux) -> RefFn {
        std::vector<int64_t> idx(6);
        for (auto& i : idx) i = int64_t(aux.below(5));
        Tensor w = random_tensor(aux, {6, 3}, -1.f, 1.f);
        return [=](const std::vector<std::vector<double>>& xs) {
          std::vector<double> out(6 * 3);
          for (size_t r = 0; r < 6; ++r)
            for (size_t c = 0; c < 3; ++c) out[r * 3 + c] = xs[0][size_t(idx[r]) * 3 + c];
          return wsum(out, w);
        };
      }));

  results.push_back(run_entry(
      "scatter_add_rows", seed + 71, instances,
      [](Rng& rng) { return std::vector<Tensor>{random_tensor(rng, {6, 2})}; }, any,
      [](Rng& aux) -> ImplFn {
        std::vector<int64_t> idx(6);
        for (auto& i : idx) i = int64_t(aux.below(4));
        Tensor w = random_tensor(aux, {4, 2}, -1.f, 1.f);
        return [=](Tape&, const std::vector<Var>& xs) {
          return reduce_sum(mul(scatter_add_rows(xs[0], idx, 4), Var(w)));
        };
      },
      [](Rng& aux) -> RefFn {
        std::vector<int64_t> idx(6);
        for (auto& i : idx) i = int64_t(aux.below(4));
        Tensor w = random_tensor(aux, {4, 2}, -1.f, 1.f);
        return [=](const std::vector<std::vector<double>>& xs) {
          std::vector<double> out(4 * 2, 0.0);
          for (size_t r = 0; r < 6; ++r)
            for (size_t c = 0; c < 2; ++c) out[size_t(idx[r]) * 2 + c] += xs[0][r * 2 + c];
          return wsum(out, w);
        };
      }));

  results.push_back(run_entry(
      "slice_cols", seed + 83, instances,
      [](Rng& rng) { return std::vector<Tensor>{random_tensor(rng, {3, 6})}; }, any,
      [](Rng& aux) -> ImplFn {
        Tensor w = random_tensor(aux, {3, 3}, -1.f, 1.f);
        return [=](Tape&, const std::vector<Var>& xs) {
          return reduce_sum(mul(slice_cols(xs[0], 1, 4), Var(w)));
        };
      },
      [](Rng& aux) -> RefFn {
        Tensor w = random_tensor(aux, {3, 3}, -1.f, 1.f);
        return [=](const std::vector<std::vector<double>>& xs) {
          std::vector<double> out(3 * 3);
          for (size_t r = 0; r < 3; ++r)
            for (size_t c = 0; c < 3; ++c) out[r * 3 + c] = xs[0][r * 6 + c + 1];
          return wsum(out, w);
        };
      }));

  // A deep composite mixing most ops, as the Tape would see in training.
  results.push_back(run_entry(
      "composite/chain", seed + 97, instances,
      [](Rng& rng) {
        return std::vector<Tensor>{random_tensor(rng, {4, 3}), random_tensor(rng, {3, 3}),
                                   random_tensor(rng, {1, 3})};
      },
      [](const std::vector<Tensor>& in) {
        // Keep relu inputs away from the kink: recompute the preactivation.
        const Tensor &x = in[0], &w = in[1], &b = in[2];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 3; ++j) {
            double acc = b.data()[size_t(j)];
            for (int p = 0; p < 3; ++p)
              acc += double(x.data()[size_t(i * 3 + p)]) * double(w.data()[size_t(p * 3 + j)]);
            if (std::fabs(acc) < 1e-2) return false;
          }
        return true;
      },
      [](Rng&) -> ImplFn {
        return [](Tape&, const std::vector<Var>& xs) {
          Var h = relu(add(matmul(xs[0], xs[1]), xs[2]));
          Var s = sigmoid(h);
          return reduce_mean(mul(s, s));
        };
      },
      [](Rng&) -> RefFn {
        return [](const std::vector<std::vector<double>>& xs) {
          double acc = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) {
              double pre = xs[2][size_t(j)];
              for (int p = 0; p < 3; ++p) pre += xs[0][size_t(i * 3 + p)] * xs[1][size_t(p * 3 + j)];
              double h = pre > 0 ? pre : 0;
              double s = 1.0 / (1.0 + std::exp(-h));
              acc += s * s;
            }
          return acc / 12.0;
        };
      }));

  return results;
}

}  // namespace oracle
