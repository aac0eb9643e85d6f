// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numeric>

#include "graphrx/error.hpp"
#include "graphrx/tape.hpp"
#include "support/grad_battery.hpp"
#include "support/oracles.hpp"

using namespace graphrx;

namespace {

Tensor t2(std::vector<int64_t> shape, std::vector<float> data) {
  return Tensor::from_data(std::move(shape), std::move(data));
}

}  // namespace

TEST_CASE("matmul hand cases") {
  Tensor b = t2({3, 3}, {3, 1, 4, 1, 5, 9, 2, 6, 5});
  CHECK(matmul(Var(Tensor::eye(3)), Var(b)).value.bit_equal(b));

  Tensor a = t2({2, 2}, {1, 2, 3, 4});
  Tensor v = t2({2, 1}, {0, 1});
  Tensor prod = matmul(Var(a), Var(v)).value;
  CHECK(prod.bit_equal(t2({2, 1}, {2, 4})));

  CHECK(matmul(Var(Tensor::zeros({2, 3})), Var(Tensor::ones({3, 5})))
            .value.bit_equal(Tensor::zeros({2, 5})));

  CHECK_THROWS_WITH_AS(matmul(Var(Tensor::zeros({2, 3})), Var(Tensor::zeros({2, 3}))),
                       doctest::Contains("[2x3]"), DimensionError);
}

TEST_CASE("elementwise hand cases") {
  CHECK(relu(Var(t2({3}, {-1, 0, 2}))).value.bit_equal(t2({3}, {0, 0, 2})));
  CHECK(sigmoid(Var(t2({1}, {0}))).value.bit_equal(t2({1}, {0.5f})));
  CHECK(add(Var(t2({1, 2}, {1, 2})), Var(Tensor::scalar(3))).value.bit_equal(t2({1, 2}, {4, 5})));
  CHECK_THROWS_AS(add(Var(Tensor::zeros({2, 3})), Var(Tensor::zeros({3, 2}))), DimensionError);
  CHECK_THROWS_AS(elementwise(EwUnary::log, Var(t2({2}, {1, -1}))), DomainError);
}

TEST_CASE("row broadcast against matrix, both orders") {
  Tensor m = t2({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor row = t2({1, 3}, {10, 20, 30});
  CHECK(add(Var(m), Var(row)).value.bit_equal(t2({2, 3}, {11, 22, 33, 14, 25, 36})));
  CHECK(sub(Var(row), Var(m)).value.bit_equal(t2({2, 3}, {9, 18, 27, 6, 15, 24})));
}

TEST_CASE("reduce hand cases") {
  Tensor x = t2({2, 2}, {1, 2, 3, 4});
  CHECK(reduce_sum(Var(x), 0).value.bit_equal(t2({2}, {4, 6})));
  CHECK(reduce_mean(Var(Tensor::ones({5}))).value.item() == 1.f);
  CHECK(reduce_max(Var(t2({3}, {-3, -1, -2}))).value.item() == -1.f);
  CHECK_THROWS_AS(reduce_sum(Var(x), 2), DimensionError);
}

TEST_CASE("gather_rows hand cases") {
  Tensor eye = Tensor::eye(3);
  Tensor picked = gather_rows(Var(eye), {2, 0}).value;
  CHECK(picked.bit_equal(t2({2, 3}, {0, 0, 1, 1, 0, 0})));

  Tensor empty = gather_rows(Var(eye), {}).value;
  CHECK(empty.shape() == std::vector<int64_t>{0, 3});

  CHECK_THROWS_WITH_AS(gather_rows(Var(eye), {3}), doctest::Contains("3"), IndexError);
}

TEST_CASE("gather_rows duplicate index doubles the backward row") {
  Tape tape;
  Parameter p("p", t2({3, 2}, {1, 2, 3, 4, 5, 6}));
  Var x = tape.watch(p);
  Var loss = reduce_sum(gather_rows(x, {1, 1}));
  tape.backward(loss);
  CHECK(p.gradient.bit_equal(t2({3, 2}, {0, 0, 2, 2, 0, 0})));
}

TEST_CASE("scatter_add_rows hand cases") {
  Tensor src = t2({3, 1}, {1, 2, 3});
  CHECK(scatter_add_rows(Var(src), {0, 0, 1}, 2).value.bit_equal(t2({2, 1}, {3, 3})));

  // Permutation index: output is a row permutation of the source.
  Tensor perm = scatter_add_rows(Var(src), {2, 0, 1}, 3).value;
  CHECK(perm.bit_equal(t2({3, 1}, {2, 3, 1})));

  Tensor none = scatter_add_rows(Var(Tensor::zeros({0, 4})), {}, 3).value;
  CHECK(none.bit_equal(Tensor::zeros({3, 4})));

  CHECK_THROWS_AS(scatter_add_rows(Var(src), {0, 5, 1}, 2), IndexError);
}

TEST_CASE("scatter/gather permutation round-trip and mass conservation") {
  Rng rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    int64_t n = 1 + int64_t(rng.below(6));
    Tensor src = oracle::random_tensor(rng, {n, 3});
    std::vector<int64_t> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<int64_t> inverse(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) inverse[size_t(perm[size_t(i)])] = i;

    // scatter with a permutation, gather with it again: identity.
    Tensor scattered = scatter_add_rows(Var(src), perm, n).value;
    Tensor back = gather_rows(Var(scattered), perm).value;
    CHECK(back.bit_equal(src));
    // equivalently, gather with the inverse reorders scatter into source
    Tensor direct = gather_rows(Var(src), inverse).value;
    CHECK(direct.bit_equal(scattered));

    // mass conservation for arbitrary idx
    std::vector<int64_t> idx(static_cast<size_t>(n));
    for (auto& i : idx) i = int64_t(rng.below(4));
    Tensor out = scatter_add_rows(Var(src), idx, 4).value;
    double a = 0, b = 0;
    for (float v : src.data()) a += v;
    for (float v : out.data()) b += v;
    CHECK(std::fabs(a - b) < 1e-4);
  }
}

TEST_CASE("backward on parameters") {
  SUBCASE("sum gives ones") {
    Tape tape;
    Parameter p("p", t2({2, 2}, {1, -2, 3, 4}));
    Var x = tape.watch(p);
    tape.backward(reduce_sum(x));
    CHECK(p.gradient.bit_equal(Tensor::ones({2, 2})));
  }
  SUBCASE("quadratic gives 2p") {
    Tape tape;
    Parameter p("p", t2({3}, {1, -2, 0.5f}));
    Var x = tape.watch(p);
    tape.backward(reduce_sum(mul(x, x)));
    CHECK(p.gradient.bit_equal(t2({3}, {2, -4, 1})));
  }
  SUBCASE("non-scalar loss rejected") {
    Tape tape;
    Parameter p("p", t2({3}, {1, 2, 3}));
    Var x = tape.watch(p);
    CHECK_THROWS_AS(tape.backward(mul(x, x)), ContractError);
  }
  SUBCASE("repeated backward accumulates until zero_grad") {
    Tape tape;
    Parameter p("p", t2({2}, {1, 1}));
    Var x = tape.watch(p);
    Var loss = reduce_sum(x);
    tape.backward(loss);
    tape.backward(loss);
    CHECK(p.gradient.bit_equal(t2({2}, {2, 2})));
    p.zero_grad();
    CHECK(p.gradient.bit_equal(Tensor::zeros({2})));
  }
}

TEST_CASE("mixing two tapes is a contract error") {
  Tape a, b;
  Parameter p("p", t2({2}, {1, 2}));
  Parameter q("q", t2({2}, {3, 4}));
  Var x = a.watch(p);
  Var y = b.watch(q);
  CHECK_THROWS_AS(add(x, y), ContractError);
}

TEST_CASE("tape determinism: identical seeds give bitwise-identical gradients") {
  auto run = [](uint64_t seed) {
    Rng rng(seed);
    Tape tape;
    Parameter p("p", oracle::random_tensor(rng, {4, 3}));
    Parameter w("w", oracle::random_tensor(rng, {3, 2}));
    Var loss = reduce_mean(sigmoid(matmul(tape.watch(p), tape.watch(w))));
    tape.backward(loss);
    return std::pair{p.gradient, w.gradient};
  };
  auto [g1, h1] = run(123);
  auto [g2, h2] = run(123);
  CHECK(g1.bit_equal(g2));
  CHECK(h1.bit_equal(h2));
}

TEST_CASE("finite-difference battery over all differentiable ops") {
  auto results = oracle::run_tensor_op_battery(20260809, 20);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.failure);
    CHECK(r.passed == r.requested);
  }
  CHECK(results.size() > 25);  // every op and broadcast mode is present
}
