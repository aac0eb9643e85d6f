// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "graphrx/error.hpp"
#include "graphrx/optim.hpp"

using namespace graphrx;

TEST_CASE("sgd step") {
  Parameter p("p", Tensor::scalar(1.f));
  p.gradient = Tensor::scalar(1.f);
  Parameter* params[] = {&p};
  optimizer_step(params, {.kind = OptimizerKind::sgd, .lr = 0.1f});
  CHECK(p.value.item() == doctest::Approx(0.9f));
  CHECK(p.step == 1);
}

TEST_CASE("zero gradient leaves parameters unchanged") {
  for (OptimizerKind kind : {OptimizerKind::sgd, OptimizerKind::adam}) {
    Parameter p("p", Tensor::from_data({2}, {1.f, -2.f}));
    Parameter* params[] = {&p};
    optimizer_step(params, {.kind = kind, .lr = 0.5f});
    CHECK(p.value.bit_equal(Tensor::from_data({2}, {1.f, -2.f})));
  }
}

TEST_CASE("adam first step has bias-corrected magnitude ~ lr") {
  for (float c : {0.5f, 1.f, 3.f}) {
    Parameter p("p", Tensor::scalar(0.f));
    p.gradient = Tensor::scalar(c);
    Parameter* params[] = {&p};
    optimizer_step(params, {.kind = OptimizerKind::adam, .lr = 0.01f});
    // m_hat = c, v_hat = c^2, so the update is lr * c / (c + eps).
    CHECK(std::fabs(p.value.item() + 0.01f) < 1e-6f);
  }
}

TEST_CASE("non-finite gradient raises a numeric error naming the parameter") {
  Parameter p("entity_table", Tensor::scalar(0.f));
  p.gradient = Tensor::scalar(std::nanf(""));
  Parameter* params[] = {&p};
  CHECK_THROWS_WITH_AS(optimizer_step(params, {}), doctest::Contains("entity_table"),
                       NumericError);
}

TEST_CASE("optimizer kind parsing") {
  CHECK(optimizer_kind_from_string("sgd") == OptimizerKind::sgd);
  CHECK(optimizer_kind_from_string("adam") == OptimizerKind::adam);
  CHECK_THROWS_AS(optimizer_kind_from_string("rmsprop"), ConfigError);
}
