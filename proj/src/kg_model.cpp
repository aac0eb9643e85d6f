// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/model.hpp"

#include <cmath>
#include <numbers>

#include "graphrx/error.hpp"
#include "graphrx/rng.hpp"

namespace graphrx::kg {

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "transe") return ModelKind::transe;
  if (name == "distmult") return ModelKind::distmult;
  if (name == "complex") return ModelKind::complex_;
  if (name == "rotate") return ModelKind::rotate;
  if (name == "simple") return ModelKind::simple;
  throw ConfigError("unknown embedding model \"" + name +
                    "\" (expected transe, distmult, complex, rotate or simple)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::transe: return "transe";
    case ModelKind::distmult: return "distmult";
    case ModelKind::complex_: return "complex";
    case ModelKind::rotate: return "rotate";
    case ModelKind::simple: return "simple";
  }
  return "?";
}

namespace {

constexpr float kPi = std::numbers::pi_v<float>;

int64_t entity_width(const ModelConfig& c) {
  switch (c.kind) {
    case ModelKind::transe:
    case ModelKind::distmult: return c.dim;
    default: return 2 * c.dim;
  }
}

int64_t relation_rows(const ModelConfig& c, int64_t num_relations) {
  return c.kind == ModelKind::simple ? 2 * num_relations : num_relations;
}

int64_t relation_width(const ModelConfig& c) {
  switch (c.kind) {
    case ModelKind::complex_: return 2 * c.dim;
    case ModelKind::rotate: return c.dim;  // phases
    default: return c.dim;
  }
}

}  // namespace

EmbeddingModel::EmbeddingModel(const ModelConfig& config, int64_t num_entities,
                               int64_t num_relations)
    : config_(config), num_entities_(num_entities), num_relations_(num_relations) {
  if (config.dim <= 0) throw ConfigError("embedding dimension must be positive");
  Rng rng(config.seed);
  float bound = 6.f / std::sqrt(float(config.dim));

  Tensor entity = Tensor::zeros({num_entities, entity_width(config)});
  for (float& v : entity.mutable_data()) v = rng.uniform(-bound, bound);
  entity_ = Parameter("entity_table", std::move(entity));

  Tensor relation = Tensor::zeros({relation_rows(config, num_relations), relation_width(config)});
  if (config.kind == ModelKind::rotate) {
    // Phases uniform in (-pi, pi].
    for (float& v : relation.mutable_data()) v = kPi - 2.f * kPi * rng.uniform();
  } else {
    for (float& v : relation.mutable_data()) v = rng.uniform(-bound, bound);
  }
  relation_ = Parameter("relation_table", std::move(relation));
}

void EmbeddingModel::check_indices(const std::vector<int64_t>& heads,
                                   const std::vector<int64_t>& relations,
                                   const std::vector<int64_t>& tails) const {
  if (heads.size() != relations.size() || heads.size() != tails.size())
    throw DimensionError("score index batches differ in length");
  for (int64_t h : heads)
    if (h < 0 || h >= num_entities_) throw IndexError("head index " + std::to_string(h) + " out of range");
  for (int64_t r : relations)
    if (r < 0 || r >= num_relations_)
      throw IndexError("relation index " + std::to_string(r) + " out of range");
  for (int64_t t : tails)
    if (t < 0 || t >= num_entities_) throw IndexError("tail index " + std::to_string(t) + " out of range");
}

Var EmbeddingModel::score(const Var& entity_leaf, const Var& relation_leaf,
                          const std::vector<int64_t>& heads,
                          const std::vector<int64_t>& relations,
                          const std::vector<int64_t>& tails) const {
  check_indices(heads, relations, tails);
  int64_t d = config_.dim;
  Var eh = gather_rows(entity_leaf, heads);
  Var et = gather_rows(entity_leaf, tails);

  switch (config_.kind) {
    case ModelKind::transe: {
      Var wr = gather_rows(relation_leaf, relations);
      Var diff = sub(add(eh, wr), et);
      return neg(reduce_sum(elementwise(EwUnary::abs, diff), 1));
    }
    case ModelKind::distmult: {
      // (e_h . e_t) first keeps the score bit-symmetric in head and tail.
      Var wr = gather_rows(relation_leaf, relations);
      return reduce_sum(mul(mul(eh, et), wr), 1);
    }
    case ModelKind::complex_: {
      Var wr = gather_rows(relation_leaf, relations);
      Var re_h = slice_cols(eh, 0, d), im_h = slice_cols(eh, d, 2 * d);
      Var re_r = slice_cols(wr, 0, d), im_r = slice_cols(wr, d, 2 * d);
      Var re_t = slice_cols(et, 0, d), im_t = slice_cols(et, d, 2 * d);
      // Re <e_h, w_r, conj(e_t)>
      Var term = add(mul(re_h, add(mul(re_r, re_t), mul(im_r, im_t))),
                     mul(im_h, sub(mul(re_r, im_t), mul(im_r, re_t))));
      return reduce_sum(term, 1);
    }
    case ModelKind::rotate: {
      Var phase = gather_rows(relation_leaf, relations);
      Var cos_r = elementwise(EwUnary::cos, phase);
      Var sin_r = elementwise(EwUnary::sin, phase);
      Var re_h = slice_cols(eh, 0, d), im_h = slice_cols(eh, d, 2 * d);
      Var re_t = slice_cols(et, 0, d), im_t = slice_cols(et, d, 2 * d);
      Var d_re = sub(sub(mul(re_h, cos_r), mul(im_h, sin_r)), re_t);
      Var d_im = sub(add(mul(im_h, cos_r), mul(re_h, sin_r)), im_t);
      Var norm2 = reduce_sum(add(mul(d_re, d_re), mul(d_im, d_im)), 1);
      return neg(elementwise(EwUnary::sqrt, norm2));
    }
    case ModelKind::simple: {
      std::vector<int64_t> inverse(relations);
      for (int64_t& r : inverse) r += num_relations_;
      Var wf = gather_rows(relation_leaf, relations);
      Var wi = gather_rows(relation_leaf, inverse);
      Var h_head = slice_cols(eh, 0, d), h_tail = slice_cols(eh, d, 2 * d);
      Var t_head = slice_cols(et, 0, d), t_tail = slice_cols(et, d, 2 * d);
      Var forward = reduce_sum(mul(mul(h_head, wf), t_tail), 1);
      Var backward = reduce_sum(mul(mul(t_head, wi), h_tail), 1);
      return mul(add(forward, backward), Var(Tensor::scalar(0.5f)));
    }
  }
  throw ContractError("bad model kind");
}

float EmbeddingModel::score_one(int64_t head, int64_t relation, int64_t tail) const {
  check_indices({head}, {relation}, {tail});
  int64_t d = config_.dim;
  auto e = entity_.value.data();
  auto w = relation_.value.data();
  int64_t ew = entity_width(config_);
  int64_t ww = relation_width(config_);
  const float* eh = e.data() + head * ew;
  const float* et = e.data() + tail * ew;
  const float* wr = w.data() + relation * ww;

  double acc = 0;
  switch (config_.kind) {
    case ModelKind::transe:
      for (int64_t j = 0; j < d; ++j) acc += std::fabs(eh[j] + wr[j] - et[j]);
      return -float(acc);
    case ModelKind::distmult:
      for (int64_t j = 0; j < d; ++j) acc += eh[j] * et[j] * wr[j];
      return float(acc);
    case ModelKind::complex_:
      for (int64_t j = 0; j < d; ++j) {
        float re_h = eh[j], im_h = eh[d + j];
        float re_r = wr[j], im_r = wr[d + j];
        float re_t = et[j], im_t = et[d + j];
        acc += re_h * (re_r * re_t + im_r * im_t) + im_h * (re_r * im_t - im_r * re_t);
      }
      return float(acc);
    case ModelKind::rotate:
      for (int64_t j = 0; j < d; ++j) {
        float c = std::cos(wr[j]), s = std::sin(wr[j]);
        float d_re = eh[j] * c - eh[d + j] * s - et[j];
        float d_im = eh[d + j] * c + eh[j] * s - et[d + j];
        acc += d_re * d_re + d_im * d_im;
      }
      return -std::sqrt(float(acc));
    case ModelKind::simple: {
      const float* wi = w.data() + (relation + num_relations_) * ww;
      double backward = 0;
      for (int64_t j = 0; j < d; ++j) {
        acc += eh[j] * wr[j] * et[d + j];
        backward += et[j] * wi[j] * eh[d + j];
      }
      return (float(acc) + float(backward)) * 0.5f;
    }
  }
  throw ContractError("bad model kind");
}

std::vector<float> EmbeddingModel::score_all_tails(int64_t head, int64_t relation) const {
  std::vector<float> scores(static_cast<size_t>(num_entities_));
  for (int64_t t = 0; t < num_entities_; ++t) scores[size_t(t)] = score_one(head, relation, t);
  return scores;
}

std::vector<float> EmbeddingModel::score_all_heads(int64_t relation, int64_t tail) const {
  std::vector<float> scores(static_cast<size_t>(num_entities_));
  for (int64_t h = 0; h < num_entities_; ++h) scores[size_t(h)] = score_one(h, relation, tail);
  return scores;
}

void EmbeddingModel::project() {
  switch (config_.kind) {
    case ModelKind::transe: {
      auto data = entity_.value.mutable_data();
      int64_t width = entity_width(config_);
      for (int64_t i = 0; i < num_entities_; ++i) {
        double norm2 = 0;
        for (int64_t j = 0; j < width; ++j) {
          float v = data[size_t(i * width + j)];
          norm2 += double(v) * double(v);
        }
        float norm = float(std::sqrt(norm2));
        if (norm > 0)
          for (int64_t j = 0; j < width; ++j) data[size_t(i * width + j)] /= norm;
      }
      break;
    }
    case ModelKind::rotate: {
      for (float& v : relation_.value.mutable_data()) {
        v = std::remainder(v, 2.f * kPi);
        if (v <= -kPi) v += 2.f * kPi;
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace graphrx::kg
