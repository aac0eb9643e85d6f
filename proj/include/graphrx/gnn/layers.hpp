// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "graphrx/packed_graph.hpp"
#include "graphrx/rng.hpp"
#include "graphrx/tape.hpp"

namespace graphrx::gnn {

/// Message passing expects batches in undirected-as-two-directed form
/// (molecule graphs already are; apply to_undirected once at model build
/// otherwise). Members of a pack never exchange messages.

/// Degree-normalized aggregation with a virtual self-loop:
///   out = act( D^-1/2 (A + I) D^-1/2 (H W) + b ), act applied by caller.
/// weight [d_in x d_out], bias rank-1 [d_out].
Var gcn_propagate(const Var& weight, const Var& bias, const PackedGraph& pg, const Var& H);

/// Injective sum aggregation: MLP((1 + eps) h_v + sum of neighbors).
/// The virtual self-loop of GCN is never materialized here; only real
/// edges feed the neighbor sum.
Var gin_propagate(const Var& w1, const Var& b1, const Var& w2, const Var& b2, const Var& eps,
                  const PackedGraph& pg, const Var& H);

enum class ReadoutKind { sum, mean };

ReadoutKind readout_kind_from_string(const std::string& name);

/// Per-member segment pooling to [num_graphs x d]. An empty member
/// produces a zero row; for mean it also bumps the warning counter.
Var readout(const PackedGraph& pg, const Var& H, ReadoutKind kind,
            int* empty_member_warnings = nullptr);

struct GCNLayer {
  Parameter weight;
  Parameter bias;

  GCNLayer(const std::string& name, int64_t d_in, int64_t d_out, Rng& rng);
  Var forward(Tape* tape, const PackedGraph& pg, const Var& H);
};

struct GINLayer {
  Parameter mlp_w1, mlp_b1, mlp_w2, mlp_b2;
  Parameter epsilon;
  bool learn_epsilon;

  GINLayer(const std::string& name, int64_t d_in, int64_t d_hidden, int64_t d_out, Rng& rng,
           bool learn_epsilon = true);
  Var forward(Tape* tape, const PackedGraph& pg, const Var& H);
};

/// He-style uniform fan-in initialization for affine maps.
Tensor affine_init(Rng& rng, int64_t fan_in, int64_t fan_out);

}  // namespace graphrx::gnn
