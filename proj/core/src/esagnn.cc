/* Copyright 2026 The wssg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "wssg/esagnn.h"

#include <cmath>
#include <string>

#include "linear.h"
#include "wssg/error.h"
#include "wssg/parallel.h"

namespace wssg {
namespace {

void SoftmaxInPlace(Eigen::Ref<Eigen::VectorXd> x) {
  const double max = x.maxCoeff();
  x = (x.array() - max).exp();
  x /= x.sum();
}

// Gated message from already projected inputs (see FanMessage).
Eigen::VectorXd FanFromProjected(const Eigen::VectorXd& query,
                                 const Eigen::VectorXd& edge,
                                 const Eigen::VectorXd& value,
                                 const Eigen::MatrixXd& gate_weight,
                                 const Eigen::VectorXd& gate_bias,
                                 int heads) {
  const Eigen::Index dk = query.size() / heads;
  Eigen::VectorXd message(query.size());
  Eigen::VectorXd joint(2 * dk);
  for (int h = 0; h < heads; ++h) {
    joint << query.segment(h * dk, dk), edge.segment(h * dk, dk);
    Eigen::VectorXd gate = gate_weight * joint + gate_bias;
    SoftmaxInPlace(gate);
    message.segment(h * dk, dk) =
        gate.cwiseProduct(value.segment(h * dk, dk));
  }
  return message;
}

void CheckWidth(const Eigen::MatrixXd& m, const WeightBundle& weights,
                const char* what) {
  if (m.cols() != weights.config().dim) {
    throw Error(ErrorCode::kBadWeights,
                std::string(what) + " width " + std::to_string(m.cols()) +
                    " does not match D=" +
                    std::to_string(weights.config().dim));
  }
}

}  // namespace

Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    Eigen::VectorXd row = out.row(r).transpose();
    SoftmaxInPlace(row);
    out.row(r) = row.transpose();
  }
  return out;
}

Eigen::MatrixXd EdgeSelfAttention(const Eigen::MatrixXd& edges,
                                  const WeightBundle& weights, int layer,
                                  int threads, AttentionTrace* trace) {
  if (edges.rows() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "attention needs >= 1 edge");
  }
  CheckWidth(edges, weights, "edge embedding");
  const int heads = weights.config().heads;
  const Eigen::Index dk = weights.config().head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  const Eigen::MatrixXd q =
      internal::Affine(edges, weights, LayerWeightName(layer, "attn_q"));
  const Eigen::MatrixXd k =
      internal::Affine(edges, weights, LayerWeightName(layer, "attn_k"));
  const Eigen::MatrixXd v =
      internal::Affine(edges, weights, LayerWeightName(layer, "attn_v"));

  const Eigen::Index m = edges.rows();
  Eigen::MatrixXd out(m, edges.cols());
  std::vector<Eigen::MatrixXd> attention;
  if (trace) attention.assign(heads, Eigen::MatrixXd(m, m));

  ParallelFor(static_cast<int>(m), threads, [&](int row) {
    for (int h = 0; h < heads; ++h) {
      Eigen::VectorXd scores =
          k.middleCols(h * dk, dk) *
          q.row(row).segment(h * dk, dk).transpose() * scale;
      SoftmaxInPlace(scores);
      out.row(row).segment(h * dk, dk) =
          (v.middleCols(h * dk, dk).transpose() * scores).transpose();
      if (trace) attention[h].row(row) = scores.transpose();
    }
  });
  if (trace) {
    for (auto& a : attention) trace->edge_attention.push_back(std::move(a));
  }
  if (weights.config().attention_residual) out += edges;
  return out;
}

Eigen::VectorXd FanMessage(const Eigen::VectorXd& subject,
                           const Eigen::VectorXd& edge,
                           const Eigen::VectorXd& object,
                           const WeightBundle& weights, int layer) {
  const int d = weights.config().dim;
  if (subject.size() != d || edge.size() != d || object.size() != d) {
    throw Error(ErrorCode::kBadWeights, "FAN input width mismatch");
  }
  return FanFromProjected(
      internal::AffineVec(subject, weights, LayerWeightName(layer, "fan_q")),
      internal::AffineVec(edge, weights, LayerWeightName(layer, "fan_e")),
      internal::AffineVec(object, weights, LayerWeightName(layer, "fan_r")),
      weights.Get(LayerWeightName(layer, "fan_a.weight")),
      weights.Get(LayerWeightName(layer, "fan_a.bias")).col(0),
      weights.config().heads);
}

GraphState GnnLayer(const GraphState& state, const WeightBundle& weights,
                    int layer, int threads, AttentionTrace* trace) {
  CheckWidth(state.nodes, weights, "node embedding");
  const int k = state.num_nodes();
  const int d = weights.config().dim;
  const int heads = weights.config().heads;
  if (state.edges.rows() != NumEdges(k)) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge rows do not cover all ordered pairs");
  }

  GraphState next;
  next.layer = state.layer + 1;
  next.nodes.resize(k, d);
  next.edges.resize(NumEdges(k), d);
  if (k == 0) return next;

  Eigen::MatrixXd attended = state.edges;
  if (state.edges.rows() > 0) {
    CheckWidth(state.edges, weights, "edge embedding");
    attended = EdgeSelfAttention(state.edges, weights, layer, threads, trace);
  }

  const Eigen::MatrixXd query =
      internal::Affine(state.nodes, weights, LayerWeightName(layer, "fan_q"));
  const Eigen::MatrixXd value =
      internal::Affine(state.nodes, weights, LayerWeightName(layer, "fan_r"));
  const Eigen::MatrixXd edge_proj =
      k > 1 ? internal::Affine(attended, weights,
                               LayerWeightName(layer, "fan_e"))
            : Eigen::MatrixXd(0, d);
  const Eigen::MatrixXd& gate_w =
      weights.Get(LayerWeightName(layer, "fan_a.weight"));
  const Eigen::VectorXd gate_b =
      weights.Get(LayerWeightName(layer, "fan_a.bias")).col(0);
  const std::string node_update = LayerWeightName(layer, "node_update");
  const std::string edge_update = LayerWeightName(layer, "edge_update");

  ParallelFor(k, threads, [&](int i) {
    // Max over an empty neighborhood is the zero vector.
    Eigen::VectorXd pooled = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const Eigen::VectorXd msg = FanFromProjected(
          query.row(i).transpose(),
          edge_proj.row(EdgeIndex(i, j, k)).transpose(),
          value.row(j).transpose(), gate_w, gate_b, heads);
      if (j == (i == 0 ? 1 : 0)) {
        pooled = msg;
      } else {
        pooled = pooled.cwiseMax(msg);
      }
    }
    Eigen::VectorXd joint(2 * d);
    joint << state.nodes.row(i).transpose(), pooled;
    Eigen::VectorXd updated = internal::AffineVec(joint, weights, node_update);
    internal::ReluInPlace(updated);
    next.nodes.row(i) = updated.transpose();
  });

  ParallelFor(NumEdges(k), threads, [&](int e) {
    const auto [i, j] = EdgePair(e, k);
    Eigen::VectorXd joint(3 * d);
    joint << state.nodes.row(i).transpose(), attended.row(e).transpose(),
        state.nodes.row(j).transpose();
    Eigen::VectorXd updated = internal::AffineVec(joint, weights, edge_update);
    internal::ReluInPlace(updated);
    next.edges.row(e) = updated.transpose();
  });
  return next;
}

ForwardResult Forward(const GraphState& initial, const WeightBundle& weights,
                      const ForwardOptions& options) {
  weights.Validate();
  if (!options.bypass_layers && weights.config().layers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "at least one layer required");
  }
  ForwardResult result;
  result.final_state = initial;
  if (!options.bypass_layers) {
    for (int n = 0; n < weights.config().layers; ++n) {
      result.final_state = GnnLayer(result.final_state, weights, n,
                                    options.threads, options.trace);
    }
  }
  const GraphState& s = result.final_state;
  result.node_logits = internal::Affine(s.nodes, weights, "head.node");
  Eigen::MatrixXd hidden = internal::Affine(s.edges, weights, "head.edge0");
  internal::ReluInPlace(hidden);
  result.edge_logits = internal::Affine(hidden, weights, "head.edge1");
  return result;
}

}  // namespace wssg
