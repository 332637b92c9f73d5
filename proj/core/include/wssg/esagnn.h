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

#ifndef WSSG_ESAGNN_H_
#define WSSG_ESAGNN_H_

#include <vector>

#include <Eigen/Core>

#include "wssg/graph.h"
#include "wssg/weights.h"

namespace wssg {

// Attention matrices recorded during a forward pass, one M x M matrix per
// head and layer, in that order. Only filled when requested.
struct AttentionTrace {
  std::vector<Eigen::MatrixXd> edge_attention;
};

// Multi-head scaled dot-product self-attention over all edge rows of one
// layer. Output has the input's shape.
Eigen::MatrixXd EdgeSelfAttention(const Eigen::MatrixXd& edges,
                                  const WeightBundle& weights, int layer,
                                  int threads = 1,
                                  AttentionTrace* trace = nullptr);

// Node-edge-node message: per head, a feature-wise softmax of
// g_a([g_q(v_i), g_e(e_ij)]) gates g_r(v_j); the head chunks are
// concatenated.
Eigen::VectorXd FanMessage(const Eigen::VectorXd& subject,
                           const Eigen::VectorXd& edge,
                           const Eigen::VectorXd& object,
                           const WeightBundle& weights, int layer);

// One message passing layer. Edges pass the self-attention first; the
// attended edges then feed both the node and the edge update.
GraphState GnnLayer(const GraphState& state, const WeightBundle& weights,
                    int layer, int threads = 1,
                    AttentionTrace* trace = nullptr);

struct ForwardOptions {
  int threads = 1;
  // Skips the message passing layers so the heads see the initial features.
  bool bypass_layers = false;
  AttentionTrace* trace = nullptr;
};

struct ForwardResult {
  Eigen::MatrixXd node_logits;  // K x C_obj
  Eigen::MatrixXd edge_logits;  // K(K-1) x (C_rel + 1), None last
  GraphState final_state;
};

ForwardResult Forward(const GraphState& initial, const WeightBundle& weights,
                      const ForwardOptions& options = {});

// Row-wise softmax with max subtraction.
Eigen::MatrixXd RowSoftmax(const Eigen::MatrixXd& logits);

}  // namespace wssg

#endif  // WSSG_ESAGNN_H_
