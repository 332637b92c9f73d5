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

#ifndef WSSG_LOSSES_H_
#define WSSG_LOSSES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wssg/config.h"

namespace wssg {

struct ContrastiveResult {
  double value = 0.0;
  Eigen::MatrixXd grad_nodes;   // d value / d V0
  Eigen::MatrixXd grad_images;  // d value / d F_img
};

// InfoNCE aligning row i of `nodes` with row i of `images`:
//   -(1/K) sum_i log softmax_j(<v_i, f_j> / tau)_i
// Throws kBadTemperature for tau <= 0.
ContrastiveResult ContrastiveLoss(const Eigen::MatrixXd& nodes,
                                  const Eigen::MatrixXd& images,
                                  double temperature);

struct CrossEntropyResult {
  double value = 0.0;
  Eigen::MatrixXd grad_logits;
  int counted_rows = 0;
};

// Mean softmax cross-entropy over rows whose label differs from `ignore`.
// Throws kEmptyBatch if every row is ignored.
CrossEntropyResult CrossEntropy(const Eigen::MatrixXd& logits,
                                const std::vector<int>& labels,
                                std::optional<int> ignore = std::nullopt);

struct LossReport {
  double object_loss = 0.0;
  double relation_loss = 0.0;
  double alignment_loss = 0.0;
  double total = 0.0;
  double alignment_weight = 0.0;
  double temperature = 0.0;
  // Gradients of `total`, keyed "node_logits", "edge_logits", "nodes",
  // "images".
  std::map<std::string, Eigen::MatrixXd> gradients;
};

// total = object + relation + alignment_weight * alignment. None-labelled
// edges are ordinary targets for the relation term.
LossReport TotalLoss(const Eigen::MatrixXd& node_logits,
                     const std::vector<int>& node_labels,
                     const Eigen::MatrixXd& edge_logits,
                     const std::vector<int>& edge_labels,
                     const Eigen::MatrixXd& nodes,
                     const Eigen::MatrixXd& images,
                     const LossConfig& config = {});

// Scalar function of a flat parameter vector that also reports its analytic
// gradient when `grad` is non-null.
using DifferentiableFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct GradientCheckReport {
  double max_relative_error = 0.0;
  int worst_index = -1;
  int coordinates_checked = 0;
};

// Compares the analytic gradient with central differences on every
// coordinate, or on a seeded sample of `min_coordinates` when x is larger.
// Each derivative starts from step `eps` and is refined by Richardson
// extrapolation over shrinking steps (Ridders' scheme), keeping the estimate
// with the smallest tableau error. The relative error of a coordinate is
// |a - n| / max(|a|, |n|, floor).
GradientCheckReport FiniteDiffCheck(const DifferentiableFn& fn,
                                    const Eigen::VectorXd& x, double eps,
                                    std::uint64_t seed = 0,
                                    int min_coordinates = 200,
                                    double floor = 1e-6);

}  // namespace wssg

#endif  // WSSG_LOSSES_H_
