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

#include "wssg/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wssg/error.h"

namespace wssg {
namespace {

double LogSumExp(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const double max = row.maxCoeff();
  return max + std::log((row.array() - max).exp().sum());
}

}  // namespace

ContrastiveResult ContrastiveLoss(const Eigen::MatrixXd& nodes,
                                  const Eigen::MatrixXd& images,
                                  double temperature) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::kBadTemperature, "temperature must be positive");
  }
  if (nodes.rows() != images.rows() || nodes.cols() != images.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "node and image embeddings differ in shape");
  }
  const Eigen::Index k = nodes.rows();
  ContrastiveResult result;
  result.grad_nodes = Eigen::MatrixXd::Zero(k, nodes.cols());
  result.grad_images = Eigen::MatrixXd::Zero(k, nodes.cols());
  if (k == 0) return result;

  const Eigen::MatrixXd logits = nodes * images.transpose() / temperature;
  // d value / d logits = (softmax(logits) - I) / K
  Eigen::MatrixXd g(k, k);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double lse = LogSumExp(logits.row(i));
    sum += lse - logits(i, i);
    g.row(i) = (logits.row(i).array() - lse).exp();
    g(i, i) -= 1.0;
  }
  g /= static_cast<double>(k);
  result.value = sum / static_cast<double>(k);
  result.grad_nodes = g * images / temperature;
  result.grad_images = g.transpose() * nodes / temperature;
  return result;
}

CrossEntropyResult CrossEntropy(const Eigen::MatrixXd& logits,
                                const std::vector<int>& labels,
                                std::optional<int> ignore) {
  if (labels.size() != static_cast<size_t>(logits.rows())) {
    throw Error(ErrorCode::kInvalidArgument, "one label per row expected");
  }
  CrossEntropyResult result;
  result.grad_logits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  double sum = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int label = labels[r];
    if (ignore && label == *ignore) continue;
    if (label < 0 || label >= logits.cols()) {
      throw Error(ErrorCode::kInvalidArgument, "label out of range");
    }
    const double lse = LogSumExp(logits.row(r));
    sum += lse - logits(r, label);
    result.grad_logits.row(r) = (logits.row(r).array() - lse).exp();
    result.grad_logits(r, label) -= 1.0;
    ++result.counted_rows;
  }
  if (result.counted_rows == 0) {
    throw Error(ErrorCode::kEmptyBatch, "every row is ignored");
  }
  result.value = sum / result.counted_rows;
  result.grad_logits /= static_cast<double>(result.counted_rows);
  return result;
}

LossReport TotalLoss(const Eigen::MatrixXd& node_logits,
                     const std::vector<int>& node_labels,
                     const Eigen::MatrixXd& edge_logits,
                     const std::vector<int>& edge_labels,
                     const Eigen::MatrixXd& nodes,
                     const Eigen::MatrixXd& images,
                     const LossConfig& config) {
  LossReport report;
  report.alignment_weight = config.alignment_weight;
  report.temperature = config.temperature;

  const CrossEntropyResult obj = CrossEntropy(node_logits, node_labels);
  report.object_loss = obj.value;
  report.gradients["node_logits"] = obj.grad_logits;

  if (edge_logits.rows() > 0) {
    const CrossEntropyResult rel = CrossEntropy(edge_logits, edge_labels);
    report.relation_loss = rel.value;
    report.gradients["edge_logits"] = rel.grad_logits;
  } else {
    report.gradients["edge_logits"] =
        Eigen::MatrixXd::Zero(0, edge_logits.cols());
  }

  const ContrastiveResult align =
      ContrastiveLoss(nodes, images, config.temperature);
  report.alignment_loss = align.value;
  report.gradients["nodes"] = config.alignment_weight * align.grad_nodes;
  report.gradients["images"] = config.alignment_weight * align.grad_images;

  report.total = report.object_loss + report.relation_loss +
                 config.alignment_weight * report.alignment_loss;
  return report;
}

namespace {

double Central(const DifferentiableFn& fn, Eigen::VectorXd& probe, int c,
               double h) {
  const double x = probe[c];
  probe[c] = x + h;
  const double plus = fn(probe, nullptr);
  probe[c] = x - h;
  const double minus = fn(probe, nullptr);
  probe[c] = x;
  return (plus - minus) / (2.0 * h);
}

double RiddersDerivative(const DifferentiableFn& fn, Eigen::VectorXd& probe,
                         int c, double h) {
  constexpr int kLevels = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  double table[kLevels][kLevels];
  table[0][0] = Central(fn, probe, c, h);
  double best = table[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    table[0][i] = Central(fn, probe, c, h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double e = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                std::abs(table[j][i] - table[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = table[j][i];
      }
    }
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err) break;
  }
  return best;
}

}  // namespace

GradientCheckReport FiniteDiffCheck(const DifferentiableFn& fn,
                                    const Eigen::VectorXd& x, double eps,
                                    std::uint64_t seed, int min_coordinates,
                                    double floor) {
  if (!(eps > 0.0 && eps <= 1e-2)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1e-2]");
  }
  Eigen::VectorXd analytic(x.size());
  fn(x, &analytic);

  std::vector<int> coords(static_cast<size_t>(x.size()));
  std::iota(coords.begin(), coords.end(), 0);
  if (static_cast<int>(coords.size()) > min_coordinates) {
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<size_t>(min_coordinates));
    std::sort(coords.begin(), coords.end());
  }

  GradientCheckReport report;
  Eigen::VectorXd probe = x;
  for (int c : coords) {
    const double numeric = RiddersDerivative(fn, probe, c, eps);
    const double denom =
        std::max({std::abs(analytic[c]), std::abs(numeric), floor});
    const double err = std::abs(analytic[c] - numeric) / denom;
    if (err > report.max_relative_error || report.worst_index < 0) {
      report.max_relative_error = std::max(report.max_relative_error, err);
      report.worst_index = c;
    }
    ++report.coordinates_checked;
  }
  return report;
}

}  // namespace wssg
