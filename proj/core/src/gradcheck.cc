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

#include "wssg/gradcheck.h"

#include <random>

#include <Eigen/Core>

#include "wssg/error.h"

namespace wssg {
namespace {

Eigen::VectorXd Flat(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd Unflat(const Eigen::VectorXd& x, Eigen::Index rows,
                       Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), rows, cols);
}

Eigen::MatrixXd Uniform(int rows, int cols, double lo, double hi,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

Eigen::MatrixXd UnitRows(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXd m = Uniform(rows, cols, -1.0, 1.0, rng);
  m.rowwise().normalize();
  return m;
}

int Draw(int lo, int hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<int> Labels(int rows, int classes, std::mt19937_64& rng) {
  std::vector<int> labels(static_cast<size_t>(rows));
  for (int& l : labels) l = Draw(0, classes - 1, rng);
  return labels;
}

void Record(LossGradientSummary& s, int instance,
            const GradientCheckReport& r) {
  if (s.worst_instance < 0 || r.max_relative_error > s.worst_relative_error) {
    s.worst_relative_error = r.max_relative_error;
    s.worst_instance = instance;
  }
  ++s.instances;
}

}  // namespace

std::vector<LossGradientSummary> RunGradientSuite(
    std::uint64_t seed, const GradientSuiteOptions& options) {
  if (options.instances < 1) {
    throw Error(ErrorCode::kInvalidArgument, "instances must be >= 1");
  }
  LossGradientSummary contrastive{"contrastive"};
  LossGradientSummary cross_entropy{"cross_entropy"};
  LossGradientSummary total{"total"};
  std::mt19937_64 rng(seed);
  const LossConfig config;

  for (int n = 0; n < options.instances; ++n) {
    const int k = Draw(2, 8, rng);
    const int d = Draw(4, 16, rng);
    const Eigen::MatrixXd v = UnitRows(k, d, rng);
    const Eigen::MatrixXd f = UnitRows(k, d, rng);
    Eigen::VectorXd x(2 * v.size());
    x << Flat(v), Flat(f);
    const DifferentiableFn fn = [&](const Eigen::VectorXd& p,
                                    Eigen::VectorXd* grad) {
      const auto r = ContrastiveLoss(Unflat(p.head(v.size()), k, d),
                                     Unflat(p.tail(f.size()), k, d),
                                     config.temperature);
      if (grad) *grad << Flat(r.grad_nodes), Flat(r.grad_images);
      return r.value;
    };
    Record(contrastive, n,
           FiniteDiffCheck(fn, x, options.eps, seed + n, 200, options.floor));
  }

  for (int n = 0; n < options.instances; ++n) {
    const int m = Draw(2, 12, rng);
    const int c = Draw(2, 12, rng);
    const Eigen::MatrixXd logits = Uniform(m, c, -2.0, 2.0, rng);
    const std::vector<int> labels = Labels(m, c, rng);
    const DifferentiableFn fn = [&](const Eigen::VectorXd& p,
                                    Eigen::VectorXd* grad) {
      const auto r = CrossEntropy(Unflat(p, m, c), labels);
      if (grad) *grad = Flat(r.grad_logits);
      return r.value;
    };
    Record(cross_entropy, n,
           FiniteDiffCheck(fn, Flat(logits), options.eps, seed + n, 200,
                           options.floor));
  }

  for (int n = 0; n < options.instances; ++n) {
    const int k = Draw(2, 5, rng);
    const int d = Draw(4, 8, rng);
    const int objects = Draw(2, 6, rng);
    const int edge_classes = Draw(2, 5, rng);
    const int edges = k * (k - 1);
    const Eigen::MatrixXd nl = Uniform(k, objects, -2.0, 2.0, rng);
    const Eigen::MatrixXd el = Uniform(edges, edge_classes, -2.0, 2.0, rng);
    const Eigen::MatrixXd v = UnitRows(k, d, rng);
    const Eigen::MatrixXd f = UnitRows(k, d, rng);
    const std::vector<int> node_labels = Labels(k, objects, rng);
    const std::vector<int> edge_labels = Labels(edges, edge_classes, rng);
    Eigen::VectorXd x(nl.size() + el.size() + v.size() + f.size());
    x << Flat(nl), Flat(el), Flat(v), Flat(f);
    const DifferentiableFn fn = [&](const Eigen::VectorXd& p,
                                    Eigen::VectorXd* grad) {
      Eigen::Index at = 0;
      auto take = [&](Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd out = Unflat(p.segment(at, rows * cols), rows, cols);
        at += rows * cols;
        return out;
      };
      const Eigen::MatrixXd a = take(k, objects);
      const Eigen::MatrixXd b = take(edges, edge_classes);
      const Eigen::MatrixXd c = take(k, d);
      const Eigen::MatrixXd e = take(k, d);
      const LossReport r =
          TotalLoss(a, node_labels, b, edge_labels, c, e, config);
      if (grad) {
        *grad << Flat(r.gradients.at("node_logits")),
            Flat(r.gradients.at("edge_logits")), Flat(r.gradients.at("nodes")),
            Flat(r.gradients.at("images"));
      }
      return r.total;
    };
    Record(total, n,
           FiniteDiffCheck(fn, x, options.eps, seed + n, 200, options.floor));
  }
  return {contrastive, cross_entropy, total};
}

}  // namespace wssg
