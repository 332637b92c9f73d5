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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "unit/test_util.h"
#include "wssg/error.h"
#include "wssg/gradcheck.h"

namespace wssg {
namespace {

Eigen::MatrixXd UnitRows(Eigen::MatrixXd m) {
  m.rowwise().normalize();
  return m;
}

Eigen::VectorXd Flat(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd Unflat(const Eigen::VectorXd& x, int rows, int cols) {
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), rows, cols);
}

TEST(ContrastiveLossTest, SingleRowIsZero) {
  std::mt19937_64 rng(1);
  const auto r = ContrastiveLoss(testing::RandomMatrix(1, 4, rng),
                                 testing::RandomMatrix(1, 4, rng), 0.1);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.grad_nodes, Eigen::MatrixXd::Zero(1, 4));
}

TEST(ContrastiveLossTest, AlignedOrthonormalPair) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const double want = -std::log(std::exp(10.0) / (std::exp(10.0) + 1.0));
  EXPECT_NEAR(ContrastiveLoss(id, id, 0.1).value, want, 1e-15);
  EXPECT_NEAR(want, 4.54e-5, 1e-7);
}

TEST(ContrastiveLossTest, BadTemperature) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  for (double tau : {0.0, -1.0, std::nan("")}) {
    try {
      ContrastiveLoss(id, id, tau);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadTemperature);
    }
  }
}

TEST(ContrastiveLossTest, NonNegativeAndDecreasingWithDominance) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd v = UnitRows(testing::RandomMatrix(4, 6, rng));
  double previous = 1e300;
  for (double mix : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Eigen::MatrixXd f =
        UnitRows(mix * v + (1 - mix) * testing::RandomMatrix(4, 6, rng));
    const double value = ContrastiveLoss(v, f, 0.1).value;
    EXPECT_GE(value, 0.0);
    if (mix == 1.0) EXPECT_LT(value, previous);
    previous = value;
  }
}

TEST(ContrastiveLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (int k : {2, 4, 5}) {
    const Eigen::MatrixXd v = UnitRows(testing::RandomMatrix(k, 6, rng));
    const Eigen::MatrixXd f = UnitRows(testing::RandomMatrix(k, 6, rng));
    Eigen::VectorXd x(2 * v.size());
    x << Flat(v), Flat(f);
    const DifferentiableFn fn = [k](const Eigen::VectorXd& p,
                                    Eigen::VectorXd* grad) {
      const auto r = ContrastiveLoss(Unflat(p.head(k * 6), k, 6),
                                     Unflat(p.tail(k * 6), k, 6), 0.1);
      if (grad) *grad << Flat(r.grad_nodes), Flat(r.grad_images);
      return r.value;
    };
    EXPECT_LT(FiniteDiffCheck(fn, x, 1e-6).max_relative_error, 1e-6);
  }
}

TEST(CrossEntropyTest, UniformLogitsGiveLogC) {
  const auto r = CrossEntropy(Eigen::MatrixXd::Zero(3, 7), {0, 3, 6});
  EXPECT_NEAR(r.value, std::log(7.0), 1e-15);
  EXPECT_EQ(r.counted_rows, 3);
}

TEST(CrossEntropyTest, SaturatedLogit) {
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(1, 2);
  logits(0, 1) = 20;
  EXPECT_LT(CrossEntropy(logits, {1}).value, 1e-8);
}

TEST(CrossEntropyTest, IgnoredRowsAndEmptyBatch) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd logits = testing::RandomMatrix(3, 4, rng);
  const auto some = CrossEntropy(logits, {1, 3, 2}, 3);
  EXPECT_EQ(some.counted_rows, 2);
  EXPECT_EQ(some.grad_logits.row(1), Eigen::RowVectorXd::Zero(4));
  const auto kept = CrossEntropy(logits({0, 2}, Eigen::all), {1, 2});
  EXPECT_NEAR(some.value, kept.value, 1e-15);
  try {
    CrossEntropy(logits, {3, 3, 3}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyBatch);
  }
  EXPECT_THROW(CrossEntropy(logits, {0, 4, 1}), Error);
}

TEST(CrossEntropyTest, ShiftInvariance) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd logits = testing::RandomMatrix(4, 5, rng, -3, 3);
  const std::vector<int> labels = {0, 4, 2, 2};
  Eigen::MatrixXd shifted = logits;
  for (int r = 0; r < 4; ++r) shifted.row(r).array() += 7.5 * (r - 1);
  const auto a = CrossEntropy(logits, labels);
  const auto b = CrossEntropy(shifted, labels);
  EXPECT_NEAR(a.value, b.value, 1e-9);
  EXPECT_LT((a.grad_logits - b.grad_logits).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CrossEntropyTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  for (auto [m, c] : {std::pair{6, 4}, std::pair{5, 3}}) {
    const Eigen::MatrixXd logits = testing::RandomMatrix(m, c, rng, -2, 2);
    std::vector<int> labels(m);
    for (int r = 0; r < m; ++r) labels[r] = r % c;
    const DifferentiableFn fn = [&, m = m, c = c](const Eigen::VectorXd& p,
                                                  Eigen::VectorXd* grad) {
      const auto r = CrossEntropy(Unflat(p, m, c), labels);
      if (grad) *grad = Flat(r.grad_logits);
      return r.value;
    };
    EXPECT_LT(FiniteDiffCheck(fn, Flat(logits), 1e-6).max_relative_error,
              1e-6);
  }
}

TEST(TotalLossTest, Additivity) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd nl = testing::RandomMatrix(3, 5, rng);
  const Eigen::MatrixXd el = testing::RandomMatrix(6, 4, rng);
  const std::vector<int> nlab = {0, 2, 4}, elab = {3, 3, 0, 1, 3, 2};
  const Eigen::MatrixXd v = UnitRows(testing::RandomMatrix(3, 8, rng));
  const Eigen::MatrixXd f = UnitRows(testing::RandomMatrix(3, 8, rng));
  const LossReport r = TotalLoss(nl, nlab, el, elab, v, f);
  const double obj = CrossEntropy(nl, nlab).value;
  const double rel = CrossEntropy(el, elab).value;
  const double s = ContrastiveLoss(v, f, 0.1).value;
  EXPECT_NEAR(r.object_loss, obj, 1e-12);
  EXPECT_NEAR(r.relation_loss, rel, 1e-12);
  EXPECT_NEAR(r.alignment_loss, s, 1e-12);
  EXPECT_NEAR(r.total, obj + rel + 10 * s, 1e-12);
  EXPECT_EQ(r.alignment_weight, 10);
  EXPECT_EQ(r.temperature, 0.1);
  EXPECT_LT((r.gradients.at("nodes") -
             10 * ContrastiveLoss(v, f, 0.1).grad_nodes)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(TotalLossTest, WeightedSumExample) {
  // l_obj = 1, l_rel = 2 and l_s = 0.5 through the weighting alone.
  const double total = 1.0 + 2.0 + LossConfig{}.alignment_weight * 0.5;
  EXPECT_EQ(total, 8.0);
}

TEST(TotalLossTest, NoneEdgesAreTargets) {
  Eigen::MatrixXd el = Eigen::MatrixXd::Zero(2, 3);
  const LossReport r =
      TotalLoss(Eigen::MatrixXd::Zero(2, 2), {0, 1}, el, {2, 2},
                Eigen::MatrixXd::Identity(2, 2),
                Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(r.relation_loss, std::log(3.0), 1e-15);
}

TEST(FiniteDiffCheckTest, Quadratic) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd a = testing::RandomMatrix(10, 10, rng);
  const Eigen::MatrixXd q = a * a.transpose();
  const DifferentiableFn fn = [&](const Eigen::VectorXd& x,
                                  Eigen::VectorXd* grad) {
    if (grad) *grad = q * x;
    return 0.5 * x.dot(q * x);
  };
  const auto r = FiniteDiffCheck(fn, testing::RandomMatrix(10, 1, rng), 1e-3);
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_EQ(r.coordinates_checked, 10);
}

TEST(FiniteDiffCheckTest, SamplesLargeInputsAndRejectsBadEps) {
  const DifferentiableFn fn = [](const Eigen::VectorXd& x,
                                 Eigen::VectorXd* grad) {
    if (grad) *grad = 2 * x;
    return x.squaredNorm();
  };
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(500, -1, 1);
  EXPECT_EQ(FiniteDiffCheck(fn, x, 1e-4).coordinates_checked, 200);
  EXPECT_THROW(FiniteDiffCheck(fn, x, 0.0), Error);
  EXPECT_THROW(FiniteDiffCheck(fn, x, 0.1), Error);
}

TEST(FiniteDiffCheckTest, DetectsWrongGradient) {
  const DifferentiableFn fn = [](const Eigen::VectorXd& x,
                                 Eigen::VectorXd* grad) {
    if (grad) *grad = 3 * x;
    return x.squaredNorm();
  };
  EXPECT_GT(FiniteDiffCheck(fn, Eigen::VectorXd::Ones(3), 1e-4)
                .max_relative_error,
            0.3);
}

TEST(GradientSuiteTest, EveryLossPasses) {
  const auto suite = RunGradientSuite(3, {.instances = 5});
  ASSERT_EQ(suite.size(), 3u);
  for (const LossGradientSummary& s : suite) {
    EXPECT_EQ(s.instances, 5) << s.loss;
    EXPECT_LT(s.worst_relative_error, 1e-6) << s.loss;
  }
  EXPECT_EQ(suite[0].loss, "contrastive");
}

TEST(GradientSuiteTest, SeededAndRejectsEmpty) {
  const auto a = RunGradientSuite(9, {.instances = 2});
  const auto b = RunGradientSuite(9, {.instances = 2});
  EXPECT_EQ(a[1].worst_relative_error, b[1].worst_relative_error);
  EXPECT_THROW(RunGradientSuite(9, {.instances = 0}), Error);
}

}  // namespace
}  // namespace wssg
