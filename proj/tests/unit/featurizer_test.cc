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

#include "wssg/featurizer.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "unit/test_util.h"
#include "wssg/error.h"

namespace wssg {
namespace {

ModelConfig SmallConfig() {
  ModelConfig c;
  c.dim = 16;
  c.heads = 2;
  c.point_hidden = {8};
  c.edge_hidden = 8;
  c.num_objects = 5;
  c.num_predicates = 3;
  return c;
}

TEST(SpatialPropsTest, UnitCubeCorners) {
  Eigen::MatrixX3d pts(8, 3);
  for (int i = 0; i < 8; ++i) {
    pts.row(i) << (i & 1) - 0.5, ((i >> 1) & 1) - 0.5, ((i >> 2) & 1) - 0.5;
  }
  const SpatialProps p = ComputeSpatialProps(pts);
  EXPECT_EQ(p.extent, Eigen::Vector3d::Ones());
  EXPECT_EQ(p.mean, Eigen::Vector3d::Zero());
  EXPECT_DOUBLE_EQ(p.longest, 1.0);
  EXPECT_DOUBLE_EQ(p.volume, 1.0);
  EXPECT_NEAR(p.stddev.x(), 0.5, 1e-15);
}

TEST(SpatialPropsTest, SinglePointIsDegenerate) {
  Eigen::MatrixX3d pts(1, 3);
  pts << 1, 2, 3;
  const SpatialProps p = ComputeSpatialProps(pts);
  EXPECT_EQ(p.extent, Eigen::Vector3d::Zero());
  EXPECT_EQ(p.stddev, Eigen::Vector3d::Zero());
  EXPECT_EQ(p.volume, 0.0);
  EXPECT_EQ(p.mean, Eigen::Vector3d(1, 2, 3));
}

TEST(SpatialPropsTest, EmptyInstance) {
  try {
    ComputeSpatialProps(Eigen::MatrixX3d(0, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInstance);
  }
}

TEST(SpatialPropsTest, MatchesTwoPassOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixX3d pts(100, 3);
  for (int i = 0; i < 100; ++i) pts.row(i) << n(rng), 2 * n(rng) + 1, n(rng);
  const SpatialProps p = ComputeSpatialProps(pts);
  for (int a = 0; a < 3; ++a) {
    double lo = pts(0, a), hi = pts(0, a), sum = 0.0;
    for (int i = 0; i < 100; ++i) {
      lo = std::min(lo, pts(i, a));
      hi = std::max(hi, pts(i, a));
      sum += pts(i, a);
    }
    const double mean = sum / 100;
    double ss = 0.0;
    for (int i = 0; i < 100; ++i) ss += (pts(i, a) - mean) * (pts(i, a) - mean);
    EXPECT_NEAR(p.extent[a], hi - lo, 1e-9);
    EXPECT_NEAR(p.mean[a], mean, 1e-9);
    EXPECT_NEAR(p.stddev[a], std::sqrt(ss / 100), 1e-9);
  }
  EXPECT_NEAR(p.volume, p.extent.prod(), 1e-9);
  EXPECT_NEAR(p.longest, p.extent.maxCoeff(), 1e-15);
}

TEST(EdgeDescriptorTest, IdenticalInstances) {
  SpatialProps p;
  p.extent = {1, 2, 3};
  p.mean = {0.5, 0, 1};
  p.stddev = {0.1, 0.2, 0.3};
  p.longest = 3;
  p.volume = 6;
  const EdgeDescriptor d = ComputeEdgeDescriptor(p, p);
  EXPECT_EQ(d.mean_diff, Eigen::Vector3d::Zero());
  EXPECT_EQ(d.stddev_diff, Eigen::Vector3d::Zero());
  EXPECT_EQ(d.extent_diff, Eigen::Vector3d::Zero());
  EXPECT_EQ(d.log_longest_ratio, 0.0);
  EXPECT_EQ(d.volume_ratio, 1.0);
}

TEST(EdgeDescriptorTest, LongestRatioAndVolumeClamp) {
  SpatialProps a, b;
  a.longest = 2;
  a.volume = 0.5;
  b.longest = 1;
  b.volume = 0.0;
  const FeatureConfig config;
  const EdgeDescriptor d = ComputeEdgeDescriptor(a, b, config);
  EXPECT_DOUBLE_EQ(d.log_longest_ratio, std::log(2.0));
  EXPECT_DOUBLE_EQ(d.volume_ratio, 0.5 / config.volume_floor);
  EXPECT_TRUE(std::isfinite(d.volume_ratio));
}

// Straight-line evaluation of the point encoder, one point at a time.
Eigen::VectorXd ReferenceEncode(const Eigen::MatrixX3d& pts,
                                const WeightBundle& w) {
  const int layers = static_cast<int>(w.config().point_hidden.size()) + 1;
  Eigen::VectorXd best;
  for (int i = 0; i < pts.rows(); ++i) {
    Eigen::VectorXd h = pts.row(i).transpose();
    for (int l = 0; l < layers; ++l) {
      const std::string name = "point." + std::to_string(l);
      const Eigen::MatrixXd& m = w.Get(name + ".weight");
      const Eigen::MatrixXd& b = w.Get(name + ".bias");
      Eigen::VectorXd next(m.rows());
      for (int r = 0; r < m.rows(); ++r) {
        double s = b(r, 0);
        for (int c = 0; c < m.cols(); ++c) s += m(r, c) * h[c];
        next[r] = s > 0 ? s : 0;
      }
      h = next;
    }
    best = i == 0 ? h : best.cwiseMax(h);
  }
  return best;
}

TEST(EncodePointSetTest, MatchesReferenceAndIgnoresOrder) {
  std::mt19937_64 rng(9);
  const WeightBundle w = RandomWeights(SmallConfig(), 4);
  Eigen::MatrixX3d pts = testing::RandomMatrix(50, 3, rng);
  const Eigen::VectorXd enc = EncodePointSet(pts, w);
  EXPECT_LT((enc - ReferenceEncode(pts, w)).cwiseAbs().maxCoeff(), 1e-6);
  Eigen::MatrixX3d reversed = pts.colwise().reverse();
  EXPECT_EQ(EncodePointSet(reversed, w), enc);
}

TEST(EncodePointSetTest, SinglePoint) {
  std::mt19937_64 rng(10);
  const WeightBundle w = RandomWeights(SmallConfig(), 1);
  Eigen::MatrixX3d pts = testing::RandomMatrix(1, 3, rng);
  EXPECT_LT((EncodePointSet(pts, w) - ReferenceEncode(pts, w))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

SceneBundle RandomScene(int k, std::mt19937_64& rng) {
  SceneBundle b;
  const int per = 12;
  b.points = testing::RandomMatrix(k * per, 3, rng).cast<float>();
  b.masks.resize(k);
  for (int i = 0; i < k * per; ++i) b.masks[i / per].push_back(i);
  return b;
}

TEST(InitialEmbeddingsTest, ShapesForOneAndThreeInstances) {
  std::mt19937_64 rng(2);
  const WeightBundle w = RandomWeights(SmallConfig(), 3);
  const GraphState one = InitialEmbeddings(RandomScene(1, rng), w);
  EXPECT_EQ(one.nodes.rows(), 1);
  EXPECT_EQ(one.edges.rows(), 0);
  const GraphState three = InitialEmbeddings(RandomScene(3, rng), w);
  EXPECT_EQ(three.nodes.rows(), 3);
  EXPECT_EQ(three.edges.rows(), 6);
  EXPECT_EQ(three.dim(), 16);
}

TEST(InitialEmbeddingsTest, ZeroSpatialWeightsLeavePointEncoding) {
  std::mt19937_64 rng(3);
  WeightBundle w = RandomWeights(SmallConfig(), 5);
  w.Mutable("spatial.weight").setZero();
  w.Mutable("spatial.bias").setZero();
  const SceneBundle scene = RandomScene(3, rng);
  const GraphState s = InitialEmbeddings(scene, w);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s.nodes.row(i).transpose(),
              EncodePointSet(scene.instance_points(i), w));
  }
}

TEST(InitialEmbeddingsTest, EdgeRowsFollowPairOrder) {
  std::mt19937_64 rng(4);
  const WeightBundle w = RandomWeights(SmallConfig(), 6);
  const SceneBundle scene = RandomScene(4, rng);
  const GraphState s = InitialEmbeddings(scene, w, {}, 1);
  for (int e = 0; e < NumEdges(4); ++e) {
    const auto [i, j] = EdgePair(e, 4);
    const SpatialVector r =
        ComputeEdgeDescriptor(ComputeSpatialProps(scene.instance_points(i)),
                              ComputeSpatialProps(scene.instance_points(j)))
            .AsVector();
    const Eigen::VectorXd want =
        w.Get("edge_init.weight") * r + w.Get("edge_init.bias").col(0);
    EXPECT_LT((s.edges.row(e).transpose() - want).cwiseAbs().maxCoeff(),
              1e-12);
  }
  const GraphState threaded = InitialEmbeddings(scene, w, {}, 8);
  EXPECT_EQ(threaded.nodes, s.nodes);
  EXPECT_EQ(threaded.edges, s.edges);
}

TEST(InitialEmbeddingsTest, MisshapenWeightsAreRejected) {
  std::mt19937_64 rng(5);
  WeightBundle w = RandomWeights(SmallConfig(), 7);
  w.Set("point.0.weight", Eigen::MatrixXd::Zero(8, 4));
  try {
    InitialEmbeddings(RandomScene(2, rng), w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadWeights);
  }
}

}  // namespace
}  // namespace wssg
