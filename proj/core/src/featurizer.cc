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
#include <string>
#include <vector>

#include "linear.h"
#include "wssg/error.h"
#include "wssg/parallel.h"

namespace wssg {

SpatialVector SpatialProps::AsVector() const {
  SpatialVector v;
  v << extent, mean, stddev, longest, volume;
  return v;
}

SpatialVector EdgeDescriptor::AsVector() const {
  SpatialVector v;
  v << mean_diff, stddev_diff, extent_diff, log_longest_ratio, volume_ratio;
  return v;
}

SpatialProps ComputeSpatialProps(const Eigen::MatrixX3d& points) {
  if (points.rows() == 0) {
    throw Error(ErrorCode::kEmptyInstance, "instance has no points");
  }
  SpatialProps props;
  const Eigen::RowVector3d lo = points.colwise().minCoeff();
  const Eigen::RowVector3d hi = points.colwise().maxCoeff();
  props.extent = (hi - lo).transpose();
  props.mean = points.colwise().mean().transpose();
  const Eigen::MatrixX3d centered =
      points.rowwise() - props.mean.transpose();
  props.stddev =
      (centered.array().square().colwise().sum() / points.rows())
          .sqrt()
          .transpose();
  props.longest = props.extent.maxCoeff();
  props.volume = props.extent.prod();
  return props;
}

EdgeDescriptor ComputeEdgeDescriptor(const SpatialProps& subject,
                                     const SpatialProps& object,
                                     const FeatureConfig& config) {
  EdgeDescriptor d;
  d.mean_diff = subject.mean - object.mean;
  d.stddev_diff = subject.stddev - object.stddev;
  d.extent_diff = subject.extent - object.extent;
  d.log_longest_ratio =
      std::log(std::max(subject.longest, config.longest_floor) /
               std::max(object.longest, config.longest_floor));
  d.volume_ratio = std::max(subject.volume, config.volume_floor) /
                   std::max(object.volume, config.volume_floor);
  return d;
}

Eigen::VectorXd EncodePointSet(const Eigen::MatrixX3d& points,
                               const WeightBundle& weights) {
  if (points.rows() == 0) {
    throw Error(ErrorCode::kEmptyInstance, "instance has no points");
  }
  const int num_layers =
      static_cast<int>(weights.config().point_hidden.size()) + 1;
  std::vector<std::string> names;
  Eigen::Index in = 3;
  for (int l = 0; l < num_layers; ++l) {
    names.push_back("point." + std::to_string(l));
    if (weights.Get(names.back() + ".weight").cols() != in) {
      throw Error(ErrorCode::kBadWeights, "shape mismatch at " + names.back());
    }
    in = weights.Get(names.back() + ".weight").rows();
  }
  // One point at a time: a row's value never depends on its position.
  Eigen::VectorXd pooled;
  for (Eigen::Index p = 0; p < points.rows(); ++p) {
    Eigen::VectorXd h = points.row(p).transpose();
    for (const std::string& name : names) {
      h = internal::AffineVec(h, weights, name).cwiseMax(0.0);
    }
    pooled = p == 0 ? h : pooled.cwiseMax(h).eval();
  }
  return pooled;
}

GraphState InitialEmbeddings(const SceneBundle& scene,
                             const WeightBundle& weights,
                             const FeatureConfig& config, int threads) {
  weights.Validate();
  const int k = scene.num_instances();
  const int d = weights.config().dim;
  GraphState state;
  state.nodes.resize(k, d);
  state.edges.resize(NumEdges(k), d);

  std::vector<SpatialProps> props(static_cast<size_t>(k));
  ParallelFor(k, threads, [&](int i) {
    const Eigen::MatrixX3d pts = scene.instance_points(i);
    props[i] = ComputeSpatialProps(pts);
    state.nodes.row(i) =
        (EncodePointSet(pts, weights) +
         internal::AffineVec(props[i].AsVector(), weights, "spatial"))
            .transpose();
  });
  ParallelFor(NumEdges(k), threads, [&](int e) {
    const auto [i, j] = EdgePair(e, k);
    const SpatialVector r =
        ComputeEdgeDescriptor(props[i], props[j], config).AsVector();
    state.edges.row(e) =
        internal::AffineVec(r, weights, "edge_init").transpose();
  });
  return state;
}

}  // namespace wssg
