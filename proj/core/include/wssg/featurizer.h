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

#ifndef WSSG_FEATURIZER_H_
#define WSSG_FEATURIZER_H_

#include <Eigen/Core>

#include "wssg/config.h"
#include "wssg/graph.h"
#include "wssg/scene.h"
#include "wssg/weights.h"

namespace wssg {

using SpatialVector = Eigen::Matrix<double, 11, 1>;

// Axis-aligned box statistics of one instance point set.
struct SpatialProps {
  Eigen::Vector3d extent = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d stddev = Eigen::Vector3d::Zero();  // population
  double longest = 0.0;
  double volume = 0.0;

  // [extent, mean, stddev, longest, volume]
  SpatialVector AsVector() const;
};

// Difference of subject and object box statistics.
struct EdgeDescriptor {
  Eigen::Vector3d mean_diff = Eigen::Vector3d::Zero();
  Eigen::Vector3d stddev_diff = Eigen::Vector3d::Zero();
  Eigen::Vector3d extent_diff = Eigen::Vector3d::Zero();
  double log_longest_ratio = 0.0;
  double volume_ratio = 1.0;

  SpatialVector AsVector() const;
};

// Throws kEmptyInstance for an empty point set.
SpatialProps ComputeSpatialProps(const Eigen::MatrixX3d& points);

EdgeDescriptor ComputeEdgeDescriptor(const SpatialProps& subject,
                                     const SpatialProps& object,
                                     const FeatureConfig& config = {});

// Shared per-point affine + max(0, .) stack followed by a coordinate-wise max
// over points. Invariant to point order.
Eigen::VectorXd EncodePointSet(const Eigen::MatrixX3d& points,
                               const WeightBundle& weights);

// Node rows: point encoding plus projected spatial properties. Edge rows:
// projected edge descriptors for every ordered pair.
GraphState InitialEmbeddings(const SceneBundle& scene,
                             const WeightBundle& weights,
                             const FeatureConfig& config = {},
                             int threads = 1);

}  // namespace wssg

#endif  // WSSG_FEATURIZER_H_
