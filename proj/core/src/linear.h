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

#ifndef WSSG_SRC_LINEAR_H_
#define WSSG_SRC_LINEAR_H_

#include <string>

#include <Eigen/Core>

#include "wssg/weights.h"

namespace wssg::internal {

// rows * W^T + b for the record pair name.weight / name.bias.
inline Eigen::MatrixXd Affine(const Eigen::MatrixXd& rows,
                              const WeightBundle& weights,
                              const std::string& name) {
  const Eigen::MatrixXd& w = weights.Get(name + ".weight");
  const Eigen::MatrixXd& b = weights.Get(name + ".bias");
  Eigen::MatrixXd out = rows * w.transpose();
  out.rowwise() += b.col(0).transpose();
  return out;
}

inline Eigen::VectorXd AffineVec(const Eigen::VectorXd& x,
                                 const WeightBundle& weights,
                                 const std::string& name) {
  return weights.Get(name + ".weight") * x +
         weights.Get(name + ".bias").col(0);
}

template <typename Derived>
void ReluInPlace(Eigen::MatrixBase<Derived>& m) {
  m = m.cwiseMax(0.0);
}

}  // namespace wssg::internal

#endif  // WSSG_SRC_LINEAR_H_
