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

#ifndef WSSG_GRAPH_H_
#define WSSG_GRAPH_H_

#include <Eigen/Core>

#include "wssg/scene.h"

namespace wssg {

// Node and edge embeddings of a complete directed graph. Edge row e holds the
// pair EdgePair(e, num_nodes).
struct GraphState {
  Eigen::MatrixXd nodes;  // K x D
  Eigen::MatrixXd edges;  // K(K-1) x D
  int layer = 0;

  int num_nodes() const { return static_cast<int>(nodes.rows()); }
  int dim() const { return static_cast<int>(nodes.cols()); }
};

}  // namespace wssg

#endif  // WSSG_GRAPH_H_
