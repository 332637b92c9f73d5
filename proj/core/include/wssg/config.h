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

#ifndef WSSG_CONFIG_H_
#define WSSG_CONFIG_H_

#include <vector>

#include "wssg/projection.h"

namespace wssg {

// Shapes of the scene graph network. Every weight shape is derived from
// these values, see ExpectedWeightShapes().
struct ModelConfig {
  int dim = 512;     // feature width D
  int heads = 8;     // attention heads h; must divide dim
  int layers = 2;    // message passing layers T
  std::vector<int> point_hidden = {64, 128};  // point encoder widths before D
  int edge_hidden = 256;                      // relation classifier width
  int num_objects = 160;                      // C_obj
  int num_predicates = 26;                    // C_rel, None excluded
  // Adds the attention input back onto its output. Off by default.
  bool attention_residual = false;

  int head_dim() const { return dim / heads; }
  int num_edge_classes() const { return num_predicates + 1; }
};

struct LossConfig {
  double temperature = 0.1;      // tau of the alignment loss
  double alignment_weight = 10;  // alpha in the total loss
};

struct FeatureConfig {
  double longest_floor = 1e-6;  // clamp before log ratio
  double volume_floor = 1e-6;   // clamp before volume ratio
};

struct EngineConfig {
  ModelConfig model;
  LossConfig loss;
  FeatureConfig features;
  ProjectionConfig projection;
};

inline EngineConfig DefaultConfig() { return EngineConfig{}; }

}  // namespace wssg

#endif  // WSSG_CONFIG_H_
