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

#ifndef WSSG_WEIGHTS_H_
#define WSSG_WEIGHTS_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "wssg/config.h"

namespace wssg {

struct Shape {
  int rows = 0;
  int cols = 0;
  bool operator==(const Shape&) const = default;
};

// Every tensor the network reads, keyed by record name. Linear maps are
// stored out x in, biases as out x 1.
std::map<std::string, Shape> ExpectedWeightShapes(const ModelConfig& config);

class WeightBundle {
 public:
  WeightBundle() = default;
  explicit WeightBundle(ModelConfig config) : config_(std::move(config)) {}

  const ModelConfig& config() const { return config_; }
  const std::map<std::string, Eigen::MatrixXd>& tensors() const {
    return tensors_;
  }

  void Set(const std::string& name, Eigen::MatrixXd value);
  // Throws kBadWeights for unknown names.
  const Eigen::MatrixXd& Get(const std::string& name) const;
  Eigen::MatrixXd& Mutable(const std::string& name);

  // Throws kBadWeights on missing, unknown or misshapen records.
  void Validate() const;

  bool operator==(const WeightBundle& other) const;

 private:
  ModelConfig config_;
  std::map<std::string, Eigen::MatrixXd> tensors_;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for linear maps, zero biases.
// Values are rounded to float so that the bundle survives a file round
// trip unchanged.
WeightBundle RandomWeights(const ModelConfig& config, std::uint64_t seed);

// All records present and zero.
WeightBundle ZeroWeights(const ModelConfig& config);

// Shorthand for the per-layer record names.
std::string LayerWeightName(int layer, const std::string& leaf);

}  // namespace wssg

#endif  // WSSG_WEIGHTS_H_
