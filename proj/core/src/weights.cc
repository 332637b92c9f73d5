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

#include "wssg/weights.h"

#include <cmath>
#include <random>

#include "wssg/error.h"

namespace wssg {
namespace {

constexpr int kSpatialWidth = 11;

void AddLinear(std::map<std::string, Shape>& shapes, const std::string& name,
               int out, int in) {
  shapes[name + ".weight"] = {out, in};
  shapes[name + ".bias"] = {out, 1};
}

}  // namespace

std::string LayerWeightName(int layer, const std::string& leaf) {
  return "layer" + std::to_string(layer) + "." + leaf;
}

std::map<std::string, Shape> ExpectedWeightShapes(const ModelConfig& config) {
  if (config.dim <= 0 || config.heads <= 0 || config.dim % config.heads != 0) {
    throw Error(ErrorCode::kBadWeights, "heads must divide the feature width");
  }
  if (config.layers < 0 || config.num_objects <= 0 ||
      config.num_predicates <= 0 || config.edge_hidden <= 0) {
    throw Error(ErrorCode::kBadWeights, "invalid model configuration");
  }
  std::map<std::string, Shape> shapes;
  const int d = config.dim;
  const int dk = config.head_dim();

  int in = 3;
  for (size_t l = 0; l <= config.point_hidden.size(); ++l) {
    const int out =
        l < config.point_hidden.size() ? config.point_hidden[l] : d;
    AddLinear(shapes, "point." + std::to_string(l), out, in);
    in = out;
  }
  AddLinear(shapes, "spatial", d, kSpatialWidth);
  AddLinear(shapes, "edge_init", d, kSpatialWidth);
  for (int n = 0; n < config.layers; ++n) {
    for (const char* leaf : {"attn_q", "attn_k", "attn_v", "fan_q", "fan_e",
                             "fan_r"}) {
      AddLinear(shapes, LayerWeightName(n, leaf), d, d);
    }
    AddLinear(shapes, LayerWeightName(n, "fan_a"), dk, 2 * dk);
    AddLinear(shapes, LayerWeightName(n, "node_update"), d, 2 * d);
    AddLinear(shapes, LayerWeightName(n, "edge_update"), d, 3 * d);
  }
  AddLinear(shapes, "head.node", config.num_objects, d);
  AddLinear(shapes, "head.edge0", config.edge_hidden, d);
  AddLinear(shapes, "head.edge1", config.num_edge_classes(),
            config.edge_hidden);
  return shapes;
}

void WeightBundle::Set(const std::string& name, Eigen::MatrixXd value) {
  tensors_[name] = std::move(value);
}

const Eigen::MatrixXd& WeightBundle::Get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw Error(ErrorCode::kBadWeights, "missing weight '" + name + "'");
  }
  return it->second;
}

Eigen::MatrixXd& WeightBundle::Mutable(const std::string& name) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw Error(ErrorCode::kBadWeights, "missing weight '" + name + "'");
  }
  return it->second;
}

void WeightBundle::Validate() const {
  const auto expected = ExpectedWeightShapes(config_);
  for (const auto& [name, shape] : expected) {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) {
      throw Error(ErrorCode::kBadWeights, "missing weight '" + name + "'");
    }
    if (it->second.rows() != shape.rows || it->second.cols() != shape.cols) {
      throw Error(ErrorCode::kBadWeights,
                  "weight '" + name + "' has shape " +
                      std::to_string(it->second.rows()) + "x" +
                      std::to_string(it->second.cols()) + ", expected " +
                      std::to_string(shape.rows) + "x" +
                      std::to_string(shape.cols));
    }
  }
  for (const auto& [name, value] : tensors_) {
    if (!expected.count(name)) {
      throw Error(ErrorCode::kBadWeights, "unknown weight '" + name + "'");
    }
  }
}

bool WeightBundle::operator==(const WeightBundle& other) const {
  const ModelConfig& a = config_;
  const ModelConfig& b = other.config_;
  if (a.dim != b.dim || a.heads != b.heads || a.layers != b.layers ||
      a.point_hidden != b.point_hidden || a.edge_hidden != b.edge_hidden ||
      a.num_objects != b.num_objects ||
      a.num_predicates != b.num_predicates ||
      a.attention_residual != b.attention_residual ||
      tensors_.size() != other.tensors_.size()) {
    return false;
  }
  for (const auto& [name, value] : tensors_) {
    auto it = other.tensors_.find(name);
    if (it == other.tensors_.end() || it->second.rows() != value.rows() ||
        it->second.cols() != value.cols() || it->second != value) {
      return false;
    }
  }
  return true;
}

WeightBundle RandomWeights(const ModelConfig& config, std::uint64_t seed) {
  WeightBundle bundle(config);
  std::mt19937_64 rng(seed);
  for (const auto& [name, shape] : ExpectedWeightShapes(config)) {
    Eigen::MatrixXd value = Eigen::MatrixXd::Zero(shape.rows, shape.cols);
    if (name.ends_with(".weight")) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(shape.cols));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index r = 0; r < value.rows(); ++r) {
        for (Eigen::Index c = 0; c < value.cols(); ++c) {
          value(r, c) = static_cast<float>(dist(rng));
        }
      }
    }
    bundle.Set(name, std::move(value));
  }
  return bundle;
}

WeightBundle ZeroWeights(const ModelConfig& config) {
  WeightBundle bundle(config);
  for (const auto& [name, shape] : ExpectedWeightShapes(config)) {
    bundle.Set(name, Eigen::MatrixXd::Zero(shape.rows, shape.cols));
  }
  return bundle;
}

}  // namespace wssg
