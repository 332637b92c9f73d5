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

#include "wssg/embeddings.h"

#include <cmath>

#include "wssg/error.h"

namespace wssg {
namespace {

constexpr double kZeroNorm = 1e-12;
constexpr double kUnitTolerance = 1e-5;

}  // namespace

std::string_view EmbeddingKindName(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::kImage: return "image";
    case EmbeddingKind::kObjectText: return "object_text";
    case EmbeddingKind::kTripletText: return "triplet_text";
    case EmbeddingKind::kEdge: return "edge";
  }
  return "image";
}

EmbeddingKind ParseEmbeddingKind(std::string_view name) {
  for (EmbeddingKind kind :
       {EmbeddingKind::kImage, EmbeddingKind::kObjectText,
        EmbeddingKind::kTripletText, EmbeddingKind::kEdge}) {
    if (EmbeddingKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kBadFormat,
              "unknown embedding kind '" + std::string(name) + "'");
}

std::string CropToken(const std::string& image_id, int instance) {
  return image_id + "#" + std::to_string(instance);
}

std::string EdgeToken(int subject, int object) {
  return std::to_string(subject) + "->" + std::to_string(object);
}

void EmbeddingTable::Add(const std::string& token,
                         const Eigen::VectorXd& vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding '" + token + "' has width " +
                    std::to_string(vector.size()) + ", table expects " +
                    std::to_string(dim_));
  }
  if (normalized_ && std::abs(vector.norm() - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding '" + token + "' is not unit length");
  }
  auto it = index_.find(token);
  if (it != index_.end()) {
    rows_[it->second] = vector;
    return;
  }
  index_.emplace(token, size());
  tokens_.push_back(token);
  rows_.push_back(vector);
}

bool EmbeddingTable::Contains(const std::string& token) const {
  return index_.count(token) > 0;
}

const Eigen::VectorXd& EmbeddingTable::Get(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) {
    throw Error(ErrorCode::kMissingEmbedding,
                std::string(EmbeddingKindName(kind_)) + " table has no '" +
                    token + "'");
  }
  return rows_[it->second];
}

bool EmbeddingTable::operator==(const EmbeddingTable& other) const {
  return kind_ == other.kind_ && dim_ == other.dim_ &&
         normalized_ == other.normalized_ && note_ == other.note_ &&
         tokens_ == other.tokens_ && rows_ == other.rows_;
}

Eigen::VectorXd Normalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > kZeroNorm)) {
    throw Error(ErrorCode::kZeroEmbedding, "vector has zero norm");
  }
  return v / norm;
}

}  // namespace wssg
