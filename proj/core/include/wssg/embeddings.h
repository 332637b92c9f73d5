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

#ifndef WSSG_EMBEDDINGS_H_
#define WSSG_EMBEDDINGS_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace wssg {

enum class EmbeddingKind { kImage, kObjectText, kTripletText, kEdge };

std::string_view EmbeddingKindName(EmbeddingKind kind);
EmbeddingKind ParseEmbeddingKind(std::string_view name);

// Provenance of image embeddings, carried in the table note.
inline constexpr std::string_view kCropNote = "crops";
inline constexpr std::string_view kFrameNote = "frames";

// Token under which the exporter stores the crop of `instance` in a frame.
std::string CropToken(const std::string& image_id, int instance);

// Token of the ordered pair (i, j) in an edge embedding table.
std::string EdgeToken(int subject, int object);

// Named vectors of one width. Row order is insertion order and is preserved
// by the file format.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(EmbeddingKind kind, int dim, bool normalized = true,
                 std::string note = {})
      : kind_(kind), dim_(dim), normalized_(normalized), note_(std::move(note)) {}

  EmbeddingKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool normalized() const { return normalized_; }
  const std::string& note() const { return note_; }
  void set_note(std::string note) { note_ = std::move(note); }
  int size() const { return static_cast<int>(tokens_.size()); }

  // Adds or replaces a row. Throws kInvalidArgument on a width mismatch, or
  // when the table is normalized and the vector is not unit length (1e-5).
  void Add(const std::string& token, const Eigen::VectorXd& vector);
  bool Contains(const std::string& token) const;
  // Throws kMissingEmbedding.
  const Eigen::VectorXd& Get(const std::string& token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const Eigen::VectorXd& row(int index) const { return rows_.at(index); }

  bool operator==(const EmbeddingTable& other) const;

 private:
  EmbeddingKind kind_ = EmbeddingKind::kImage;
  int dim_ = 0;
  bool normalized_ = true;
  std::string note_;
  std::vector<std::string> tokens_;
  std::vector<Eigen::VectorXd> rows_;
  std::unordered_map<std::string, int> index_;
};

// Unit-length copy; throws kZeroEmbedding for a (near) zero vector.
Eigen::VectorXd Normalized(const Eigen::VectorXd& v);

}  // namespace wssg

#endif  // WSSG_EMBEDDINGS_H_
