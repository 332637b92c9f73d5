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

#ifndef WSSG_SCENE_H_
#define WSSG_SCENE_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace wssg {

// N x 3 world coordinates in meters, stored the way they are kept on disk.
using PointMatrix = Eigen::Matrix<float, Eigen::Dynamic, 3, Eigen::RowMajor>;
// H x W depth in meters; 0 marks an invalid sample.
using DepthMap =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// An ordered list of unique names. Construction sorts lexicographically so
// that ids are reproducible regardless of input order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  const std::string& name(int id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  // Returns -1 when the name is unknown.
  int find(const std::string& name) const;
  int id(const std::string& name) const;  // throws kInvalidArgument
  bool has_duplicates() const { return has_duplicates_; }

  bool operator==(const Vocabulary& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  bool has_duplicates_ = false;
};

// Predicate labels plus the reserved None class, which always takes the last
// id (== number of real predicates).
class PredicateVocabulary {
 public:
  static constexpr const char* kNoneName = "None";

  PredicateVocabulary() = default;
  explicit PredicateVocabulary(std::vector<std::string> names)
      : real_(std::move(names)) {}

  int num_real() const { return real_.size(); }
  int size_with_none() const { return real_.size() + 1; }
  int none_id() const { return real_.size(); }
  bool is_none(int id) const { return id == none_id(); }
  const Vocabulary& real() const { return real_; }
  const std::string& name(int id) const;
  int find(const std::string& name) const;
  int id(const std::string& name) const;

  bool operator==(const PredicateVocabulary& other) const {
    return real_ == other.real_;
  }

 private:
  Vocabulary real_;
};

struct CameraView {
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  // World to camera, homogeneous. Manifests may carry 3x4; the last row is
  // then [0 0 0 1].
  Eigen::Matrix4d extrinsics = Eigen::Matrix4d::Identity();
  DepthMap depth;
  std::string image_id;
  int width = 0;
  int height = 0;

  bool operator==(const CameraView& other) const;
};

struct SceneBundle {
  PointMatrix points;
  std::vector<std::vector<int>> masks;
  std::vector<CameraView> views;
  Vocabulary object_vocab;
  PredicateVocabulary predicate_vocab;

  int num_instances() const { return static_cast<int>(masks.size()); }
  // Gathers the points of one instance mask.
  Eigen::MatrixX3d instance_points(int instance) const;

  bool operator==(const SceneBundle& other) const;
};

struct TripletName {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const TripletName&) const = default;
};

// Triplet categories present in a scene with their occurrence counts. This
// is the only supervision the pseudo-labelers consume.
class TripletSet {
 public:
  void Add(const TripletName& triplet, int count = 1);
  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::map<TripletName, int>& entries() const { return entries_; }

  bool operator==(const TripletSet& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::map<TripletName, int> entries_;
};

struct TripletId {
  int subject = 0;
  int predicate = 0;
  int object = 0;

  auto operator<=>(const TripletId&) const = default;
};

struct ResolvedTriplet {
  TripletId id;
  int count = 0;
};

struct SceneGraphGT {
  std::vector<int> node_labels;
  // Missing pairs are None.
  std::map<std::pair<int, int>, int> edge_labels;

  int edge_label(int i, int j, int none_id) const;
  bool operator==(const SceneGraphGT&) const = default;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Reports every violated structural invariant. Never throws.
ValidationReport ValidateScene(const SceneBundle& bundle);

ValidationReport ValidateTriplets(const TripletSet& triplets,
                                  const Vocabulary& objects,
                                  const PredicateVocabulary& predicates);

// Sorted unique subjects and objects named by the triplet set.
std::vector<std::string> DeriveObjectVocab(const TripletSet& triplets);

// Maps names to vocabulary ids; unknown names raise kInvalidArgument.
std::vector<ResolvedTriplet> ResolveTriplets(
    const TripletSet& triplets, const Vocabulary& objects,
    const PredicateVocabulary& predicates);

// Dense index over subject x predicate x object, subject-major. The None
// predicate is not part of the enumeration.
class TripletIndexer {
 public:
  TripletIndexer(int num_objects, int num_predicates)
      : num_objects_(num_objects), num_predicates_(num_predicates) {}

  long long size() const {
    return static_cast<long long>(num_objects_) * num_predicates_ *
           num_objects_;
  }
  long long index(const TripletId& t) const {
    return (static_cast<long long>(t.subject) * num_predicates_ +
            t.predicate) *
               num_objects_ +
           t.object;
  }
  TripletId at(long long index) const;

 private:
  int num_objects_;
  int num_predicates_;
};

std::vector<TripletId> EnumerateTripletVocab(
    const Vocabulary& objects, const PredicateVocabulary& predicates);

// Ordered pairs (i, j), i != j, enumerated i-major. Shared by the featurizer,
// the network and the metrics so that edge rows line up everywhere.
inline int NumEdges(int num_nodes) { return num_nodes * (num_nodes - 1); }
inline int EdgeIndex(int i, int j, int num_nodes) {
  return i * (num_nodes - 1) + (j < i ? j : j - 1);
}
std::pair<int, int> EdgePair(int edge, int num_nodes);

}  // namespace wssg

#endif  // WSSG_SCENE_H_
