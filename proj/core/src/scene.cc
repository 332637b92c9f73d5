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

#include "wssg/scene.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/LU>

#include "wssg/error.h"

namespace wssg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySupervision: return "EmptySupervision";
    case ErrorCode::kBadCamera: return "BadCamera";
    case ErrorCode::kNoVisibleView: return "NoVisibleView";
    case ErrorCode::kEmptyInstance: return "EmptyInstance";
    case ErrorCode::kBadWeights: return "BadWeights";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kZeroEmbedding: return "ZeroEmbedding";
    case ErrorCode::kBadTemperature: return "BadTemperature";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kEmptyEval: return "EmptyEval";
    case ErrorCode::kPlacementFailed: return "PlacementFailed";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Vocabulary::Vocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(names_[i], i).second) has_duplicates_ = true;
  }
}

int Vocabulary::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Vocabulary::id(const std::string& name) const {
  int found = find(name);
  if (found < 0) {
    throw Error(ErrorCode::kInvalidArgument, "unknown name '" + name + "'");
  }
  return found;
}

const std::string& PredicateVocabulary::name(int id) const {
  static const std::string kNone = kNoneName;
  if (id == none_id()) return kNone;
  return real_.name(id);
}

int PredicateVocabulary::find(const std::string& name) const {
  if (name == kNoneName) return none_id();
  return real_.find(name);
}

int PredicateVocabulary::id(const std::string& name) const {
  if (name == kNoneName) return none_id();
  return real_.id(name);
}

bool CameraView::operator==(const CameraView& other) const {
  return intrinsics == other.intrinsics && extrinsics == other.extrinsics &&
         depth.rows() == other.depth.rows() &&
         depth.cols() == other.depth.cols() && depth == other.depth &&
         image_id == other.image_id && width == other.width &&
         height == other.height;
}

Eigen::MatrixX3d SceneBundle::instance_points(int instance) const {
  const auto& mask = masks.at(instance);
  Eigen::MatrixX3d out(static_cast<Eigen::Index>(mask.size()), 3);
  for (size_t r = 0; r < mask.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        points.row(mask[r]).cast<double>();
  }
  return out;
}

bool SceneBundle::operator==(const SceneBundle& other) const {
  return points.rows() == other.points.rows() && points == other.points &&
         masks == other.masks && views == other.views &&
         object_vocab == other.object_vocab &&
         predicate_vocab == other.predicate_vocab;
}

void TripletSet::Add(const TripletName& triplet, int count) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "triplet count must be >= 1");
  }
  entries_[triplet] += count;
}

int SceneGraphGT::edge_label(int i, int j, int none_id) const {
  auto it = edge_labels.find({i, j});
  return it == edge_labels.end() ? none_id : it->second;
}

ValidationReport ValidateScene(const SceneBundle& bundle) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) {
    report.issues.push_back(msg);
  };
  const long long n = bundle.points.rows();

  if (!bundle.points.allFinite()) add("points not finite");

  std::vector<int> owner(static_cast<size_t>(n), -1);
  bool disjoint = true;
  for (int k = 0; k < bundle.num_instances(); ++k) {
    const auto& mask = bundle.masks[k];
    if (mask.empty()) add("mask " + std::to_string(k) + " is empty");
    for (int idx : mask) {
      if (idx < 0 || idx >= n) {
        add("mask " + std::to_string(k) + ": index out of range (" +
            std::to_string(idx) + ")");
        continue;
      }
      if (owner[idx] != -1 && disjoint) {
        add("masks not disjoint (point " + std::to_string(idx) +
            " in masks " + std::to_string(owner[idx]) + " and " +
            std::to_string(k) + ")");
        disjoint = false;
      }
      owner[idx] = k;
    }
  }

  if (bundle.object_vocab.has_duplicates()) {
    add("object vocabulary has duplicate names");
  }
  if (bundle.predicate_vocab.real().has_duplicates()) {
    add("predicate vocabulary has duplicate names");
  }
  if (bundle.predicate_vocab.real().find(PredicateVocabulary::kNoneName) >=
      0) {
    add("predicate vocabulary must not list the reserved None name");
  }

  for (size_t v = 0; v < bundle.views.size(); ++v) {
    const CameraView& view = bundle.views[v];
    const std::string tag = "view " + std::to_string(v) + ": ";
    if (view.intrinsics(2, 2) != 1.0) add(tag + "intrinsics[2][2] != 1");
    if (view.intrinsics(2, 0) != 0.0 || view.intrinsics(2, 1) != 0.0) {
      add(tag + "intrinsics last row must be [0 0 1]");
    }
    if (std::abs(view.intrinsics.determinant()) < 1e-12) {
      add(tag + "intrinsics singular");
    }
    if (view.width <= 0 || view.height <= 0) add(tag + "bad image size");
    if (view.depth.rows() != view.height || view.depth.cols() != view.width) {
      add(tag + "depth map dimensions do not match width/height");
    }
    if (!view.depth.allFinite() || (view.depth.array() < 0.0f).any()) {
      add(tag + "depth values must be finite and >= 0");
    }
    if (view.image_id.empty()) add(tag + "empty image id");
  }
  return report;
}

ValidationReport ValidateTriplets(const TripletSet& triplets,
                                  const Vocabulary& objects,
                                  const PredicateVocabulary& predicates) {
  ValidationReport report;
  for (const auto& [t, count] : triplets.entries()) {
    if (objects.find(t.subject) < 0) {
      report.issues.push_back("unknown subject '" + t.subject + "'");
    }
    if (objects.find(t.object) < 0) {
      report.issues.push_back("unknown object '" + t.object + "'");
    }
    int p = predicates.real().find(t.predicate);
    if (p < 0) {
      report.issues.push_back("unknown predicate '" + t.predicate + "'");
    }
    if (count < 1) report.issues.push_back("non-positive triplet count");
  }
  return report;
}

std::vector<std::string> DeriveObjectVocab(const TripletSet& triplets) {
  if (triplets.empty()) {
    throw Error(ErrorCode::kEmptySupervision, "triplet set is empty");
  }
  std::set<std::string> names;
  for (const auto& [t, count] : triplets.entries()) {
    names.insert(t.subject);
    names.insert(t.object);
  }
  return {names.begin(), names.end()};
}

std::vector<ResolvedTriplet> ResolveTriplets(
    const TripletSet& triplets, const Vocabulary& objects,
    const PredicateVocabulary& predicates) {
  std::vector<ResolvedTriplet> out;
  out.reserve(triplets.entries().size());
  for (const auto& [t, count] : triplets.entries()) {
    out.push_back({{objects.id(t.subject), predicates.real().id(t.predicate),
                    objects.id(t.object)},
                   count});
  }
  std::sort(out.begin(), out.end(),
            [](const ResolvedTriplet& a, const ResolvedTriplet& b) {
              return a.id < b.id;
            });
  return out;
}

TripletId TripletIndexer::at(long long index) const {
  TripletId t;
  t.object = static_cast<int>(index % num_objects_);
  index /= num_objects_;
  t.predicate = static_cast<int>(index % num_predicates_);
  t.subject = static_cast<int>(index / num_predicates_);
  return t;
}

std::vector<TripletId> EnumerateTripletVocab(
    const Vocabulary& objects, const PredicateVocabulary& predicates) {
  if (objects.empty() || predicates.num_real() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty vocabulary");
  }
  TripletIndexer indexer(objects.size(), predicates.num_real());
  std::vector<TripletId> out;
  out.reserve(static_cast<size_t>(indexer.size()));
  for (int s = 0; s < objects.size(); ++s) {
    for (int p = 0; p < predicates.num_real(); ++p) {
      for (int o = 0; o < objects.size(); ++o) out.push_back({s, p, o});
    }
  }
  return out;
}

std::pair<int, int> EdgePair(int edge, int num_nodes) {
  int i = edge / (num_nodes - 1);
  int r = edge % (num_nodes - 1);
  return {i, r < i ? r : r + 1};
}

}  // namespace wssg
