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

#include "wssg/pseudolabel.h"

#include <cmath>
#include <limits>

#include "wssg/error.h"
#include "wssg/hungarian.h"

namespace wssg {

std::string_view MatchMethodName(MatchMethod method) {
  return method == MatchMethod::kHungarian ? "hungarian" : "direct";
}

MatchMethod ParseMatchMethod(std::string_view name) {
  if (name == "hungarian") return MatchMethod::kHungarian;
  if (name == "direct") return MatchMethod::kDirect;
  throw Error(ErrorCode::kBadFormat,
              "unknown match method '" + std::string(name) + "'");
}

Eigen::VectorXd InstanceImageEmbedding(const ViewSelection& selection,
                                       const std::vector<CameraView>& views,
                                       int instance,
                                       const EmbeddingTable& images) {
  if (selection.views.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty view selection");
  }
  const bool crops = images.note() != kFrameNote;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(images.dim());
  for (const ViewChoice& choice : selection.views) {
    const std::string& image_id = views.at(choice.view_id).image_id;
    sum += images.Get(crops ? CropToken(image_id, instance) : image_id);
  }
  return Normalized(sum / static_cast<double>(selection.views.size()));
}

Eigen::VectorXd SceneFallbackEmbedding(const std::vector<CameraView>& views,
                                       const EmbeddingTable& images) {
  if (views.empty()) {
    throw Error(ErrorCode::kMissingEmbedding, "scene has no views");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(images.dim());
  for (const CameraView& view : views) sum += images.Get(view.image_id);
  return Normalized(sum / static_cast<double>(views.size()));
}

Eigen::MatrixXd CosineSimilarityMatrix(
    const std::vector<Eigen::VectorXd>& texts,
    const std::vector<Eigen::VectorXd>& visuals) {
  Eigen::MatrixXd s(static_cast<Eigen::Index>(texts.size()),
                    static_cast<Eigen::Index>(visuals.size()));
  std::vector<Eigen::VectorXd> unit_visuals;
  unit_visuals.reserve(visuals.size());
  for (const auto& f : visuals) unit_visuals.push_back(Normalized(f));
  for (size_t c = 0; c < texts.size(); ++c) {
    const Eigen::VectorXd t = Normalized(texts[c]);
    for (size_t k = 0; k < visuals.size(); ++k) {
      if (t.size() != unit_visuals[k].size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "text and image embeddings differ in width");
      }
      s(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) =
          t.dot(unit_visuals[k]);
    }
  }
  return s;
}

std::vector<NodePseudoLabel> HybridMatch(const Eigen::MatrixXd& similarity) {
  const int num_categories = static_cast<int>(similarity.rows());
  const int num_instances = static_cast<int>(similarity.cols());
  if (num_categories < 1 || num_instances < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "hybrid matching needs at least one category and instance");
  }
  std::vector<NodePseudoLabel> labels(static_cast<size_t>(num_instances));
  std::vector<bool> matched(static_cast<size_t>(num_instances), false);
  const std::vector<int> assignment = MaxWeightAssignment(similarity);
  for (int c = 0; c < num_categories; ++c) {
    const int k = assignment[c];
    if (k < 0) continue;
    labels[k] = {c, MatchMethod::kHungarian, similarity(c, k)};
    matched[k] = true;
  }
  for (int k = 0; k < num_instances; ++k) {
    if (matched[k]) continue;
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < similarity.rows(); ++c) {
      if (similarity(c, k) > similarity(best, k)) best = c;
    }
    labels[k] = {static_cast<int>(best), MatchMethod::kDirect,
                 similarity(best, k)};
  }
  return labels;
}

std::string PromptTriplet(const std::string& subject,
                          const std::string& predicate,
                          const std::string& object,
                          const PromptConfig& config) {
  if (subject.empty() || predicate.empty() || object.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty triplet name");
  }
  if (config.positional.count(predicate)) {
    return "there is a " + subject + " on the " + predicate + " of " + object;
  }
  return "there is a " + subject + " " + predicate + " " + object;
}

std::string TripletToken(const TripletName& triplet) {
  return triplet.subject + "|" + triplet.predicate + "|" + triplet.object;
}

std::vector<std::vector<int>> MaskFilter(
    const std::vector<int>& node_labels,
    const std::vector<ResolvedTriplet>& triplets) {
  const int k = static_cast<int>(node_labels.size());
  std::vector<std::vector<int>> candidates(static_cast<size_t>(NumEdges(k)));
  for (int e = 0; e < NumEdges(k); ++e) {
    const auto [i, j] = EdgePair(e, k);
    for (size_t t = 0; t < triplets.size(); ++t) {
      if (triplets[t].id.subject == node_labels[i] &&
          triplets[t].id.object == node_labels[j]) {
        candidates[e].push_back(static_cast<int>(t));
      }
    }
  }
  return candidates;
}

std::vector<std::vector<int>> AllCandidates(
    int num_nodes, const std::vector<ResolvedTriplet>& triplets) {
  std::vector<int> all(triplets.size());
  for (size_t t = 0; t < triplets.size(); ++t) all[t] = static_cast<int>(t);
  return std::vector<std::vector<int>>(
      static_cast<size_t>(NumEdges(num_nodes)), all);
}

std::vector<Eigen::VectorXd> LookupTripletEmbeddings(
    const EmbeddingTable& triplet_texts,
    const std::vector<ResolvedTriplet>& triplets, const Vocabulary& objects,
    const PredicateVocabulary& predicates) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(triplets.size());
  for (const ResolvedTriplet& t : triplets) {
    out.push_back(triplet_texts.Get(TripletToken(
        {objects.name(t.id.subject), predicates.name(t.id.predicate),
         objects.name(t.id.object)})));
  }
  return out;
}

std::vector<EdgePseudoLabel> RelationPseudoLabels(
    const Eigen::MatrixXd& edge_embeddings,
    const std::vector<Eigen::VectorXd>& triplet_embeddings,
    const std::vector<ResolvedTriplet>& triplets,
    const std::vector<std::vector<int>>& candidates, int none_id) {
  if (candidates.size() != static_cast<size_t>(edge_embeddings.rows())) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate lists do not match the edge count");
  }
  std::vector<EdgePseudoLabel> labels(candidates.size());
  for (size_t e = 0; e < candidates.size(); ++e) {
    labels[e] = {none_id, 0.0, -1};
    if (candidates[e].empty()) continue;
    const Eigen::VectorXd edge =
        Normalized(edge_embeddings.row(static_cast<Eigen::Index>(e)));
    double best = -std::numeric_limits<double>::infinity();
    for (int t : candidates[e]) {
      const Eigen::VectorXd& text = triplet_embeddings.at(t);
      if (text.size() != edge.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "edge and triplet embeddings differ in width");
      }
      const double cosine = text.dot(edge) / text.norm();
      if (cosine > best) {
        best = cosine;
        labels[e] = {triplets[t].id.predicate, cosine, t};
      }
    }
  }
  return labels;
}

NodeLabeling LabelNodes(
    const SceneBundle& scene,
    const std::vector<std::optional<ViewSelection>>& selections,
    const EmbeddingTable& images, const EmbeddingTable& object_texts,
    const TripletSet& triplets) {
  const int k = scene.num_instances();
  if (selections.size() != static_cast<size_t>(k)) {
    throw Error(ErrorCode::kInvalidArgument,
                "one view selection per instance expected");
  }
  NodeLabeling out;
  out.category_set = DeriveObjectVocab(triplets);
  out.used_fallback.assign(static_cast<size_t>(k), false);
  for (int i = 0; i < k; ++i) {
    if (selections[i]) {
      out.image_embeddings.push_back(
          InstanceImageEmbedding(*selections[i], scene.views, i, images));
    } else {
      out.image_embeddings.push_back(
          SceneFallbackEmbedding(scene.views, images));
      out.used_fallback[i] = true;
    }
  }
  std::vector<Eigen::VectorXd> texts;
  texts.reserve(out.category_set.size());
  for (const auto& name : out.category_set) {
    texts.push_back(object_texts.Get(name));
  }
  const Eigen::MatrixXd similarity =
      CosineSimilarityMatrix(texts, out.image_embeddings);
  out.labels = HybridMatch(similarity);
  for (NodePseudoLabel& label : out.labels) {
    label.category = scene.object_vocab.id(out.category_set[label.category]);
  }
  return out;
}

}  // namespace wssg
