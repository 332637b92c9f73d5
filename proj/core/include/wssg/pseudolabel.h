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

#ifndef WSSG_PSEUDOLABEL_H_
#define WSSG_PSEUDOLABEL_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wssg/embeddings.h"
#include "wssg/projection.h"
#include "wssg/scene.h"

namespace wssg {

enum class MatchMethod { kHungarian, kDirect };

std::string_view MatchMethodName(MatchMethod method);
MatchMethod ParseMatchMethod(std::string_view name);

struct NodePseudoLabel {
  int category = 0;
  MatchMethod method = MatchMethod::kHungarian;
  double score = 0.0;  // cosine similarity of the chosen category

  bool operator==(const NodePseudoLabel&) const = default;
};

struct EdgePseudoLabel {
  int predicate = 0;    // None id when no candidate survived
  double score = 0.0;   // cosine of the winning triplet, 0 for None
  int triplet = -1;     // index into the resolved triplet list, -1 for None

  bool operator==(const EdgePseudoLabel&) const = default;
};

// Node labels are object vocabulary ids; edge labels are indexed like
// GraphState edge rows.
struct PseudoLabelAssignment {
  std::vector<NodePseudoLabel> nodes;
  std::vector<EdgePseudoLabel> edges;
  std::string edge_source;  // which edge embeddings fed the relation labels

  bool operator==(const PseudoLabelAssignment&) const = default;
};

// Mean of the selected views' embeddings, renormalized. The table note picks
// crop tokens (CropToken) or whole-frame tokens (image_id).
Eigen::VectorXd InstanceImageEmbedding(const ViewSelection& selection,
                                       const std::vector<CameraView>& views,
                                       int instance,
                                       const EmbeddingTable& images);

// Unweighted mean of all whole-frame embeddings of the scene; used for
// instances no view sees.
Eigen::VectorXd SceneFallbackEmbedding(const std::vector<CameraView>& views,
                                       const EmbeddingTable& images);

// C x K cosine similarities between category texts and instance images.
Eigen::MatrixXd CosineSimilarityMatrix(
    const std::vector<Eigen::VectorXd>& texts,
    const std::vector<Eigen::VectorXd>& visuals);

// Hungarian one-to-one matching, then column argmax for instances left
// unmatched when there are more instances than categories. Categories are
// row indices of `similarity`.
std::vector<NodePseudoLabel> HybridMatch(const Eigen::MatrixXd& similarity);

struct PromptConfig {
  std::set<std::string> positional = {"left", "right", "front", "behind"};
};

std::string PromptTriplet(const std::string& subject,
                          const std::string& predicate,
                          const std::string& object,
                          const PromptConfig& config = {});

// Key of a triplet text embedding.
std::string TripletToken(const TripletName& triplet);

// For every edge (EdgePair order), indices into `triplets` whose subject and
// object categories match the endpoint labels.
std::vector<std::vector<int>> MaskFilter(
    const std::vector<int>& node_labels,
    const std::vector<ResolvedTriplet>& triplets);

// Every triplet is a candidate for every edge; the no-filter ablation.
std::vector<std::vector<int>> AllCandidates(
    int num_nodes, const std::vector<ResolvedTriplet>& triplets);

// Text embeddings aligned with `triplets`; throws kMissingEmbedding.
std::vector<Eigen::VectorXd> LookupTripletEmbeddings(
    const EmbeddingTable& triplet_texts,
    const std::vector<ResolvedTriplet>& triplets, const Vocabulary& objects,
    const PredicateVocabulary& predicates);

// Argmax-cosine candidate per edge, None for edges without candidates.
std::vector<EdgePseudoLabel> RelationPseudoLabels(
    const Eigen::MatrixXd& edge_embeddings,
    const std::vector<Eigen::VectorXd>& triplet_embeddings,
    const std::vector<ResolvedTriplet>& triplets,
    const std::vector<std::vector<int>>& candidates, int none_id);

struct NodeLabeling {
  std::vector<NodePseudoLabel> labels;       // object vocabulary ids
  std::vector<Eigen::VectorXd> image_embeddings;  // per instance, unit
  std::vector<bool> used_fallback;
  std::vector<std::string> category_set;     // derived from the triplet set
};

// Projection selections, pooled image embeddings and hybrid matching against
// the categories named by the triplet set.
NodeLabeling LabelNodes(
    const SceneBundle& scene,
    const std::vector<std::optional<ViewSelection>>& selections,
    const EmbeddingTable& images, const EmbeddingTable& object_texts,
    const TripletSet& triplets);

}  // namespace wssg

#endif  // WSSG_PSEUDOLABEL_H_
