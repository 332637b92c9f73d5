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

#ifndef WSSG_METRICS_H_
#define WSSG_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wssg/scene.h"

namespace wssg {

// Position of `label` when a probability row is sorted by value, higher
// first, equal values ordered by lower id. 0 is the top entry.
int LabelRank(const Eigen::Ref<const Eigen::RowVectorXd>& row, int label);

// Hit counts pooled over rows (and scenes). Per-class entries are
// (hits, rows).
struct TopKCounts {
  long long hits = 0;
  long long rows = 0;
  std::map<int, std::pair<long long, long long>> per_class;

  void Add(int label, bool hit);
  void Merge(const TopKCounts& other);
  // Both throw kEmptyEval when no row was counted.
  double accuracy() const;
  double mean_class_accuracy() const;
  std::map<int, double> class_accuracy() const;
};

// A@k over the rows of `probs`; mA@k follows from the per-class counts.
TopKCounts TopKAccuracy(const Eigen::MatrixXd& probs,
                        const std::vector<int>& labels, int k);

enum class GraphConstraint { kConstrained, kUnconstrained };

struct RankedTriplet {
  int edge = 0;
  int subject_node = 0;
  int object_node = 0;
  TripletId id;
  double score = 0.0;

  bool operator==(const RankedTriplet&) const = default;
};

// Strict ranking order: score descending, then edge, predicate, subject and
// object ids ascending.
bool RanksBefore(const RankedTriplet& a, const RankedTriplet& b);

// Scores (n_i[s] * e_ij[p]) * n_j[o] over non-None predicates. Constrained
// mode fixes s and o to the node argmax and p to the best predicate of each
// pair. `limit` > 0 returns only the first `limit` entries (exactly the
// prefix of the full ranking); 0 returns everything.
std::vector<RankedTriplet> TripletRank(const Eigen::MatrixXd& node_probs,
                                       const Eigen::MatrixXd& edge_probs,
                                       GraphConstraint mode, int limit = 0);

// Throws kInvalidArgument unless the rows are non-negative, sum to 1 within
// 1e-5 and the edge rows cover all ordered pairs.
void CheckPredictions(const Eigen::MatrixXd& node_probs,
                      const Eigen::MatrixXd& edge_probs);

struct GtRelation {
  int subject_node = 0;
  int object_node = 0;
  int predicate = 0;
};

// Real (non-None) relations of a ground-truth graph, ordered by pair.
std::vector<GtRelation> GtRelations(const SceneGraphGT& gt, int none_id);

struct RecallCounts {
  long long hits = 0;
  long long total = 0;
  std::map<int, std::pair<long long, long long>> per_predicate;

  void Merge(const RecallCounts& other);
  double recall() const;       // throws kEmptyEval
  double mean_recall() const;  // throws kEmptyEval
};

// A ground-truth relation is recalled when its pair, predicate and both
// ground-truth categories appear among the first k ranked entries.
RecallCounts RecallAtK(const std::vector<RankedTriplet>& ranked,
                       const std::vector<int>& node_labels,
                       const std::vector<GtRelation>& relations, int k);

// One-hot rows of the ground-truth categories (PredCls input).
Eigen::MatrixXd OneHotNodes(const std::vector<int>& labels,
                            int num_classes);

struct PredicateSplit {
  std::vector<int> head;
  std::vector<int> body;
  std::vector<int> tail;
};

// Resolves split names against the predicate vocabulary. Names absent from
// the vocabulary are skipped; overlapping groups raise kInvalidArgument.
PredicateSplit ResolveSplit(const std::vector<std::string>& head,
                            const std::vector<std::string>& body,
                            const std::vector<std::string>& tail,
                            const PredicateVocabulary& predicates);

// The head/body/tail grouping shipped for the 3DSSG predicate vocabulary.
struct NamedSplit {
  std::vector<std::string> head;
  std::vector<std::string> body;
  std::vector<std::string> tail;
};
const NamedSplit& Default3dssgSplit();

struct GroupScores {
  std::optional<double> head;
  std::optional<double> body;
  std::optional<double> tail;
};

// Unweighted group means of per-class values. Empty groups stay absent.
// Throws kInvalidArgument when a scored class falls outside the split.
GroupScores PredicateGroupReport(const std::map<int, double>& per_class,
                                 const PredicateSplit& split);

struct ScenePredictions {
  Eigen::MatrixXd node_probs;
  Eigen::MatrixXd edge_probs;
  SceneGraphGT gt;
};

// Ordered metric name -> value. Names follow "<block>.<metric>@<k>", e.g.
// "object.A@1", "sgcls.ng-R@50", "group.tail.mA@3".
struct MetricReport {
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> absent;

  std::optional<double> Find(const std::string& name) const;
  bool operator==(const MetricReport&) const = default;
};

// Pools counts across scenes in the order they are added.
class MetricAccumulator {
 public:
  MetricAccumulator(int num_objects, const PredicateVocabulary& predicates,
                    std::optional<PredicateSplit> split = std::nullopt);

  void AddScene(const ScenePredictions& scene);
  MetricReport Finish() const;

 private:
  int num_objects_;
  int num_predicates_;
  std::optional<PredicateSplit> split_;
  std::map<int, TopKCounts> object_;
  std::map<int, TopKCounts> predicate_;
  std::map<int, TopKCounts> triplet_;
  std::map<std::string, RecallCounts> recall_;
};

// Fixed-width text rendering of a report.
std::string FormatMetricTable(const MetricReport& report);

}  // namespace wssg

#endif  // WSSG_METRICS_H_
