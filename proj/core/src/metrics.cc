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

#include "wssg/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "wssg/error.h"

namespace wssg {
namespace {

constexpr int kObjectKs[] = {1, 5, 10};
constexpr int kPredicateKs[] = {1, 3, 5};
constexpr int kTripletKs[] = {50, 100};
constexpr int kRecallKs[] = {20, 50, 100};

double Ratio(long long num, long long den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

double MeanOfRatios(
    const std::map<int, std::pair<long long, long long>>& per_class) {
  double sum = 0.0;
  int n = 0;
  for (const auto& [c, counts] : per_class) {
    if (counts.second == 0) continue;
    sum += Ratio(counts.first, counts.second);
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::kEmptyEval, "no ground-truth rows");
  return sum / n;
}

// Column order of a row: value descending, then id ascending.
std::vector<int> SortedColumns(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                               int count) {
  std::vector<int> order(static_cast<size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return row[a] > row[b]; });
  return order;
}

int ArgMax(const Eigen::Ref<const Eigen::RowVectorXd>& row, int count) {
  int best = 0;
  for (int c = 1; c < count; ++c) {
    if (row[c] > row[best]) best = c;
  }
  return best;
}

struct Worse {
  bool operator()(const RankedTriplet& a, const RankedTriplet& b) const {
    return RanksBefore(a, b);
  }
};

// Keeps the best `limit` candidates; the heap top is the worst kept entry.
class BoundedRanking {
 public:
  explicit BoundedRanking(int limit) : limit_(limit) {}

  // True when no candidate with this score from `edge` (or a later edge) can
  // still enter.
  bool Closed(double score, int edge) const {
    if (limit_ <= 0 || static_cast<int>(heap_.size()) < limit_) return false;
    const RankedTriplet& worst = heap_.top();
    return score < worst.score || (score == worst.score && edge > worst.edge);
  }

  void Offer(const RankedTriplet& t) {
    if (limit_ <= 0 || static_cast<int>(heap_.size()) < limit_) {
      heap_.push(t);
    } else if (RanksBefore(t, heap_.top())) {
      heap_.pop();
      heap_.push(t);
    }
  }

  std::vector<RankedTriplet> Sorted() {
    std::vector<RankedTriplet> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
      out.push_back(heap_.top());
      heap_.pop();
    }
    std::sort(out.begin(), out.end(), RanksBefore);
    return out;
  }

 private:
  int limit_;
  std::priority_queue<RankedTriplet, std::vector<RankedTriplet>, Worse> heap_;
};

}  // namespace

int LabelRank(const Eigen::Ref<const Eigen::RowVectorXd>& row, int label) {
  if (label < 0 || label >= row.size()) {
    throw Error(ErrorCode::kInvalidArgument, "label out of range");
  }
  const double p = row[label];
  int rank = 0;
  for (Eigen::Index c = 0; c < row.size(); ++c) {
    if (row[c] > p || (row[c] == p && c < label)) ++rank;
  }
  return rank;
}

void TopKCounts::Add(int label, bool hit) {
  ++rows;
  auto& counts = per_class[label];
  ++counts.second;
  if (hit) {
    ++hits;
    ++counts.first;
  }
}

void TopKCounts::Merge(const TopKCounts& other) {
  hits += other.hits;
  rows += other.rows;
  for (const auto& [c, counts] : other.per_class) {
    per_class[c].first += counts.first;
    per_class[c].second += counts.second;
  }
}

double TopKCounts::accuracy() const {
  if (rows == 0) throw Error(ErrorCode::kEmptyEval, "no ground-truth rows");
  return Ratio(hits, rows);
}

double TopKCounts::mean_class_accuracy() const {
  return MeanOfRatios(per_class);
}

std::map<int, double> TopKCounts::class_accuracy() const {
  std::map<int, double> out;
  for (const auto& [c, counts] : per_class) {
    if (counts.second > 0) out[c] = Ratio(counts.first, counts.second);
  }
  return out;
}

TopKCounts TopKAccuracy(const Eigen::MatrixXd& probs,
                        const std::vector<int>& labels, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (labels.size() != static_cast<size_t>(probs.rows())) {
    throw Error(ErrorCode::kInvalidArgument, "one label per row expected");
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptyEval, "no rows");
  TopKCounts counts;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    counts.Add(labels[r], LabelRank(probs.row(r), labels[r]) < k);
  }
  return counts;
}

bool RanksBefore(const RankedTriplet& a, const RankedTriplet& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.edge, a.id.predicate, a.id.subject, a.id.object) <
         std::tie(b.edge, b.id.predicate, b.id.subject, b.id.object);
}

void CheckPredictions(const Eigen::MatrixXd& node_probs,
                      const Eigen::MatrixXd& edge_probs) {
  const int k = static_cast<int>(node_probs.rows());
  if (edge_probs.rows() != NumEdges(k)) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge rows do not cover all ordered pairs");
  }
  if (node_probs.cols() < 1 || edge_probs.cols() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "too few probability columns");
  }
  for (const Eigen::MatrixXd* m : {&node_probs, &edge_probs}) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      if ((m->row(r).array() < 0.0).any() ||
          std::abs(m->row(r).sum() - 1.0) > 1e-5) {
        throw Error(ErrorCode::kInvalidArgument,
                    "probability row " + std::to_string(r) +
                        " is not a distribution");
      }
    }
  }
}

std::vector<RankedTriplet> TripletRank(const Eigen::MatrixXd& node_probs,
                                       const Eigen::MatrixXd& edge_probs,
                                       GraphConstraint mode, int limit) {
  CheckPredictions(node_probs, edge_probs);
  if (limit < 0) throw Error(ErrorCode::kInvalidArgument, "negative limit");
  const int k = static_cast<int>(node_probs.rows());
  const int num_obj = static_cast<int>(node_probs.cols());
  const int num_pred = static_cast<int>(edge_probs.cols()) - 1;
  BoundedRanking ranking(limit);

  if (mode == GraphConstraint::kConstrained) {
    std::vector<int> best(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) best[i] = ArgMax(node_probs.row(i), num_obj);
    for (int e = 0; e < NumEdges(k); ++e) {
      const auto [i, j] = EdgePair(e, k);
      const int p = ArgMax(edge_probs.row(e), num_pred);
      const double score =
          (node_probs(i, best[i]) * edge_probs(e, p)) * node_probs(j, best[j]);
      ranking.Offer({e, i, j, {best[i], p, best[j]}, score});
    }
    return ranking.Sorted();
  }

  std::vector<std::vector<int>> node_order(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    node_order[i] = SortedColumns(node_probs.row(i), num_obj);
  }
  // Factors are visited in descending order, and rounded products are
  // monotone in each factor, so a closed bound ends the loop.
  for (int e = 0; e < NumEdges(k); ++e) {
    const auto [i, j] = EdgePair(e, k);
    const std::vector<int> pred_order = SortedColumns(edge_probs.row(e), num_pred);
    const double max_obj = node_probs(j, node_order[j][0]);
    const double max_pred = edge_probs(e, pred_order[0]);
    for (int s : node_order[i]) {
      const double ns = node_probs(i, s);
      if (ranking.Closed((ns * max_pred) * max_obj, e)) break;
      for (int p : pred_order) {
        const double sp = ns * edge_probs(e, p);
        if (ranking.Closed(sp * max_obj, e)) break;
        for (int o : node_order[j]) {
          const double score = sp * node_probs(j, o);
          if (ranking.Closed(score, e)) break;
          ranking.Offer({e, i, j, {s, p, o}, score});
        }
      }
    }
  }
  return ranking.Sorted();
}

std::vector<GtRelation> GtRelations(const SceneGraphGT& gt, int none_id) {
  std::vector<GtRelation> out;
  for (const auto& [pair, predicate] : gt.edge_labels) {
    if (predicate == none_id) continue;
    out.push_back({pair.first, pair.second, predicate});
  }
  return out;
}

void RecallCounts::Merge(const RecallCounts& other) {
  hits += other.hits;
  total += other.total;
  for (const auto& [p, counts] : other.per_predicate) {
    per_predicate[p].first += counts.first;
    per_predicate[p].second += counts.second;
  }
}

double RecallCounts::recall() const {
  if (total == 0) throw Error(ErrorCode::kEmptyEval, "no gt relations");
  return Ratio(hits, total);
}

double RecallCounts::mean_recall() const { return MeanOfRatios(per_predicate); }

RecallCounts RecallAtK(const std::vector<RankedTriplet>& ranked,
                       const std::vector<int>& node_labels,
                       const std::vector<GtRelation>& relations, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (relations.empty()) {
    throw Error(ErrorCode::kEmptyEval, "ground truth has no relations");
  }
  const int num_nodes = static_cast<int>(node_labels.size());
  std::set<std::tuple<int, int, int, int>> top;
  const size_t n = std::min(ranked.size(), static_cast<size_t>(k));
  for (size_t r = 0; r < n; ++r) {
    const RankedTriplet& t = ranked[r];
    top.emplace(t.edge, t.id.subject, t.id.predicate, t.id.object);
  }
  RecallCounts counts;
  for (const GtRelation& rel : relations) {
    if (rel.subject_node < 0 || rel.subject_node >= num_nodes ||
        rel.object_node < 0 || rel.object_node >= num_nodes ||
        rel.subject_node == rel.object_node) {
      throw Error(ErrorCode::kInvalidArgument, "bad gt relation pair");
    }
    const int e = EdgeIndex(rel.subject_node, rel.object_node, num_nodes);
    const bool hit = top.count({e, node_labels[rel.subject_node], rel.predicate,
                                node_labels[rel.object_node]}) > 0;
    ++counts.total;
    auto& per = counts.per_predicate[rel.predicate];
    ++per.second;
    if (hit) {
      ++counts.hits;
      ++per.first;
    }
  }
  return counts;
}

Eigen::MatrixXd OneHotNodes(const std::vector<int>& labels,
                            int num_classes) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                            num_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label out of range");
    }
    out(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return out;
}

PredicateSplit ResolveSplit(const std::vector<std::string>& head,
                            const std::vector<std::string>& body,
                            const std::vector<std::string>& tail,
                            const PredicateVocabulary& predicates) {
  PredicateSplit split;
  std::set<int> seen;
  auto resolve = [&](const std::vector<std::string>& names,
                     std::vector<int>& out) {
    for (const std::string& name : names) {
      const int id = predicates.real().find(name);
      if (id < 0) continue;
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "predicate '" + name + "' is in two groups");
      }
      out.push_back(id);
    }
    std::sort(out.begin(), out.end());
  };
  resolve(head, split.head);
  resolve(body, split.body);
  resolve(tail, split.tail);
  return split;
}

const NamedSplit& Default3dssgSplit() {
  static const NamedSplit split{
      {"left", "right", "front", "behind", "close by", "same as",
       "attached to", "standing on"},
      {"bigger than", "smaller than", "higher than", "lower than", "lying on",
       "hanging on"},
      {"supported by", "inside", "same symmetry as", "connected to",
       "leaning against", "part of", "belonging to", "build in", "standing in",
       "cover", "lying in", "hanging in"}};
  return split;
}

GroupScores PredicateGroupReport(const std::map<int, double>& per_class,
                                 const PredicateSplit& split) {
  auto mean = [&](const std::vector<int>& group) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (int id : group) {
      auto it = per_class.find(id);
      if (it == per_class.end()) continue;
      sum += it->second;
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  for (const auto& [id, value] : per_class) {
    auto in = [id](const std::vector<int>& g) {
      return std::find(g.begin(), g.end(), id) != g.end();
    };
    if (!in(split.head) && !in(split.body) && !in(split.tail)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "predicate " + std::to_string(id) + " is outside the split");
    }
  }
  return {mean(split.head), mean(split.body), mean(split.tail)};
}

std::optional<double> MetricReport::Find(const std::string& name) const {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  return std::nullopt;
}

MetricAccumulator::MetricAccumulator(int num_objects,
                                     const PredicateVocabulary& predicates,
                                     std::optional<PredicateSplit> split)
    : num_objects_(num_objects),
      num_predicates_(predicates.num_real()),
      split_(std::move(split)) {
  if (num_objects_ < 1 || num_predicates_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "empty vocabulary");
  }
}

void MetricAccumulator::AddScene(const ScenePredictions& scene) {
  const int k = static_cast<int>(scene.node_probs.rows());
  if (scene.node_probs.cols() != num_objects_ ||
      scene.edge_probs.cols() != num_predicates_ + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction width does not match the vocabularies");
  }
  if (scene.gt.node_labels.size() != static_cast<size_t>(k)) {
    throw Error(ErrorCode::kInvalidArgument, "one gt label per node expected");
  }
  CheckPredictions(scene.node_probs, scene.edge_probs);
  if (k == 0) return;

  for (int kk : kObjectKs) {
    object_[kk].Merge(TopKAccuracy(scene.node_probs, scene.gt.node_labels, kk));
  }

  const int none_id = num_predicates_;
  const std::vector<GtRelation> relations = GtRelations(scene.gt, none_id);
  if (relations.empty()) return;

  const Eigen::Index m = static_cast<Eigen::Index>(relations.size());
  Eigen::MatrixXd rows(m, num_predicates_);
  std::vector<int> labels(relations.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const GtRelation& rel = relations[r];
    rows.row(r) = scene.edge_probs
                      .row(EdgeIndex(rel.subject_node, rel.object_node, k))
                      .head(num_predicates_);
    labels[r] = rel.predicate;
  }
  for (int kk : kPredicateKs) {
    predicate_[kk].Merge(TopKAccuracy(rows, labels, kk));
  }

  const int depth = *std::max_element(std::begin(kRecallKs),
                                      std::end(kRecallKs));
  const Eigen::MatrixXd one_hot = OneHotNodes(scene.gt.node_labels,
                                              num_objects_);
  const std::vector<RankedTriplet> sg_ng = TripletRank(
      scene.node_probs, scene.edge_probs, GraphConstraint::kUnconstrained,
      depth);

  // Triplet accuracy ranks every candidate of the scene; a gt triplet is a
  // hit when it appears within the first k entries.
  const TripletIndexer indexer(num_objects_, num_predicates_);
  for (int kk : kTripletKs) {
    std::set<std::tuple<int, int, int, int>> top;
    for (size_t r = 0; r < sg_ng.size() && r < static_cast<size_t>(kk); ++r) {
      const RankedTriplet& t = sg_ng[r];
      top.emplace(t.edge, t.id.subject, t.id.predicate, t.id.object);
    }
    for (const GtRelation& rel : relations) {
      const TripletId id{scene.gt.node_labels[rel.subject_node], rel.predicate,
                         scene.gt.node_labels[rel.object_node]};
      const int e = EdgeIndex(rel.subject_node, rel.object_node, k);
      triplet_[kk].Add(static_cast<int>(indexer.index(id)),
                       top.count({e, id.subject, id.predicate, id.object}) > 0);
    }
  }

  const std::pair<const char*, std::vector<RankedTriplet>> rankings[] = {
      {"sgcls.R", TripletRank(scene.node_probs, scene.edge_probs,
                              GraphConstraint::kConstrained, depth)},
      {"sgcls.ng-R", sg_ng},
      {"predcls.R", TripletRank(one_hot, scene.edge_probs,
                                GraphConstraint::kConstrained, depth)},
      {"predcls.ng-R", TripletRank(one_hot, scene.edge_probs,
                                   GraphConstraint::kUnconstrained, depth)},
  };
  for (const auto& [name, ranked] : rankings) {
    for (int kk : kRecallKs) {
      recall_[std::string(name) + "@" + std::to_string(kk)].Merge(
          RecallAtK(ranked, scene.gt.node_labels, relations, kk));
    }
  }
}

MetricReport MetricAccumulator::Finish() const {
  MetricReport report;
  auto put = [&](const std::string& name, auto&& compute) {
    try {
      report.values.emplace_back(name, compute());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyEval) throw;
      report.absent.push_back(name);
    }
  };
  auto counts = [](const std::map<int, TopKCounts>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? TopKCounts{} : it->second;
  };
  auto recall = [&](const std::string& key) {
    auto it = recall_.find(key);
    return it == recall_.end() ? RecallCounts{} : it->second;
  };

  for (int k : kObjectKs) {
    put("object.A@" + std::to_string(k),
        [&] { return counts(object_, k).accuracy(); });
  }
  for (int k : kPredicateKs) {
    put("predicate.A@" + std::to_string(k),
        [&] { return counts(predicate_, k).accuracy(); });
  }
  for (int k : kPredicateKs) {
    put("predicate.mA@" + std::to_string(k),
        [&] { return counts(predicate_, k).mean_class_accuracy(); });
  }
  for (int k : kTripletKs) {
    put("triplet.A@" + std::to_string(k),
        [&] { return counts(triplet_, k).accuracy(); });
  }
  for (int k : kTripletKs) {
    put("triplet.mA@" + std::to_string(k),
        [&] { return counts(triplet_, k).mean_class_accuracy(); });
  }
  for (const char* protocol : {"sgcls", "predcls"}) {
    const std::string p(protocol);
    for (int k : kRecallKs) {
      const std::string at = "@" + std::to_string(k);
      put(p + ".R" + at, [&] { return recall(p + ".R" + at).recall(); });
      put(p + ".ng-R" + at, [&] { return recall(p + ".ng-R" + at).recall(); });
      put(p + ".mR" + at,
          [&] { return recall(p + ".R" + at).mean_recall(); });
    }
  }
  if (split_) {
    for (int k : kPredicateKs) {
      const std::map<int, double> per_class =
          counts(predicate_, k).class_accuracy();
      GroupScores groups;
      if (!per_class.empty()) groups = PredicateGroupReport(per_class, *split_);
      const std::string at = ".mA@" + std::to_string(k);
      const std::pair<const char*, std::optional<double>> entries[] = {
          {"group.head", groups.head},
          {"group.body", groups.body},
          {"group.tail", groups.tail}};
      for (const auto& [name, value] : entries) {
        if (value) {
          report.values.emplace_back(name + at, *value);
        } else {
          report.absent.push_back(name + at);
        }
      }
    }
  }
  return report;
}

std::string FormatMetricTable(const MetricReport& report) {
  std::string out;
  char line[96];
  std::snprintf(line, sizeof(line), "%-24s %10s\n", "metric", "value");
  out += line;
  for (const auto& [name, value] : report.values) {
    std::snprintf(line, sizeof(line), "%-24s %10.4f\n", name.c_str(), value);
    out += line;
  }
  for (const std::string& name : report.absent) {
    std::snprintf(line, sizeof(line), "%-24s %10s\n", name.c_str(), "absent");
    out += line;
  }
  return out;
}

}  // namespace wssg
