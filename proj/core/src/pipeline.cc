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

#include "wssg/pipeline.h"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "wssg/error.h"
#include "wssg/esagnn.h"
#include "wssg/featurizer.h"

namespace wssg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kRunFormat = "wssg-run/1";

template <typename Fn>
auto Stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.detail());
  }
}

std::optional<PredicateSplit> SplitFor(const PredicateVocabulary& preds) {
  const NamedSplit& named = Default3dssgSplit();
  const PredicateSplit split =
      ResolveSplit(named.head, named.body, named.tail, preds);
  const size_t covered =
      split.head.size() + split.body.size() + split.tail.size();
  if (covered != static_cast<size_t>(preds.num_real())) return std::nullopt;
  return split;
}

double Accuracy(int correct, int total) {
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

}  // namespace

SceneInputs LoadSceneDir(const fs::path& dir) {
  SceneInputs in;
  in.name = dir.filename().string();
  if (in.name.empty()) in.name = dir.parent_path().filename().string();
  in.bundle = ReadSceneBundle(dir);
  if (fs::exists(dir / kGroundTruthFile)) {
    in.gt = ReadGroundTruth(dir / kGroundTruthFile, in.bundle.object_vocab,
                            in.bundle.predicate_vocab);
  }
  in.triplets = ReadTripletSet(dir / kTripletsFile);
  const fs::path emb = dir / "embeddings";
  in.images = ReadEmbeddingTable(emb / "image.emb");
  in.object_texts = ReadEmbeddingTable(emb / "object_text.emb");
  in.triplet_texts = ReadEmbeddingTable(emb / "triplet_text.emb");
  if (fs::exists(emb / "edge.emb")) {
    in.edges = ReadEmbeddingTable(emb / "edge.emb");
  }
  return in;
}

std::vector<fs::path> FindSceneDirs(const fs::path& root) {
  if (fs::exists(root / kSceneManifest)) return {root};
  std::vector<fs::path> out;
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kBadFormat, root.string() + ": not a directory");
  }
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / kSceneManifest)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw Error(ErrorCode::kBadFormat, root.string() + ": no scene found");
  }
  return out;
}

ModelConfig ModelConfigFor(const SceneBundle& bundle, int dim) {
  ModelConfig config;
  config.dim = dim;
  config.num_objects = bundle.object_vocab.size();
  config.num_predicates = bundle.predicate_vocab.num_real();
  return config;
}

Eigen::MatrixXd EdgeEmbeddingMatrix(const EmbeddingTable& edges,
                                    int num_nodes) {
  Eigen::MatrixXd out(NumEdges(num_nodes), edges.dim());
  for (int e = 0; e < NumEdges(num_nodes); ++e) {
    const auto [i, j] = EdgePair(e, num_nodes);
    out.row(e) = edges.Get(EdgeToken(i, j)).transpose();
  }
  return out;
}

PseudoLabelAssignment ComputePseudoLabels(
    const SceneInputs& scene,
    const std::vector<std::optional<ViewSelection>>& selections,
    const Eigen::MatrixXd& edge_embeddings, const std::string& edge_source,
    bool mask_filter, NodeLabeling* node_labeling) {
  const SceneBundle& b = scene.bundle;
  NodeLabeling nodes = LabelNodes(b, selections, scene.images,
                                  scene.object_texts, scene.triplets);
  PseudoLabelAssignment out;
  out.nodes = nodes.labels;
  out.edge_source = edge_source;
  const std::vector<ResolvedTriplet> resolved =
      ResolveTriplets(scene.triplets, b.object_vocab, b.predicate_vocab);
  const std::vector<Eigen::VectorXd> texts = LookupTripletEmbeddings(
      scene.triplet_texts, resolved, b.object_vocab, b.predicate_vocab);
  std::vector<int> labels;
  for (const NodePseudoLabel& n : out.nodes) labels.push_back(n.category);
  const auto candidates = mask_filter
                              ? MaskFilter(labels, resolved)
                              : AllCandidates(b.num_instances(), resolved);
  out.edges = RelationPseudoLabels(edge_embeddings, texts, resolved,
                                   candidates, b.predicate_vocab.none_id());
  if (node_labeling) *node_labeling = std::move(nodes);
  return out;
}

SceneRun RunScene(const SceneInputs& scene, const WeightBundle& weights,
                  const PipelineOptions& options) {
  const SceneBundle& b = scene.bundle;
  const int k = b.num_instances();
  SceneRun run;
  run.report.name = scene.name;
  run.report.num_instances = k;

  Stage("validate", [&] {
    const ValidationReport v = ValidateScene(b);
    if (!v.ok()) throw Error(ErrorCode::kInvalidArgument, v.issues.front());
    const ModelConfig& m = weights.config();
    if (m.num_objects != b.object_vocab.size() ||
        m.num_predicates != b.predicate_vocab.num_real()) {
      throw Error(ErrorCode::kBadWeights,
                  "weights do not match the scene vocabularies");
    }
  });
  run.selections = Stage("projection", [&] {
    return SelectSceneViews(b, options.config.projection, options.threads);
  });
  const GraphState initial = Stage("featurizer", [&] {
    return InitialEmbeddings(b, weights, options.config.features,
                             options.threads);
  });
  const ForwardResult forward = Stage("esagnn", [&] {
    ForwardOptions fo;
    fo.threads = options.threads;
    return Forward(initial, weights, fo);
  });
  run.logits = {forward.node_logits, forward.edge_logits};

  NodeLabeling labeling;
  Stage("pseudolabel", [&] {
    Eigen::MatrixXd edges;
    if (scene.edges) {
      run.report.edge_source = "oracle";
      edges = EdgeEmbeddingMatrix(*scene.edges, k);
    } else {
      run.report.edge_source = "forward";
      edges = forward.final_state.edges;
    }
    run.assignment = ComputePseudoLabels(scene, run.selections, edges,
                                         run.report.edge_source, true,
                                         &labeling);
    run.unfiltered = ComputePseudoLabels(scene, run.selections, edges,
                                         run.report.edge_source, false);
  });
  run.report.fallback_instances = static_cast<int>(std::count(
      labeling.used_fallback.begin(), labeling.used_fallback.end(), true));

  run.losses = Stage("losses", [&] {
    std::vector<int> node_labels, edge_labels;
    for (const auto& n : run.assignment.nodes) node_labels.push_back(n.category);
    for (const auto& e : run.assignment.edges) edge_labels.push_back(e.predicate);
    Eigen::MatrixXd images(k, scene.images.dim());
    for (int i = 0; i < k; ++i) {
      images.row(i) = labeling.image_embeddings[i].transpose();
    }
    return TotalLoss(forward.node_logits, node_labels, forward.edge_logits,
                     edge_labels, initial.nodes, images, options.config.loss);
  });
  run.report.object_loss = run.losses.object_loss;
  run.report.relation_loss = run.losses.relation_loss;
  run.report.alignment_loss = run.losses.alignment_loss;
  run.report.total_loss = run.losses.total;

  if (scene.gt) {
    const SceneGraphGT& gt = *scene.gt;
    const int none = b.predicate_vocab.none_id();
    if (gt.node_labels.size() != static_cast<size_t>(k)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: gt node count differs from the instance count");
    }
    run.report.nodes_total = k;
    for (int i = 0; i < k; ++i) {
      run.report.nodes_correct +=
          run.assignment.nodes[i].category == gt.node_labels[i];
    }
    for (int e = 0; e < NumEdges(k); ++e) {
      const auto [i, j] = EdgePair(e, k);
      const int label = gt.edge_label(i, j, none);
      if (label == none) continue;
      ++run.report.relations_total;
      run.report.relations_correct += run.assignment.edges[e].predicate == label;
      run.report.relations_correct_unfiltered +=
          run.unfiltered.edges[e].predicate == label;
    }
  }
  return run;
}

PipelineReport RunPipeline(const std::vector<SceneInputs>& scenes,
                           const WeightBundle& weights,
                           const PipelineOptions& options) {
  PipelineReport report;
  std::optional<MetricAccumulator> metrics;
  const SceneInputs* reference = nullptr;
  for (const SceneInputs& scene : scenes) {
    SceneRun run = RunScene(scene, weights, options);
    report.scenes.push_back(run.report);
    if (!scene.gt) continue;
    if (!metrics) {
      reference = &scene;
      metrics.emplace(scene.bundle.object_vocab.size(),
                      scene.bundle.predicate_vocab,
                      SplitFor(scene.bundle.predicate_vocab));
    } else if (!(scene.bundle.object_vocab == reference->bundle.object_vocab &&
                 scene.bundle.predicate_vocab ==
                     reference->bundle.predicate_vocab)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evaluate: scenes use different vocabularies");
    }
    Stage("evaluate", [&] {
      metrics->AddScene({RowSoftmax(run.logits.node),
                         RowSoftmax(run.logits.edge), *scene.gt});
    });
  }
  if (metrics) report.metrics = metrics->Finish();
  return report;
}

std::string PipelineReportJson(const PipelineReport& report) {
  json scenes = json::array();
  for (const ScenePipelineReport& s : report.scenes) {
    scenes.push_back(
        {{"name", s.name},
         {"num_instances", s.num_instances},
         {"fallback_instances", s.fallback_instances},
         {"edge_source", s.edge_source},
         {"nodes_correct", s.nodes_correct},
         {"nodes_total", s.nodes_total},
         {"relations_correct", s.relations_correct},
         {"relations_correct_unfiltered", s.relations_correct_unfiltered},
         {"relations_total", s.relations_total},
         {"node_accuracy", Accuracy(s.nodes_correct, s.nodes_total)},
         {"relation_accuracy", Accuracy(s.relations_correct, s.relations_total)},
         {"relation_accuracy_unfiltered",
          Accuracy(s.relations_correct_unfiltered, s.relations_total)},
         {"losses",
          {{"object", s.object_loss},
           {"relation", s.relation_loss},
           {"alignment", s.alignment_loss},
           {"total", s.total_loss}}}});
  }
  const json j = {{"format", kRunFormat},
                  {"scenes", scenes},
                  {"metrics", json::parse(MetricReportJson(report.metrics))}};
  return j.dump(2) + "\n";
}

PipelineReport ParsePipelineReport(const std::string& text) {
  PipelineReport report;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kRunFormat) {
      throw Error(ErrorCode::kBadFormat, "not a run report");
    }
    for (const json& s : j.at("scenes")) {
      ScenePipelineReport r;
      r.name = s.at("name").get<std::string>();
      r.num_instances = s.at("num_instances").get<int>();
      r.fallback_instances = s.at("fallback_instances").get<int>();
      r.edge_source = s.at("edge_source").get<std::string>();
      r.nodes_correct = s.at("nodes_correct").get<int>();
      r.nodes_total = s.at("nodes_total").get<int>();
      r.relations_correct = s.at("relations_correct").get<int>();
      r.relations_correct_unfiltered =
          s.at("relations_correct_unfiltered").get<int>();
      r.relations_total = s.at("relations_total").get<int>();
      const json& l = s.at("losses");
      r.object_loss = l.at("object").get<double>();
      r.relation_loss = l.at("relation").get<double>();
      r.alignment_loss = l.at("alignment").get<double>();
      r.total_loss = l.at("total").get<double>();
      report.scenes.push_back(std::move(r));
    }
    report.metrics = ParseMetricReport(j.at("metrics").dump());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("run report: ") + e.what());
  }
  return report;
}

std::string FormatPipelineReport(const PipelineReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %4s %7s %9s %9s %9s %10s\n",
                "scene", "K", "source", "node_acc", "rel_acc", "rel_noMF",
                "loss");
  out += line;
  for (const ScenePipelineReport& s : report.scenes) {
    std::snprintf(line, sizeof(line),
                  "%-16s %4d %7s %9.4f %9.4f %9.4f %10.4f\n", s.name.c_str(),
                  s.num_instances, s.edge_source.c_str(),
                  Accuracy(s.nodes_correct, s.nodes_total),
                  Accuracy(s.relations_correct, s.relations_total),
                  Accuracy(s.relations_correct_unfiltered, s.relations_total),
                  s.total_loss);
    out += line;
  }
  if (!report.metrics.values.empty() || !report.metrics.absent.empty()) {
    out += "\n" + FormatMetricTable(report.metrics);
  }
  return out;
}

}  // namespace wssg
