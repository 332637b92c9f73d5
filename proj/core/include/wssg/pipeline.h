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

#ifndef WSSG_PIPELINE_H_
#define WSSG_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wssg/config.h"
#include "wssg/embeddings.h"
#include "wssg/io.h"
#include "wssg/losses.h"
#include "wssg/metrics.h"
#include "wssg/projection.h"
#include "wssg/pseudolabel.h"
#include "wssg/scene.h"
#include "wssg/weights.h"

namespace wssg {

// Everything one scene directory provides.
struct SceneInputs {
  std::string name;
  SceneBundle bundle;
  std::optional<SceneGraphGT> gt;
  TripletSet triplets;
  EmbeddingTable images;
  EmbeddingTable object_texts;
  EmbeddingTable triplet_texts;
  std::optional<EmbeddingTable> edges;
};

// Reads scene.json and friends plus embeddings/*.emb from `dir`; gt.json
// and edge.emb are optional.
SceneInputs LoadSceneDir(const std::filesystem::path& dir);

// `root` itself when it holds a scene.json, otherwise its immediate
// subdirectories that do, sorted by name.
std::vector<std::filesystem::path> FindSceneDirs(
    const std::filesystem::path& root);

// Default model shapes with the class counts of a scene's vocabularies.
ModelConfig ModelConfigFor(const SceneBundle& bundle, int dim);

// Rows of an edge table in GraphState edge order.
Eigen::MatrixXd EdgeEmbeddingMatrix(const EmbeddingTable& edges,
                                    int num_nodes);

// Node labels by hybrid matching and relation labels by nearest triplet
// text, restricted by the Mask Filter when `mask_filter` is set.
PseudoLabelAssignment ComputePseudoLabels(
    const SceneInputs& scene,
    const std::vector<std::optional<ViewSelection>>& selections,
    const Eigen::MatrixXd& edge_embeddings, const std::string& edge_source,
    bool mask_filter, NodeLabeling* node_labeling = nullptr);

struct PipelineOptions {
  EngineConfig config;
  int threads = 1;
};

struct ScenePipelineReport {
  std::string name;
  int num_instances = 0;
  int fallback_instances = 0;
  std::string edge_source;
  // Pseudo-label agreement with ground truth; zero totals when no gt.
  int nodes_correct = 0;
  int nodes_total = 0;
  int relations_correct = 0;             // with the Mask Filter
  int relations_correct_unfiltered = 0;  // every triplet is a candidate
  int relations_total = 0;               // gt edges with a real predicate
  double object_loss = 0.0;
  double relation_loss = 0.0;
  double alignment_loss = 0.0;
  double total_loss = 0.0;

  bool operator==(const ScenePipelineReport&) const = default;
};

struct PipelineReport {
  std::vector<ScenePipelineReport> scenes;
  MetricReport metrics;  // empty when no scene has ground truth

  bool operator==(const PipelineReport&) const = default;
};

struct SceneRun {
  ScenePipelineReport report;
  std::vector<std::optional<ViewSelection>> selections;
  PseudoLabelAssignment assignment;
  PseudoLabelAssignment unfiltered;
  Logits logits;
  LossReport losses;
};

// projection -> pseudo-labels -> features -> network -> losses. Failures
// are rethrown with the stage name prepended.
SceneRun RunScene(const SceneInputs& scene, const WeightBundle& weights,
                  const PipelineOptions& options);

// Runs every scene and pools the metric table over those with gt.
PipelineReport RunPipeline(const std::vector<SceneInputs>& scenes,
                           const WeightBundle& weights,
                           const PipelineOptions& options);

std::string PipelineReportJson(const PipelineReport& report);
PipelineReport ParsePipelineReport(const std::string& json);
std::string FormatPipelineReport(const PipelineReport& report);

}  // namespace wssg

#endif  // WSSG_PIPELINE_H_
