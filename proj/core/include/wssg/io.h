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

#ifndef WSSG_IO_H_
#define WSSG_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wssg/config.h"
#include "wssg/embeddings.h"
#include "wssg/metrics.h"
#include "wssg/projection.h"
#include "wssg/pseudolabel.h"
#include "wssg/scene.h"
#include "wssg/weights.h"

// Readers and writers for every artifact the engine exchanges. Layouts are
// described in docs/formats.md. Parse failures raise kBadFormat; weight
// records that do not fit the declared model raise kBadWeights.
namespace wssg {

namespace fs = std::filesystem;

inline constexpr const char* kSceneManifest = "scene.json";
inline constexpr const char* kGroundTruthFile = "gt.json";
inline constexpr const char* kTripletsFile = "triplets.json";

// Writes scene.json, points.f32 and depth_<view>.f32 into `dir`.
void WriteSceneBundle(const SceneBundle& bundle, const fs::path& dir);
SceneBundle ReadSceneBundle(const fs::path& dir);

// Ground truth is stored by name and resolved against the vocabularies.
void WriteGroundTruth(const SceneGraphGT& gt, const Vocabulary& objects,
                      const PredicateVocabulary& predicates,
                      const fs::path& file);
SceneGraphGT ReadGroundTruth(const fs::path& file, const Vocabulary& objects,
                             const PredicateVocabulary& predicates);

void WriteTripletSet(const TripletSet& triplets, const fs::path& file);
TripletSet ReadTripletSet(const fs::path& file);

void WriteEmbeddingTable(const EmbeddingTable& table, const fs::path& file);
EmbeddingTable ReadEmbeddingTable(const fs::path& file);

void WriteWeights(const WeightBundle& weights, const fs::path& file);
WeightBundle ReadWeights(const fs::path& file);

struct Logits {
  Eigen::MatrixXd node;  // K x C_obj
  Eigen::MatrixXd edge;  // K(K-1) x (C_rel + 1)
  bool operator==(const Logits&) const = default;
};
void WriteLogits(const Logits& logits, const fs::path& file);
Logits ReadLogits(const fs::path& file);

// One line per chosen view; instances without a visible view get a single
// "none" line.
void WriteViewSelections(
    const std::vector<std::optional<ViewSelection>>& selections,
    const fs::path& file);
std::vector<std::optional<ViewSelection>> ReadViewSelections(
    const fs::path& file);

void WriteAssignment(const PseudoLabelAssignment& assignment,
                     const Vocabulary& objects,
                     const PredicateVocabulary& predicates,
                     const fs::path& file);
PseudoLabelAssignment ReadAssignment(const fs::path& file,
                                     const Vocabulary& objects,
                                     const PredicateVocabulary& predicates);

std::string MetricReportJson(const MetricReport& report);
MetricReport ParseMetricReport(const std::string& json);
void WriteMetricReport(const MetricReport& report, const fs::path& file);
MetricReport ReadMetricReport(const fs::path& file);

// Predicate vocabulary file with its head/body/tail grouping.
struct PredicateVocabFile {
  std::vector<std::string> predicates;
  NamedSplit split;
};
PredicateVocabFile ReadPredicateVocabFile(const fs::path& file);

std::string ReadTextFile(const fs::path& file);
void WriteTextFile(const fs::path& file, const std::string& text);

}  // namespace wssg

#endif  // WSSG_IO_H_
