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

// wssg: command line front end of the scene graph engine.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wssg/config.h"
#include "wssg/error.h"
#include "wssg/esagnn.h"
#include "wssg/featurizer.h"
#include "wssg/gradcheck.h"
#include "wssg/io.h"
#include "wssg/metrics.h"
#include "wssg/pipeline.h"
#include "wssg/projection.h"
#include "wssg/pseudolabel.h"
#include "wssg/synth.h"
#include "wssg/weights.h"

namespace {

namespace fs = std::filesystem;
using namespace wssg;

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  bool seed_given = false;
};

void AddCommon(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
}

// Weights from a file, or seeded random weights sized for `bundle`.
WeightBundle LoadOrRandomWeights(const std::string& file,
                                 const SceneBundle& bundle, int dim,
                                 std::uint64_t seed) {
  if (!file.empty()) return ReadWeights(file);
  return RandomWeights(ModelConfigFor(bundle, dim), seed);
}

int CmdProject(const std::string& scene, const std::string& out,
               const ProjectionConfig& config, const Common& common) {
  const SceneBundle bundle = ReadSceneBundle(scene);
  const auto selections = SelectSceneViews(bundle, config, common.threads);
  WriteViewSelections(selections, out);
  int none = 0;
  for (const auto& s : selections) none += !s.has_value();
  std::printf("%zu instances, %d without a visible view\n", selections.size(),
              none);
  return 0;
}

int CmdPseudolabel(const std::string& scene, const std::string& embeddings,
                   const std::string& triplets, const std::string& weights,
                   const std::string& out, bool no_filter,
                   const EngineConfig& config, const Common& common) {
  SceneInputs in;
  in.name = fs::path(scene).filename().string();
  in.bundle = ReadSceneBundle(scene);
  in.triplets = ReadTripletSet(triplets);
  const fs::path emb(embeddings);
  in.images = ReadEmbeddingTable(emb / "image.emb");
  in.object_texts = ReadEmbeddingTable(emb / "object_text.emb");
  in.triplet_texts = ReadEmbeddingTable(emb / "triplet_text.emb");
  if (fs::exists(emb / "edge.emb")) {
    in.edges = ReadEmbeddingTable(emb / "edge.emb");
  }
  const int k = in.bundle.num_instances();
  const auto selections =
      SelectSceneViews(in.bundle, config.projection, common.threads);
  Eigen::MatrixXd edges;
  std::string source;
  if (in.edges) {
    edges = EdgeEmbeddingMatrix(*in.edges, k);
    source = "oracle";
  } else {
    if (weights.empty()) {
      throw Error(ErrorCode::kMissingEmbedding,
                  "no edge.emb under " + embeddings + "; pass --weights");
    }
    const WeightBundle w = ReadWeights(weights);
    const GraphState initial =
        InitialEmbeddings(in.bundle, w, config.features, common.threads);
    ForwardOptions fo;
    fo.threads = common.threads;
    edges = Forward(initial, w, fo).final_state.edges;
    source = "forward";
  }
  const PseudoLabelAssignment a =
      ComputePseudoLabels(in, selections, edges, source, !no_filter);
  WriteAssignment(a, in.bundle.object_vocab, in.bundle.predicate_vocab, out);
  int none = 0;
  for (const auto& e : a.edges) {
    none += e.predicate == in.bundle.predicate_vocab.none_id();
  }
  std::printf("%d nodes, %zu edges (%d None), edge source %s\n", k,
              a.edges.size(), none, source.c_str());
  return 0;
}

int CmdInfer(const std::string& scene, const std::string& weights,
             const std::string& out, const EngineConfig& config,
             const Common& common) {
  const SceneBundle bundle = ReadSceneBundle(scene);
  const WeightBundle w = ReadWeights(weights);
  const GraphState initial =
      InitialEmbeddings(bundle, w, config.features, common.threads);
  ForwardOptions fo;
  fo.threads = common.threads;
  const ForwardResult r = Forward(initial, w, fo);
  WriteLogits({r.node_logits, r.edge_logits}, out);
  std::printf("node logits %ldx%ld, edge logits %ldx%ld\n",
              static_cast<long>(r.node_logits.rows()),
              static_cast<long>(r.node_logits.cols()),
              static_cast<long>(r.edge_logits.rows()),
              static_cast<long>(r.edge_logits.cols()));
  return 0;
}

int CmdEval(const std::string& pred, const std::string& gt_dir,
            const std::string& report, const std::string& predicates_file) {
  const Logits logits = ReadLogits(pred);
  const SceneBundle bundle = ReadSceneBundle(gt_dir);
  const SceneGraphGT gt =
      ReadGroundTruth(fs::path(gt_dir) / kGroundTruthFile, bundle.object_vocab,
                      bundle.predicate_vocab);
  std::optional<PredicateSplit> split;
  if (!predicates_file.empty()) {
    const PredicateVocabFile vf = ReadPredicateVocabFile(predicates_file);
    split = ResolveSplit(vf.split.head, vf.split.body, vf.split.tail,
                         bundle.predicate_vocab);
  } else {
    const NamedSplit& d = Default3dssgSplit();
    const PredicateSplit s =
        ResolveSplit(d.head, d.body, d.tail, bundle.predicate_vocab);
    if (s.head.size() + s.body.size() + s.tail.size() ==
        static_cast<size_t>(bundle.predicate_vocab.num_real())) {
      split = s;
    }
  }
  MetricAccumulator acc(bundle.object_vocab.size(), bundle.predicate_vocab,
                        split);
  ScenePredictions sp{RowSoftmax(logits.node), RowSoftmax(logits.edge), gt};
  CheckPredictions(sp.node_probs, sp.edge_probs);
  acc.AddScene(sp);
  const MetricReport m = acc.Finish();
  WriteMetricReport(m, report);
  std::cout << FormatMetricTable(m);
  return 0;
}

int CmdGradcheck(int instances, const Common& common) {
  GradientSuiteOptions options;
  options.instances = instances;
  const auto suite = RunGradientSuite(common.seed, options);
  bool ok = true;
  std::printf("%-14s %9s %14s %8s\n", "loss", "instances", "worst rel err",
              "instance");
  for (const LossGradientSummary& s : suite) {
    std::printf("%-14s %9d %14.3e %8d\n", s.loss.c_str(), s.instances,
                s.worst_relative_error, s.worst_instance);
    ok = ok && s.worst_relative_error < 1e-6;
  }
  return ok ? 0 : 1;
}

int CmdSynth(const std::string& config_file, const std::string& out,
             const Common& common) {
  SynthConfig cfg = ParseSynthConfig(ReadTextFile(config_file));
  if (common.seed_given) cfg.seed = common.seed;
  for (int n = 0; n < cfg.num_scenes; ++n) {
    SynthConfig one = cfg;
    one.seed = SceneSeed(cfg.seed, n);
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%04d", n);
    const SynthScene s = GenerateScene(one);
    WriteSynthScene(s, fs::path(out) / name);
    std::printf("%s: %d instances, %zu relations\n", name,
                s.bundle.num_instances(), s.gt.edge_labels.size());
  }
  return 0;
}

int CmdRun(const std::string& scene_dir, const std::string& report,
           const std::string& weights, int dim, const EngineConfig& config,
           const Common& common) {
  std::vector<SceneInputs> scenes;
  for (const fs::path& dir : FindSceneDirs(scene_dir)) {
    scenes.push_back(LoadSceneDir(dir));
  }
  const WeightBundle w =
      LoadOrRandomWeights(weights, scenes.front().bundle, dim, common.seed);
  PipelineOptions options;
  options.config = config;
  options.threads = common.threads;
  const PipelineReport r = RunPipeline(scenes, w, options);
  WriteTextFile(report, PipelineReportJson(r));
  std::cout << FormatPipelineReport(r);
  return 0;
}

int CmdInitWeights(const std::string& scene, const std::string& out,
                   int dim, int heads, const Common& common) {
  ModelConfig m = ModelConfigFor(ReadSceneBundle(scene), dim);
  m.heads = heads;
  if (dim % heads != 0) {
    throw Error(ErrorCode::kInvalidArgument, "heads must divide dim");
  }
  WriteWeights(RandomWeights(m, common.seed), out);
  std::printf("D=%d heads=%d objects=%d predicates=%d\n", m.dim, m.heads,
              m.num_objects, m.num_predicates);
  return 0;
}

int CmdPrompts(const std::string& triplets) {
  const TripletSet set = ReadTripletSet(triplets);
  for (const auto& [t, count] : set.entries()) {
    std::printf("%s\t%s\n", TripletToken(t).c_str(),
                PromptTriplet(t.subject, t.predicate, t.object).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly supervised 3D scene graph engine"};
  app.require_subcommand(1);
  Common common;
  EngineConfig config = DefaultConfig();

  auto add_projection = [&](CLI::App* cmd) {
    cmd->add_option("--top-k", config.projection.top_k, "Views per instance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--depth-tolerance", config.projection.depth_tolerance,
                    "Depth test tolerance, meters");
    cmd->add_option("--crop-pad", config.projection.crop_pad,
                    "Crop padding, pixels");
  };

  std::string scene, out, embeddings, triplets, weights, pred, gt, report,
      synth_config, scene_dir, predicates;
  bool no_filter = false;
  int instances = 20;
  int dim = 512;
  int heads = 8;

  CLI::App* project = app.add_subcommand("project", "Select views per instance");
  project->add_option("--scene", scene, "Scene bundle directory")->required();
  project->add_option("--out", out, "Selection file")->required();
  add_projection(project);

  CLI::App* pseudolabel =
      app.add_subcommand("pseudolabel", "Generate node and relation labels");
  pseudolabel->add_option("--scene", scene, "Scene bundle directory")
      ->required();
  pseudolabel->add_option("--embeddings", embeddings, "Embedding directory")
      ->required();
  pseudolabel->add_option("--triplets", triplets, "Triplet set file")
      ->required();
  pseudolabel->add_option("--out", out, "Assignment file")->required();
  pseudolabel->add_option("--weights", weights,
                          "Weights for edge features when edge.emb is absent");
  pseudolabel->add_flag("--no-mask-filter", no_filter,
                        "Offer every triplet to every edge");
  add_projection(pseudolabel);

  CLI::App* infer = app.add_subcommand("infer", "Run the network forward");
  infer->add_option("--scene", scene, "Scene bundle directory")->required();
  infer->add_option("--weights", weights, "Weight file")->required();
  infer->add_option("--out", out, "Logits file")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score logits against gt");
  eval->add_option("--pred", pred, "Logits file")->required();
  eval->add_option("--gt", gt, "Scene bundle directory with gt.json")
      ->required();
  eval->add_option("--report", report, "Metric report file")->required();
  eval->add_option("--predicates", predicates,
                   "Predicate vocabulary file with a head/body/tail split");

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Finite-difference check of the losses");
  gradcheck->add_option("--instances", instances, "Instances per loss")
      ->check(CLI::PositiveNumber);

  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic scenes");
  synth->add_option("--config", synth_config, "Generator config (json)")
      ->required();
  synth->add_option("--out", out, "Output directory")->required();

  CLI::App* run = app.add_subcommand("run", "Full pipeline over scenes");
  run->add_option("--scene-dir", scene_dir,
                  "Scene directory or a directory of scenes")
      ->required();
  run->add_option("--report", report, "Report file")->required();
  run->add_option("--weights", weights,
                  "Weight file; seeded random weights otherwise");
  run->add_option("--dim", dim, "Feature width for random weights")
      ->check(CLI::PositiveNumber);
  add_projection(run);

  CLI::App* init_weights = app.add_subcommand(
      "init-weights", "Write seeded random weights sized for a scene");
  init_weights->add_option("--scene", scene, "Scene bundle directory")
      ->required();
  init_weights->add_option("--out", out, "Weight file")->required();
  init_weights->add_option("--dim", dim, "Feature width")
      ->check(CLI::PositiveNumber);
  init_weights->add_option("--heads", heads, "Attention heads")
      ->check(CLI::PositiveNumber);

  CLI::App* prompts =
      app.add_subcommand("prompts", "Print the text prompt of each triplet");
  prompts->add_option("--triplets", triplets, "Triplet set file")->required();

  for (CLI::App* cmd :
       {project, pseudolabel, infer, eval, gradcheck, synth, run, init_weights,
        prompts}) {
    AddCommon(cmd, common);
  }

  CLI11_PARSE(app, argc, argv);
  for (CLI::App* cmd : app.get_subcommands()) {
    common.seed_given = cmd->count("--seed") > 0;
  }

  try {
    if (*project) return CmdProject(scene, out, config.projection, common);
    if (*pseudolabel) {
      return CmdPseudolabel(scene, embeddings, triplets, weights, out,
                            no_filter, config, common);
    }
    if (*infer) return CmdInfer(scene, weights, out, config, common);
    if (*eval) return CmdEval(pred, gt, report, predicates);
    if (*gradcheck) return CmdGradcheck(instances, common);
    if (*synth) return CmdSynth(synth_config, out, common);
    if (*run) return CmdRun(scene_dir, report, weights, dim, config, common);
    if (*init_weights) return CmdInitWeights(scene, out, dim, heads, common);
    if (*prompts) return CmdPrompts(triplets);
  } catch (const Error& e) {
    std::fprintf(stderr, "wssg: %s\n", e.what());
    return 1;
  }
  return 1;
}
