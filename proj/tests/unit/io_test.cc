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

#include "wssg/io.h"

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "unit/test_util.h"
#include "wssg/error.h"
#include "wssg/synth.h"

namespace wssg {
namespace {

SynthScene SmallScene(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.embedding_dim = 16;
  c.points_per_instance = 32;
  c.image_size = 32;
  return GenerateScene(c);
}

TEST(IoTest, SceneBundleRoundTrip) {
  const auto dir = testing::ScratchDir("io_bundle");
  const SynthScene s = SmallScene(1);
  WriteSceneBundle(s.bundle, dir);
  const SceneBundle back = ReadSceneBundle(dir);
  EXPECT_TRUE(back == s.bundle);
  const auto dir2 = testing::ScratchDir("io_bundle2");
  WriteSceneBundle(back, dir2);
  EXPECT_TRUE(ReadSceneBundle(dir2) == back);
  EXPECT_EQ(ReadTextFile(dir / "points.f32"), ReadTextFile(dir2 / "points.f32"));
}

TEST(IoTest, GroundTruthAndTriplets) {
  const auto dir = testing::ScratchDir("io_gt");
  const SynthScene s = SmallScene(2);
  WriteGroundTruth(s.gt, s.bundle.object_vocab, s.bundle.predicate_vocab,
                   dir / "gt.json");
  EXPECT_EQ(ReadGroundTruth(dir / "gt.json", s.bundle.object_vocab,
                            s.bundle.predicate_vocab),
            s.gt);
  WriteTripletSet(s.triplets, dir / "t.json");
  EXPECT_TRUE(ReadTripletSet(dir / "t.json") == s.triplets);
}

TEST(IoTest, EmbeddingTableRoundTrip) {
  const auto dir = testing::ScratchDir("io_emb");
  const SynthScene s = SmallScene(3);
  for (const EmbeddingTable* t :
       {&s.images, &s.object_texts, &s.triplet_texts, &s.edges}) {
    WriteEmbeddingTable(*t, dir / "t.emb");
    const EmbeddingTable back = ReadEmbeddingTable(dir / "t.emb");
    EXPECT_TRUE(back == *t);
    EXPECT_EQ(back.note(), t->note());
    WriteEmbeddingTable(back, dir / "u.emb");
    EXPECT_EQ(ReadTextFile(dir / "t.emb"), ReadTextFile(dir / "u.emb"));
  }
}

TEST(IoTest, WeightsRoundTrip) {
  const auto dir = testing::ScratchDir("io_weights");
  ModelConfig c;
  c.dim = 16;
  c.heads = 4;
  c.point_hidden = {8, 12};
  c.num_objects = 7;
  c.num_predicates = 4;
  c.attention_residual = true;
  const WeightBundle w = RandomWeights(c, 5);
  WriteWeights(w, dir / "w.bin");
  const WeightBundle back = ReadWeights(dir / "w.bin");
  EXPECT_TRUE(back == w);
  EXPECT_EQ(back.config().point_hidden, c.point_hidden);
  EXPECT_TRUE(back.config().attention_residual);
}

TEST(IoTest, CorruptWeights) {
  const auto dir = testing::ScratchDir("io_bad_weights");
  ModelConfig c;
  c.dim = 8;
  c.heads = 2;
  c.point_hidden = {4};
  c.num_objects = 3;
  c.num_predicates = 2;
  WeightBundle w = RandomWeights(c, 5);
  w.Set("layer0.attn_q.weight", Eigen::MatrixXd::Zero(8, 7));
  WriteWeights(w, dir / "w.bin");
  try {
    ReadWeights(dir / "w.bin");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadWeights);
  }
  WriteTextFile(dir / "x.bin", "not a weight file\n");
  try {
    ReadWeights(dir / "x.bin");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadFormat);
  }
}

TEST(IoTest, LogitsRoundTrip) {
  const auto dir = testing::ScratchDir("io_logits");
  std::mt19937_64 rng(4);
  const auto to_float = [](double x) {
    return static_cast<double>(static_cast<float>(x));
  };
  const Logits l{testing::RandomMatrix(3, 5, rng).unaryExpr(to_float),
                 testing::RandomMatrix(6, 4, rng).unaryExpr(to_float)};
  WriteLogits(l, dir / "l.bin");
  EXPECT_EQ(ReadLogits(dir / "l.bin"), l);
}

TEST(IoTest, SelectionsRoundTrip) {
  const auto dir = testing::ScratchDir("io_sel");
  std::vector<std::optional<ViewSelection>> sel(3);
  sel[0] = ViewSelection{{ViewChoice{2, 0.75, {1, 2, 30, 40}},
                          ViewChoice{0, 0.5, {0, 0, 5, 5}}}};
  sel[2] = ViewSelection{{ViewChoice{1, 0.125, {3, 4, 5, 6}}}};
  WriteViewSelections(sel, dir / "sel.txt");
  EXPECT_EQ(ReadViewSelections(dir / "sel.txt"), sel);
  const std::string text = ReadTextFile(dir / "sel.txt");
  EXPECT_NE(text.find("1 none"), std::string::npos);
  EXPECT_NE(text.find("0.750000"), std::string::npos);
}

TEST(IoTest, AssignmentRoundTrip) {
  const auto dir = testing::ScratchDir("io_assign");
  const Vocabulary objects({"chair", "table"});
  const PredicateVocabulary preds({"close by", "left"});
  PseudoLabelAssignment a;
  a.edge_source = "oracle";
  a.nodes = {{1, MatchMethod::kHungarian, 0.5}, {0, MatchMethod::kDirect, 0.25}};
  a.edges = {{0, 0.125, 0}, {2, 0.0, -1}};
  WriteAssignment(a, objects, preds, dir / "a.txt");
  EXPECT_EQ(ReadAssignment(dir / "a.txt", objects, preds), a);
  const std::string text = ReadTextFile(dir / "a.txt");
  EXPECT_NE(text.find("hungarian"), std::string::npos);
  EXPECT_NE(text.find("None"), std::string::npos);
}

TEST(IoTest, MetricReportRoundTrip) {
  MetricReport r;
  r.values = {{"object.A@1", 0.1}, {"sgcls.R@20", 1.0 / 3}};
  r.absent = {"group.tail.mA@1"};
  EXPECT_EQ(ParseMetricReport(MetricReportJson(r)), r);
  const auto dir = testing::ScratchDir("io_metrics");
  WriteMetricReport(r, dir / "m.json");
  EXPECT_EQ(ReadMetricReport(dir / "m.json"), r);
}

TEST(IoTest, MissingFileAndBadJson) {
  const auto dir = testing::ScratchDir("io_missing");
  EXPECT_THROW(ReadSceneBundle(dir), Error);
  WriteTextFile(dir / "scene.json", "{ not json");
  try {
    ReadSceneBundle(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadFormat);
  }
}

}  // namespace
}  // namespace wssg
