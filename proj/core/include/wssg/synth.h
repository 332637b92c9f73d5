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

#ifndef WSSG_SYNTH_H_
#define WSSG_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wssg/embeddings.h"
#include "wssg/scene.h"

namespace wssg {

// Predicates the generator can derive, in rule priority order.
const std::vector<std::string>& SynthPredicateRules();

struct SynthConfig {
  int min_instances = 3;
  int max_instances = 8;
  int num_object_classes = 16;
  int num_predicates = 9;  // first n entries of SynthPredicateRules()
  // Draw distinct categories per scene (requires max_instances <= classes).
  bool distinct_categories = true;
  double room_extent = 6.0;          // square floor side, meters
  double relation_radius = 3.0;      // center distance beyond which pairs are None
  double close_gap = 0.5;            // box gap below which a pair is close by
  double stack_probability = 0.2;
  int points_per_instance = 256;
  double point_jitter = 0.005;       // meters, per axis std
  int num_cameras = 6;
  int image_size = 128;
  double occluder_probability = 0.3;  // per camera
  int embedding_dim = 512;
  double embedding_noise = 0.1;      // norm of the noise added to crops
  double edge_noise = 0.5;           // norm of the noise added to edge codes
  bool edge_embeddings = true;
  int max_retries = 200;
  int num_scenes = 1;  // batch size for the synth command
  std::uint64_t seed = 0;

  // Throws kInvalidArgument on negative scales or inconsistent sizes.
  void Validate() const;
};

struct SynthBox {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  Eigen::Vector3d size() const { return max - min; }
  double volume() const { return size().prod(); }
};

struct SynthScene {
  SceneBundle bundle;
  SceneGraphGT gt;
  TripletSet triplets;
  EmbeddingTable images;         // crop tokens and whole-frame tokens
  EmbeddingTable object_texts;   // basis vector per category
  EmbeddingTable triplet_texts;  // one row per triplet of the scene
  EmbeddingTable edges;          // empty unless edge_embeddings
  std::vector<SynthBox> boxes;
  std::vector<SynthBox> occluders;
};

// Ground-truth predicate of the ordered pair (subject, object) under the
// fixed rules; returns the None id when no rule fires. `predicates` must
// hold names from SynthPredicateRules().
int SynthPredicate(const SynthBox& subject, const SynthBox& object,
                   const PredicateVocabulary& predicates,
                   const SynthConfig& config);

// Throws kPlacementFailed when no layout is found within max_retries.
SynthScene GenerateScene(const SynthConfig& config);

// Seed of scene `index` in a batch generated from `base`.
std::uint64_t SceneSeed(std::uint64_t base, int index);

// Bundle, gt.json, triplets.json and embeddings/*.emb under `dir`.
void WriteSynthScene(const SynthScene& scene, const std::filesystem::path& dir);

SynthConfig ParseSynthConfig(const std::string& json_text);
std::string SynthConfigJson(const SynthConfig& config);

}  // namespace wssg

#endif  // WSSG_SYNTH_H_
