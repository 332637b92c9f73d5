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

#include "wssg/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "wssg/error.h"
#include "wssg/io.h"
#include "wssg/pseudolabel.h"

namespace wssg {
namespace {

using Rng = std::mt19937_64;

const std::vector<std::string>& ClassNames() {
  static const std::vector<std::string> names = {
      "armchair", "bed",     "bench",  "bin",    "box",     "cabinet",
      "chair",    "couch",   "desk",   "door",   "dresser", "lamp",
      "nightstand", "piano", "plant",  "shelf",  "sink",    "sofa",
      "stool",    "table",   "toilet", "tv stand", "wardrobe", "washing machine"};
  return names;
}

std::vector<std::string> ObjectNames(int count) {
  std::vector<std::string> names;
  for (int c = 0; c < count; ++c) {
    if (c < static_cast<int>(ClassNames().size())) {
      names.push_back(ClassNames()[c]);
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "object %03d", c);
      names.emplace_back(buf);
    }
  }
  return names;
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Eigen::VectorXd RandomUnit(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-9);
  return v.normalized();
}

// Unit vector rounded to float, so the file round trip is exact.
Eigen::VectorXd FloatUnit(const Eigen::VectorXd& v) {
  return Normalized(v).unaryExpr(
      [](double x) { return static_cast<double>(static_cast<float>(x)); });
}

double BoxGap(const SynthBox& a, const SynthBox& b) {
  Eigen::Vector3d d;
  for (int axis = 0; axis < 3; ++axis) {
    d[axis] = std::max({0.0, a.min[axis] - b.max[axis],
                        b.min[axis] - a.max[axis]});
  }
  return d.norm();
}

bool FootprintsOverlap(const SynthBox& a, const SynthBox& b, double margin) {
  return a.min.x() < b.max.x() + margin && b.min.x() < a.max.x() + margin &&
         a.min.y() < b.max.y() + margin && b.min.y() < a.max.y() + margin;
}

// Entry depth of the ray origin + t * dir into the box, if it is hit in
// front of the origin. The origin inside a box counts as no hit.
bool RayBox(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
            const SynthBox& box, double* t_hit) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(dir[axis]) < 1e-15) {
      if (origin[axis] < box.min[axis] || origin[axis] > box.max[axis]) {
        return false;
      }
      continue;
    }
    double a = (box.min[axis] - origin[axis]) / dir[axis];
    double b = (box.max[axis] - origin[axis]) / dir[axis];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1 || t0 <= 0.0) return false;
  *t_hit = t0;
  return true;
}

CameraView MakeCamera(Rng& rng, const SynthConfig& cfg, int index) {
  const double half = 0.5 * cfg.room_extent;
  const double angle = 2.0 * std::numbers::pi * index / cfg.num_cameras +
                       Uniform(rng, -0.3, 0.3);
  const double radius = half * Uniform(rng, 0.9, 1.2);
  const Eigen::Vector3d position(half + radius * std::cos(angle),
                                 half + radius * std::sin(angle),
                                 Uniform(rng, 1.6, 2.6));
  const Eigen::Vector3d target(half + Uniform(rng, -0.8, 0.8),
                               half + Uniform(rng, -0.8, 0.8),
                               Uniform(rng, 0.2, 0.6));
  const Eigen::Vector3d forward = (target - position).normalized();
  const Eigen::Vector3d right =
      forward.cross(Eigen::Vector3d::UnitZ()).normalized();
  const Eigen::Vector3d down = forward.cross(right);

  CameraView view;
  Eigen::Matrix3d rotation;
  rotation.row(0) = right.transpose();
  rotation.row(1) = down.transpose();
  rotation.row(2) = forward.transpose();
  view.extrinsics.setIdentity();
  view.extrinsics.topLeftCorner<3, 3>() = rotation;
  view.extrinsics.topRightCorner<3, 1>() = -rotation * position;

  const double fov = Uniform(rng, 75.0, 95.0) * std::numbers::pi / 180.0;
  const double focal = 0.5 * cfg.image_size / std::tan(0.5 * fov);
  const double c = 0.5 * (cfg.image_size - 1);
  view.intrinsics << focal, 0, c, 0, focal, c, 0, 0, 1;
  view.width = cfg.image_size;
  view.height = cfg.image_size;
  view.image_id = "frame_" + std::to_string(index);
  return view;
}

void RenderDepth(CameraView& view, const std::vector<SynthBox>& boxes) {
  const Eigen::Matrix3d rotation = view.extrinsics.topLeftCorner<3, 3>();
  const Eigen::Vector3d position =
      -rotation.transpose() * view.extrinsics.topRightCorner<3, 1>();
  const double fx = view.intrinsics(0, 0), fy = view.intrinsics(1, 1);
  const double cx = view.intrinsics(0, 2), cy = view.intrinsics(1, 2);
  view.depth = DepthMap::Zero(view.height, view.width);
  for (int py = 0; py < view.height; ++py) {
    for (int px = 0; px < view.width; ++px) {
      // With a unit camera-z direction the ray parameter is the depth.
      const Eigen::Vector3d ray =
          rotation.transpose() *
          Eigen::Vector3d((px - cx) / fx, (py - cy) / fy, 1.0);
      double best = std::numeric_limits<double>::infinity();
      for (const SynthBox& box : boxes) {
        double t;
        if (RayBox(position, ray, box, &t)) best = std::min(best, t);
      }
      if (std::isfinite(best)) view.depth(py, px) = static_cast<float>(best);
    }
  }
}

// Area-weighted uniform samples on the six faces plus isotropic jitter.
void SampleSurface(Rng& rng, const SynthBox& box, int count, double jitter,
                   std::vector<Eigen::Vector3d>& out) {
  const Eigen::Vector3d s = box.size();
  const double areas[3] = {s.y() * s.z(), s.x() * s.z(), s.x() * s.y()};
  std::discrete_distribution<int> face({areas[0], areas[0], areas[1],
                                        areas[1], areas[2], areas[2]});
  std::normal_distribution<double> noise(0.0, jitter);
  for (int n = 0; n < count; ++n) {
    const int f = face(rng);
    const int axis = f / 2;
    Eigen::Vector3d p;
    for (int a = 0; a < 3; ++a) p[a] = Uniform(rng, box.min[a], box.max[a]);
    p[axis] = (f % 2 == 0) ? box.min[axis] : box.max[axis];
    if (jitter > 0.0) {
      for (int a = 0; a < 3; ++a) p[a] += noise(rng);
    }
    out.push_back(p);
  }
}

bool PlaceLayout(Rng& rng, const SynthConfig& cfg, int k,
                 std::vector<SynthBox>& boxes) {
  boxes.clear();
  std::vector<bool> supports(static_cast<size_t>(k), false);
  std::vector<bool> on_floor(static_cast<size_t>(k), false);
  for (int i = 0; i < k; ++i) {
    std::vector<int> bases;
    for (int b = 0; b < i; ++b) {
      if (on_floor[b] && !supports[b]) bases.push_back(b);
    }
    if (!bases.empty() && Uniform(rng, 0.0, 1.0) < cfg.stack_probability) {
      const int b = bases[UniformInt(rng, 0, static_cast<int>(bases.size()) - 1)];
      const SynthBox& base = boxes[b];
      const Eigen::Vector3d c = base.center();
      const double sx = base.size().x() * Uniform(rng, 0.4, 0.8);
      const double sy = base.size().y() * Uniform(rng, 0.4, 0.8);
      const double sz = Uniform(rng, 0.2, 0.6);
      SynthBox box;
      box.min = Eigen::Vector3d(c.x() - sx / 2, c.y() - sy / 2, base.max.z());
      box.max = Eigen::Vector3d(c.x() + sx / 2, c.y() + sy / 2,
                                base.max.z() + sz);
      supports[b] = true;
      boxes.push_back(box);
      continue;
    }
    bool placed = false;
    for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
      const Eigen::Vector3d size(Uniform(rng, 0.3, 1.2), Uniform(rng, 0.3, 1.2),
                                 Uniform(rng, 0.3, 1.5));
      if (size.x() >= cfg.room_extent || size.y() >= cfg.room_extent) continue;
      const double x = Uniform(rng, size.x() / 2, cfg.room_extent - size.x() / 2);
      const double y = Uniform(rng, size.y() / 2, cfg.room_extent - size.y() / 2);
      SynthBox box;
      box.min = Eigen::Vector3d(x - size.x() / 2, y - size.y() / 2, 0.0);
      box.max = Eigen::Vector3d(x + size.x() / 2, y + size.y() / 2, size.z());
      placed = true;
      for (int b = 0; b < i; ++b) {
        if (on_floor[b] && FootprintsOverlap(box, boxes[b], 0.05)) {
          placed = false;
          break;
        }
      }
      if (placed) boxes.push_back(box);
    }
    if (!placed) return false;
    on_floor[i] = true;
  }
  return true;
}

}  // namespace

const std::vector<std::string>& SynthPredicateRules() {
  static const std::vector<std::string> rules = {
      "higher than", "lower than",  "left",         "right",   "front",
      "behind",      "bigger than", "smaller than", "close by"};
  return rules;
}

void SynthConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "synth config: " + what);
  };
  if (min_instances < 1 || max_instances < min_instances) {
    fail("need 1 <= min_instances <= max_instances");
  }
  if (num_object_classes < 1) fail("num_object_classes must be >= 1");
  if (num_predicates < 1 ||
      num_predicates > static_cast<int>(SynthPredicateRules().size())) {
    fail("num_predicates must lie in [1, 9]");
  }
  if (distinct_categories && max_instances > num_object_classes) {
    fail("distinct categories need max_instances <= num_object_classes");
  }
  if (room_extent <= 0 || relation_radius < 0 || close_gap < 0 ||
      point_jitter < 0 || embedding_noise < 0 || edge_noise < 0) {
    fail("scales must be non-negative and the room non-empty");
  }
  if (stack_probability < 0 || stack_probability > 1 ||
      occluder_probability < 0 || occluder_probability > 1) {
    fail("probabilities must lie in [0, 1]");
  }
  if (points_per_instance < 1 || num_cameras < 1 || image_size < 2) {
    fail("need points, cameras and a non-trivial image size");
  }
  if (embedding_dim < num_object_classes) {
    fail("embedding_dim must be >= num_object_classes for basis vectors");
  }
  if (max_retries < 1 || num_scenes < 1) fail("retries and scenes >= 1");
}

int SynthPredicate(const SynthBox& s, const SynthBox& o,
                   const PredicateVocabulary& predicates,
                   const SynthConfig& config) {
  const int none = predicates.none_id();
  if ((s.center() - o.center()).norm() > config.relation_radius) return none;
  const Eigen::Vector3d cs = s.center(), co = o.center();
  const Eigen::Vector3d ss = s.size(), so = o.size();
  for (const std::string& name : SynthPredicateRules()) {
    const int id = predicates.real().find(name);
    if (id < 0) continue;
    bool fires = false;
    if (name == "higher than") {
      fires = s.min.z() >= o.max.z() - 1e-9;
    } else if (name == "lower than") {
      fires = s.max.z() <= o.min.z() + 1e-9;
    } else if (name == "left") {
      fires = co.x() - cs.x() > 0.5 * (ss.x() + so.x());
    } else if (name == "right") {
      fires = cs.x() - co.x() > 0.5 * (ss.x() + so.x());
    } else if (name == "front") {
      fires = co.y() - cs.y() > 0.5 * (ss.y() + so.y());
    } else if (name == "behind") {
      fires = cs.y() - co.y() > 0.5 * (ss.y() + so.y());
    } else if (name == "bigger than") {
      fires = s.volume() > 1.5 * o.volume();
    } else if (name == "smaller than") {
      fires = 1.5 * s.volume() < o.volume();
    } else if (name == "close by") {
      fires = BoxGap(s, o) < config.close_gap;
    }
    if (fires) return id;
  }
  return none;
}

std::uint64_t SceneSeed(std::uint64_t base, int index) {
  // splitmix64 step
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SynthScene GenerateScene(const SynthConfig& cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  SynthScene out;
  SceneBundle& bundle = out.bundle;
  bundle.object_vocab = Vocabulary(ObjectNames(cfg.num_object_classes));
  bundle.predicate_vocab = PredicateVocabulary(std::vector<std::string>(
      SynthPredicateRules().begin(),
      SynthPredicateRules().begin() + cfg.num_predicates));
  const PredicateVocabulary& preds = bundle.predicate_vocab;
  const int k = UniformInt(rng, cfg.min_instances, cfg.max_instances);

  // Every instance must take part in at least one relation, otherwise its
  // category is absent from the triplet set.
  bool ok = false;
  for (int attempt = 0; attempt < cfg.max_retries && !ok; ++attempt) {
    if (!PlaceLayout(rng, cfg, k, out.boxes)) continue;
    std::vector<bool> related(static_cast<size_t>(k), k == 1);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        if (SynthPredicate(out.boxes[i], out.boxes[j], preds, cfg) !=
            preds.none_id()) {
          related[i] = related[j] = true;
        }
      }
    }
    ok = std::all_of(related.begin(), related.end(), [](bool b) { return b; });
  }
  if (!ok) {
    throw Error(ErrorCode::kPlacementFailed,
                "no valid layout after " + std::to_string(cfg.max_retries) +
                    " attempts");
  }

  std::vector<int> categories(static_cast<size_t>(k));
  if (cfg.distinct_categories) {
    std::vector<int> pool(static_cast<size_t>(cfg.num_object_classes));
    for (int c = 0; c < cfg.num_object_classes; ++c) pool[c] = c;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::copy(pool.begin(), pool.begin() + k, categories.begin());
  } else {
    for (int& c : categories) c = UniformInt(rng, 0, cfg.num_object_classes - 1);
  }
  out.gt.node_labels = categories;

  std::vector<Eigen::Vector3d> points;
  for (int i = 0; i < k; ++i) {
    const int first = static_cast<int>(points.size());
    SampleSurface(rng, out.boxes[i], cfg.points_per_instance, cfg.point_jitter,
                  points);
    std::vector<int> mask(static_cast<size_t>(cfg.points_per_instance));
    for (int n = 0; n < cfg.points_per_instance; ++n) mask[n] = first + n;
    bundle.masks.push_back(std::move(mask));
  }
  bundle.points.resize(static_cast<Eigen::Index>(points.size()), 3);
  for (size_t n = 0; n < points.size(); ++n) {
    bundle.points.row(static_cast<Eigen::Index>(n)) =
        points[n]
            .unaryExpr([](double x) { return static_cast<float>(x); })
            .transpose();
  }

  for (int v = 0; v < cfg.num_cameras; ++v) {
    bundle.views.push_back(MakeCamera(rng, cfg, v));
  }
  for (const CameraView& view : bundle.views) {
    if (Uniform(rng, 0.0, 1.0) >= cfg.occluder_probability) continue;
    const Eigen::Matrix3d r = view.extrinsics.topLeftCorner<3, 3>();
    const Eigen::Vector3d cam = -r.transpose() * view.extrinsics.topRightCorner<3, 1>();
    const Eigen::Vector3d aim = out.boxes[UniformInt(rng, 0, k - 1)].center();
    const Eigen::Vector3d c = cam + Uniform(rng, 0.35, 0.6) * (aim - cam);
    const double h = Uniform(rng, 0.15, 0.3);
    out.occluders.push_back({c.array() - h, c.array() + h});
  }
  std::vector<SynthBox> solids = out.boxes;
  solids.insert(solids.end(), out.occluders.begin(), out.occluders.end());
  for (CameraView& view : bundle.views) RenderDepth(view, solids);

  for (int e = 0; e < NumEdges(k); ++e) {
    const auto [i, j] = EdgePair(e, k);
    const int p = SynthPredicate(out.boxes[i], out.boxes[j], preds, cfg);
    if (p == preds.none_id()) continue;
    out.gt.edge_labels[{i, j}] = p;
    out.triplets.Add({bundle.object_vocab.name(categories[i]), preds.name(p),
                      bundle.object_vocab.name(categories[j])});
  }

  // Embeddings draw from their own stream so that geometry does not depend
  // on embedding options.
  Rng erng(SceneSeed(cfg.seed, -1));
  const int d = cfg.embedding_dim;
  auto noise = [&](double norm) -> Eigen::VectorXd {
    if (norm == 0.0) return Eigen::VectorXd::Zero(d);
    return norm * RandomUnit(erng, d);
  };
  auto basis = [&](int c) -> Eigen::VectorXd {
    return Eigen::VectorXd::Unit(d, c);
  };
  out.object_texts = EmbeddingTable(EmbeddingKind::kObjectText, d);
  for (int c = 0; c < cfg.num_object_classes; ++c) {
    out.object_texts.Add(bundle.object_vocab.name(c), basis(c));
  }
  out.images = EmbeddingTable(EmbeddingKind::kImage, d, true,
                              std::string(kCropNote));
  for (const CameraView& view : bundle.views) {
    Eigen::VectorXd frame = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < k; ++i) {
      out.images.Add(CropToken(view.image_id, i),
                     FloatUnit(basis(categories[i]) + noise(cfg.embedding_noise)));
      frame += basis(categories[i]);
    }
    out.images.Add(view.image_id,
                   FloatUnit(frame / k + noise(cfg.embedding_noise)));
  }

  std::vector<Eigen::VectorXd> subject_code, object_code, predicate_code;
  for (int c = 0; c < cfg.num_object_classes; ++c) {
    subject_code.push_back(RandomUnit(erng, d));
    object_code.push_back(RandomUnit(erng, d));
  }
  for (int p = 0; p < preds.num_real(); ++p) {
    predicate_code.push_back(RandomUnit(erng, d));
  }
  auto triplet_code = [&](int s, int p, int o) {
    return FloatUnit(subject_code[s] + predicate_code[p] + object_code[o]);
  };
  out.triplet_texts = EmbeddingTable(EmbeddingKind::kTripletText, d);
  for (const auto& [t, count] : out.triplets.entries()) {
    out.triplet_texts.Add(
        TripletToken(t),
        triplet_code(bundle.object_vocab.id(t.subject), preds.id(t.predicate),
                     bundle.object_vocab.id(t.object)));
  }
  out.edges = EmbeddingTable(EmbeddingKind::kEdge, d, true, "oracle");
  if (cfg.edge_embeddings) {
    for (int e = 0; e < NumEdges(k); ++e) {
      const auto [i, j] = EdgePair(e, k);
      const int p = out.gt.edge_label(i, j, preds.none_id());
      Eigen::VectorXd v = p == preds.none_id()
                              ? RandomUnit(erng, d)
                              : Eigen::VectorXd(triplet_code(categories[i], p,
                                                             categories[j]) +
                                                noise(cfg.edge_noise));
      out.edges.Add(EdgeToken(i, j), FloatUnit(v));
    }
  }
  return out;
}

void WriteSynthScene(const SynthScene& scene, const std::filesystem::path& dir) {
  WriteSceneBundle(scene.bundle, dir);
  WriteGroundTruth(scene.gt, scene.bundle.object_vocab,
                   scene.bundle.predicate_vocab, dir / kGroundTruthFile);
  WriteTripletSet(scene.triplets, dir / kTripletsFile);
  const std::filesystem::path emb = dir / "embeddings";
  WriteEmbeddingTable(scene.images, emb / "image.emb");
  WriteEmbeddingTable(scene.object_texts, emb / "object_text.emb");
  WriteEmbeddingTable(scene.triplet_texts, emb / "triplet_text.emb");
  if (scene.edges.size() > 0) WriteEmbeddingTable(scene.edges, emb / "edge.emb");
}

namespace {

#define WSSG_SYNTH_FIELDS(X)                                                  \
  X(min_instances) X(max_instances) X(num_object_classes) X(num_predicates)   \
  X(distinct_categories) X(room_extent) X(relation_radius) X(close_gap)       \
  X(stack_probability) X(points_per_instance) X(point_jitter) X(num_cameras)  \
  X(image_size) X(occluder_probability) X(embedding_dim) X(embedding_noise)   \
  X(edge_noise) X(edge_embeddings) X(max_retries) X(num_scenes) X(seed)

}  // namespace

SynthConfig ParseSynthConfig(const std::string& json_text) {
  SynthConfig cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("synth config: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kBadFormat, "synth config must be an object");
  }
  std::set<std::string> known;
#define WSSG_KNOWN(name) known.insert(#name);
  WSSG_SYNTH_FIELDS(WSSG_KNOWN)
#undef WSSG_KNOWN
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kBadFormat, "synth config: unknown key '" + key + "'");
    }
  }
  try {
#define WSSG_READ(name) \
  if (j.contains(#name)) j.at(#name).get_to(cfg.name);
    WSSG_SYNTH_FIELDS(WSSG_READ)
#undef WSSG_READ
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("synth config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string SynthConfigJson(const SynthConfig& cfg) {
  nlohmann::json j;
#define WSSG_WRITE(name) j[#name] = cfg.name;
  WSSG_SYNTH_FIELDS(WSSG_WRITE)
#undef WSSG_WRITE
  return j.dump(2) + "\n";
}

}  // namespace wssg
