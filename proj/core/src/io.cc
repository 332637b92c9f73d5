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

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wssg/error.h"

namespace wssg {
namespace {

using nlohmann::json;

constexpr const char* kSceneFormat = "wssg-scene/1";
constexpr const char* kGtFormat = "wssg-gt/1";
constexpr const char* kTripletFormat = "wssg-triplets/1";
constexpr const char* kEmbeddingFormat = "wssg-embeddings/1";
constexpr const char* kWeightFormat = "wssg-weights/1";
constexpr const char* kLogitsFormat = "wssg-logits/1";
constexpr const char* kSelectionFormat = "# wssg-selection/1";
constexpr const char* kAssignmentFormat = "# wssg-assignment/1";
constexpr const char* kMetricFormat = "wssg-metrics/1";

[[noreturn]] void BadFormat(const fs::path& file, const std::string& what) {
  throw Error(ErrorCode::kBadFormat, file.string() + ": " + what);
}

std::uint32_t ToLittle(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) |
        (v >> 24);
  }
  return v;
}

void PutU32(std::string& out, std::uint32_t v) {
  v = ToLittle(v);
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  out.append(bytes, 4);
}

void PutF32(std::string& out, double v) {
  PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

class ByteReader {
 public:
  ByteReader(const std::string& data, size_t pos, fs::path file)
      : data_(data), pos_(pos), file_(std::move(file)) {}

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v;
    std::memcpy(&v, data_.data() + pos_, 4);
    pos_ += 4;
    return ToLittle(v);
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string Bytes(size_t n) {
    Need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(size_t n) {
    if (data_.size() - pos_ < n) BadFormat(file_, "truncated binary payload");
  }

  const std::string& data_;
  size_t pos_;
  fs::path file_;
};

json ParseJson(const std::string& text, const fs::path& file) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    BadFormat(file, e.what());
  }
}

template <typename T>
T Field(const json& j, const char* key, const fs::path& file) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    BadFormat(file, std::string("field '") + key + "': " + e.what());
  }
}

void CheckFormat(const json& j, const char* expected, const fs::path& file) {
  if (Field<std::string>(j, "format", file) != expected) {
    BadFormat(file, std::string("expected format ") + expected);
  }
}

// Splits "<json header>\n<binary>" and parses the header.
json SplitHeader(const std::string& data, size_t* body, const fs::path& file) {
  const size_t newline = data.find('\n');
  if (newline == std::string::npos) BadFormat(file, "missing header line");
  *body = newline + 1;
  return ParseJson(data.substr(0, newline), file);
}

std::string FloatBlob(const float* values, size_t count) {
  std::string out;
  out.reserve(count * 4);
  for (size_t i = 0; i < count; ++i) PutF32(out, values[i]);
  return out;
}

std::vector<float> ReadFloatBlob(const fs::path& file, size_t count) {
  const std::string data = ReadTextFile(file);
  if (data.size() != count * 4) {
    BadFormat(file, "expected " + std::to_string(count) + " floats, found " +
                        std::to_string(data.size()) + " bytes");
  }
  ByteReader reader(data, 0, file);
  std::vector<float> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = reader.F32();
  return out;
}

void PutMatrix(std::string& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) PutF32(out, m(r, c));
  }
}

Eigen::MatrixXd TakeMatrix(ByteReader& reader, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = reader.F32();
  }
  return m;
}

json ModelConfigJson(const ModelConfig& c) {
  return {{"dim", c.dim},
          {"heads", c.heads},
          {"layers", c.layers},
          {"point_hidden", c.point_hidden},
          {"edge_hidden", c.edge_hidden},
          {"num_objects", c.num_objects},
          {"num_predicates", c.num_predicates},
          {"attention_residual", c.attention_residual}};
}

ModelConfig ParseModelConfig(const json& j, const fs::path& file) {
  ModelConfig c;
  c.dim = Field<int>(j, "dim", file);
  c.heads = Field<int>(j, "heads", file);
  c.layers = Field<int>(j, "layers", file);
  c.point_hidden = Field<std::vector<int>>(j, "point_hidden", file);
  c.edge_hidden = Field<int>(j, "edge_hidden", file);
  c.num_objects = Field<int>(j, "num_objects", file);
  c.num_predicates = Field<int>(j, "num_predicates", file);
  c.attention_residual = Field<bool>(j, "attention_residual", file);
  return c;
}

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Remainder of a line after the fields already extracted, without the
// separating blank.
std::string Rest(std::istringstream& in) {
  std::string rest;
  std::getline(in, rest);
  if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
  return rest;
}

double ParseDouble(const std::string& token, const fs::path& file) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0') BadFormat(file, "bad number " + token);
  return v;
}

}  // namespace

std::string ReadTextFile(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) BadFormat(file, "cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) BadFormat(file, "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) BadFormat(file, "write failed");
}

void WriteSceneBundle(const SceneBundle& bundle, const fs::path& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = kSceneFormat;
  manifest["points_file"] = "points.f32";
  manifest["num_points"] = bundle.points.rows();
  manifest["masks"] = bundle.masks;
  manifest["object_vocab"] = bundle.object_vocab.names();
  manifest["predicate_vocab"] = bundle.predicate_vocab.real().names();
  json views = json::array();
  for (size_t v = 0; v < bundle.views.size(); ++v) {
    const CameraView& view = bundle.views[v];
    std::vector<double> intr, extr;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) intr.push_back(view.intrinsics(r, c));
    }
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) extr.push_back(view.extrinsics(r, c));
    }
    const std::string depth_file = "depth_" + std::to_string(v) + ".f32";
    views.push_back({{"image_id", view.image_id},
                     {"width", view.width},
                     {"height", view.height},
                     {"intrinsics", intr},
                     {"extrinsics", extr},
                     {"depth_file", depth_file},
                     {"depth_rows", view.depth.rows()},
                     {"depth_cols", view.depth.cols()}});
    WriteTextFile(dir / depth_file,
                  FloatBlob(view.depth.data(),
                            static_cast<size_t>(view.depth.size())));
  }
  manifest["views"] = views;
  WriteTextFile(dir / "points.f32",
                FloatBlob(bundle.points.data(),
                          static_cast<size_t>(bundle.points.size())));
  WriteTextFile(dir / kSceneManifest, manifest.dump(2) + "\n");
}

SceneBundle ReadSceneBundle(const fs::path& dir) {
  const fs::path file = dir / kSceneManifest;
  const json manifest = ParseJson(ReadTextFile(file), file);
  CheckFormat(manifest, kSceneFormat, file);
  SceneBundle bundle;
  const auto num_points = Field<long long>(manifest, "num_points", file);
  if (num_points < 0) BadFormat(file, "negative point count");
  const std::vector<float> xyz = ReadFloatBlob(
      dir / Field<std::string>(manifest, "points_file", file),
      static_cast<size_t>(num_points) * 3);
  bundle.points = Eigen::Map<const PointMatrix>(xyz.data(), num_points, 3);
  bundle.masks = Field<std::vector<std::vector<int>>>(manifest, "masks", file);
  bundle.object_vocab = Vocabulary(
      Field<std::vector<std::string>>(manifest, "object_vocab", file));
  bundle.predicate_vocab = PredicateVocabulary(
      Field<std::vector<std::string>>(manifest, "predicate_vocab", file));
  for (const json& v : Field<json>(manifest, "views", file)) {
    CameraView view;
    view.image_id = Field<std::string>(v, "image_id", file);
    view.width = Field<int>(v, "width", file);
    view.height = Field<int>(v, "height", file);
    const auto intr = Field<std::vector<double>>(v, "intrinsics", file);
    const auto extr = Field<std::vector<double>>(v, "extrinsics", file);
    if (intr.size() != 9) BadFormat(file, "intrinsics need 9 values");
    if (extr.size() != 12 && extr.size() != 16) {
      BadFormat(file, "extrinsics need 12 or 16 values");
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) view.intrinsics(r, c) = intr[r * 3 + c];
    }
    view.extrinsics.setIdentity();
    for (size_t i = 0; i < extr.size(); ++i) {
      view.extrinsics(static_cast<int>(i / 4), static_cast<int>(i % 4)) =
          extr[i];
    }
    const int rows = Field<int>(v, "depth_rows", file);
    const int cols = Field<int>(v, "depth_cols", file);
    if (rows < 0 || cols < 0) BadFormat(file, "negative depth size");
    const std::vector<float> depth =
        ReadFloatBlob(dir / Field<std::string>(v, "depth_file", file),
                      static_cast<size_t>(rows) * cols);
    view.depth = Eigen::Map<const DepthMap>(depth.data(), rows, cols);
    bundle.views.push_back(std::move(view));
  }
  return bundle;
}

void WriteGroundTruth(const SceneGraphGT& gt, const Vocabulary& objects,
                      const PredicateVocabulary& predicates,
                      const fs::path& file) {
  json j;
  j["format"] = kGtFormat;
  json nodes = json::array();
  for (int label : gt.node_labels) nodes.push_back(objects.name(label));
  j["nodes"] = nodes;
  json edges = json::array();
  for (const auto& [pair, predicate] : gt.edge_labels) {
    edges.push_back({{"subject", pair.first},
                     {"object", pair.second},
                     {"predicate", predicates.name(predicate)}});
  }
  j["edges"] = edges;
  WriteTextFile(file, j.dump(2) + "\n");
}

SceneGraphGT ReadGroundTruth(const fs::path& file, const Vocabulary& objects,
                             const PredicateVocabulary& predicates) {
  const json j = ParseJson(ReadTextFile(file), file);
  CheckFormat(j, kGtFormat, file);
  SceneGraphGT gt;
  try {
    for (const auto& name : Field<std::vector<std::string>>(j, "nodes", file)) {
      gt.node_labels.push_back(objects.id(name));
    }
    const int k = static_cast<int>(gt.node_labels.size());
    for (const json& e : Field<json>(j, "edges", file)) {
      const int s = Field<int>(e, "subject", file);
      const int o = Field<int>(e, "object", file);
      if (s < 0 || o < 0 || s >= k || o >= k || s == o) {
        BadFormat(file, "edge pair out of range");
      }
      gt.edge_labels[{s, o}] =
          predicates.id(Field<std::string>(e, "predicate", file));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadFormat) throw;
    BadFormat(file, e.what());
  }
  return gt;
}

void WriteTripletSet(const TripletSet& triplets, const fs::path& file) {
  json list = json::array();
  for (const auto& [t, count] : triplets.entries()) {
    list.push_back({{"subject", t.subject},
                    {"predicate", t.predicate},
                    {"object", t.object},
                    {"count", count}});
  }
  const json j = {{"format", kTripletFormat}, {"triplets", list}};
  WriteTextFile(file, j.dump(2) + "\n");
}

TripletSet ReadTripletSet(const fs::path& file) {
  const json j = ParseJson(ReadTextFile(file), file);
  CheckFormat(j, kTripletFormat, file);
  TripletSet set;
  for (const json& t : Field<json>(j, "triplets", file)) {
    const int count = Field<int>(t, "count", file);
    if (count < 1) BadFormat(file, "triplet counts must be positive");
    set.Add({Field<std::string>(t, "subject", file),
             Field<std::string>(t, "predicate", file),
             Field<std::string>(t, "object", file)},
            count);
  }
  return set;
}

void WriteEmbeddingTable(const EmbeddingTable& table, const fs::path& file) {
  const json header = {{"format", kEmbeddingFormat},
                       {"kind", EmbeddingKindName(table.kind())},
                       {"dim", table.dim()},
                       {"normalized", table.normalized()},
                       {"note", table.note()},
                       {"count", table.size()}};
  std::string out = header.dump() + "\n";
  for (int r = 0; r < table.size(); ++r) {
    const std::string& token = table.tokens()[r];
    PutU32(out, static_cast<std::uint32_t>(token.size()));
    out += token;
    for (double v : table.row(r)) PutF32(out, v);
  }
  WriteTextFile(file, out);
}

EmbeddingTable ReadEmbeddingTable(const fs::path& file) {
  const std::string data = ReadTextFile(file);
  size_t body = 0;
  const json header = SplitHeader(data, &body, file);
  CheckFormat(header, kEmbeddingFormat, file);
  const int dim = Field<int>(header, "dim", file);
  const int count = Field<int>(header, "count", file);
  if (dim < 1 || count < 0) BadFormat(file, "bad dim or count");
  EmbeddingTable table(
      ParseEmbeddingKind(Field<std::string>(header, "kind", file)), dim,
      Field<bool>(header, "normalized", file),
      Field<std::string>(header, "note", file));
  ByteReader reader(data, body, file);
  for (int r = 0; r < count; ++r) {
    const std::string token = reader.Bytes(reader.U32());
    Eigen::VectorXd v(dim);
    for (int c = 0; c < dim; ++c) v[c] = reader.F32();
    if (table.Contains(token)) BadFormat(file, "duplicate token " + token);
    try {
      table.Add(token, v);
    } catch (const Error& e) {
      BadFormat(file, e.what());
    }
  }
  if (!reader.done()) BadFormat(file, "trailing bytes");
  return table;
}

void WriteWeights(const WeightBundle& weights, const fs::path& file) {
  const json header = {{"format", kWeightFormat},
                       {"config", ModelConfigJson(weights.config())},
                       {"records", weights.tensors().size()}};
  std::string out = header.dump() + "\n";
  for (const auto& [name, m] : weights.tensors()) {
    PutU32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    PutU32(out, static_cast<std::uint32_t>(m.rows()));
    PutU32(out, static_cast<std::uint32_t>(m.cols()));
    PutMatrix(out, m);
  }
  WriteTextFile(file, out);
}

WeightBundle ReadWeights(const fs::path& file) {
  const std::string data = ReadTextFile(file);
  size_t body = 0;
  const json header = SplitHeader(data, &body, file);
  CheckFormat(header, kWeightFormat, file);
  WeightBundle weights(
      ParseModelConfig(Field<json>(header, "config", file), file));
  const auto expected = ExpectedWeightShapes(weights.config());
  const int records = Field<int>(header, "records", file);
  ByteReader reader(data, body, file);
  std::set<std::string> seen;
  for (int r = 0; r < records; ++r) {
    const std::string name = reader.Bytes(reader.U32());
    const int rows = static_cast<int>(reader.U32());
    const int cols = static_cast<int>(reader.U32());
    if (!expected.count(name)) {
      throw Error(ErrorCode::kBadWeights, "unknown weight '" + name + "'");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kBadWeights, "duplicate weight '" + name + "'");
    }
    weights.Set(name, TakeMatrix(reader, rows, cols));
  }
  if (!reader.done()) BadFormat(file, "trailing bytes");
  weights.Validate();
  return weights;
}

void WriteLogits(const Logits& logits, const fs::path& file) {
  const json header = {
      {"format", kLogitsFormat},
      {"blocks",
       {{{"name", "node_logits"},
         {"rows", logits.node.rows()},
         {"cols", logits.node.cols()}},
        {{"name", "edge_logits"},
         {"rows", logits.edge.rows()},
         {"cols", logits.edge.cols()}}}}};
  std::string out = header.dump() + "\n";
  PutMatrix(out, logits.node);
  PutMatrix(out, logits.edge);
  WriteTextFile(file, out);
}

Logits ReadLogits(const fs::path& file) {
  const std::string data = ReadTextFile(file);
  size_t body = 0;
  const json header = SplitHeader(data, &body, file);
  CheckFormat(header, kLogitsFormat, file);
  const json blocks = Field<json>(header, "blocks", file);
  if (!blocks.is_array() || blocks.size() != 2) {
    BadFormat(file, "expected two blocks");
  }
  ByteReader reader(data, body, file);
  Logits logits;
  const char* names[] = {"node_logits", "edge_logits"};
  Eigen::MatrixXd* targets[] = {&logits.node, &logits.edge};
  for (int b = 0; b < 2; ++b) {
    if (Field<std::string>(blocks[b], "name", file) != names[b]) {
      BadFormat(file, std::string("expected block ") + names[b]);
    }
    const int rows = Field<int>(blocks[b], "rows", file);
    const int cols = Field<int>(blocks[b], "cols", file);
    if (rows < 0 || cols < 0) BadFormat(file, "negative block size");
    *targets[b] = TakeMatrix(reader, rows, cols);
  }
  if (!reader.done()) BadFormat(file, "trailing bytes");
  return logits;
}

void WriteViewSelections(
    const std::vector<std::optional<ViewSelection>>& selections,
    const fs::path& file) {
  std::string out = std::string(kSelectionFormat) + "\n";
  out += "instances " + std::to_string(selections.size()) + "\n";
  for (size_t i = 0; i < selections.size(); ++i) {
    const std::string id = std::to_string(i);
    if (!selections[i]) {
      out += id + " none\n";
      continue;
    }
    for (const ViewChoice& c : selections[i]->views) {
      out += id + " " + std::to_string(c.view_id) + " " + Fixed6(c.score) +
             " " + std::to_string(c.crop.x0) + " " + std::to_string(c.crop.y0) +
             " " + std::to_string(c.crop.x1) + " " +
             std::to_string(c.crop.y1) + "\n";
    }
  }
  WriteTextFile(file, out);
}

std::vector<std::optional<ViewSelection>> ReadViewSelections(
    const fs::path& file) {
  std::istringstream in(ReadTextFile(file));
  std::string line;
  if (!std::getline(in, line) || line != kSelectionFormat) {
    BadFormat(file, "missing selection header");
  }
  std::string word;
  long long count = -1;
  if (!std::getline(in, line)) BadFormat(file, "missing instance count");
  std::istringstream head(line);
  if (!(head >> word >> count) || word != "instances" || count < 0) {
    BadFormat(file, "bad instance count");
  }
  std::vector<std::optional<ViewSelection>> out(static_cast<size_t>(count));
  std::vector<bool> seen_none(out.size(), false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long instance = -1;
    std::string view;
    if (!(fields >> instance >> view) || instance < 0 || instance >= count) {
      BadFormat(file, "bad selection line: " + line);
    }
    if (view == "none") {
      if (out[instance]) BadFormat(file, "instance listed twice: " + line);
      seen_none[instance] = true;
      continue;
    }
    std::string score;
    ViewChoice choice;
    if (!(fields >> score >> choice.crop.x0 >> choice.crop.y0 >>
          choice.crop.x1 >> choice.crop.y1)) {
      BadFormat(file, "bad selection line: " + line);
    }
    choice.view_id = static_cast<int>(ParseDouble(view, file));
    choice.score = ParseDouble(score, file);
    if (seen_none[instance]) BadFormat(file, "instance listed twice: " + line);
    if (!out[instance]) out[instance] = ViewSelection{};
    out[instance]->views.push_back(choice);
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (!out[i] && !seen_none[i]) {
      BadFormat(file, "instance " + std::to_string(i) + " missing");
    }
  }
  return out;
}

void WriteAssignment(const PseudoLabelAssignment& assignment,
                     const Vocabulary& objects,
                     const PredicateVocabulary& predicates,
                     const fs::path& file) {
  std::string out = std::string(kAssignmentFormat) + "\n";
  out += "edge_source " + assignment.edge_source + "\n";
  out += "nodes " + std::to_string(assignment.nodes.size()) + "\n";
  for (size_t i = 0; i < assignment.nodes.size(); ++i) {
    const NodePseudoLabel& n = assignment.nodes[i];
    out += "node " + std::to_string(i) + " " +
           std::string(MatchMethodName(n.method)) + " " + Fixed6(n.score) +
           " " + objects.name(n.category) + "\n";
  }
  const int k = static_cast<int>(assignment.nodes.size());
  if (assignment.edges.size() != static_cast<size_t>(NumEdges(k))) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge labels do not cover all ordered pairs");
  }
  out += "edges " + std::to_string(assignment.edges.size()) + "\n";
  for (int e = 0; e < NumEdges(k); ++e) {
    const auto [i, j] = EdgePair(e, k);
    const EdgePseudoLabel& l = assignment.edges[e];
    out += "edge " + std::to_string(i) + " " + std::to_string(j) + " " +
           Fixed6(l.score) + " " + std::to_string(l.triplet) + " " +
           predicates.name(l.predicate) + "\n";
  }
  WriteTextFile(file, out);
}

PseudoLabelAssignment ReadAssignment(const fs::path& file,
                                     const Vocabulary& objects,
                                     const PredicateVocabulary& predicates) {
  std::istringstream in(ReadTextFile(file));
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) BadFormat(file, std::string("missing ") + what);
    return std::istringstream(line);
  };
  next("header");
  if (line != kAssignmentFormat) BadFormat(file, "missing assignment header");
  PseudoLabelAssignment a;
  std::string word;
  {
    auto f = next("edge_source");
    if (!(f >> word) || word != "edge_source") BadFormat(file, "edge_source");
    a.edge_source = Rest(f);
  }
  long long count = -1;
  {
    auto f = next("node count");
    if (!(f >> word >> count) || word != "nodes" || count < 0) {
      BadFormat(file, "bad node count");
    }
  }
  try {
    for (long long i = 0; i < count; ++i) {
      auto f = next("node line");
      long long id = -1;
      std::string method, score;
      if (!(f >> word >> id >> method >> score) || word != "node" || id != i) {
        BadFormat(file, "bad node line: " + line);
      }
      a.nodes.push_back({objects.id(Rest(f)), ParseMatchMethod(method),
                         ParseDouble(score, file)});
    }
    const int k = static_cast<int>(count);
    {
      auto f = next("edge count");
      if (!(f >> word >> count) || word != "edges" || count != NumEdges(k)) {
        BadFormat(file, "bad edge count");
      }
    }
    for (int e = 0; e < NumEdges(k); ++e) {
      auto f = next("edge line");
      int i = -1, j = -1, triplet = -2;
      std::string score;
      if (!(f >> word >> i >> j >> score >> triplet) || word != "edge" ||
          std::make_pair(i, j) != EdgePair(e, k)) {
        BadFormat(file, "bad edge line: " + line);
      }
      a.edges.push_back(
          {predicates.id(Rest(f)), ParseDouble(score, file), triplet});
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadFormat) throw;
    BadFormat(file, e.what());
  }
  return a;
}

std::string MetricReportJson(const MetricReport& report) {
  json values = json::array();
  for (const auto& [name, value] : report.values) {
    values.push_back({{"name", name}, {"value", value}});
  }
  const json j = {{"format", kMetricFormat},
                  {"values", values},
                  {"absent", report.absent}};
  return j.dump(2) + "\n";
}

MetricReport ParseMetricReport(const std::string& text) {
  const fs::path file("<metrics>");
  const json j = ParseJson(text, file);
  CheckFormat(j, kMetricFormat, file);
  MetricReport report;
  for (const json& v : Field<json>(j, "values", file)) {
    report.values.emplace_back(Field<std::string>(v, "name", file),
                               Field<double>(v, "value", file));
  }
  report.absent = Field<std::vector<std::string>>(j, "absent", file);
  return report;
}

void WriteMetricReport(const MetricReport& report, const fs::path& file) {
  WriteTextFile(file, MetricReportJson(report));
}

MetricReport ReadMetricReport(const fs::path& file) {
  try {
    return ParseMetricReport(ReadTextFile(file));
  } catch (const Error& e) {
    BadFormat(file, e.what());
  }
}

PredicateVocabFile ReadPredicateVocabFile(const fs::path& file) {
  const json j = ParseJson(ReadTextFile(file), file);
  PredicateVocabFile out;
  out.predicates = Field<std::vector<std::string>>(j, "predicates", file);
  const json split = Field<json>(j, "split", file);
  out.split.head = Field<std::vector<std::string>>(split, "head", file);
  out.split.body = Field<std::vector<std::string>>(split, "body", file);
  out.split.tail = Field<std::vector<std::string>>(split, "tail", file);
  return out;
}

}  // namespace wssg
