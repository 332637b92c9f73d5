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

#include "wssg/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "wssg/error.h"
#include "wssg/parallel.h"

namespace wssg {

std::vector<PixelProjection> ProjectPoints(const Eigen::MatrixX3d& points,
                                           const CameraView& view) {
  if (std::abs(view.intrinsics.determinant()) < 1e-12) {
    throw Error(ErrorCode::kBadCamera, "intrinsics are singular");
  }
  const Eigen::Matrix<double, 3, 4> world_to_pixel =
      view.intrinsics * view.extrinsics.topRows<3>();

  std::vector<PixelProjection> out(static_cast<size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::Vector4d world(points(i, 0), points(i, 1), points(i, 2), 1.0);
    const Eigen::Vector3d pixel = world_to_pixel * world;
    PixelProjection& p = out[static_cast<size_t>(i)];
    p.point_index = static_cast<int>(i);
    p.z = pixel.z();
    if (p.z <= 0.0) continue;
    p.u = pixel.x() / p.z;
    p.v = pixel.y() / p.z;
    p.valid = p.u >= 0.0 && p.u < view.width && p.v >= 0.0 &&
              p.v < view.height;
  }
  return out;
}

bool DepthVisible(const PixelProjection& projection, const DepthMap& depth,
                  double depth_tolerance) {
  if (!projection.valid) return false;
  // u < width, so rounding can only step one past the last column.
  const auto col = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::lround(projection.u)), depth.cols() - 1);
  const auto row = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::lround(projection.v)), depth.rows() - 1);
  const double stored = depth(row, col);
  return stored > 0.0 && std::abs(projection.z - stored) <= depth_tolerance;
}

ViewSelection SelectTopViews(const Eigen::MatrixX3d& instance_points,
                             const std::vector<CameraView>& views,
                             const ProjectionConfig& config) {
  if (config.top_k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  }
  if (instance_points.rows() == 0) {
    throw Error(ErrorCode::kEmptyInstance, "instance has no points");
  }
  std::vector<ViewChoice> candidates;
  for (size_t v = 0; v < views.size(); ++v) {
    const CameraView& view = views[v];
    int visible = 0;
    int min_x = std::numeric_limits<int>::max(), min_y = min_x;
    int max_x = std::numeric_limits<int>::min(), max_y = max_x;
    for (const PixelProjection& p : ProjectPoints(instance_points, view)) {
      if (!DepthVisible(p, view.depth, config.depth_tolerance)) continue;
      ++visible;
      const int px = static_cast<int>(std::floor(p.u));
      const int py = static_cast<int>(std::floor(p.v));
      min_x = std::min(min_x, px);
      max_x = std::max(max_x, px);
      min_y = std::min(min_y, py);
      max_y = std::max(max_y, py);
    }
    if (visible == 0) continue;
    ViewChoice choice;
    choice.view_id = static_cast<int>(v);
    choice.score =
        static_cast<double>(visible) / static_cast<double>(instance_points.rows());
    choice.crop.x0 = std::max(0, min_x - config.crop_pad);
    choice.crop.y0 = std::max(0, min_y - config.crop_pad);
    choice.crop.x1 = std::min(view.width - 1, max_x + config.crop_pad);
    choice.crop.y1 = std::min(view.height - 1, max_y + config.crop_pad);
    candidates.push_back(choice);
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoVisibleView, "no view sees the instance");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ViewChoice& a, const ViewChoice& b) {
                     return a.score > b.score;
                   });
  if (static_cast<int>(candidates.size()) > config.top_k) {
    candidates.resize(static_cast<size_t>(config.top_k));
  }
  return ViewSelection{std::move(candidates)};
}

std::vector<std::optional<ViewSelection>> SelectSceneViews(
    const SceneBundle& bundle, const ProjectionConfig& config, int threads) {
  std::vector<std::optional<ViewSelection>> out(
      static_cast<size_t>(bundle.num_instances()));
  ParallelFor(bundle.num_instances(), threads, [&](int k) {
    try {
      out[k] = SelectTopViews(bundle.instance_points(k), bundle.views, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoVisibleView) throw;
    }
  });
  return out;
}

}  // namespace wssg
