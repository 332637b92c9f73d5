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

#ifndef WSSG_PROJECTION_H_
#define WSSG_PROJECTION_H_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wssg/scene.h"

namespace wssg {

struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;  // camera-space depth, meters
  int point_index = 0;
  bool valid = false;
};

// Inclusive pixel bounds [x0, x1] x [y0, y1].
struct CropRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool operator==(const CropRect&) const = default;
};

struct ViewChoice {
  int view_id = 0;
  double score = 0.0;  // fraction of instance points visible in the view
  CropRect crop;

  bool operator==(const ViewChoice&) const = default;
};

// Best views for one instance, score non-increasing.
struct ViewSelection {
  std::vector<ViewChoice> views;

  bool operator==(const ViewSelection&) const = default;
};

struct ProjectionConfig {
  int top_k = 5;
  double depth_tolerance = 0.05;  // meters
  int crop_pad = 8;               // pixels
};

// Maps world points through extrinsics then intrinsics. Points behind the
// camera or outside the image are returned with valid == false.
std::vector<PixelProjection> ProjectPoints(const Eigen::MatrixX3d& points,
                                           const CameraView& view);

// Nearest-pixel depth test against the view's depth map.
bool DepthVisible(const PixelProjection& projection, const DepthMap& depth,
                  double depth_tolerance);

// Throws kNoVisibleView when no view sees any point of the instance.
ViewSelection SelectTopViews(const Eigen::MatrixX3d& instance_points,
                             const std::vector<CameraView>& views,
                             const ProjectionConfig& config);

// Per-instance selections for a whole scene; instances no view sees are
// std::nullopt.
std::vector<std::optional<ViewSelection>> SelectSceneViews(
    const SceneBundle& bundle, const ProjectionConfig& config,
    int threads = 1);

}  // namespace wssg

#endif  // WSSG_PROJECTION_H_
