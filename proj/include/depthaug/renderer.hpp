// Copyright 2026 The depthaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depthaug/core.hpp"
#include "depthaug/geometry.hpp"
#include "depthaug/viewsphere.hpp"

namespace depthaug {

/// Metric depth range mapped onto (0, 1]: znear → 1, zfar → 0.
struct DepthWindow {
  double znear = 350;  // mm
  double zfar = 850;   // mm

  double range() const { return zfar - znear; }
  bool operator==(const DepthWindow&) const = default;
};

/// Single-channel normalized depth image, row-major. 0 is background;
/// closer surfaces have larger values.
struct DepthPatch {
  int width = 0;
  int height = 0;
  std::vector<float> values;
  DepthWindow window;

  DepthPatch() = default;
  DepthPatch(int w, int h, DepthWindow win = {})
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0f), window(win) {}

  std::size_t size() const { return values.size(); }
  float& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  float at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  bool same_shape(const DepthPatch& o) const { return width == o.width && height == o.height; }

  /// Pixel-wise equality of dimensions and values; window metadata ignored.
  bool same_pixels(const DepthPatch& o) const { return same_shape(o) && values == o.values; }

  float max_value() const {
    float m = 0;
    for (float v : values) m = std::max(m, v);
    return m;
  }
};

/// Binary mask: 1 where the source patch is nonzero.
struct ForegroundMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  ForegroundMask() = default;
  ForegroundMask(int w, int h)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t size() const { return values.size(); }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto v : values) n += v;
    return n;
  }
  bool same_shape(const DepthPatch& p) const { return width == p.width && height == p.height; }
  bool operator==(const ForegroundMask&) const = default;
};

inline ForegroundMask foreground_mask(const DepthPatch& patch) {
  ForegroundMask m(patch.width, patch.height);
  for (std::size_t i = 0; i < patch.size(); ++i) m.values[i] = patch.values[i] != 0.0f ? 1 : 0;
  return m;
}

/// The mask as a {0,1}-valued patch.
inline DepthPatch mask_as_patch(const ForegroundMask& m) {
  DepthPatch p(m.width, m.height);
  for (std::size_t i = 0; i < m.size(); ++i) p.values[i] = m.values[i];
  return p;
}

/// Smallest value a rendered surface can take; surfaces beyond zfar are
/// clamped here so they never read as background.
inline constexpr float kMinSurfaceValue = 1e-6f;

inline float normalize_depth(double z, const DepthWindow& w) {
  const double v = (w.zfar - z) / w.range();
  return static_cast<float>(std::clamp(v, static_cast<double>(kMinSurfaceValue), 1.0));
}

struct RenderConfig {
  int width = 64;
  int height = 64;
  double depth_window = 500;  // mm, centered on the camera-to-center distance
  double focal = 0;           // pixels; 0 selects auto-framing
  double fill_fraction = 0.9; // auto-framing: share of the patch the bounding sphere spans

  void validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("render: patch size must be positive");
    if (!(depth_window > 0)) throw ConfigError("render: depth window must be positive");
    if (focal < 0) throw ConfigError("render: focal must be non-negative");
    if (!(fill_fraction > 0 && fill_fraction <= 1)) throw ConfigError("render: fill fraction must be in (0, 1]");
  }

  DepthWindow window_at(double distance) const {
    return {distance - depth_window / 2, distance + depth_window / 2};
  }
};

/// Focal length (pixels) at which a sphere of `object_radius` seen from
/// `distance` spans `fill` of the smaller patch side. Falls back to a 90°
/// field of view when the camera is inside the sphere.
inline double auto_focal(double object_radius, double distance, int width, int height, double fill) {
  const double half = 0.5 * std::min(width, height);
  if (!(object_radius > 0) || distance <= object_radius) return half;
  const double half_angle = std::asin(object_radius / distance);
  return fill * half / std::tan(half_angle);
}

namespace detail {

struct ClipVertex {
  double x, y, z;  // camera frame
};

// Keeps the part of a camera-frame triangle with z >= near.
inline int clip_near(const std::array<ClipVertex, 3>& in, double near, std::array<ClipVertex, 4>& out) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const ClipVertex& a = in[i];
    const ClipVertex& b = in[(i + 1) % 3];
    const bool a_in = a.z >= near, b_in = b.z >= near;
    if (a_in) out[n++] = a;
    if (a_in != b_in) {
      const double t = (near - a.z) / (b.z - a.z);
      out[n++] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), near};
    }
  }
  return n;
}

struct ScreenVertex {
  double x, y;   // pixel coordinates
  double inv_z;  // 1 / camera depth
};

// Top-left rule for a clockwise-on-screen (x right, y down) triangle with
// positive edge functions inside.
inline bool is_top_left(const ScreenVertex& a, const ScreenVertex& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  return (dy == 0 && dx > 0) || dy < 0;
}

inline double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

inline void raster_triangle(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2, int width, int height,
                            std::span<double> zbuf) {
  double area = edge(v0, v1, v2.x, v2.y);
  if (area == 0 || !std::isfinite(area)) return;
  if (area < 0) {
    std::swap(v1, v2);
    area = -area;
  }
  const int col0 = std::max(0, static_cast<int>(std::floor(std::min({v0.x, v1.x, v2.x}) - 0.5)));
  const int col1 = std::min(width - 1, static_cast<int>(std::ceil(std::max({v0.x, v1.x, v2.x}) - 0.5)));
  const int row0 = std::max(0, static_cast<int>(std::floor(std::min({v0.y, v1.y, v2.y}) - 0.5)));
  const int row1 = std::min(height - 1, static_cast<int>(std::ceil(std::max({v0.y, v1.y, v2.y}) - 0.5)));
  const bool tl0 = is_top_left(v1, v2), tl1 = is_top_left(v2, v0), tl2 = is_top_left(v0, v1);
  for (int row = row0; row <= row1; ++row) {
    const double py = row + 0.5;
    for (int col = col0; col <= col1; ++col) {
      const double px = col + 0.5;
      const double w0 = edge(v1, v2, px, py);
      const double w1 = edge(v2, v0, px, py);
      const double w2 = edge(v0, v1, px, py);
      if (w0 < 0 || w1 < 0 || w2 < 0) continue;
      if ((w0 == 0 && !tl0) || (w1 == 0 && !tl1) || (w2 == 0 && !tl2)) continue;
      // 1/z is affine in screen space.
      const double inv_z = (w0 * v0.inv_z + w1 * v1.inv_z + w2 * v2.inv_z) / area;
      if (!(inv_z > 0)) continue;
      const double z = 1.0 / inv_z;
      double& slot = zbuf[static_cast<std::size_t>(row) * width + col];
      if (z < slot) slot = z;
    }
  }
}

}  // namespace detail

/// Near clipping distance in camera units (mm).
inline constexpr double kNearClip = 1e-3;

/// Metric z-buffer: nearest camera-frame depth per pixel, +inf where no
/// surface is hit. Triangles are two-sided and clipped at kNearClip.
inline std::vector<double> render_zbuffer(const TriangleMesh& mesh, const Camera& camera) {
  camera.validate();
  mesh.validate();
  const std::size_t n = static_cast<std::size_t>(camera.width) * camera.height;
  std::vector<double> zbuf(n, std::numeric_limits<double>::infinity());
  std::vector<Vec3> cam(mesh.vertices.size());
  for (std::size_t i = 0; i < cam.size(); ++i) cam[i] = camera.pose.to_camera(mesh.vertices[i]);
  auto project = [&](const detail::ClipVertex& v) {
    return detail::ScreenVertex{camera.cx + camera.focal * v.x / v.z, camera.cy + camera.focal * v.y / v.z,
                                1.0 / v.z};
  };
  for (const auto& tri : mesh.triangles) {
    std::array<detail::ClipVertex, 3> in;
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = cam[tri[k]];
      in[k] = {p.x, p.y, p.z};
    }
    if (in[0].z < kNearClip && in[1].z < kNearClip && in[2].z < kNearClip) continue;
    std::array<detail::ClipVertex, 4> poly;
    const int count = detail::clip_near(in, kNearClip, poly);
    for (int k = 1; k + 1 < count; ++k)
      detail::raster_triangle(project(poly[0]), project(poly[k]), project(poly[k + 1]), camera.width,
                              camera.height, zbuf);
  }
  return zbuf;
}

/// Renders the mesh into a normalized depth patch over `window`.
/// A camera inside the mesh bounding sphere is reported as a warning.
inline DepthPatch render_depth(const TriangleMesh& mesh, const Camera& camera, const DepthWindow& window,
                               Diagnostics* diag = nullptr) {
  if (!(window.znear < window.zfar)) throw ConfigError("render: znear must be below zfar");
  if (!mesh.vertices.empty()) {
    const Vec3 c = mesh.centroid();
    if (norm(camera.pose.translation - c) <= mesh.bounding_radius(c))
      warn(diag, "render: camera is inside the mesh bounding sphere");
  }
  const auto zbuf = render_zbuffer(mesh, camera);
  DepthPatch patch(camera.width, camera.height, window);
  for (std::size_t i = 0; i < zbuf.size(); ++i)
    if (std::isfinite(zbuf[i])) patch.values[i] = normalize_depth(zbuf[i], window);
  return patch;
}

/// As above, with the window centered on the camera's distance to the
/// world origin and patch size taken from `cfg`.
inline DepthPatch render_depth(const TriangleMesh& mesh, const Camera& camera, const RenderConfig& cfg,
                               Diagnostics* diag = nullptr) {
  cfg.validate();
  return render_depth(mesh, camera, cfg.window_at(norm(camera.pose.translation)), diag);
}

struct RenderedView {
  DepthPatch patch;
  Viewpoint viewpoint;
  bool empty = false;  // no foreground pixel (object outside the frustum)
};

/// Thrown by render_views; names the failing viewpoint.
class ViewError : public std::runtime_error {
 public:
  ViewError(std::size_t index, const std::string& what)
      : std::runtime_error("viewpoint " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Camera for a viewpoint after the mesh has been centered at the origin.
inline Camera view_camera(const Viewpoint& vp, const RenderConfig& cfg, double object_radius) {
  Camera cam;
  cam.pose = vp.camera_pose;
  cam.width = cfg.width;
  cam.height = cfg.height;
  cam.cx = 0.5 * cfg.width;
  cam.cy = 0.5 * cfg.height;
  cam.focal = cfg.focal > 0 ? cfg.focal
                            : auto_focal(object_radius, norm(vp.position()), cfg.width, cfg.height,
                                         cfg.fill_fraction);
  return cam;
}

/// One patch per viewpoint, in input order. The mesh is translated so its
/// centroid sits at the origin the viewpoints look at. Views run on
/// `workers` threads (0 = hardware concurrency); each writes its own slot.
inline std::vector<RenderedView> render_views(const TriangleMesh& mesh, std::span<const Viewpoint> viewpoints,
                                              const RenderConfig& cfg, unsigned workers = 1,
                                              Diagnostics* diag = nullptr) {
  cfg.validate();
  mesh.validate();
  const TriangleMesh centered = mesh.translated(-mesh.centroid());
  const double radius = centered.bounding_radius({});
  std::vector<RenderedView> out(viewpoints.size());
  parallel_for(viewpoints.size(), workers, [&](std::size_t i) {
    try {
      const Viewpoint& vp = viewpoints[i];
      RenderedView& rv = out[i];
      rv.viewpoint = vp;
      rv.patch = render_depth(centered, view_camera(vp, cfg, radius), cfg, diag);
      rv.empty = rv.patch.max_value() == 0.0f;
    } catch (const std::exception& e) {
      throw ViewError(i, e.what());
    }
  });
  return out;
}

}  // namespace depthaug
