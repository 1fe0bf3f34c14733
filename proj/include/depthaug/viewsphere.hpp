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
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "depthaug/geometry.hpp"

namespace depthaug {

/// Orientation of the base icosahedron.
///  - canonical: vertices at the cyclic permutations of (0, ±1, ±φ).
///  - pole_aligned: rotated so that two vertices sit on ±z.
/// The upper-hemisphere vertex count depends on this choice; at three
/// subdivisions canonical gives 337 and pole_aligned gives 341.
enum class IcosahedronOrientation { canonical, pole_aligned };
enum class Hemisphere { full, upper };
enum class Symmetry { regular, plane_symmetric, axis_symmetric };

inline constexpr int kMaxSubdivisions = 6;

inline TriangleMesh base_icosahedron(IcosahedronOrientation orientation) {
  constexpr double phi = std::numbers::phi;
  TriangleMesh m;
  m.vertices = {{-1, phi, 0},  {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi},  {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7}, {9, 8, 1}};
  for (auto& v : m.vertices) v = normalized(v);
  if (orientation == IcosahedronOrientation::pole_aligned) {
    // Rotate about x so that vertex 5, (0, 1, φ), lands on +z.
    const double a = std::atan2(1.0, phi);
    const Quaternion q = Quaternion::from_axis_angle({1, 0, 0}, a);
    for (auto& v : m.vertices) v = q.rotate(v);
  }
  return m;
}

/// Unit icosphere: each subdivision splits every face into four and
/// re-projects new vertices onto the sphere, so (V, E, F) evolves as
/// V' = V + E, E' = 2E + 3F, F' = 4F from (12, 30, 20). Vertex order is
/// deterministic: base vertices first, then edge midpoints in face order.
inline TriangleMesh icosphere(int subdivisions,
                              IcosahedronOrientation orientation = IcosahedronOrientation::canonical) {
  if (subdivisions < 0 || subdivisions > kMaxSubdivisions)
    throw ConfigError("icosphere: subdivisions must be in [0, " +
                      std::to_string(kMaxSubdivisions) + "]");
  TriangleMesh mesh = base_icosahedron(orientation);
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto [it, inserted] = midpoints.try_emplace(key, 0);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(normalized(mesh.vertices[a] + mesh.vertices[b]));
      }
      return it->second;
    };
    std::vector<Triangle> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& [a, b, c] : mesh.triangles) {
      const auto ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

/// Equator is part of the upper hemisphere.
inline constexpr double kHemisphereTolerance = 1e-9;

inline bool in_hemisphere(const Vec3& unit_dir, Hemisphere h) {
  return h == Hemisphere::full || unit_dir.z >= -kHemisphereTolerance;
}

/// Number of icosphere vertices that survive the hemisphere filter.
inline std::size_t hemisphere_vertex_count(int subdivisions, Hemisphere h,
                                           IcosahedronOrientation o = IcosahedronOrientation::canonical) {
  const auto mesh = icosphere(subdivisions, o);
  return static_cast<std::size_t>(std::count_if(
      mesh.vertices.begin(), mesh.vertices.end(), [&](const Vec3& v) { return in_hemisphere(v, h); }));
}

inline std::vector<double> default_in_plane_degrees() {
  return {-45, -30, -15, 0, 15, 30, 45};
}

struct ViewSphereConfig {
  double radius = 600;  // mm
  int subdivisions = 3;
  Hemisphere hemisphere = Hemisphere::upper;
  std::vector<double> in_plane_degrees = default_in_plane_degrees();
  Symmetry symmetry = Symmetry::regular;
  IcosahedronOrientation orientation = IcosahedronOrientation::canonical;

  void validate() const {
    if (!(radius > 0)) throw ConfigError("viewsphere: radius must be positive");
    if (subdivisions < 0 || subdivisions > kMaxSubdivisions)
      throw ConfigError("viewsphere: subdivisions out of range");
    if (in_plane_degrees.empty()) throw ConfigError("viewsphere: in-plane list is empty");
    auto sorted = in_plane_degrees;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError("viewsphere: in-plane list has duplicates");
  }
};

struct Viewpoint {
  std::size_t vertex_index = 0;
  double in_plane_deg = 0;
  Pose camera_pose;
  Vec3 view_direction;  // unit, camera toward the sphere center

  Vec3 position() const { return camera_pose.translation; }
};

/// Camera on the sphere looking at the origin, rolled by `in_plane_deg`
/// about its optical axis. Image-up follows world +z, or +y when the
/// camera sits on the z axis.
inline Pose sphere_camera_pose(const Vec3& position, double in_plane_deg) {
  const Vec3 dir = normalized(-position);
  const Vec3 up = norm(cross(dir, {0, 0, 1})) > 1e-6 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
  Pose pose = look_at(position, {0, 0, 0}, up);
  const double roll = in_plane_deg * std::numbers::pi / 180.0;
  pose.rotation = (pose.rotation * Quaternion::from_axis_angle({0, 0, 1}, roll)).normalized();
  return pose;
}

/// One viewpoint per (hemisphere-filtered vertex, in-plane angle), ordered
/// by vertex index then by position in the in-plane list. The config's
/// symmetry field is not applied here; see trim_symmetric.
inline std::vector<Viewpoint> sample_viewpoints(const ViewSphereConfig& cfg) {
  cfg.validate();
  const auto mesh = icosphere(cfg.subdivisions, cfg.orientation);
  std::vector<Viewpoint> out;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    if (!in_hemisphere(v, cfg.hemisphere)) continue;
    const Vec3 pos = v * cfg.radius;
    for (double deg : cfg.in_plane_degrees) {
      Viewpoint vp;
      vp.vertex_index = i;
      vp.in_plane_deg = deg;
      vp.camera_pose = sphere_camera_pose(pos, deg);
      vp.view_direction = -v;
      out.push_back(vp);
    }
  }
  return out;
}

/// Tolerance, relative to the sphere radius, for membership in the
/// reference symmetry plane y = 0.
inline constexpr double kSymmetryPlaneTolerance = 1e-6;

/// Drops viewpoints that would render duplicate images of a symmetric
/// object. The object's symmetry axis is z and its reference symmetry
/// plane is y = 0.
///  - regular: unchanged.
///  - plane_symmetric: keeps azimuths in [0°, 180°], i.e. y ≥ 0 including
///    the plane itself.
///  - axis_symmetric: keeps the meridian arc lying in the plane y = 0.
/// Output is an order-preserving subset of the input and trimming is
/// idempotent. In-plane rotations are untouched.
inline std::vector<Viewpoint> trim_symmetric(const std::vector<Viewpoint>& viewpoints,
                                             Symmetry symmetry) {
  if (symmetry == Symmetry::regular) return viewpoints;
  std::vector<Viewpoint> out;
  for (const auto& vp : viewpoints) {
    const Vec3 p = vp.position();
    const double tol = kSymmetryPlaneTolerance * norm(p);
    const bool keep = symmetry == Symmetry::plane_symmetric ? p.y >= -tol : std::abs(p.y) <= tol;
    if (keep) out.push_back(vp);
  }
  return out;
}

/// sample_viewpoints followed by trim_symmetric with the config's symmetry.
inline std::vector<Viewpoint> generate_viewpoints(const ViewSphereConfig& cfg) {
  return trim_symmetric(sample_viewpoints(cfg), cfg.symmetry);
}

}  // namespace depthaug
