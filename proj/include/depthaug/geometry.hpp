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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "depthaug/core.hpp"

namespace depthaug {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

/// Unit quaternion w + xi + yj + zk; q and -q are the same rotation.
struct Quaternion {
  double w = 1, x = 0, y = 0, z = 0;

  static Quaternion identity() { return {}; }

  /// Rotation of `radians` about `axis` (need not be unit).
  static Quaternion from_axis_angle(const Vec3& axis, double radians) {
    const Vec3 a = depthaug::normalized(axis);
    const double s = std::sin(radians / 2);
    return {std::cos(radians / 2), a.x * s, a.y * s, a.z * s};
  }

  /// From a proper rotation matrix given by its columns.
  static Quaternion from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    // Shepperd's method; picks the largest diagonal term for stability.
    const double m00 = c0.x, m10 = c0.y, m20 = c0.z;
    const double m01 = c1.x, m11 = c1.y, m21 = c1.z;
    const double m02 = c2.x, m12 = c2.y, m22 = c2.z;
    const double trace = m00 + m11 + m22;
    Quaternion q;
    if (trace > 0) {
      const double s = std::sqrt(trace + 1.0) * 2;
      q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
    } else if (m00 > m11 && m00 > m22) {
      const double s = std::sqrt(1.0 + m00 - m11 - m22) * 2;
      q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
    } else if (m11 > m22) {
      const double s = std::sqrt(1.0 + m11 - m00 - m22) * 2;
      q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
    } else {
      const double s = std::sqrt(1.0 + m22 - m00 - m11) * 2;
      q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
    }
    return q.normalized();
  }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quaternion normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }

  // Hamilton product.
  Quaternion operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  Vec3 rotate(const Vec3& v) const {
    const Vec3 u{x, y, z};
    const Vec3 t = 2.0 * cross(u, v);
    return v + w * t + cross(u, t);
  }

  bool operator==(const Quaternion&) const = default;
};

inline double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr double kUnitTolerance = 1e-6;

inline void require_unit(const Quaternion& q, const char* what) {
  if (!(std::abs(q.norm() - 1.0) <= kUnitTolerance))
    throw std::invalid_argument(std::string(what) + ": quaternion is not unit-norm");
}

/// Rotation angle between two orientations, 2·acos(|q1·q2|), in [0, π].
/// Evaluated as 2·atan2(|vec(q1* q2)|, |w(q1* q2)|), which is the same
/// quantity but keeps full precision near 0 and π.
inline double angular_distance(const Quaternion& q1, const Quaternion& q2) {
  require_unit(q1, "angular_distance");
  require_unit(q2, "angular_distance");
  // Grouped so that q2 == ±q1 gives an exactly zero vector part.
  const Vec3 v1{q1.x, q1.y, q1.z}, v2{q2.x, q2.y, q2.z};
  const Vec3 vec = (q1.w * v2 - q2.w * v1) - cross(v1, v2);
  return 2.0 * std::atan2(norm(vec), std::abs(dot(q1, q2)));
}

/// Rigid camera-to-world transform. The camera frame is x right, y down,
/// z forward; `translation` is the camera center in world coordinates.
struct Pose {
  Quaternion rotation;
  Vec3 translation;

  Vec3 right() const { return rotation.rotate({1, 0, 0}); }
  Vec3 down() const { return rotation.rotate({0, 1, 0}); }
  Vec3 forward() const { return rotation.rotate({0, 0, 1}); }

  Vec3 to_world(const Vec3& p_cam) const { return rotation.rotate(p_cam) + translation; }
  Vec3 to_camera(const Vec3& p_world) const {
    return rotation.conjugate().rotate(p_world - translation);
  }
};

/// Camera at `eye` looking at `target`, with image-up as close to `up` as
/// possible.
inline Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 d = target - eye;
  const double dist = norm(d);
  if (!(dist > 1e-12)) throw std::invalid_argument("look_at: eye coincides with target");
  const Vec3 forward = d / dist;
  const double up_len = norm(up);
  if (!(up_len > 0)) throw std::invalid_argument("look_at: zero up vector");
  const Vec3 side = cross(forward, up / up_len);
  const double side_len = norm(side);
  if (!(side_len > 1e-9)) throw std::invalid_argument("look_at: up is parallel to view direction");
  const Vec3 right = side / side_len;
  const Vec3 down = cross(forward, right);
  return {Quaternion::from_columns(right, down, forward), eye};
}

using Triangle = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const { return triangles.empty(); }

  /// Throws std::invalid_argument if any index is out of range.
  void validate() const {
    for (std::size_t t = 0; t < triangles.size(); ++t)
      for (auto i : triangles[t])
        if (i >= vertices.size())
          throw std::invalid_argument("triangle " + std::to_string(t) + ": index out of range");
  }

  Vec3 centroid() const {
    if (vertices.empty()) return {};
    Vec3 c;
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
  }

  /// Radius of the smallest sphere centered at `center` that encloses all vertices.
  double bounding_radius(const Vec3& center) const {
    double r = 0;
    for (const auto& v : vertices) r = std::max(r, norm(v - center));
    return r;
  }

  TriangleMesh translated(const Vec3& offset) const {
    TriangleMesh m = *this;
    for (auto& v : m.vertices) v += offset;
    return m;
  }
};

/// Pinhole camera. Pixel (col,row) has its center at (col+0.5, row+0.5).
struct Camera {
  Pose pose;
  double focal = 64;  // pixels
  double cx = 32, cy = 32;
  int width = 64, height = 64;

  void validate() const {
    if (!(focal > 0)) throw std::invalid_argument("camera: focal length must be positive");
    if (width <= 0 || height <= 0) throw std::invalid_argument("camera: image size must be positive");
  }
};

// OBJ input ----------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses the v/f subset of ASCII OBJ. Faces with more than three corners
/// are fan-triangulated; texture/normal references ("1/2/3") and negative
/// (relative) indices are accepted. Other record types are skipped with
/// one warning per record keyword.
inline TriangleMesh load_mesh(std::string_view text, Diagnostics* diag = nullptr) {
  TriangleMesh mesh;
  std::set<std::string, std::less<>> skipped;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = detail::trim(line.substr(0, hash));
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const auto tok = detail::split_ws(line);
    if (tok[0] == "v") {
      if (tok.size() < 4 || tok.size() > 5) throw ParseError(line_no, "vertex needs 3 coordinates");
      Vec3 v;
      if (!detail::parse_double(tok[1], v.x) || !detail::parse_double(tok[2], v.y) ||
          !detail::parse_double(tok[3], v.z))
        throw ParseError(line_no, "malformed vertex coordinate");
      mesh.vertices.push_back(v);
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError(line_no, "face needs at least 3 vertices");
      std::vector<std::uint32_t> corners;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        const std::string_view ref = tok[k].substr(0, tok[k].find('/'));
        long long idx = 0;
        const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (ec != std::errc{} || ptr != ref.data() + ref.size() || idx == 0)
          throw ParseError(line_no, "malformed face index '" + std::string(tok[k]) + "'");
        const long long n = static_cast<long long>(mesh.vertices.size());
        const long long resolved = idx > 0 ? idx - 1 : n + idx;
        if (resolved < 0 || resolved >= n) throw ParseError(line_no, "index out of range");
        corners.push_back(static_cast<std::uint32_t>(resolved));
      }
      for (std::size_t k = 1; k + 1 < corners.size(); ++k)
        mesh.triangles.push_back({corners[0], corners[k], corners[k + 1]});
    } else if (skipped.insert(std::string(tok[0])).second) {
      warn(diag, "line " + std::to_string(line_no) + ": ignoring unsupported OBJ record '" +
                     std::string(tok[0]) + "'");
    }
    if (eol == text.size()) break;
  }
  return mesh;
}

/// Serializes to ASCII OBJ with round-trip precision.
inline std::string write_obj(const TriangleMesh& mesh) {
  std::string out;
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += buf;
  }
  return out;
}

}  // namespace depthaug
