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

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls into the code it is used to check.

#pragma once

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "depthaug/depthaug.hpp"

namespace testsupport {

using depthaug::Camera;
using depthaug::TriangleMesh;
using depthaug::Vec3;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("depthaug_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

/// SHA-256 over every file of a tree: sorted relative paths and contents.
inline std::string tree_digest(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), root));
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(root / f, std::ios::binary);
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    all += f.generic_string();
    all.push_back('\0');
    all += sha256_hex(content);
    all.push_back('\n');
  }
  return sha256_hex(all);
}

inline std::string cube_obj(double half = 50) {
  std::string s = "# cube\n";
  char buf[128];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof buf, "v %g %g %g\n", (i & 1 ? half : -half), (i & 2 ? half : -half),
                  (i & 4 ? half : -half));
    s += buf;
  }
  // Two triangles per face, 1-based.
  s += "f 1 3 4\nf 1 4 2\nf 5 6 8\nf 5 8 7\nf 1 2 6\nf 1 6 5\n"
       "f 3 7 8\nf 3 8 4\nf 1 5 7\nf 1 7 3\nf 2 4 8\nf 2 8 6\n";
  return s;
}

/// Torus in the xy plane with `rings` × `sides` quads (2 triangles each).
inline TriangleMesh torus(double major, double minor, int rings, int sides) {
  TriangleMesh m;
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < sides; ++j) {
      const double u = 2 * std::numbers::pi * i / rings, v = 2 * std::numbers::pi * j / sides;
      m.vertices.push_back({(major + minor * std::cos(v)) * std::cos(u), (major + minor * std::cos(v)) * std::sin(u),
                            minor * std::sin(v)});
    }
  auto idx = [&](int i, int j) { return static_cast<std::uint32_t>((i % rings) * sides + (j % sides)); };
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < sides; ++j) {
      m.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      m.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  return m;
}

/// Axis-aligned square in the plane z = depth (world frame), facing -z.
inline void add_square(TriangleMesh& m, double half, double depth, Vec3 offset = {}) {
  const auto base = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back(Vec3{-half, -half, depth} + offset);
  m.vertices.push_back(Vec3{half, -half, depth} + offset);
  m.vertices.push_back(Vec3{half, half, depth} + offset);
  m.vertices.push_back(Vec3{-half, half, depth} + offset);
  m.triangles.push_back({base, base + 1, base + 2});
  m.triangles.push_back({base, base + 2, base + 3});
}

/// Random triangle soup in front of an identity camera.
inline TriangleMesh random_soup(std::mt19937_64& gen, int triangles) {
  std::uniform_real_distribution<double> xy(-160, 160), z(380, 820);
  TriangleMesh m;
  for (int t = 0; t < triangles; ++t) {
    const Vec3 c{xy(gen), xy(gen), z(gen)};
    std::uniform_real_distribution<double> spread(-90, 90);
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (int k = 0; k < 3; ++k) m.vertices.push_back(c + Vec3{spread(gen), spread(gen), 0.6 * spread(gen)});
    m.triangles.push_back({base, base + 1, base + 2});
  }
  return m;
}

/// Brute-force per-pixel ray cast (Möller–Trumbore) in camera coordinates.
/// Returns the nearest camera-space z per pixel, +inf on a miss.
inline std::vector<double> raycast_depth(const TriangleMesh& mesh, const Camera& cam) {
  std::vector<Vec3> pc;
  for (const auto& v : mesh.vertices) pc.push_back(cam.pose.to_camera(v));
  std::vector<double> out(static_cast<std::size_t>(cam.width) * cam.height,
                          std::numeric_limits<double>::infinity());
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) {
      const Vec3 d{(c + 0.5 - cam.cx) / cam.focal, (r + 0.5 - cam.cy) / cam.focal, 1.0};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& t : mesh.triangles) {
        const Vec3 a = pc[t[0]], b = pc[t[1]], e = pc[t[2]];
        const Vec3 e1 = b - a, e2 = e - a;
        const Vec3 p = depthaug::cross(d, e2);
        const double det = depthaug::dot(e1, p);
        if (std::abs(det) < 1e-14) continue;
        const Vec3 s = Vec3{0, 0, 0} - a;
        const double u = depthaug::dot(s, p) / det;
        if (u < 0 || u > 1) continue;
        const Vec3 q = depthaug::cross(s, e1);
        const double v = depthaug::dot(d, q) / det;
        if (v < 0 || u + v > 1) continue;
        const double tt = depthaug::dot(e2, q) / det;  // = z since d.z = 1
        if (tt > 1e-3) best = std::min(best, tt);
      }
      out[static_cast<std::size_t>(r) * cam.width + c] = best;
    }
  return out;
}

/// Classic even-odd point-in-polygon test.
inline bool pnpoly(const std::vector<depthaug::Point2>& poly, double px, double py) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& pi = poly[i];
    const auto& pj = poly[j];
    if (((pi.y > py) != (pj.y > py)) && (px < (pj.x - pi.x) * (py - pi.y) / (pj.y - pi.y) + pi.x)) inside = !inside;
  }
  return inside;
}

/// Nearest cellular feature point by scanning a wide block of cells.
inline double brute_force_f1(std::uint64_t seed, double x, double y, int reach = 4) {
  const auto ix = static_cast<std::int64_t>(std::floor(x));
  const auto iy = static_cast<std::int64_t>(std::floor(y));
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t j = iy - reach; j <= iy + reach; ++j)
    for (std::int64_t i = ix - reach; i <= ix + reach; ++i) {
      const auto p = depthaug::cellular_feature(seed, i, j);
      const double dx = p[0] - x, dy = p[1] - y;
      best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
  return best;
}

inline std::size_t exhaustive_nn(const std::vector<depthaug::DescriptorEntry>& db, const std::vector<double>& q) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < db.size(); ++i) {
    double d = 0;
    for (std::size_t k = 0; k < q.size(); ++k) d += (db[i].feature[k] - q[k]) * (db[i].feature[k] - q[k]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace testsupport
