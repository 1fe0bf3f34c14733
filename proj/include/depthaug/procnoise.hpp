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
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "depthaug/core.hpp"

namespace depthaug {

// Procedural 2D noise. Every kind is a pure function of (spec, x, y) built
// on integer hashing of lattice coordinates, so results do not depend on
// evaluation order or thread count.

enum class NoiseKind { perlin, cellular, white };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::perlin;
  double frequency = 0.05;  // cycles per pixel
  std::uint64_t seed = 0;
  int octaves = 1;  // perlin only; > 1 sums octaves (lacunarity 2, gain 0.5)
};

/// Octave count used for "fractal" Perlin backgrounds.
inline constexpr int kFractalOctaves = 4;

namespace noise_detail {

inline std::uint64_t hash_cell(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(ix));
  h = mix64(h ^ static_cast<std::uint64_t>(iy));
  return h;
}

// Maps the top 53 bits to [0, 1).
inline double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

inline double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }
inline double lerp(double a, double b, double t) { return a + t * (b - a); }

inline constexpr double kDiag = std::numbers::sqrt2 / 2;
inline constexpr double kGradients[8][2] = {{1, 0},  {-1, 0},     {0, 1},      {0, -1},
                                            {kDiag, kDiag}, {-kDiag, kDiag}, {kDiag, -kDiag}, {-kDiag, -kDiag}};

inline double grad_dot(std::uint64_t seed, std::int64_t ix, std::int64_t iy, double dx, double dy) {
  const auto& g = kGradients[hash_cell(seed, ix, iy) & 7];
  return g[0] * dx + g[1] * dy;
}

// Single-octave gradient noise in lattice units. Unit gradients bound the
// raw value by sqrt(2)/2; it is rescaled to [-1, 1].
inline double perlin(std::uint64_t seed, double x, double y) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy);
  const double dx = x - fx, dy = y - fy;
  const double n00 = grad_dot(seed, ix, iy, dx, dy);
  const double n10 = grad_dot(seed, ix + 1, iy, dx - 1, dy);
  const double n01 = grad_dot(seed, ix, iy + 1, dx, dy - 1);
  const double n11 = grad_dot(seed, ix + 1, iy + 1, dx - 1, dy - 1);
  const double u = fade(dx), v = fade(dy);
  const double n = lerp(lerp(n00, n10, u), lerp(n01, n11, u), v);
  return std::clamp(n * std::numbers::sqrt2, -1.0, 1.0);
}

inline double fractal_perlin(std::uint64_t seed, double x, double y, int octaves) {
  double sum = 0, amp = 1, norm = 0, scale = 1;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * perlin(seed + static_cast<std::uint64_t>(o), x * scale, y * scale);
    norm += amp;
    amp *= 0.5;
    scale *= 2;
  }
  return std::clamp(sum / norm, -1.0, 1.0);
}

}  // namespace noise_detail

/// Feature point of lattice cell (ix, iy) for cellular noise; one per
/// unit cell, uniformly placed inside it.
inline std::array<double, 2> cellular_feature(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h = noise_detail::hash_cell(seed ^ 0xC3A5C85C97CB3127ULL, ix, iy);
  const double u = noise_detail::unit_from_hash(h);
  const double v = noise_detail::unit_from_hash(mix64(h));
  return {static_cast<double>(ix) + u, static_cast<double>(iy) + v};
}

/// Distance (lattice units) to the nearest cellular feature point. The
/// 5×5 neighborhood is exhaustive: the home cell's point is within √2 and
/// anything three or more cells away is at least 2 away.
inline double cellular_f1(std::uint64_t seed, double x, double y) {
  const auto ix = static_cast<std::int64_t>(std::floor(x));
  const auto iy = static_cast<std::int64_t>(std::floor(y));
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t dy = -2; dy <= 2; ++dy)
    for (std::int64_t dx = -2; dx <= 2; ++dx) {
      const auto p = cellular_feature(seed, ix + dx, iy + dy);
      best = std::min(best, std::hypot(p[0] - x, p[1] - y));
    }
  return best;
}

/// Value in [-1, 1] at pixel coordinates (x, y).
///  - perlin: gradient noise, zero on the lattice (x·f, y·f integer).
///  - cellular: F1 distance d remapped as d·√2 − 1, so -1 on a feature point.
///  - white: independent hash of the scaled coordinates' bit patterns.
inline double noise_at(const NoiseSpec& spec, double x, double y) {
  const double sx = x * spec.frequency, sy = y * spec.frequency;
  switch (spec.kind) {
    case NoiseKind::perlin:
      return spec.octaves > 1 ? noise_detail::fractal_perlin(spec.seed, sx, sy, spec.octaves)
                              : noise_detail::perlin(spec.seed, sx, sy);
    case NoiseKind::cellular:
      return std::clamp(cellular_f1(spec.seed, sx, sy) * std::numbers::sqrt2 - 1.0, -1.0, 1.0);
    case NoiseKind::white: {
      const auto bx = std::bit_cast<std::uint64_t>(sx + 0.0);
      const auto by = std::bit_cast<std::uint64_t>(sy + 0.0);
      const std::uint64_t h = noise_detail::hash_cell(spec.seed ^ 0x2545F4914F6CDD1DULL,
                                                      static_cast<std::int64_t>(bx),
                                                      static_cast<std::int64_t>(by));
      return 2.0 * noise_detail::unit_from_hash(h) - 1.0;
    }
  }
  return 0;
}

/// Row-major field of noise samples; values in [-1, 1].
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// Samples noise_at(spec, col, row) for every pixel.
inline ScalarField fill_field(const NoiseSpec& spec, int width, int height) {
  if (width <= 0 || height <= 0) throw ConfigError("fill_field: dimensions must be positive");
  ScalarField f(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) f.at(r, c) = noise_at(spec, c, r);
  return f;
}

inline std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::perlin: return "perlin";
    case NoiseKind::cellular: return "cellular";
    case NoiseKind::white: return "white";
  }
  return "?";
}

inline NoiseKind noise_kind_from_string(std::string_view s) {
  if (s == "perlin") return NoiseKind::perlin;
  if (s == "cellular") return NoiseKind::cellular;
  if (s == "white") return NoiseKind::white;
  throw ConfigError("unknown noise kind '" + std::string(s) + "'");
}

}  // namespace depthaug
