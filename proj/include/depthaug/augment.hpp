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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "depthaug/core.hpp"
#include "depthaug/procnoise.hpp"
#include "depthaug/renderer.hpp"

namespace depthaug {

struct Range {
  double lo = 0;
  double hi = 0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  void validate(const char* name) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw ConfigError(std::string("augmentation: invalid range for ") + name);
  }
  bool operator==(const Range&) const = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool contains(int v) const { return v >= lo && v <= hi; }
  void validate(const char* name) const {
    if (lo > hi) throw ConfigError(std::string("augmentation: invalid range for ") + name);
  }
  bool operator==(const IntRange&) const = default;
};

/// Which stages of the pipeline run. `sensor` routes the clean render
/// through an externally supplied sensor-simulation hook first.
struct StageFlags {
  bool background = true;
  bool foreground = true;
  bool occlusion = true;
  bool sensor = false;
  bool operator==(const StageFlags&) const = default;
};

/// Sampling bounds for every parameter of the augmentation vector.
struct AugmentationConfig {
  int width = 64;
  int height = 64;

  std::vector<NoiseKind> background_kinds{NoiseKind::perlin, NoiseKind::cellular, NoiseKind::white};
  Range background_frequency{0.0001, 0.1};

  Range fxy_frequency{0.0001, 0.1};  // f_X and f_Y
  Range fz_frequency{0.01, 0.1};
  Range w_xy{0, 10};
  Range w_z{0, 0.005};

  IntRange occlusion_count{0, 3};
  Range r_ave{10, 16};  // upper bound floor(min(w, h) / 4)
  IntRange n_vert{3, 10};
  Range sigma{0, 0.5};
  // ε is drawn from U(lo·π/N, hi·π/N) for a polygon with N vertices.
  Range epsilon_fraction{0, 1};
  // Occluder value = max foreground + t·(1 − max foreground), t from here.
  Range occluder_depth{0, 1};
  double center_mixture_p = 0.5;  // chance of the U(0, l/4) branch

  StageFlags stages;

  /// Defaults for a patch of the given size.
  static AugmentationConfig for_patch(int w, int h) {
    AugmentationConfig c;
    c.width = w;
    c.height = h;
    c.r_ave.hi = std::max(c.r_ave.lo, std::floor(std::min(w, h) / 4.0));
    return c;
  }

  void validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("augmentation: patch size must be positive");
    if (background_kinds.empty()) throw ConfigError("augmentation: no background noise kinds");
    background_frequency.validate("background_frequency");
    fxy_frequency.validate("fxy_frequency");
    fz_frequency.validate("fz_frequency");
    w_xy.validate("w_xy");
    w_z.validate("w_z");
    occlusion_count.validate("occlusion_count");
    r_ave.validate("r_ave");
    n_vert.validate("n_vert");
    sigma.validate("sigma");
    epsilon_fraction.validate("epsilon_fraction");
    occluder_depth.validate("occluder_depth");
    if (background_frequency.lo <= 0 || fxy_frequency.lo <= 0 || fz_frequency.lo <= 0)
      throw ConfigError("augmentation: noise frequencies must be positive");
    if (occlusion_count.lo < 0) throw ConfigError("augmentation: negative occlusion count");
    if (n_vert.lo < 3) throw ConfigError("augmentation: polygons need at least 3 vertices");
    if (r_ave.lo <= 0) throw ConfigError("augmentation: r_ave must be positive");
    if (sigma.lo < 0 || epsilon_fraction.lo < 0 || w_xy.lo < 0 || w_z.lo < 0)
      throw ConfigError("augmentation: negative lower bound");
    if (occluder_depth.lo < 0 || occluder_depth.hi > 1)
      throw ConfigError("augmentation: occluder_depth must lie in [0, 1]");
    if (!(center_mixture_p >= 0 && center_mixture_p <= 1))
      throw ConfigError("augmentation: center_mixture_p must lie in [0, 1]");
  }
};

struct ForegroundParams {
  double f_x = 0, f_y = 0, f_z = 0;
  double w_xy = 0, w_z = 0;
  std::uint64_t seed_x = 0, seed_y = 0, seed_z = 0;
};

/// One occluding polygon. Center and radius are in pixel coordinates, where
/// pixel (row, col) has its center at (col + 0.5, row + 0.5).
struct OcclusionParams {
  double c_x = 0, c_y = 0;
  double r_ave = 10;
  int n_vert = 3;
  double epsilon = 0;
  double sigma = 0;
  double depth_fraction = 0;
  std::uint64_t shape_seed = 0;
};

/// The per-image noise vector z.
struct AugmentationVector {
  NoiseKind bg_kind = NoiseKind::perlin;
  double bg_frequency = 0.01;
  std::uint64_t bg_seed = 0;
  ForegroundParams fg;
  std::vector<OcclusionParams> occlusions;
  StageFlags stages;
};

inline AugmentationVector sample_augmentation_vector(const AugmentationConfig& cfg, Rng& rng) {
  cfg.validate();
  AugmentationVector z;
  z.stages = cfg.stages;
  z.bg_kind = cfg.background_kinds[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(cfg.background_kinds.size()) - 1))];
  z.bg_frequency = rng.uniform(cfg.background_frequency.lo, cfg.background_frequency.hi);
  z.bg_seed = rng();

  z.fg.f_x = rng.uniform(cfg.fxy_frequency.lo, cfg.fxy_frequency.hi);
  z.fg.f_y = rng.uniform(cfg.fxy_frequency.lo, cfg.fxy_frequency.hi);
  z.fg.f_z = rng.uniform(cfg.fz_frequency.lo, cfg.fz_frequency.hi);
  z.fg.w_xy = rng.uniform(cfg.w_xy.lo, cfg.w_xy.hi);
  z.fg.w_z = rng.uniform(cfg.w_z.lo, cfg.w_z.hi);
  z.fg.seed_x = rng();
  z.fg.seed_y = rng();
  z.fg.seed_z = rng();

  // Per axis: U(0, l/4) with probability p, else U(l/4, l).
  auto center = [&](double extent) {
    return rng.coin(cfg.center_mixture_p) ? rng.uniform(0, extent / 4) : rng.uniform(extent / 4, extent);
  };
  const auto count = rng.uniform_int(cfg.occlusion_count.lo, cfg.occlusion_count.hi);
  for (std::int64_t k = 0; k < count; ++k) {
    OcclusionParams o;
    o.c_x = center(cfg.width);
    o.c_y = center(cfg.height);
    o.r_ave = rng.uniform(cfg.r_ave.lo, cfg.r_ave.hi);
    o.n_vert = static_cast<int>(rng.uniform_int(cfg.n_vert.lo, cfg.n_vert.hi));
    const double eps_unit = std::numbers::pi / o.n_vert;
    o.epsilon = rng.uniform(cfg.epsilon_fraction.lo * eps_unit, cfg.epsilon_fraction.hi * eps_unit);
    o.sigma = rng.uniform(cfg.sigma.lo, cfg.sigma.hi);
    o.depth_fraction = rng.uniform(cfg.occluder_depth.lo, cfg.occluder_depth.hi);
    o.shape_seed = rng();
    z.occlusions.push_back(o);
  }
  return z;
}

/// z for item `index` of a run seeded with `master_seed`.
inline AugmentationVector sample_for_item(const AugmentationConfig& cfg, std::uint64_t master_seed,
                                          std::uint64_t index) {
  Rng rng(item_seed(master_seed, index));
  return sample_augmentation_vector(cfg, rng);
}

// Background ----------------------------------------------------------------

/// Smallest value written by background fill, so filled pixels never read
/// as empty.
inline constexpr float kMinBackgroundValue = 1e-6f;

inline NoiseSpec background_noise_spec(const AugmentationVector& z) {
  return {z.bg_kind, z.bg_frequency, z.bg_seed, z.bg_kind == NoiseKind::perlin ? kFractalOctaves : 1};
}

/// Replaces pixels where mask == 0 with background noise remapped from
/// [-1, 1] to [0, 1]; pixels where mask == 1 are copied.
inline DepthPatch fill_background(const DepthPatch& patch, const ForegroundMask& mask,
                                  const AugmentationVector& z) {
  if (!mask.same_shape(patch)) throw std::invalid_argument("fill_background: mask/patch dimension mismatch");
  DepthPatch out = patch;
  const NoiseSpec spec = background_noise_spec(z);
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * patch.width + c;
      if (mask.values[i] != 0) continue;
      const double n = noise_at(spec, c, r);
      out.values[i] = std::max(kMinBackgroundValue, static_cast<float>(0.5 * (n + 1.0)));
    }
  return out;
}

// Foreground distortion -----------------------------------------------------

/// Three offset fields: column shift, row shift, depth shift.
struct DistortionFields {
  ScalarField dx, dy, dz;
};

inline DistortionFields distortion_fields(const ForegroundParams& p, int width, int height) {
  return {fill_field({NoiseKind::perlin, p.f_x, p.seed_x, 1}, width, height),
          fill_field({NoiseKind::perlin, p.f_y, p.seed_y, 1}, width, height),
          fill_field({NoiseKind::perlin, p.f_z, p.seed_z, 1}, width, height)};
}

/// out(r, c) = in(r + w_xy·dy, c + w_xy·dx) + w_z·dz, nearest-pixel lookup.
/// Reads outside the image give background (0). The depth offset applies
/// only to foreground samples, and foreground stays in [kMinSurfaceValue, 1].
inline DepthPatch distort_foreground(const DepthPatch& patch, const DistortionFields& f, double w_xy,
                                     double w_z) {
  for (const ScalarField* s : {&f.dx, &f.dy, &f.dz})
    if (s->width != patch.width || s->height != patch.height)
      throw std::invalid_argument("distort_foreground: field dimension mismatch");
  DepthPatch out(patch.width, patch.height, patch.window);
  for (int r = 0; r < patch.height; ++r)
    for (int c = 0; c < patch.width; ++c) {
      const double sc = std::floor(c + w_xy * f.dx.at(r, c) + 0.5);
      const double sr = std::floor(r + w_xy * f.dy.at(r, c) + 0.5);
      if (sc < 0 || sr < 0 || sc >= patch.width || sr >= patch.height) continue;
      const float src = patch.at(static_cast<int>(sr), static_cast<int>(sc));
      if (src == 0.0f) continue;
      const double v = static_cast<double>(src) + w_z * f.dz.at(r, c);
      out.at(r, c) = static_cast<float>(std::clamp(v, static_cast<double>(kMinSurfaceValue), 1.0));
    }
  return out;
}

inline DepthPatch distort_foreground(const DepthPatch& patch, const AugmentationVector& z) {
  if (z.fg.w_xy == 0 && z.fg.w_z == 0) return patch;
  return distort_foreground(patch, distortion_fields(z.fg, patch.width, patch.height), z.fg.w_xy, z.fg.w_z);
}

// Occlusions ------------------------------------------------------------------

struct Point2 {
  double x = 0, y = 0;
};

struct OcclusionPolygon {
  std::vector<Point2> points;
  std::vector<double> angle_steps;  // normalized; sums to 2π
};

/// Random star-shaped polygon: walks around the center taking angular steps
/// drawn from U(2π/N − ε, 2π/N + ε), rescaled to sum to 2π, with radii from
/// N(r_ave, σ) clamped to (0, 2·r_ave].
inline OcclusionPolygon generate_occlusion_polygon(const OcclusionParams& p, Rng& rng) {
  if (p.n_vert < 3) throw std::invalid_argument("occlusion polygon: n_vert must be at least 3");
  if (!(p.r_ave > 0)) throw std::invalid_argument("occlusion polygon: r_ave must be positive");
  if (!(p.epsilon >= 0) || !(p.sigma >= 0))
    throw std::invalid_argument("occlusion polygon: epsilon and sigma must be non-negative");
  constexpr double two_pi = 2 * std::numbers::pi;
  const double base = two_pi / p.n_vert;
  OcclusionPolygon poly;
  poly.angle_steps.resize(static_cast<std::size_t>(p.n_vert));
  double sum = 0;
  for (auto& step : poly.angle_steps) {
    step = rng.uniform(base - p.epsilon, base + p.epsilon);
    sum += step;
  }
  const double k = sum / two_pi;
  for (auto& step : poly.angle_steps) step /= k;

  double theta = rng.uniform(0, two_pi);
  poly.points.reserve(poly.angle_steps.size());
  for (double step : poly.angle_steps) {
    const double r = std::clamp(rng.normal(p.r_ave, p.sigma), 1e-9 * p.r_ave, 2 * p.r_ave);
    poly.points.push_back({p.c_x + r * std::cos(theta), p.c_y + r * std::sin(theta)});
    theta += step;
  }
  return poly;
}

/// Even-odd coverage of pixel centers, scanline by scanline.
inline std::vector<std::uint8_t> rasterize_polygon(std::span<const Point2> poly, int width, int height) {
  std::vector<std::uint8_t> cover(static_cast<std::size_t>(width) * height, 0);
  const std::size_t n = poly.size();
  if (n < 3) return cover;
  std::vector<double> xs;
  for (int r = 0; r < height; ++r) {
    const double py = r + 0.5;
    xs.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2& a = poly[i];
      const Point2& b = poly[j];
      if ((a.y > py) != (b.y > py)) xs.push_back((b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x);
    }
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end());
    for (int c = 0; c < width; ++c) {
      const double px = c + 0.5;
      // Crossings strictly to the right of the pixel center.
      const auto right = xs.end() - std::upper_bound(xs.begin(), xs.end(), px);
      if (right % 2 == 1) cover[static_cast<std::size_t>(r) * width + c] = 1;
    }
  }
  return cover;
}

struct Occluder {
  std::vector<Point2> polygon;
  float value = 1;
};

/// Paints each occluder's value over the pixels it covers, in order.
inline DepthPatch apply_occluders(const DepthPatch& patch, std::span<const Occluder> occluders) {
  DepthPatch out = patch;
  for (const auto& occ : occluders) {
    const auto cover = rasterize_polygon(occ.polygon, patch.width, patch.height);
    for (std::size_t i = 0; i < cover.size(); ++i)
      if (cover[i]) out.values[i] = occ.value;
  }
  return out;
}

/// Occluders for z, placed in front of the patch's closest surface.
inline std::vector<Occluder> build_occluders(const DepthPatch& patch, const AugmentationVector& z) {
  const double front = patch.max_value();
  std::vector<Occluder> out;
  for (const auto& o : z.occlusions) {
    Rng rng(o.shape_seed);
    Occluder occ;
    occ.polygon = generate_occlusion_polygon(o, rng).points;
    occ.value = static_cast<float>(std::clamp(front + o.depth_fraction * (1.0 - front), front, 1.0));
    out.push_back(std::move(occ));
  }
  return out;
}

inline DepthPatch apply_occlusions(const DepthPatch& patch, const AugmentationVector& z) {
  const auto occluders = build_occluders(patch, z);
  return apply_occluders(patch, occluders);
}

// Composition -----------------------------------------------------------------

struct SampleMeta {
  std::int64_t class_id = -1;
  Quaternion pose;
  std::size_t viewpoint_index = 0;
  double in_plane_deg = 0;
};

struct PairSample {
  DepthPatch clean;
  DepthPatch augmented;
  ForegroundMask mask;
  AugmentationVector z;
  SampleMeta meta;
};

/// Runs the enabled stages in the order foreground distortion, occlusions,
/// background fill (of pixels still exactly 0). The mask comes from the
/// clean patch.
inline PairSample augment(const DepthPatch& clean, const AugmentationVector& z) {
  PairSample s;
  s.clean = clean;
  s.mask = foreground_mask(clean);
  s.z = z;
  DepthPatch x = clean;
  if (z.stages.foreground) x = distort_foreground(x, z);
  if (z.stages.occlusion) x = apply_occlusions(x, z);
  if (z.stages.background) x = fill_background(x, foreground_mask(x), z);
  s.augmented = std::move(x);
  return s;
}

}  // namespace depthaug
