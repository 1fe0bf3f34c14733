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
#include <stdexcept>
#include <vector>

#include "depthaug/geometry.hpp"
#include "depthaug/renderer.hpp"

namespace depthaug {

// Forward values of the training and evaluation losses. Image losses use
// per-pixel means so their weights do not depend on patch size.

using FeatureVec = std::vector<double>;

/// Mean absolute difference over all pixels.
inline double l1_loss(const DepthPatch& a, const DepthPatch& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("l1_loss: dimension mismatch");
  if (a.size() == 0) return 0;
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += std::abs(static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]));
  return sum / static_cast<double>(a.size());
}

/// Mean absolute difference over the mask's foreground pixels; 0 when the
/// mask is empty.
inline double foreground_l1(const DepthPatch& a, const DepthPatch& b, const ForegroundMask& mask) {
  if (!a.same_shape(b) || !mask.same_shape(a)) throw std::invalid_argument("foreground_l1: dimension mismatch");
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask.values[i] == 0) continue;
    sum += std::abs(static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]));
    ++count;
  }
  return sum / static_cast<double>(std::max<std::size_t>(1, count));
}

inline constexpr double kProbabilityClamp = 1e-7;

struct AdversarialLosses {
  double discriminator = 0;  // -(ln d_real + ln(1 - d_fake))
  double generator = 0;      // non-saturating: -ln d_fake
};

/// Cross-entropy of the discriminator on one real and one generated pair.
/// Probabilities are clamped to [1e-7, 1 - 1e-7] before taking logs.
inline AdversarialLosses discriminator_bce(double d_real, double d_fake) {
  if (!(d_real >= 0 && d_real <= 1) || !(d_fake >= 0 && d_fake <= 1))
    throw std::invalid_argument("discriminator_bce: probabilities must lie in [0, 1]");
  const double r = std::clamp(d_real, kProbabilityClamp, 1 - kProbabilityClamp);
  const double f = std::clamp(d_fake, kProbabilityClamp, 1 - kProbabilityClamp);
  return {-(std::log(r) + std::log1p(-f)), -std::log(f)};
}

/// The original minimax generator term ln(1 - d_fake), which the generator
/// minimizes. Kept for reference; training uses the non-saturating form.
inline double generator_adversarial_minimax(double d_fake) {
  if (!(d_fake >= 0 && d_fake <= 1)) throw std::invalid_argument("generator_adversarial_minimax: d_fake outside [0, 1]");
  return std::log1p(-std::clamp(d_fake, kProbabilityClamp, 1 - kProbabilityClamp));
}

/// Euclidean distance between two task-network outputs.
inline double task_feature_loss(std::span<const double> f1, std::span<const double> f2) {
  if (f1.size() != f2.size()) throw std::invalid_argument("task_feature_loss: length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < f1.size(); ++i) s += (f1[i] - f2[i]) * (f1[i] - f2[i]);
  return std::sqrt(s);
}

/// Weights of the adversarial, L1, foreground and task terms.
struct LossWeights {
  double adversarial = 1;
  double l1 = 100;
  double foreground = 200;
  double task = 10;

  void validate() const {
    if (adversarial < 0 || l1 < 0 || foreground < 0 || task < 0)
      throw ConfigError("loss weights must be non-negative");
  }
};

inline double generator_objective(double adversarial, double l1, double foreground, double task,
                                  const LossWeights& w = {}) {
  return w.adversarial * adversarial + w.l1 * l1 + w.foreground * foreground + w.task * task;
}

/// Margin used for triplets whose anchor and puller differ in class.
inline constexpr double kDefaultDissimilarMargin = 2 * std::numbers::pi;

/// Pose-dependent margin: rotation angle between the anchor and puller
/// when they share a class, `dissimilar_margin` (> π) otherwise.
inline double pose_margin(const Quaternion& q_anchor, const Quaternion& q_puller, std::int64_t class_anchor,
                          std::int64_t class_puller, double dissimilar_margin = kDefaultDissimilarMargin) {
  if (!(dissimilar_margin > std::numbers::pi))
    throw std::invalid_argument("pose_margin: dissimilar margin must exceed pi");
  if (class_anchor != class_puller) return dissimilar_margin;
  return angular_distance(q_anchor, q_puller);
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline constexpr double kTripletDenominatorFloor = 1e-8;

/// max(0, 1 − ‖f_b − f_n‖² / (‖f_b − f_p‖² + m)). The denominator is floored
/// at 1e-8 so f_b == f_p with m = 0 stays finite.
inline double triplet_loss(std::span<const double> anchor, std::span<const double> puller,
                           std::span<const double> pusher, double margin) {
  if (anchor.size() != puller.size() || anchor.size() != pusher.size())
    throw std::invalid_argument("triplet_loss: length mismatch");
  if (!(margin >= 0)) throw std::invalid_argument("triplet_loss: margin must be non-negative");
  const double neg = squared_distance(anchor, pusher);
  const double denom = std::max(squared_distance(anchor, puller) + margin, kTripletDenominatorFloor);
  return std::max(0.0, 1.0 - neg / denom);
}

}  // namespace depthaug
