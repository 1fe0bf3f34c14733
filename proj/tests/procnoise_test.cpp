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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "depthaug/procnoise.hpp"
#include "support.hpp"

namespace {

using namespace depthaug;

TEST(Perlin, ZeroOnLattice) {
  const NoiseSpec spec{NoiseKind::perlin, 1.0, 42, 1};
  for (int y = -20; y <= 20; ++y)
    for (int x = -20; x <= 20; ++x) EXPECT_EQ(noise_at(spec, x, y), 0.0);
}

TEST(Perlin, ZeroOnScaledLattice) {
  const NoiseSpec spec{NoiseKind::perlin, 0.125, 9, 1};
  EXPECT_EQ(noise_at(spec, 8, 16), 0.0);
  EXPECT_NE(noise_at(spec, 4, 4), 0.0);
}

TEST(Perlin, ContinuousAcrossCellBorders) {
  const NoiseSpec spec{NoiseKind::perlin, 1.0, 3, 1};
  for (double y : {0.25, 1.5, -2.75}) {
    const double left = noise_at(spec, 1.0 - 1e-9, y);
    const double right = noise_at(spec, 1.0 + 1e-9, y);
    EXPECT_NEAR(left, right, 1e-7);
  }
}

TEST(Noise, DeterministicPerSpec) {
  for (auto kind : {NoiseKind::perlin, NoiseKind::cellular, NoiseKind::white}) {
    const NoiseSpec spec{kind, 0.37, 1234, 1};
    EXPECT_EQ(noise_at(spec, 3.3, -7.1), noise_at(spec, 3.3, -7.1));
  }
}

TEST(Noise, RangeOverRandomProbes) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-500, 500), f(1e-4, 2);
  for (auto kind : {NoiseKind::perlin, NoiseKind::cellular, NoiseKind::white})
    for (int octaves : {1, kFractalOctaves})
      for (int i = 0; i < 20000; ++i) {
        const NoiseSpec spec{kind, f(gen), gen(), octaves};
        const double v = noise_at(spec, u(gen), u(gen));
        ASSERT_GE(v, -1.0);
        ASSERT_LE(v, 1.0);
      }
}

TEST(Cellular, MinusOneAtFeaturePoint) {
  const NoiseSpec spec{NoiseKind::cellular, 1.0, 77, 1};
  for (int i = -3; i <= 3; ++i) {
    const auto p = cellular_feature(77, i, 2 * i);
    EXPECT_NEAR(noise_at(spec, p[0], p[1]), -1.0, 1e-12);
  }
}

TEST(Cellular, FeaturePointInsideItsCell) {
  for (int i = -5; i < 5; ++i)
    for (int j = -5; j < 5; ++j) {
      const auto p = cellular_feature(1, i, j);
      EXPECT_GE(p[0], i);
      EXPECT_LT(p[0], i + 1);
      EXPECT_GE(p[1], j);
      EXPECT_LT(p[1], j + 1);
    }
}

TEST(Cellular, MatchesBruteForce) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t seed = gen();
    const double x = u(gen), y = u(gen);
    EXPECT_NEAR(cellular_f1(seed, x, y), testsupport::brute_force_f1(seed, x, y), 1e-9);
  }
}

TEST(White, SeedsDiffer) {
  const auto a = fill_field({NoiseKind::white, 1.0, 1, 1}, 64, 64);
  const auto b = fill_field({NoiseKind::white, 1.0, 2, 1}, 64, 64);
  EXPECT_NE(a.values, b.values);
  const auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
  EXPECT_LT(*lo, -0.9);
  EXPECT_GT(*hi, 0.9);
}

TEST(FillField, TinyFrequencyIsNearlyConstant) {
  const auto f = fill_field({NoiseKind::perlin, 0.0001, 5, 1}, 64, 64);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  EXPECT_LT(*hi - *lo, 0.05);
}

TEST(FillField, SinglePixelAndShape) {
  const auto f = fill_field({NoiseKind::cellular, 0.3, 5, 1}, 1, 1);
  ASSERT_EQ(f.values.size(), 1u);
  EXPECT_GE(f.values[0], -1.0);
  EXPECT_LE(f.values[0], 1.0);
  const auto g = fill_field({NoiseKind::perlin, 0.1, 5, 1}, 7, 3);
  EXPECT_EQ(g.width, 7);
  EXPECT_EQ(g.height, 3);
  EXPECT_EQ(g.at(2, 6), noise_at({NoiseKind::perlin, 0.1, 5, 1}, 6, 2));
}

TEST(FillField, RejectsEmpty) {
  EXPECT_THROW(fill_field({}, 0, 4), ConfigError);
}

TEST(NoiseKind, StringRoundTrip) {
  for (auto k : {NoiseKind::perlin, NoiseKind::cellular, NoiseKind::white})
    EXPECT_EQ(noise_kind_from_string(to_string(k)), k);
  EXPECT_THROW(noise_kind_from_string("simplex"), ConfigError);
}

}  // namespace
