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

#include <numbers>
#include <random>

#include "depthaug/evalkit.hpp"
#include "support.hpp"

namespace {

using namespace depthaug;

std::vector<DescriptorEntry> random_db(std::mt19937_64& gen, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<DescriptorEntry> db(n);
  for (std::size_t i = 0; i < n; ++i) {
    db[i].feature.resize(dim);
    for (auto& x : db[i].feature) x = g(gen);
    db[i].class_id = static_cast<std::int64_t>(i % 5);
    db[i].pose = Quaternion::from_axis_angle({g(gen), g(gen), g(gen) + 0.1}, g(gen));
  }
  return db;
}

TEST(NnQuery, ExactMatchAndSingleton) {
  std::mt19937_64 gen(1);
  const auto db = random_db(gen, 50, 8);
  EXPECT_EQ(nn_index(db, db[17].feature), 17u);
  const std::vector<DescriptorEntry> one{db[3]};
  EXPECT_EQ(nn_query(one, db[40].feature).class_id, db[3].class_id);
}

TEST(NnQuery, MatchesExhaustiveScan) {
  std::mt19937_64 gen(2);
  const auto db = random_db(gen, 1000, 16);
  const auto queries = random_db(gen, 200, 16);
  for (const auto& q : queries) EXPECT_EQ(nn_index(db, q.feature), testsupport::exhaustive_nn(db, q.feature));
}

TEST(NnQuery, TiesGoToLowestIndex) {
  std::vector<DescriptorEntry> db(3);
  db[0].feature = {1, 0};
  db[1].feature = {-1, 0};
  db[2].feature = {1, 0};
  EXPECT_EQ(nn_index(db, std::vector<double>{0, 0}), 0u);
  EXPECT_EQ(nn_index(db, std::vector<double>{1, 0}), 0u);
}

TEST(NnQuery, Errors) {
  EXPECT_THROW(nn_index({}, std::vector<double>{1}), std::invalid_argument);
  std::vector<DescriptorEntry> db(1);
  db[0].feature = {1, 2};
  EXPECT_THROW(nn_index(db, std::vector<double>{1}), std::invalid_argument);
}

TEST(Evaluate, SelfRetrievalIsPerfect) {
  std::mt19937_64 gen(3);
  const auto db = random_db(gen, 300, 32);
  const auto rep = evaluate(db, db, 3);
  EXPECT_EQ(rep.accuracy, 1.0);
  EXPECT_EQ(rep.n_correct, 300u);
  ASSERT_TRUE(rep.angular_median_deg);
  EXPECT_EQ(*rep.angular_median_deg, 0.0);
  EXPECT_EQ(*rep.angular_mean_deg, 0.0);
}

TEST(Evaluate, AllWrongHasNoAngles) {
  std::vector<DescriptorEntry> db(1), q(2);
  db[0] = {{0, 0}, 1, {}};
  q[0] = {{0, 1}, 2, {}};
  q[1] = {{1, 0}, 3, {}};
  const auto rep = evaluate(db, q);
  EXPECT_EQ(rep.accuracy, 0.0);
  EXPECT_FALSE(rep.angular_median_deg);
  EXPECT_FALSE(rep.angular_mean_deg);
  EXPECT_TRUE(to_json(rep)["angular_median_deg"].is_null());
}

TEST(Evaluate, HandComputedMicroCase) {
  std::vector<DescriptorEntry> db(2), q(2);
  db[0] = {{0, 0}, 1, Quaternion::identity()};
  db[1] = {{10, 0}, 2, Quaternion::identity()};
  q[0] = {{0.1, 0}, 1, Quaternion::from_axis_angle({0, 1, 0}, 10 * std::numbers::pi / 180)};
  q[1] = {{9.9, 0}, 3, Quaternion::identity()};
  const auto rep = evaluate(db, q);
  EXPECT_EQ(rep.accuracy, 0.5);
  EXPECT_NEAR(*rep.angular_median_deg, 10.0, 1e-9);
  EXPECT_NEAR(*rep.angular_mean_deg, 10.0, 1e-9);
}

TEST(Evaluate, LowerMiddleMedian) {
  std::vector<DescriptorEntry> db(1), q(4);
  db[0] = {{0}, 1, {}};
  const double deg[] = {40, 10, 30, 20};
  for (int i = 0; i < 4; ++i) q[i] = {{0}, 1, Quaternion::from_axis_angle({1, 0, 0}, deg[i] * std::numbers::pi / 180)};
  const auto rep = evaluate(db, q);
  EXPECT_NEAR(*rep.angular_median_deg, 20.0, 1e-9);
  EXPECT_NEAR(*rep.angular_mean_deg, 25.0, 1e-9);
}

TEST(Descriptors, JsonRoundTrip) {
  std::mt19937_64 gen(4);
  const auto db = random_db(gen, 10, 4);
  const auto back = descriptors_from_json(descriptors_to_json(db));
  ASSERT_EQ(back.size(), db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    EXPECT_EQ(back[i].feature, db[i].feature);
    EXPECT_EQ(back[i].class_id, db[i].class_id);
    EXPECT_EQ(back[i].pose.w, db[i].pose.w);
  }
}

TEST(Descriptors, RejectsBadPose) {
  const auto j = nlohmann::json::parse(R"({"entries": [{"feature": [1], "class_id": 0, "pose": [2, 0, 0, 0]}]})");
  EXPECT_THROW(descriptors_from_json(j), std::invalid_argument);
}

}  // namespace
