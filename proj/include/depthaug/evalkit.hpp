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
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "depthaug/core.hpp"
#include "depthaug/geometry.hpp"
#include "depthaug/losses.hpp"

namespace depthaug {

/// A stored descriptor with its labels. Queries use the same type.
struct DescriptorEntry {
  FeatureVec feature;
  std::int64_t class_id = 0;
  Quaternion pose;
};

/// Index of the entry closest to `query` in Euclidean distance; ties go to
/// the lowest index.
inline std::size_t nn_index(std::span<const DescriptorEntry> db, std::span<const double> query) {
  if (db.empty()) throw std::invalid_argument("nn_query: empty descriptor database");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i].feature.size() != query.size()) throw std::invalid_argument("nn_query: dimension mismatch");
    const double d = squared_distance(db[i].feature, query);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline const DescriptorEntry& nn_query(std::span<const DescriptorEntry> db, std::span<const double> query) {
  return db[nn_index(db, query)];
}

struct EvalReport {
  double accuracy = 0;
  std::optional<double> angular_median_deg;  // absent when nothing is correct
  std::optional<double> angular_mean_deg;
  std::size_t n_queries = 0;
  std::size_t n_correct = 0;
};

/// Retrieves the nearest descriptor for every query. Accuracy is the share
/// of queries whose retrieved class matches; angular statistics cover only
/// those. The median is the lower middle element for even counts.
inline EvalReport evaluate(std::span<const DescriptorEntry> db, std::span<const DescriptorEntry> queries,
                           unsigned workers = 1) {
  if (db.empty() || queries.empty()) throw std::invalid_argument("evaluate: empty database or query set");
  std::vector<std::optional<double>> errors(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    const DescriptorEntry& q = queries[i];
    const DescriptorEntry& hit = nn_query(db, q.feature);
    if (hit.class_id == q.class_id)
      errors[i] = angular_distance(hit.pose, q.pose) * 180.0 / std::numbers::pi;
  });
  EvalReport rep;
  rep.n_queries = queries.size();
  std::vector<double> correct;
  for (const auto& e : errors)
    if (e) correct.push_back(*e);
  rep.n_correct = correct.size();
  rep.accuracy = static_cast<double>(rep.n_correct) / static_cast<double>(rep.n_queries);
  if (!correct.empty()) {
    std::sort(correct.begin(), correct.end());
    rep.angular_median_deg = correct[(correct.size() - 1) / 2];
    double sum = 0;
    for (double e : correct) sum += e;
    rep.angular_mean_deg = sum / static_cast<double>(correct.size());
  }
  return rep;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["accuracy"] = r.accuracy;
  j["angular_median_deg"] = r.angular_median_deg ? nlohmann::json(*r.angular_median_deg) : nlohmann::json(nullptr);
  j["angular_mean_deg"] = r.angular_mean_deg ? nlohmann::json(*r.angular_mean_deg) : nlohmann::json(nullptr);
  j["n_queries"] = r.n_queries;
  j["n_correct"] = r.n_correct;
  return j;
}

// Descriptor files: {"entries": [{"feature": [...], "class_id": n,
// "pose": [w, x, y, z]}, ...]}.

inline std::vector<DescriptorEntry> descriptors_from_json(const nlohmann::json& j) {
  std::vector<DescriptorEntry> out;
  const auto& entries = j.at("entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    DescriptorEntry d;
    d.feature = e.at("feature").get<FeatureVec>();
    d.class_id = e.at("class_id").get<std::int64_t>();
    const auto q = e.at("pose").get<std::vector<double>>();
    if (q.size() != 4) throw std::invalid_argument("descriptor " + std::to_string(i) + ": pose needs 4 values");
    d.pose = {q[0], q[1], q[2], q[3]};
    require_unit(d.pose, "descriptor pose");
    out.push_back(std::move(d));
  }
  return out;
}

inline nlohmann::json descriptors_to_json(std::span<const DescriptorEntry> entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : entries)
    arr.push_back({{"feature", d.feature},
                   {"class_id", d.class_id},
                   {"pose", {d.pose.w, d.pose.x, d.pose.y, d.pose.z}}});
  return {{"entries", arr}};
}

}  // namespace depthaug
