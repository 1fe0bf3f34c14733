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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "depthaug/augment.hpp"
#include "depthaug/datapack.hpp"
#include "depthaug/geometry.hpp"
#include "depthaug/renderer.hpp"
#include "depthaug/viewsphere.hpp"

namespace depthaug {

using json = nlohmann::json;

inline constexpr int kManifestSchemaVersion = 1;

// Enum <-> string --------------------------------------------------------------

inline std::string_view to_string(Hemisphere h) { return h == Hemisphere::full ? "full" : "upper"; }
inline std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::regular: return "regular";
    case Symmetry::plane_symmetric: return "plane_symmetric";
    case Symmetry::axis_symmetric: return "axis_symmetric";
  }
  return "?";
}
inline std::string_view to_string(IcosahedronOrientation o) {
  return o == IcosahedronOrientation::canonical ? "canonical" : "pole_aligned";
}

inline Hemisphere hemisphere_from_string(std::string_view s) {
  if (s == "full") return Hemisphere::full;
  if (s == "upper") return Hemisphere::upper;
  throw ConfigError("unknown hemisphere '" + std::string(s) + "'");
}
inline Symmetry symmetry_from_string(std::string_view s) {
  if (s == "regular") return Symmetry::regular;
  if (s == "plane_symmetric") return Symmetry::plane_symmetric;
  if (s == "axis_symmetric") return Symmetry::axis_symmetric;
  throw ConfigError("unknown symmetry '" + std::string(s) + "'");
}
inline IcosahedronOrientation orientation_from_string(std::string_view s) {
  if (s == "canonical") return IcosahedronOrientation::canonical;
  if (s == "pole_aligned") return IcosahedronOrientation::pole_aligned;
  throw ConfigError("unknown orientation '" + std::string(s) + "'");
}

// Config sections ----------------------------------------------------------------

inline json to_json(const ViewSphereConfig& c) {
  return {{"radius", c.radius},
          {"subdivisions", c.subdivisions},
          {"hemisphere", to_string(c.hemisphere)},
          {"in_plane_degrees", c.in_plane_degrees},
          {"symmetry", to_string(c.symmetry)},
          {"orientation", to_string(c.orientation)}};
}

inline json to_json(const RenderConfig& c) {
  return {{"width", c.width},
          {"height", c.height},
          {"depth_window", c.depth_window},
          {"focal", c.focal},
          {"fill_fraction", c.fill_fraction}};
}

inline json range_json(const Range& r) { return json::array({r.lo, r.hi}); }
inline json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

inline json to_json(const AugmentationConfig& c) {
  json kinds = json::array();
  for (auto k : c.background_kinds) kinds.push_back(to_string(k));
  return {{"background_kinds", kinds},
          {"background_frequency", range_json(c.background_frequency)},
          {"fxy_frequency", range_json(c.fxy_frequency)},
          {"fz_frequency", range_json(c.fz_frequency)},
          {"w_xy", range_json(c.w_xy)},
          {"w_z", range_json(c.w_z)},
          {"occlusion_count", range_json(c.occlusion_count)},
          {"r_ave", range_json(c.r_ave)},
          {"n_vert", range_json(c.n_vert)},
          {"sigma", range_json(c.sigma)},
          {"epsilon_fraction", range_json(c.epsilon_fraction)},
          {"occluder_depth", range_json(c.occluder_depth)},
          {"center_mixture_p", c.center_mixture_p},
          {"stages",
           {{"background", c.stages.background},
            {"foreground", c.stages.foreground},
            {"occlusion", c.stages.occlusion},
            {"sensor", c.stages.sensor}}}};
}

namespace config_detail {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

inline void read_range(const json& j, const char* key, Range& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string("config field '") + key + "' must be [lo, hi]");
  out = {v[0].get<double>(), v[1].get<double>()};
}

inline void read_range(const json& j, const char* key, IntRange& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw ConfigError(std::string("config field '") + key + "' must be [lo, hi] integers");
  out = {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace config_detail

inline ViewSphereConfig viewsphere_from_json(const json& j) {
  using namespace config_detail;
  ViewSphereConfig c;
  read_opt(j, "radius", c.radius);
  read_opt(j, "subdivisions", c.subdivisions);
  read_opt(j, "in_plane_degrees", c.in_plane_degrees);
  if (j.contains("hemisphere")) c.hemisphere = hemisphere_from_string(j.at("hemisphere").get<std::string>());
  if (j.contains("symmetry")) c.symmetry = symmetry_from_string(j.at("symmetry").get<std::string>());
  if (j.contains("orientation"))
    c.orientation = orientation_from_string(j.at("orientation").get<std::string>());
  c.validate();
  return c;
}

inline RenderConfig render_from_json(const json& j) {
  using namespace config_detail;
  RenderConfig c;
  read_opt(j, "width", c.width);
  read_opt(j, "height", c.height);
  read_opt(j, "depth_window", c.depth_window);
  read_opt(j, "focal", c.focal);
  read_opt(j, "fill_fraction", c.fill_fraction);
  c.validate();
  return c;
}

/// Patch size comes from the render section; r_ave's upper bound follows
/// it unless given explicitly.
inline AugmentationConfig augmentation_from_json(const json& j, int width, int height) {
  using namespace config_detail;
  AugmentationConfig c = AugmentationConfig::for_patch(width, height);
  if (j.contains("background_kinds")) {
    c.background_kinds.clear();
    for (const auto& k : j.at("background_kinds")) c.background_kinds.push_back(noise_kind_from_string(k.get<std::string>()));
  }
  read_range(j, "background_frequency", c.background_frequency);
  read_range(j, "fxy_frequency", c.fxy_frequency);
  read_range(j, "fz_frequency", c.fz_frequency);
  read_range(j, "w_xy", c.w_xy);
  read_range(j, "w_z", c.w_z);
  read_range(j, "occlusion_count", c.occlusion_count);
  read_range(j, "r_ave", c.r_ave);
  read_range(j, "n_vert", c.n_vert);
  read_range(j, "sigma", c.sigma);
  read_range(j, "epsilon_fraction", c.epsilon_fraction);
  read_range(j, "occluder_depth", c.occluder_depth);
  read_opt(j, "center_mixture_p", c.center_mixture_p);
  if (j.contains("stages")) {
    const auto& s = j.at("stages");
    read_opt(s, "background", c.stages.background);
    read_opt(s, "foreground", c.stages.foreground);
    read_opt(s, "occlusion", c.stages.occlusion);
    read_opt(s, "sensor", c.stages.sensor);
  }
  c.validate();
  return c;
}

// Dataset config -------------------------------------------------------------------

struct ObjectSpec {
  std::filesystem::path mesh;
  std::int64_t class_id = 0;
  std::optional<Symmetry> symmetry;  // falls back to the viewsphere setting
};

struct DatasetConfig {
  std::string dataset = "dataset";
  std::uint64_t master_seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
  bool pairs = true;     // also emit augmented patches and masks
  std::vector<ObjectSpec> objects;
  ViewSphereConfig viewsphere;
  RenderConfig render;
  AugmentationConfig augmentation;
};

/// Parses the dataset config document. Relative mesh paths resolve against
/// `base_dir`.
inline DatasetConfig dataset_config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace config_detail;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  DatasetConfig c;
  read_opt(j, "dataset", c.dataset);
  read_opt(j, "master_seed", c.master_seed);
  read_opt(j, "workers", c.workers);
  read_opt(j, "pairs", c.pairs);
  c.viewsphere = viewsphere_from_json(j.value("viewsphere", json::object()));
  c.render = render_from_json(j.value("render", json::object()));
  c.augmentation = augmentation_from_json(j.value("augmentation", json::object()), c.render.width, c.render.height);
  if (j.contains("objects")) {
    for (const auto& o : j.at("objects")) {
      ObjectSpec spec;
      if (!o.contains("mesh")) throw ConfigError("object entry without 'mesh'");
      spec.mesh = o.at("mesh").get<std::string>();
      if (spec.mesh.is_relative() && !base_dir.empty()) spec.mesh = base_dir / spec.mesh;
      read_opt(o, "class_id", spec.class_id);
      if (o.contains("symmetry")) spec.symmetry = symmetry_from_string(o.at("symmetry").get<std::string>());
      c.objects.push_back(std::move(spec));
    }
  }
  return c;
}

inline json to_json(const DatasetConfig& c) {
  json objects = json::array();
  for (const auto& o : c.objects) {
    json e = {{"mesh", o.mesh.generic_string()}, {"class_id", o.class_id}};
    if (o.symmetry) e["symmetry"] = to_string(*o.symmetry);
    objects.push_back(e);
  }
  return {{"dataset", c.dataset},          {"master_seed", c.master_seed},
          {"workers", c.workers},          {"pairs", c.pairs},
          {"objects", objects},            {"viewsphere", to_json(c.viewsphere)},
          {"render", to_json(c.render)},   {"augmentation", to_json(c.augmentation)}};
}

/// CLI flag name → location in the config document. Every config field is
/// reachable by a flag of the same name.
struct ConfigField {
  const char* flag;
  const char* pointer;
};

inline constexpr ConfigField kConfigFields[] = {
    {"dataset", "/dataset"},
    {"master_seed", "/master_seed"},
    {"workers", "/workers"},
    {"pairs", "/pairs"},
    {"radius", "/viewsphere/radius"},
    {"subdivisions", "/viewsphere/subdivisions"},
    {"hemisphere", "/viewsphere/hemisphere"},
    {"in_plane_degrees", "/viewsphere/in_plane_degrees"},
    {"symmetry", "/viewsphere/symmetry"},
    {"orientation", "/viewsphere/orientation"},
    {"width", "/render/width"},
    {"height", "/render/height"},
    {"depth_window", "/render/depth_window"},
    {"focal", "/render/focal"},
    {"fill_fraction", "/render/fill_fraction"},
    {"background_kinds", "/augmentation/background_kinds"},
    {"background_frequency", "/augmentation/background_frequency"},
    {"fxy_frequency", "/augmentation/fxy_frequency"},
    {"fz_frequency", "/augmentation/fz_frequency"},
    {"w_xy", "/augmentation/w_xy"},
    {"w_z", "/augmentation/w_z"},
    {"occlusion_count", "/augmentation/occlusion_count"},
    {"r_ave", "/augmentation/r_ave"},
    {"n_vert", "/augmentation/n_vert"},
    {"sigma", "/augmentation/sigma"},
    {"epsilon_fraction", "/augmentation/epsilon_fraction"},
    {"occluder_depth", "/augmentation/occluder_depth"},
    {"center_mixture_p", "/augmentation/center_mixture_p"},
    {"background", "/augmentation/stages/background"},
    {"foreground", "/augmentation/stages/foreground"},
    {"occlusion", "/augmentation/stages/occlusion"},
    {"sensor", "/augmentation/stages/sensor"},
};

/// Interprets a flag value: JSON literal if it parses ("600", "true",
/// "[0,10]"), a list if it contains commas ("0,10"), else a string.
inline json parse_flag_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (!v.is_discarded()) return v;
  if (text.find(',') != std::string::npos) {
    v = json::parse("[" + text + "]", nullptr, false);
    if (!v.is_discarded()) return v;
    json list = json::array();
    std::size_t start = 0;
    for (;;) {
      const auto comma = text.find(',', start);
      list.push_back(text.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return list;
  }
  return text;
}

inline void apply_override(json& doc, std::string_view flag, const std::string& value) {
  for (const auto& f : kConfigFields)
    if (flag == f.flag) {
      doc[json::json_pointer(f.pointer)] = parse_flag_value(value);
      return;
    }
  throw ConfigError("unknown config field '" + std::string(flag) + "'");
}

// Manifest ---------------------------------------------------------------------------

struct ManifestRecord {
  std::uint64_t id = 0;
  std::int64_t class_id = 0;
  Quaternion pose;  // camera-to-object rotation
  std::size_t viewpoint_index = 0;
  double in_plane_deg = 0;
  std::string clean;      // paths relative to the dataset root
  std::string augmented;  // empty when pairs are off
  std::string mask;
  bool empty_view = false;
  bool ok = true;
  std::string error;
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::string dataset;
  std::uint64_t master_seed = 0;
  json render;
  json augmentation;
  json viewsphere;
  bool partial = false;
  std::vector<ManifestRecord> records;
};

inline json to_json(const Manifest& m) {
  json records = json::array();
  for (const auto& r : m.records) {
    json e = {{"id", r.id},
              {"class_id", r.class_id},
              {"pose", {r.pose.w, r.pose.x, r.pose.y, r.pose.z}},
              {"viewpoint_index", r.viewpoint_index},
              {"in_plane_deg", r.in_plane_deg},
              {"files", {{"clean", r.clean}, {"augmented", r.augmented}, {"mask", r.mask}}},
              {"empty_view", r.empty_view},
              {"status", r.ok ? "ok" : "failed"}};
    if (!r.ok) e["error"] = r.error;
    records.push_back(std::move(e));
  }
  return {{"schema_version", m.schema_version},
          {"dataset", m.dataset},
          {"master_seed", m.master_seed},
          {"partial", m.partial},
          {"viewsphere", m.viewsphere},
          {"render", m.render},
          {"augmentation", m.augmentation},
          {"records", records}};
}

/// Parses a manifest. With a non-empty `root`, checks that every file of
/// every successful record exists.
inline Manifest manifest_from_json(const json& j, const std::filesystem::path& root = {}) {
  Manifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kManifestSchemaVersion)
      throw ConfigError("unsupported manifest schema_version " + std::to_string(m.schema_version));
    m.dataset = j.at("dataset").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.partial = j.value("partial", false);
    m.viewsphere = j.value("viewsphere", json::object());
    m.render = j.value("render", json::object());
    m.augmentation = j.value("augmentation", json::object());
    std::set<std::uint64_t> ids;
    for (const auto& e : j.at("records")) {
      ManifestRecord r;
      r.id = e.at("id").get<std::uint64_t>();
      if (!ids.insert(r.id).second) throw ConfigError("duplicate record id " + std::to_string(r.id));
      r.class_id = e.at("class_id").get<std::int64_t>();
      const auto q = e.at("pose").get<std::vector<double>>();
      if (q.size() != 4) throw ConfigError("record " + std::to_string(r.id) + ": pose needs 4 values");
      r.pose = {q[0], q[1], q[2], q[3]};
      r.viewpoint_index = e.at("viewpoint_index").get<std::size_t>();
      r.in_plane_deg = e.at("in_plane_deg").get<double>();
      const auto& files = e.at("files");
      r.clean = files.value("clean", "");
      r.augmented = files.value("augmented", "");
      r.mask = files.value("mask", "");
      r.empty_view = e.value("empty_view", false);
      r.ok = e.value("status", "ok") == "ok";
      r.error = e.value("error", "");
      if (!root.empty() && r.ok)
        for (const auto* f : {&r.clean, &r.augmented, &r.mask})
          if (!f->empty() && !std::filesystem::exists(root / *f))
            throw ConfigError("record " + std::to_string(r.id) + ": missing file " + *f);
      m.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

inline Manifest read_manifest(const std::filesystem::path& dataset_root) {
  const auto text = read_text_file(dataset_root / "manifest.json");
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("manifest.json is not valid JSON");
  return manifest_from_json(j, dataset_root);
}

// Generation -----------------------------------------------------------------------

/// Replaces the clean render with a simulated sensor scan before
/// augmentation. No implementation ships with the library.
using SensorHook = std::function<DepthPatch(const TriangleMesh&, const Viewpoint&, const DepthPatch& clean)>;

struct GenerateOptions {
  std::optional<unsigned> workers;  // overrides the config when set
  SensorHook sensor;
  Diagnostics* diagnostics = nullptr;
};

inline std::string record_file(std::string_view dir, std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu.dpz", static_cast<unsigned long long>(id));
  return std::string(dir) + "/" + buf;
}

/// Renders every (object, viewpoint) of the config, writes clean patches
/// (plus augmented patches and masks when pairs are on) under `out_dir`, and
/// writes manifest.json last. Item i uses the RNG stream
/// item_seed(master_seed, i), so output bytes do not depend on the worker
/// count. Per-item failures are recorded and flag the manifest partial.
inline Manifest generate_dataset(const DatasetConfig& cfg, const std::filesystem::path& out_dir,
                                 const GenerateOptions& opts = {}) {
  cfg.viewsphere.validate();
  cfg.render.validate();
  cfg.augmentation.validate();
  if (cfg.objects.empty()) throw ConfigError("dataset config lists no objects");
  if (cfg.pairs && cfg.augmentation.stages.sensor && !opts.sensor)
    throw ConfigError("sensor stage enabled but no sensor hook is installed");

  struct Job {
    std::size_t object;
    Viewpoint viewpoint;
  };
  struct Object {
    TriangleMesh centered;
    double radius = 0;
    TriangleMesh original;
  };
  std::vector<Object> objects;
  std::vector<Job> jobs;
  for (std::size_t o = 0; o < cfg.objects.size(); ++o) {
    const auto& spec = cfg.objects[o];
    std::string text;
    try {
      text = read_text_file(spec.mesh);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    Object obj;
    obj.original = load_mesh(text, opts.diagnostics);
    obj.original.validate();
    obj.centered = obj.original.translated(-obj.original.centroid());
    obj.radius = obj.centered.bounding_radius({});
    objects.push_back(std::move(obj));
    ViewSphereConfig vs = cfg.viewsphere;
    vs.symmetry = spec.symmetry.value_or(cfg.viewsphere.symmetry);
    for (const auto& vp : generate_viewpoints(vs)) jobs.push_back({o, vp});
  }

  std::filesystem::create_directories(out_dir);
  Manifest m;
  m.dataset = cfg.dataset;
  m.master_seed = cfg.master_seed;
  m.viewsphere = to_json(cfg.viewsphere);
  m.render = to_json(cfg.render);
  m.augmentation = to_json(cfg.augmentation);
  m.records.resize(jobs.size());

  const unsigned workers = opts.workers.value_or(cfg.workers);
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Object& obj = objects[job.object];
    ManifestRecord& rec = m.records[i];
    rec.id = i;
    rec.class_id = cfg.objects[job.object].class_id;
    rec.pose = job.viewpoint.camera_pose.rotation;
    rec.viewpoint_index = job.viewpoint.vertex_index;
    rec.in_plane_deg = job.viewpoint.in_plane_deg;
    try {
      const Camera cam = view_camera(job.viewpoint, cfg.render, obj.radius);
      const DepthPatch clean = render_depth(obj.centered, cam, cfg.render, opts.diagnostics);
      rec.empty_view = clean.max_value() == 0.0f;
      rec.clean = record_file("clean", i);
      write_file(out_dir / rec.clean, write_tensor(clean));
      if (cfg.pairs) {
        DepthPatch input = clean;
        if (cfg.augmentation.stages.sensor) input = opts.sensor(obj.centered, job.viewpoint, clean);
        const PairSample s = augment(input, sample_for_item(cfg.augmentation, cfg.master_seed, i));
        rec.augmented = record_file("augmented", i);
        rec.mask = record_file("mask", i);
        write_file(out_dir / rec.augmented, write_tensor(s.augmented));
        write_file(out_dir / rec.mask, write_mask_tensor(foreground_mask(clean)));
      }
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });
  for (const auto& r : m.records) m.partial = m.partial || !r.ok;
  write_text_file(out_dir / "manifest.json", to_json(m).dump(2) + "\n");
  return m;
}

/// Loads one record's clean/augmented/mask triple from a dataset root.
inline PairSample load_pair(const std::filesystem::path& root, const ManifestRecord& r) {
  PairSample s;
  s.clean = read_tensor(read_file(root / r.clean));
  if (!r.augmented.empty()) s.augmented = read_tensor(read_file(root / r.augmented));
  if (!r.mask.empty()) s.mask = read_mask_tensor(read_file(root / r.mask));
  s.meta = {r.class_id, r.pose, r.viewpoint_index, r.in_plane_deg};
  return s;
}

}  // namespace depthaug
