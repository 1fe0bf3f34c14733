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

// depthaug command-line tool.
//
//   depthaug render        render clean depth patches + manifest
//   depthaug pairs         render and emit (augmented, clean, mask) triples
//   depthaug augment       augment a single DPZ1 patch
//   depthaug export-png    convert a DPZ1 patch to 16-bit PNG
//   depthaug eval          nearest-neighbor descriptor evaluation
//   depthaug noise-preview write a noise field as PNG or DPZ1
//
// Exit codes: 0 success, 1 configuration/input error, 2 partial generation
// failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "depthaug/depthaug.hpp"

namespace fs = std::filesystem;
using namespace depthaug;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct GenerateArgs {
  std::string config;
  std::string out;
  std::string mesh;
  std::int64_t class_id = 0;
  std::map<std::string, std::string> overrides;
};

void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
  for (const auto& f : kConfigFields) {
    cmd->add_option_function<std::string>(
        std::string("--") + f.flag, [&overrides, name = std::string(f.flag)](const std::string& v) {
          overrides[name] = v;
        },
        std::string("override config field ") + f.pointer);
  }
}

json load_config_doc(const std::string& path) {
  if (path.empty()) return json::object();
  json doc = json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return doc;
}

DatasetConfig build_dataset_config(const GenerateArgs& a, bool pairs) {
  json doc = load_config_doc(a.config);
  for (const auto& [flag, value] : a.overrides) apply_override(doc, flag, value);
  if (!a.mesh.empty()) doc["objects"] = json::array({{{"mesh", a.mesh}, {"class_id", a.class_id}}});
  const fs::path base = a.config.empty() || !a.mesh.empty() ? fs::path{} : fs::path(a.config).parent_path();
  DatasetConfig cfg = dataset_config_from_json(doc, base);
  cfg.pairs = pairs;
  return cfg;
}

int run_generate(const GenerateArgs& a, bool pairs) {
  const DatasetConfig cfg = build_dataset_config(a, pairs);
  Diagnostics diag;
  GenerateOptions opts;
  opts.diagnostics = &diag;
  const Manifest m = generate_dataset(cfg, a.out, opts);
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
  std::size_t failed = 0;
  for (const auto& r : m.records)
    if (!r.ok) {
      ++failed;
      std::cerr << "record " << r.id << " failed: " << r.error << "\n";
    }
  std::cout << "wrote " << m.records.size() - failed << " of " << m.records.size() << " records to " << a.out
            << "\n";
  return m.partial ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic depth patch generation and augmentation"};
  app.require_subcommand(1);

  GenerateArgs render_args, pairs_args;
  for (auto [name, args, help] :
       {std::tuple{"render", &render_args, "render clean depth patches for every viewpoint"},
        std::tuple{"pairs", &pairs_args, "render and emit augmented/clean/mask training triples"}}) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", args->config, "dataset config JSON");
    cmd->add_option("--out", args->out, "output directory")->required();
    cmd->add_option("--mesh", args->mesh, "single OBJ mesh (replaces the config's object list)");
    cmd->add_option("--class_id", args->class_id, "class id for --mesh");
    add_config_flags(cmd, args->overrides);
  }

  struct {
    std::string in, out, mask, config;
    std::uint64_t seed = 0, index = 0;
    std::map<std::string, std::string> overrides;
  } aug;
  auto* aug_cmd = app.add_subcommand("augment", "augment one DPZ1 depth patch");
  aug_cmd->add_option("--in", aug.in, "clean DPZ1 patch")->required();
  aug_cmd->add_option("--out", aug.out, "augmented DPZ1 output")->required();
  aug_cmd->add_option("--mask-out", aug.mask, "foreground mask DPZ1 output");
  aug_cmd->add_option("--config", aug.config, "config JSON (augmentation section used)");
  aug_cmd->add_option("--seed", aug.seed, "master seed");
  aug_cmd->add_option("--index", aug.index, "image index within the run");
  add_config_flags(aug_cmd, aug.overrides);

  std::string png_in, png_out;
  auto* png_cmd = app.add_subcommand("export-png", "convert a DPZ1 patch to 16-bit grayscale PNG");
  png_cmd->add_option("--in", png_in, "DPZ1 patch")->required();
  png_cmd->add_option("--out", png_out, "PNG output")->required();

  std::string db_path, queries_path, report_path;
  unsigned eval_workers = 1;
  auto* eval_cmd = app.add_subcommand("eval", "nearest-neighbor evaluation of descriptor files");
  eval_cmd->add_option("--db", db_path, "descriptor database JSON")->required();
  eval_cmd->add_option("--queries", queries_path, "query descriptors JSON")->required();
  eval_cmd->add_option("--out", report_path, "report JSON (stdout when omitted)");
  eval_cmd->add_option("--workers", eval_workers, "query threads (0 = all cores)");

  std::string noise_kind = "perlin", noise_out;
  double noise_freq = 0.05;
  std::uint64_t noise_seed = 0;
  int noise_octaves = 1, noise_size = 64;
  auto* noise_cmd = app.add_subcommand("noise-preview", "write a noise field as PNG (.png) or DPZ1");
  noise_cmd->add_option("--kind", noise_kind, "perlin | cellular | white");
  noise_cmd->add_option("--frequency", noise_freq, "cycles per pixel");
  noise_cmd->add_option("--seed", noise_seed, "seed");
  noise_cmd->add_option("--octaves", noise_octaves, "perlin octaves");
  noise_cmd->add_option("--size", noise_size, "square field size in pixels");
  noise_cmd->add_option("--out", noise_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("render")) return run_generate(render_args, false);
    if (app.got_subcommand("pairs")) return run_generate(pairs_args, true);

    if (app.got_subcommand("augment")) {
      json doc = load_config_doc(aug.config);
      for (const auto& [flag, value] : aug.overrides) apply_override(doc, flag, value);
      const DepthPatch clean = read_tensor(read_file(aug.in));
      const auto cfg = augmentation_from_json(doc.value("augmentation", json::object()), clean.width, clean.height);
      const PairSample s = augment(clean, sample_for_item(cfg, aug.seed, aug.index));
      write_file(aug.out, write_tensor(s.augmented));
      if (!aug.mask.empty()) write_file(aug.mask, write_mask_tensor(s.mask));
      return kExitOk;
    }

    if (app.got_subcommand("export-png")) {
      write_file(png_out, export_png16(read_tensor(read_file(png_in))));
      return kExitOk;
    }

    if (app.got_subcommand("eval")) {
      auto load = [](const std::string& p) {
        json j = json::parse(read_text_file(p), nullptr, false);
        if (j.is_discarded()) throw ConfigError(p + " is not valid JSON");
        return descriptors_from_json(j);
      };
      const auto db = load(db_path);
      const auto queries = load(queries_path);
      const std::string report = to_json(evaluate(db, queries, eval_workers)).dump(2) + "\n";
      if (report_path.empty())
        std::cout << report;
      else
        write_text_file(report_path, report);
      return kExitOk;
    }

    if (app.got_subcommand("noise-preview")) {
      const NoiseSpec spec{noise_kind_from_string(noise_kind), noise_freq, noise_seed, noise_octaves};
      const ScalarField f = fill_field(spec, noise_size, noise_size);
      DepthPatch p(noise_size, noise_size);
      for (std::size_t i = 0; i < p.size(); ++i) p.values[i] = static_cast<float>(0.5 * (f.values[i] + 1.0));
      const bool png = fs::path(noise_out).extension() == ".png";
      write_file(noise_out, png ? export_png16(p) : write_tensor(p));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
