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

// Drives the command-line tool end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>

#include "depthaug/depthaug.hpp"
#include "support.hpp"

namespace {

using namespace depthaug;
using testsupport::TempDir;

int run(const std::string& args) {
  const std::string cmd = std::string(DEPTHAUG_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  TempDir dir{"cli"};
  std::string p(const std::string& name) const { return (dir.path() / name).string(); }
  void SetUp() override { write_text_file(dir.path() / "cube.obj", testsupport::cube_obj()); }
};

TEST_F(Cli, PairsWithFlagOverrides) {
  ASSERT_EQ(run("pairs --mesh " + p("cube.obj") + " --class_id 3 --out " + p("ds") +
                " --subdivisions 1 --in_plane_degrees 0,15 --width 32 --height 32 --master_seed 5"),
            0);
  const auto m = read_manifest(dir.path() / "ds");
  EXPECT_EQ(m.records.size(), 2 * hemisphere_vertex_count(1, Hemisphere::upper));
  EXPECT_EQ(m.master_seed, 5u);
  const auto s = load_pair(dir.path() / "ds", m.records[0]);
  EXPECT_EQ(s.clean.width, 32);
  EXPECT_EQ(s.meta.class_id, 3);
  EXPECT_FALSE(m.records[0].augmented.empty());
}

TEST_F(Cli, RenderFromConfigFile) {
  write_text_file(dir.path() / "cfg.json",
                  R"({"objects": [{"mesh": "cube.obj", "class_id": 1}],
                      "viewsphere": {"subdivisions": 0, "hemisphere": "full", "in_plane_degrees": [0]}})");
  ASSERT_EQ(run("render --config " + p("cfg.json") + " --out " + p("r")), 0);
  const auto m = read_manifest(dir.path() / "r");
  EXPECT_EQ(m.records.size(), 12u);
  EXPECT_TRUE(m.records[0].augmented.empty());
}

TEST_F(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run("pairs --mesh " + p("cube.obj") + " --out " + p("x") + " --subdivisions 9"), 1);
  EXPECT_EQ(run("pairs --mesh " + p("missing.obj") + " --out " + p("x")), 1);
  EXPECT_EQ(run("pairs --out " + p("x") + " --no_such_flag 3"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST_F(Cli, AugmentExportAndNoise) {
  DepthPatch clean(64, 64);
  for (int r = 20; r < 40; ++r)
    for (int c = 20; c < 40; ++c) clean.at(r, c) = 0.6f;
  write_file(dir.path() / "clean.dpz", write_tensor(clean));
  ASSERT_EQ(run("augment --in " + p("clean.dpz") + " --out " + p("aug.dpz") + " --mask-out " + p("mask.dpz") +
                " --seed 4 --index 2"),
            0);
  const auto aug = read_tensor(read_file(dir.path() / "aug.dpz"));
  EXPECT_EQ(read_mask_tensor(read_file(dir.path() / "mask.dpz")), foreground_mask(clean));
  const auto expected = augment(clean, sample_for_item(AugmentationConfig{}, 4, 2)).augmented;
  EXPECT_EQ(aug.values, expected.values);

  ASSERT_EQ(run("export-png --in " + p("aug.dpz") + " --out " + p("aug.png")), 0);
  EXPECT_TRUE(import_png16(read_file(dir.path() / "aug.png")).same_shape(aug));

  ASSERT_EQ(run("noise-preview --kind cellular --frequency 0.1 --size 16 --out " + p("n.dpz")), 0);
  const auto n = read_tensor(read_file(dir.path() / "n.dpz"));
  EXPECT_EQ(n.width, 16);
  EXPECT_EQ(run("noise-preview --kind simplex --out " + p("n2.dpz")), 1);
}

TEST_F(Cli, Eval) {
  std::vector<DescriptorEntry> db(3);
  db[0] = {{0, 0}, 1, {}};
  db[1] = {{5, 0}, 2, {}};
  db[2] = {{0, 5}, 3, {}};
  write_text_file(dir.path() / "db.json", descriptors_to_json(db).dump());
  ASSERT_EQ(run("eval --db " + p("db.json") + " --queries " + p("db.json") + " --out " + p("rep.json")), 0);
  const auto rep = json::parse(read_text_file(dir.path() / "rep.json"));
  EXPECT_EQ(rep["accuracy"], 1.0);
  EXPECT_EQ(rep["n_queries"], 3);
  EXPECT_EQ(rep["angular_median_deg"], 0.0);
}

}  // namespace
