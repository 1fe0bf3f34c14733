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

#include <cstring>
#include <random>

#include "depthaug/datapack.hpp"
#include "support.hpp"

namespace {

using namespace depthaug;

DepthPatch random_patch(std::mt19937_64& gen, int w, int h) {
  std::uniform_real_distribution<float> u(0, 1);
  DepthPatch p(w, h);
  for (auto& v : p.values) v = u(gen);
  return p;
}

TEST(Dpz, HeaderLayout) {
  DepthPatch p(64, 64);
  const auto bytes = write_tensor(p);
  EXPECT_EQ(bytes.size(), 16u + 16384u);
  EXPECT_EQ(std::memcmp(bytes.data(), "DPZ1", 4), 0);
  EXPECT_EQ(bytes[4], 64);  // height, little-endian
  EXPECT_EQ(bytes[8], 64);  // width
  EXPECT_EQ(bytes[12], 1);  // channels
}

TEST(Dpz, KnownPayloadBytes) {
  DepthPatch p(2, 1);
  p.values = {1.0f, -2.5f};
  const auto bytes = write_tensor(p);
  // 1.0f = 0x3F800000, -2.5f = 0xC0200000, little-endian.
  const std::uint8_t expected[] = {0, 0, 0x80, 0x3F, 0, 0, 0x20, 0xC0};
  EXPECT_EQ(std::memcmp(bytes.data() + 16, expected, 8), 0);
}

TEST(Dpz, RoundTripIsBitIdentical) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 20; ++i) {
    auto p = random_patch(gen, 1 + i * 3, 2 + i);
    p.values[0] = -0.0f;
    const auto q = read_tensor(write_tensor(p));
    ASSERT_EQ(q.width, p.width);
    ASSERT_EQ(q.height, p.height);
    ASSERT_EQ(std::memcmp(q.values.data(), p.values.data(), p.size() * 4), 0);
  }
}

TEST(Dpz, MultiChannelTensor) {
  Tensor t{2, 3, 4, std::vector<float>(24)};
  for (std::size_t i = 0; i < 24; ++i) t.data[i] = static_cast<float>(i) * 0.5f;
  const auto back = decode_tensor(encode_tensor(t));
  EXPECT_EQ(back.channels, 4u);
  EXPECT_EQ(back.data, t.data);
  EXPECT_THROW(read_tensor(encode_tensor(t)), FormatError);
}

TEST(Dpz, BadMagic) {
  auto bytes = write_tensor(DepthPatch(4, 4));
  bytes[3] = '0';
  try {
    decode_tensor(bytes);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_NE(std::string(e.what()).find("unsupported magic"), std::string::npos);
  }
}

TEST(Dpz, TruncationNamesOffset) {
  const auto bytes = write_tensor(DepthPatch(4, 4));
  try {
    decode_tensor(std::span(bytes).first(bytes.size() - 3));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), bytes.size() - 3);
    EXPECT_NE(std::string(e.what()).find("truncated payload"), std::string::npos);
  }
  EXPECT_THROW(decode_tensor(std::span(bytes).first(10)), FormatError);
  auto longer = bytes;
  longer.push_back(0);
  EXPECT_THROW(decode_tensor(longer), FormatError);
}

TEST(Dpz, MaskRoundTrip) {
  ForegroundMask m(5, 3);
  m.values[4] = 1;
  m.values[7] = 1;
  EXPECT_EQ(read_mask_tensor(write_mask_tensor(m)), m);
  DepthPatch bad(2, 2);
  bad.values[1] = 0.5f;
  EXPECT_THROW(read_mask_tensor(write_tensor(bad)), FormatError);
}

TEST(Png16, ExactLevels) {
  DepthPatch p(3, 1);
  p.values = {0.0f, 1.0f, 0.5f};
  const auto back = import_png16(export_png16(p));
  EXPECT_EQ(std::lround(back.values[0] * 65535.0), 0);
  EXPECT_EQ(std::lround(back.values[1] * 65535.0), 65535);
  EXPECT_EQ(std::lround(back.values[2] * 65535.0), 32768);
}

TEST(Png16, RoundTripWithinOneLevel) {
  std::mt19937_64 gen(2);
  const auto p = random_patch(gen, 64, 48);
  const auto q = import_png16(export_png16(p));
  ASSERT_TRUE(q.same_shape(p));
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_LE(std::abs(q.values[i] - p.values[i]), 1.0 / 65535);
}

TEST(Png16, OutOfRangeAndGarbage) {
  DepthPatch p(2, 2);
  p.values[3] = 1.5f;
  EXPECT_THROW(export_png16(p), std::invalid_argument);
  const Bytes junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_THROW(import_png16(junk), FormatError);
}

TEST(Files, WriteCreatesDirectories) {
  testsupport::TempDir dir("files");
  const auto path = dir.path() / "a" / "b" / "x.dpz";
  const auto bytes = write_tensor(DepthPatch(2, 2));
  write_file(path, bytes);
  EXPECT_EQ(read_file(path), bytes);
  EXPECT_THROW(read_file(dir.path() / "missing"), std::runtime_error);
}

}  // namespace
