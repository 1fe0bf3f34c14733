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

#include <png.h>

#include <bit>
#include <csetjmp>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "depthaug/core.hpp"
#include "depthaug/renderer.hpp"

namespace depthaug {

using Bytes = std::vector<std::uint8_t>;

// DPZ1 tensor files ----------------------------------------------------------
//
//   offset  size  field
//   0       4     magic "DPZ1"
//   4       4     height    (u32 little-endian)
//   8       4     width     (u32 little-endian)
//   12      4     channels  (u32 little-endian)
//   16      4·HWC payload   (f32 little-endian, row-major, channel-last)

inline constexpr char kTensorMagic[4] = {'D', 'P', 'Z', '1'};
inline constexpr std::size_t kTensorHeaderSize = 16;

struct Tensor {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;
  std::vector<float> data;
};

namespace pack_detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in[offset + k]) << (8 * k);
  return v;
}

}  // namespace pack_detail

inline Bytes encode_tensor(const Tensor& t) {
  const std::uint64_t n = std::uint64_t{t.height} * t.width * t.channels;
  if (n != t.data.size()) throw std::invalid_argument("encode_tensor: payload size does not match shape");
  Bytes out;
  out.reserve(kTensorHeaderSize + 4 * n);
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  pack_detail::put_u32(out, t.height);
  pack_detail::put_u32(out, t.width);
  pack_detail::put_u32(out, t.channels);
  for (float f : t.data) pack_detail::put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

inline Tensor decode_tensor(std::span<const std::uint8_t> in) {
  if (in.size() < 4) throw FormatError(in.size(), "truncated header");
  if (std::memcmp(in.data(), kTensorMagic, 4) != 0) throw FormatError(0, "unsupported magic");
  if (in.size() < kTensorHeaderSize) throw FormatError(in.size(), "truncated header");
  Tensor t;
  t.height = pack_detail::get_u32(in, 4);
  t.width = pack_detail::get_u32(in, 8);
  t.channels = pack_detail::get_u32(in, 12);
  const std::uint64_t n = std::uint64_t{t.height} * t.width * t.channels;
  const std::uint64_t expected = kTensorHeaderSize + 4 * n;
  if (in.size() < expected) throw FormatError(in.size(), "truncated payload");
  if (in.size() > expected) throw FormatError(expected, "trailing bytes after payload");
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    t.data[i] = std::bit_cast<float>(pack_detail::get_u32(in, kTensorHeaderSize + 4 * i));
  return t;
}

inline Bytes write_tensor(const DepthPatch& patch) {
  return encode_tensor({static_cast<std::uint32_t>(patch.height), static_cast<std::uint32_t>(patch.width), 1,
                        patch.values});
}

inline DepthPatch read_tensor(std::span<const std::uint8_t> bytes, const DepthWindow& window = {}) {
  Tensor t = decode_tensor(bytes);
  if (t.channels != 1) throw FormatError(12, "expected a single-channel tensor");
  DepthPatch p;
  p.width = static_cast<int>(t.width);
  p.height = static_cast<int>(t.height);
  p.values = std::move(t.data);
  p.window = window;
  return p;
}

/// Masks are stored as single-channel tensors of 0.0f / 1.0f.
inline Bytes write_mask_tensor(const ForegroundMask& mask) { return write_tensor(mask_as_patch(mask)); }

inline ForegroundMask read_mask_tensor(std::span<const std::uint8_t> bytes) {
  const DepthPatch p = read_tensor(bytes);
  ForegroundMask m(p.width, p.height);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.values[i] != 0.0f && p.values[i] != 1.0f)
      throw FormatError(kTensorHeaderSize + 4 * i, "mask value is not 0 or 1");
    m.values[i] = p.values[i] != 0.0f;
  }
  return m;
}

// Files ------------------------------------------------------------------------

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// 16-bit grayscale PNG (inspection only) ---------------------------------------

namespace png_detail {

struct Source {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

struct Image {
  std::uint32_t width = 0, height = 0;
  int bit_depth = 0;
  Bytes pixels;  // packed rows as libpng delivers them
  std::vector<png_bytep> rows;
};

inline void write_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

inline void flush_cb(png_structp) {}

inline void read_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* src = static_cast<Source*>(png_get_io_ptr(png));
  if (src->size - src->pos < len) png_error(png, "truncated PNG stream");
  std::memcpy(data, src->data + src->pos, len);
  src->pos += len;
}

inline void silent_warning(png_structp, png_const_charp) {}

// libpng reports errors by longjmp; the two functions below hold only
// trivially destructible locals so the jump skips no destructors.

inline bool write_gray16(Bytes* out, png_bytep* rows, std::uint32_t width, std::uint32_t height) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, write_cb, flush_cb);
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

inline bool read_gray(Source* src, Image* img) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, src, read_cb);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  img->bit_depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || (img->bit_depth != 8 && img->bit_depth != 16))
    png_error(png, "expected 8- or 16-bit grayscale");
  img->width = png_get_image_width(png, info);
  img->height = png_get_image_height(png, info);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  img->pixels.resize(stride * img->height);
  img->rows.resize(img->height);
  for (std::uint32_t r = 0; r < img->height; ++r) img->rows[r] = img->pixels.data() + r * stride;
  png_read_image(png, img->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

}  // namespace png_detail

/// 16-bit grayscale PNG; value v becomes round(v·65535).
inline Bytes export_png16(const DepthPatch& patch) {
  if (patch.width <= 0 || patch.height <= 0) throw std::invalid_argument("export_png16: empty patch");
  Bytes pixels(patch.size() * 2);
  for (std::size_t i = 0; i < patch.size(); ++i) {
    const float v = patch.values[i];
    if (!(v >= 0.0f && v <= 1.0f))
      throw std::invalid_argument("export_png16: value outside [0, 1] at pixel " + std::to_string(i));
    const auto q = static_cast<std::uint16_t>(std::floor(static_cast<double>(v) * 65535.0 + 0.5));
    pixels[2 * i] = static_cast<std::uint8_t>(q >> 8);  // PNG samples are big-endian
    pixels[2 * i + 1] = static_cast<std::uint8_t>(q & 0xFF);
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(patch.height));
  for (int r = 0; r < patch.height; ++r) rows[r] = pixels.data() + static_cast<std::size_t>(r) * patch.width * 2;
  Bytes out;
  if (!png_detail::write_gray16(&out, rows.data(), static_cast<std::uint32_t>(patch.width),
                                static_cast<std::uint32_t>(patch.height)))
    throw std::runtime_error("export_png16: PNG encoding failed");
  return out;
}

/// Reads an 8- or 16-bit grayscale PNG back into [0, 1].
inline DepthPatch import_png16(std::span<const std::uint8_t> bytes) {
  png_detail::Source src{bytes.data(), bytes.size(), 0};
  png_detail::Image img;
  if (!png_detail::read_gray(&src, &img)) throw FormatError(src.pos, "invalid or unsupported PNG");
  DepthPatch p(static_cast<int>(img.width), static_cast<int>(img.height));
  for (std::uint32_t r = 0; r < img.height; ++r)
    for (std::uint32_t c = 0; c < img.width; ++c) {
      const png_bytep row = img.rows[r];
      const double v = img.bit_depth == 16 ? ((row[2 * c] << 8) | row[2 * c + 1]) / 65535.0 : row[c] / 255.0;
      p.at(static_cast<int>(r), static_cast<int>(c)) = static_cast<float>(v);
    }
  return p;
}

}  // namespace depthaug
