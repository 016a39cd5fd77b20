// Copyright 2026 The sealread Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <png.h>

#include <cstring>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/image.hpp"

namespace sealread {

namespace {

struct PngImage {
  png_image img;
  PngImage() {
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

Image finish_read(PngImage& p, const std::string& what) {
  p.img.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(p.img));
  if (!png_image_finish_read(&p.img, nullptr, buf.data(), 0, nullptr))
    throw RuntimeFailure(fmt::format("{}: {}", what, p.img.message));
  return from_gray8(buf, static_cast<int>(p.img.width), static_cast<int>(p.img.height));
}

void prepare_write(PngImage& p, const Image& img) {
  if (img.empty()) throw ValidationError("cannot encode an empty image");
  p.img.width = static_cast<png_uint_32>(img.width());
  p.img.height = static_cast<png_uint_32>(img.height());
  p.img.format = PNG_FORMAT_GRAY;
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  PngImage p;
  if (!png_image_begin_read_from_file(&p.img, path.c_str()))
    throw RuntimeFailure(fmt::format("cannot read PNG {}: {}", path.string(), p.img.message));
  return finish_read(p, path.string());
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  PngImage p;
  if (!png_image_begin_read_from_memory(&p.img, bytes.data(), bytes.size()))
    throw RuntimeFailure(fmt::format("cannot decode PNG: {}", p.img.message));
  return finish_read(p, "PNG buffer");
}

void write_png(const Image& img, const std::filesystem::path& path) {
  PngImage p;
  prepare_write(p, img);
  const auto gray = to_gray8(img);
  if (!png_image_write_to_file(&p.img, path.c_str(), 0, gray.data(), 0, nullptr))
    throw RuntimeFailure(fmt::format("cannot write PNG {}: {}", path.string(), p.img.message));
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  PngImage p;
  prepare_write(p, img);
  const auto gray = to_gray8(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&p.img, nullptr, &size, 0, gray.data(), 0, nullptr))
    throw RuntimeFailure(fmt::format("cannot size PNG: {}", p.img.message));
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&p.img, out.data(), &size, 0, gray.data(), 0, nullptr))
    throw RuntimeFailure(fmt::format("cannot encode PNG: {}", p.img.message));
  out.resize(size);
  return out;
}

}  // namespace sealread
