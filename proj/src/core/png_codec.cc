// Copyright 2026 The segloop Authors
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

#include "segloop/png_codec.h"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "segloop/error.h"

namespace segloop {
namespace {

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

struct ErrorSink {
  char message[256] = {0};
};

void OnPngError(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::strncpy(sink->message, msg, sizeof(sink->message) - 1);
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

void ReadFromCursor(png_structp png, png_bytep out, png_size_t len) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + len > cursor->bytes.size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, cursor->bytes.data() + cursor->offset, len);
  cursor->offset += len;
}

void WriteToVector(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void FlushNoop(png_structp) {}

// Which pixel layout a write call emits.
struct WriteJob {
  int width;
  int height;
  int color_type;
  int channels;
  const std::uint8_t* pixels;
  const std::vector<Rgb>* palette;
};

std::vector<std::uint8_t> WritePng(const WriteJob& job) {
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(static_cast<std::size_t>(job.height));
  std::vector<png_color> colors;
  ErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, OnPngError, OnPngWarning);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, std::string("png write: ") + sink.message);
  }
  png_set_write_fn(png, &out, WriteToVector, FlushNoop);
  png_set_IHDR(png, info, job.width, job.height, 8, job.color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (job.palette != nullptr) {
    for (const Rgb& c : *job.palette) colors.push_back(png_color{c.r, c.g, c.b});
    png_set_PLTE(png, info, colors.data(), static_cast<int>(colors.size()));
  }
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(job.width) * job.channels;
  for (int y = 0; y < job.height; ++y) {
    rows[y] = const_cast<png_bytep>(job.pixels + y * stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct RawRead {
  int width = 0;
  int height = 0;
  int color_type = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<Rgb> palette;
};

// expand=true converts to 8-bit RGB; expand=false requires a palette image and keeps indices.
RawRead ReadPng(std::span<const std::uint8_t> bytes, bool expand) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a PNG file");
  }
  RawRead result;
  ReadCursor cursor{bytes, 0};
  std::vector<png_bytep> rows;
  ErrorSink sink;
  volatile bool wrong_color_type = false;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, OnPngError, OnPngWarning);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    if (wrong_color_type) throw Error(ErrorCode::kWrongColorType, "expected an indexed (palette) PNG");
    throw Error(ErrorCode::kBadFormat, std::string("png read: ") + sink.message);
  }
  png_set_read_fn(png, &cursor, ReadFromCursor);
  png_read_info(png, info);
  result.width = static_cast<int>(png_get_image_width(png, info));
  result.height = static_cast<int>(png_get_image_height(png, info));
  result.color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  int channels = 1;
  if (expand) {
    if (result.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (result.color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (bit_depth == 16) png_set_strip_16(png);
    if (result.color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (result.color_type == PNG_COLOR_TYPE_GRAY || result.color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
    channels = 3;
  } else {
    if (result.color_type != PNG_COLOR_TYPE_PALETTE) {
      wrong_color_type = true;
      png_error(png, "wrong color type");
    }
    if (bit_depth < 8) png_set_packing(png);
    png_colorp colors = nullptr;
    int num_colors = 0;
    png_get_PLTE(png, info, &colors, &num_colors);
    for (int i = 0; i < num_colors; ++i) result.palette.push_back(Rgb{colors[i].red, colors[i].green, colors[i].blue});
  }
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<std::size_t>(result.width) * channels) {
    png_error(png, "unexpected row layout");
  }
  result.pixels.resize(stride * result.height);
  rows.resize(static_cast<std::size_t>(result.height));
  for (int y = 0; y < result.height; ++y) rows[y] = result.pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return result;
}

}  // namespace

std::vector<std::uint8_t> EncodePngRgb(const ImageRaster& image) {
  return WritePng({image.width(), image.height(), PNG_COLOR_TYPE_RGB, 3, image.data().data(), nullptr});
}

ImageRaster DecodePngRgb(std::span<const std::uint8_t> bytes) {
  RawRead raw = ReadPng(bytes, /*expand=*/true);
  return ImageRaster(raw.width, raw.height, std::move(raw.pixels));
}

std::vector<std::uint8_t> EncodePngGray(int width, int height, std::span<const std::uint8_t> gray) {
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimensionMismatch, "EncodePngGray: wrong buffer size");
  }
  return WritePng({width, height, PNG_COLOR_TYPE_GRAY, 1, gray.data(), nullptr});
}

std::vector<std::uint8_t> EncodePngIndexed(const IndexedPng& png) {
  if (png.indices.size() != static_cast<std::size_t>(png.width) * png.height) {
    throw Error(ErrorCode::kDimensionMismatch, "EncodePngIndexed: wrong index count");
  }
  if (png.palette.empty() || png.palette.size() > 256) {
    throw Error(ErrorCode::kInvalidArgument, "EncodePngIndexed: palette must have 1..256 entries");
  }
  return WritePng({png.width, png.height, PNG_COLOR_TYPE_PALETTE, 1, png.indices.data(), &png.palette});
}

IndexedPng DecodePngIndexed(std::span<const std::uint8_t> bytes) {
  RawRead raw = ReadPng(bytes, /*expand=*/false);
  return IndexedPng{raw.width, raw.height, std::move(raw.pixels), std::move(raw.palette)};
}

}  // namespace segloop
