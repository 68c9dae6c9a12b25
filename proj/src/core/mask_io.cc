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

#include "segloop/mask_io.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "segloop/bytes.h"
#include "segloop/error.h"
#include "segloop/png_codec.h"

namespace segloop {

std::vector<std::uint8_t> EncodeBin(const SegmentationMask& mask) {
  ByteWriter w;
  w.Magic("SEGB");
  w.U32(kSegbVersion);
  w.U32(static_cast<std::uint32_t>(mask.width()));
  w.U32(static_cast<std::uint32_t>(mask.height()));
  w.Bytes(mask.labels());
  return w.Take();
}

SegmentationMask DecodeBin(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectMagic("SEGB");
  if (bytes.size() < kSegbHeaderSize) throw Error(ErrorCode::kTruncatedPayload, "SEGB header truncated");
  const std::uint32_t version = r.U32();
  if (version != kSegbVersion) throw Error(ErrorCode::kBadFormat, "SEGB version " + std::to_string(version));
  const std::uint32_t width = r.U32();
  const std::uint32_t height = r.U32();
  const std::uint64_t expected = static_cast<std::uint64_t>(width) * height;
  if (r.remaining() != expected) {
    throw Error(ErrorCode::kTruncatedPayload, "SEGB payload has " + std::to_string(r.remaining()) +
                                                  " bytes, header implies " + std::to_string(expected));
  }
  auto payload = r.Take(r.remaining());
  std::vector<ClassId> labels(payload.begin(), payload.end());
  return SegmentationMask(static_cast<int>(width), static_cast<int>(height), std::move(labels));
}

std::vector<std::uint8_t> EncodeIndexedPng(const SegmentationMask& mask) {
  IndexedPng png;
  png.width = mask.width();
  png.height = mask.height();
  png.indices = mask.labels();
  for (const auto& entry : Taxonomy()) png.palette.push_back(entry.color);
  return EncodePngIndexed(png);
}

SegmentationMask DecodeIndexedPng(std::span<const std::uint8_t> bytes) {
  IndexedPng png = DecodePngIndexed(bytes);
  for (std::size_t i = 0; i < png.indices.size(); ++i) {
    if (png.indices[i] >= kNumClasses) {
      throw Error(ErrorCode::kPaletteOverflow,
                  "palette index " + std::to_string(png.indices[i]) + " used at pixel " + std::to_string(i));
    }
  }
  return SegmentationMask(png.width, png.height, std::move(png.indices));
}

ImageRaster Colorize(const SegmentationMask& mask) {
  ImageRaster out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) out.set(i, ClassColor(mask.at(i)));
  return out;
}

ImageRaster Overlay(const ImageRaster& image, const SegmentationMask& mask, double alpha) {
  CheckSameSize(image, mask, "Overlay");
  alpha = std::clamp(alpha, 0.0, 1.0);
  ImageRaster out(image.width(), image.height());
  auto blend = [alpha](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround((1.0 - alpha) * a + alpha * b));
  };
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const Rgb p = image.at(i);
    const Rgb c = ClassColor(mask.at(i));
    out.set(i, Rgb{blend(p.r, c.r), blend(p.g, c.g), blend(p.b, c.b)});
  }
  return out;
}

}  // namespace segloop
