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

#ifndef SEGLOOP_PNG_CODEC_H_
#define SEGLOOP_PNG_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segloop/raster.h"

namespace segloop {

// Thin libpng wrappers working on in-memory byte buffers.

std::vector<std::uint8_t> EncodePngRgb(const ImageRaster& image);
// Accepts any PNG color type / bit depth and converts to 8-bit RGB.
ImageRaster DecodePngRgb(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> EncodePngGray(int width, int height, std::span<const std::uint8_t> gray);

struct IndexedPng {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> indices;
  std::vector<Rgb> palette;
};

std::vector<std::uint8_t> EncodePngIndexed(const IndexedPng& png);
// Throws kWrongColorType unless the file is a palette PNG.
IndexedPng DecodePngIndexed(std::span<const std::uint8_t> bytes);

}  // namespace segloop

#endif  // SEGLOOP_PNG_CODEC_H_
