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

#ifndef SEGLOOP_MASK_IO_H_
#define SEGLOOP_MASK_IO_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segloop/raster.h"

namespace segloop {

// SEGB layout: "SEGB", u32 version=1, u32 width, u32 height (little-endian),
// then width*height label bytes in row-major order.
inline constexpr std::uint32_t kSegbVersion = 1;
inline constexpr std::size_t kSegbHeaderSize = 16;

std::vector<std::uint8_t> EncodeBin(const SegmentationMask& mask);
SegmentationMask DecodeBin(std::span<const std::uint8_t> bytes);

// 8-bit palette PNG; pixel value is the class id and palette entry i is the
// taxonomy color of class i.
std::vector<std::uint8_t> EncodeIndexedPng(const SegmentationMask& mask);
SegmentationMask DecodeIndexedPng(std::span<const std::uint8_t> bytes);

ImageRaster Colorize(const SegmentationMask& mask);

// Alpha-blends the colorized mask over the image; alpha in [0,1].
ImageRaster Overlay(const ImageRaster& image, const SegmentationMask& mask, double alpha);

}  // namespace segloop

#endif  // SEGLOOP_MASK_IO_H_
