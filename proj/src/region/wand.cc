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

#include <string>
#include <vector>

#include "segloop/error.h"
#include "segloop/morphology.h"
#include "segloop/region.h"

namespace segloop {
namespace {

constexpr int kDx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[] = {0, 0, 1, -1, 1, -1, 1, -1};

template <typename Accept>
RegionSelection Grow(int width, int height, PixelCoord seed, Connectivity connectivity, Accept accept) {
  if (seed.x < 0 || seed.y < 0 || seed.x >= width || seed.y >= height) {
    throw Error(ErrorCode::kSeedOutOfBounds,
                "seed (" + std::to_string(seed.x) + "," + std::to_string(seed.y) + ") outside " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  const int neighbours = static_cast<int>(connectivity);
  RegionSelection sel(width, height);
  std::vector<PixelCoord> stack{seed};
  sel.set(seed.x, seed.y, true);
  while (!stack.empty()) {
    const PixelCoord p = stack.back();
    stack.pop_back();
    for (int k = 0; k < neighbours; ++k) {
      const int nx = p.x + kDx8[k];
      const int ny = p.y + kDy8[k];
      if (!sel.InBounds(nx, ny) || sel.contains(nx, ny)) continue;
      if (!accept(sel.Index(nx, ny))) continue;
      sel.set(nx, ny, true);
      stack.push_back({nx, ny});
    }
  }
  return sel;
}

}  // namespace

Connectivity ConnectivityFromInt(int value) {
  if (value == 4) return Connectivity::kFour;
  if (value == 8) return Connectivity::kEight;
  throw Error(ErrorCode::kInvalidArgument, "connectivity must be 4 or 8, got " + std::to_string(value));
}

RegionSelection WandSelect(const ImageRaster& image, PixelCoord seed, const WandParams& params) {
  if (!(params.tolerance >= 0.0 && params.tolerance <= kMaxRgbDistance)) {
    throw Error(ErrorCode::kInvalidArgument, "wand tolerance must be in [0, 442]");
  }
  if (!image.InBounds(seed.x, seed.y)) {
    return Grow(image.width(), image.height(), seed, params.connectivity, [](std::size_t) { return false; });
  }
  const Rgb ref = image.at(seed.x, seed.y);
  const double tol2 = params.tolerance * params.tolerance;
  return Grow(image.width(), image.height(), seed, params.connectivity, [&](std::size_t i) {
    const Rgb c = image.at(i);
    const int dr = c.r - ref.r;
    const int dg = c.g - ref.g;
    const int db = c.b - ref.b;
    return static_cast<double>(dr * dr + dg * dg + db * db) <= tol2;
  });
}

RegionSelection WandSelectFeatures(std::span<const double> features, int dims, int width, int height,
                                   PixelCoord seed, double tolerance, Connectivity connectivity) {
  if (dims < 1 || features.size() != static_cast<std::size_t>(width) * height * dims) {
    throw Error(ErrorCode::kDimensionMismatch, "feature field size does not match image");
  }
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  if (seed.x < 0 || seed.y < 0 || seed.x >= width || seed.y >= height) {
    return Grow(width, height, seed, connectivity, [](std::size_t) { return false; });
  }
  const std::size_t seed_index = static_cast<std::size_t>(seed.y) * width + seed.x;
  const auto ref = features.subspan(seed_index * dims, dims);
  const double tol2 = tolerance * tolerance;
  return Grow(width, height, seed, connectivity, [&](std::size_t i) {
    double d2 = 0.0;
    for (int k = 0; k < dims; ++k) {
      const double d = features[i * dims + k] - ref[k];
      d2 += d * d;
    }
    return d2 <= tol2;
  });
}

RegionSelection RefineSelection(const RegionSelection& sel, RefineMode mode, int radius) {
  return mode == RefineMode::kExpand ? Dilate(sel, radius) : Erode(sel, radius);
}

}  // namespace segloop
