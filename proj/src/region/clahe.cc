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

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "segloop/error.h"
#include "segloop/region.h"

namespace segloop {
namespace {

using Lut = std::array<double, 256>;

struct TileGrid {
  std::vector<int> bounds;   // n + 1 edges
  std::vector<double> centers;
};

TileGrid MakeGrid(int length, int tiles) {
  TileGrid g;
  for (int t = 0; t <= tiles; ++t) g.bounds.push_back(static_cast<int>(static_cast<long>(t) * length / tiles));
  for (int t = 0; t < tiles; ++t) g.centers.push_back((g.bounds[t] + g.bounds[t + 1] - 1) / 2.0);
  return g;
}

Lut TileLut(const std::vector<std::uint8_t>& value, int width, int x0, int x1, int y0, int y1, double clip_limit) {
  std::array<long, 256> hist{};
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) ++hist[value[static_cast<std::size_t>(y) * width + x]];
  }
  const long area = static_cast<long>(x1 - x0) * (y1 - y0);
  const long clip = std::max(1L, static_cast<long>(clip_limit * area / 256.0));
  long excess = 0;
  for (auto& h : hist) {
    if (h > clip) {
      excess += h - clip;
      h = clip;
    }
  }
  const long per_bin = excess / 256;
  long residual = excess - per_bin * 256;
  for (auto& h : hist) h += per_bin;
  // Leftover counts are spread evenly across the range.
  if (residual > 0) {
    const long step = std::max(1L, 256 / residual);
    for (long b = 0; b < 256 && residual > 0; b += step, --residual) ++hist[b];
  }
  Lut lut{};
  long cdf = 0;
  for (int b = 0; b < 256; ++b) {
    cdf += hist[b];
    lut[b] = static_cast<double>(cdf) * 255.0 / area;
  }
  return lut;
}

// Index of the lower interpolation tile and the weight of the upper one.
std::pair<int, double> Locate(const std::vector<double>& centers, double pos) {
  const int n = static_cast<int>(centers.size());
  if (pos <= centers.front()) return {0, 0.0};
  if (pos >= centers.back()) return {n - 1, 0.0};
  int lo = 0;
  while (lo + 1 < n && centers[lo + 1] <= pos) ++lo;
  const double span = centers[lo + 1] - centers[lo];
  return {lo, span > 0 ? (pos - centers[lo]) / span : 0.0};
}

}  // namespace

ImageRaster Clahe(const ImageRaster& image, const ClaheParams& params) {
  if (params.tiles_x < 1 || params.tiles_y < 1) throw Error(ErrorCode::kInvalidArgument, "CLAHE tiles must be >= 1");
  if (!(params.clip_limit > 0.0)) throw Error(ErrorCode::kInvalidArgument, "CLAHE clip limit must be > 0");
  const int w = image.width();
  const int h = image.height();
  const int tx = std::min(params.tiles_x, w);
  const int ty = std::min(params.tiles_y, h);

  std::vector<std::uint8_t> value(image.pixel_count());
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const Rgb c = image.at(i);
    value[i] = std::max({c.r, c.g, c.b});
  }

  const TileGrid gx = MakeGrid(w, tx);
  const TileGrid gy = MakeGrid(h, ty);
  std::vector<Lut> luts(static_cast<std::size_t>(tx) * ty);
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      luts[static_cast<std::size_t>(j) * tx + i] =
          TileLut(value, w, gx.bounds[i], gx.bounds[i + 1], gy.bounds[j], gy.bounds[j + 1], params.clip_limit);
    }
  }

  ImageRaster out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto [j0, fy] = Locate(gy.centers, y);
    const int j1 = std::min(j0 + 1, ty - 1);
    for (int x = 0; x < w; ++x) {
      const auto [i0, fx] = Locate(gx.centers, x);
      const int i1 = std::min(i0 + 1, tx - 1);
      const std::size_t idx = image.Index(x, y);
      const std::uint8_t v = value[idx];
      auto lut = [&](int i, int j) { return luts[static_cast<std::size_t>(j) * tx + i][v]; };
      const double top = (1 - fx) * lut(i0, j0) + fx * lut(i1, j0);
      const double bottom = (1 - fx) * lut(i0, j1) + fx * lut(i1, j1);
      const double mapped = std::clamp((1 - fy) * top + fy * bottom, 0.0, 255.0);
      const Rgb c = image.at(idx);
      if (v == 0) {
        const auto g = static_cast<std::uint8_t>(std::lround(mapped));
        out.set(idx, {g, g, g});
        continue;
      }
      const double scale = mapped / v;
      auto channel = [scale](std::uint8_t ch) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(ch * scale), 0L, 255L));
      };
      out.set(idx, {channel(c.r), channel(c.g), channel(c.b)});
    }
  }
  return out;
}

}  // namespace segloop
