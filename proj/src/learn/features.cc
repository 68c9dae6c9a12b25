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

#include "segloop/features.h"

#include <algorithm>
#include <cmath>

#include "segloop/color.h"
#include "segloop/error.h"

namespace segloop {
namespace {

constexpr int kLbpDx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr int kLbpDy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

}  // namespace

FeatureField::FeatureField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1 || values_.size() != pixel_count() * kFeatureDims) {
    throw Error(ErrorCode::kDimensionMismatch, "FeatureField: wrong value count");
  }
}

std::uint8_t LbpCodeClamped(const std::vector<std::uint8_t>& gray, int width, int height, int x, int y) {
  const std::uint8_t centre = gray[static_cast<std::size_t>(y) * width + x];
  std::uint8_t code = 0;
  for (int k = 0; k < 8; ++k) {
    const int nx = std::clamp(x + kLbpDx[k], 0, width - 1);
    const int ny = std::clamp(y + kLbpDy[k], 0, height - 1);
    if (gray[static_cast<std::size_t>(ny) * width + nx] > centre) code |= static_cast<std::uint8_t>(1u << k);
  }
  return code;
}

FeatureField Featurize(const ImageRaster& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint8_t> gray(image.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = Gray(image.at(i));

  std::vector<double> values(image.pixel_count() * kFeatureDims);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = image.Index(x, y);
      double* f = values.data() + i * kFeatureDims;
      const Rgb c = image.at(i);
      const Hsv hsv = RgbToHsv(c);
      f[0] = c.r / 255.0;
      f[1] = c.g / 255.0;
      f[2] = c.b / 255.0;
      f[3] = hsv.h / 360.0;
      f[4] = hsv.s;
      f[5] = hsv.v;
      f[6] = static_cast<double>(x) / w;
      f[7] = static_cast<double>(y) / h;
      double sum = 0.0;
      double sum2 = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = std::clamp(x + dx, 0, w - 1);
          const int ny = std::clamp(y + dy, 0, h - 1);
          const double g = gray[static_cast<std::size_t>(ny) * w + nx];
          sum += g;
          sum2 += g * g;
        }
      }
      const double mean = sum / 9.0;
      const double var = std::max(0.0, sum2 / 9.0 - mean * mean);
      f[8] = mean / 255.0;
      f[9] = std::sqrt(var) / 255.0;
      f[10] = LbpCodeClamped(gray, w, h, x, y) / 255.0;
    }
  }
  return FeatureField(w, h, std::move(values));
}

}  // namespace segloop
