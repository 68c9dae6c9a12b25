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

#ifndef SEGLOOP_FEATURES_H_
#define SEGLOOP_FEATURES_H_

#include <span>
#include <vector>

#include "segloop/raster.h"

namespace segloop {

// Per-pixel input to the toy backbone, every value in [0,1]:
//   0..2  R, G, B
//   3..5  H (/360), S, V
//   6..7  x / width, y / height
//   8..9  mean and standard deviation of gray over the 3x3 window (/255)
//   10    LBP code / 255
// Windows and LBP neighbours are edge-clamped.
inline constexpr int kFeatureDims = 11;

class FeatureField {
 public:
  FeatureField() = default;
  FeatureField(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::span<const double> pixel(std::size_t i) const {
    return {values_.data() + i * kFeatureDims, static_cast<std::size_t>(kFeatureDims)};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

FeatureField Featurize(const ImageRaster& image);

// LBP code at (x, y): bit k set iff neighbour k is strictly brighter than the
// centre. Neighbours run clockwise from the top-left; out-of-frame neighbours
// are clamped to the edge.
std::uint8_t LbpCodeClamped(const std::vector<std::uint8_t>& gray, int width, int height, int x, int y);

}  // namespace segloop

#endif  // SEGLOOP_FEATURES_H_
