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

#ifndef SEGLOOP_FAILURE_H_
#define SEGLOOP_FAILURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segloop/backbone.h"
#include "segloop/raster.h"
#include "segloop/region.h"

namespace segloop {

// Per-pixel natural-log entropy, 0 ln 0 := 0. Values lie in [0, ln 7].
ScoreMap EntropyMap(const ProbabilityMap& probs);

// 1 - (modal class count / number of masks). Throws kFewerThanTwoMasks.
ScoreMap DisagreementMap(std::span<const SegmentationMask> masks);

struct AttributionParams {
  ClassId target_class = 1;
  int steps = 32;
};

struct Attribution {
  ScoreMap l1;                 // per-pixel L1 norm of the attribution
  std::vector<double> signed_sum;  // per-pixel sum of signed attributions
  double total = 0.0;          // sum of all signed attributions
};

// Integrated gradients of the summed target-class logit along the straight
// path from a black baseline image to image, computed on the backbone's
// feature field (midpoint Riemann rule). Completeness:
//   total ~= F(image) - F(baseline), F = sum over pixels of the target logit.
Attribution IntegratedGradients(const ToyBackboneParams& params, const ImageRaster& image,
                                const AttributionParams& attribution = {});

ScoreMap AttributionMap(const ToyBackboneParams& params, const ImageRaster& image,
                        const AttributionParams& attribution = {});

// Sum over pixels of the target-class logit.
double SummedClassLogit(const ToyBackboneParams& params, const FeatureField& features, ClassId target);

struct FlagParams {
  double threshold = 1.0;
  int min_area = 16;
  Connectivity connectivity = Connectivity::kEight;
};

struct FlaggedRegion {
  RegionSelection selection;
  double mean_score = 0.0;
  std::size_t area = 0;
};

// Connected components of {score >= threshold} with area >= min_area,
// sorted by descending mean score (ties keep scan order).
std::vector<FlaggedRegion> FlagRegions(const ScoreMap& score, const FlagParams& params = {});

// All connected components of sel, in order of their first pixel.
std::vector<RegionSelection> ConnectedComponents(const RegionSelection& sel, Connectivity connectivity);

// SEGF: "SEGF", u32 version=1, u32 width, u32 height, then row-major
// little-endian float32 scores.
std::vector<std::uint8_t> EncodeScoreMap(const ScoreMap& map);
ScoreMap DecodeScoreMap(std::span<const std::uint8_t> bytes);

// SEGL: "SEGL", u32 version=1, u32 width, u32 height, then width*height*7
// little-endian float32 logits, class index fastest.
std::vector<std::uint8_t> EncodeLogitMap(const LogitMap& logits);
LogitMap DecodeLogitMap(std::span<const std::uint8_t> bytes);

}  // namespace segloop

#endif  // SEGLOOP_FAILURE_H_
