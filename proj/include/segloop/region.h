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

#ifndef SEGLOOP_REGION_H_
#define SEGLOOP_REGION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segloop/raster.h"
#include "segloop/records.h"

namespace segloop {

enum class Connectivity : int { kFour = 4, kEight = 8 };

Connectivity ConnectivityFromInt(int value);

// Largest Euclidean distance between two 8-bit RGB colors is sqrt(3) * 255.
inline constexpr double kMaxRgbDistance = 442.0;

struct WandParams {
  double tolerance = 32.0;
  Connectivity connectivity = Connectivity::kFour;
};

// Connected component containing seed of pixels whose RGB distance to the
// seed color is <= tolerance. The seed color is fixed (no running mean), so
// the result does not depend on visiting order.
RegionSelection WandSelect(const ImageRaster& image, PixelCoord seed, const WandParams& params);

// Same contract over an arbitrary per-pixel feature field (dims values per
// pixel, row-major), with the distance measured in feature space.
RegionSelection WandSelectFeatures(std::span<const double> features, int dims, int width, int height,
                                   PixelCoord seed, double tolerance, Connectivity connectivity);

enum class RefineMode { kExpand, kShrink };

RegionSelection RefineSelection(const RegionSelection& sel, RefineMode mode, int radius);

// Where a correction lands and when it was made.
struct CorrectionContext {
  std::string record_id;
  std::string site_id;
  Face face = Face::kFlat;
  std::int64_t created_at_ms = 0;
};

// Prior labels of every pixel in the corrected region, in row-major order.
struct UndoPatch {
  std::vector<std::size_t> pixels;
  std::vector<ClassId> prior_labels;
};

struct AppliedCorrection {
  SegmentationMask mask;
  CorrectionRecord record;
  UndoPatch undo;
};

AppliedCorrection ApplyCorrection(const SegmentationMask& mask, const RegionSelection& sel, int new_class,
                                  InterventionType type, const Provenance& provenance,
                                  const CorrectionContext& context);

// Restores the pre-correction mask; the result is checked against the
// record's prior digest.
SegmentationMask UndoCorrection(const SegmentationMask& corrected, const CorrectionRecord& record,
                                const UndoPatch& undo);

struct ClaheParams {
  double clip_limit = 2.0;
  int tiles_x = 8;
  int tiles_y = 8;
};

// Contrast-limited adaptive histogram equalization of the HSV value channel.
// Hue and saturation are kept by rescaling each pixel's RGB by V'/V.
ImageRaster Clahe(const ImageRaster& image, const ClaheParams& params = {});

struct CleanupParams {
  ClassId target_class = 1;  // sky
  int open_radius = 1;
  int close_radius = 2;
};

// Opening then closing of the target-class indicator. Pixels removed from the
// class take their runner-up class from logits when given, else background;
// pixels added take the target class.
SegmentationMask MorphCleanup(const SegmentationMask& mask, const CleanupParams& params = {},
                              const LogitMap* logits = nullptr);

}  // namespace segloop

#endif  // SEGLOOP_REGION_H_
