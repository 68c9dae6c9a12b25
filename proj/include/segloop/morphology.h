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

#ifndef SEGLOOP_MORPHOLOGY_H_
#define SEGLOOP_MORPHOLOGY_H_

#include "segloop/raster.h"

namespace segloop {

// Binary morphology with a (2r+1)x(2r+1) square structuring element.

// How erosion treats pixels outside the frame.
enum class ErosionBorder {
  // Out-of-frame pixels are ignored (a full-frame set is a fixed point).
  kIgnore,
  // Out-of-frame pixels count as background, so the frame edge erodes.
  kBackground,
};

RegionSelection Dilate(const RegionSelection& sel, int radius);
RegionSelection Erode(const RegionSelection& sel, int radius, ErosionBorder border = ErosionBorder::kIgnore);
// Erosion (kIgnore) then dilation.
RegionSelection Open(const RegionSelection& sel, int radius);
// Dilation then erosion on a canvas padded with background, so strips along
// the frame edge are not absorbed.
RegionSelection Close(const RegionSelection& sel, int radius);

RegionSelection Union(const RegionSelection& a, const RegionSelection& b);
RegionSelection Intersect(const RegionSelection& a, const RegionSelection& b);
RegionSelection Subtract(const RegionSelection& a, const RegionSelection& b);

// Indicator of pixels carrying class c.
RegionSelection ClassIndicator(const SegmentationMask& mask, ClassId c);

}  // namespace segloop

#endif  // SEGLOOP_MORPHOLOGY_H_
