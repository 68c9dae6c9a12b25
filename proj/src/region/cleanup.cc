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

#include <limits>

#include "segloop/error.h"
#include "segloop/morphology.h"
#include "segloop/region.h"

namespace segloop {
namespace {

ClassId RunnerUp(std::span<const double> scores, ClassId excluded) {
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < kNumClasses; ++c) {
    if (c == excluded) continue;
    if (best < 0 || scores[c] > best_score) {
      best = c;
      best_score = scores[c];
    }
  }
  return static_cast<ClassId>(best);
}

}  // namespace

SegmentationMask MorphCleanup(const SegmentationMask& mask, const CleanupParams& params, const LogitMap* logits) {
  if (!IsValidClass(params.target_class)) throw Error(ErrorCode::kClassOutOfRange, "cleanup target class");
  if (logits != nullptr) CheckSameSize(mask, *logits, "MorphCleanup");
  const RegionSelection before = ClassIndicator(mask, params.target_class);
  const RegionSelection after = Close(Open(before, params.open_radius), params.close_radius);

  SegmentationMask out = mask;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (before.contains(i) && !after.contains(i)) {
      out.set(i, logits != nullptr ? RunnerUp(logits->pixel(i), params.target_class) : ClassId{0});
    } else if (!before.contains(i) && after.contains(i)) {
      out.set(i, params.target_class);
    }
  }
  return out;
}

}  // namespace segloop
