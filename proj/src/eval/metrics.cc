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

#include <numeric>

#include "segloop/error.h"
#include "segloop/eval.h"
#include "segloop/morphology.h"

namespace segloop {

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

void ConfusionMatrix::Add(const ConfusionMatrix& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

ConfusionMatrix ComputeConfusion(const SegmentationMask& pred, const SegmentationMask& gt,
                                 const RegionSelection* ignore) {
  CheckSameSize(pred, gt, "ComputeConfusion");
  if (ignore != nullptr) CheckSameSize(pred, *ignore, "ComputeConfusion ignore");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (ignore != nullptr && ignore->contains(i)) continue;
    ++cm.at(gt.at(i), pred.at(i));
  }
  return cm;
}

IouResult MeanIou(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  IouResult out;
  double sum = 0.0;
  int n = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (int k = 0; k < kNumClasses; ++k) {
      row += cm.at(c, k);
      col += cm.at(k, c);
    }
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t uni = row + col - tp;
    if (uni == 0) continue;
    const double iou = static_cast<double>(tp) / static_cast<double>(uni);
    out.per_class[c] = iou;
    sum += iou;
    ++n;
  }
  out.mean = sum / n;
  return out;
}

RegionSelection BoundaryBand(const RegionSelection& x, int d) {
  return Subtract(x, Erode(x, d, ErosionBorder::kBackground));
}

std::optional<double> BoundaryIou(const SegmentationMask& pred, const SegmentationMask& gt, ClassId c, int d) {
  CheckSameSize(pred, gt, "BoundaryIou");
  if (!IsValidClass(c)) throw Error(ErrorCode::kClassOutOfRange, "BoundaryIou class");
  const RegionSelection bp = BoundaryBand(ClassIndicator(pred, c), d);
  const RegionSelection bg = BoundaryBand(ClassIndicator(gt, c), d);
  const std::size_t inter = Intersect(bp, bg).Count();
  const std::size_t uni = Union(bp, bg).Count();
  if (uni == 0) return std::nullopt;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace segloop
