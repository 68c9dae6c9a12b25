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

#include "segloop/probability.h"

#include <algorithm>
#include <cmath>

namespace segloop {

void SoftmaxInto(std::span<const double> logits, std::span<double> out) {
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out[c] = std::exp(logits[c] - max);
    sum += out[c];
  }
  for (std::size_t c = 0; c < logits.size(); ++c) out[c] /= sum;
}

ProbabilityMap Softmax(const LogitMap& logits) {
  std::vector<double> values(logits.values().size());
  for (std::size_t i = 0; i < logits.pixel_count(); ++i) {
    SoftmaxInto(logits.pixel(i), std::span<double>(values.data() + i * kNumClasses, kNumClasses));
  }
  return ProbabilityMap(logits.width(), logits.height(), std::move(values));
}

ClassId ArgmaxClass(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return static_cast<ClassId>(best);
}

SegmentationMask ArgmaxMask(const LogitMap& logits) {
  SegmentationMask mask(logits.width(), logits.height());
  for (std::size_t i = 0; i < logits.pixel_count(); ++i) mask.set(i, ArgmaxClass(logits.pixel(i)));
  return mask;
}

}  // namespace segloop
