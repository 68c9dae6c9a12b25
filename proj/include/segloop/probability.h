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

#ifndef SEGLOOP_PROBABILITY_H_
#define SEGLOOP_PROBABILITY_H_

#include <span>

#include "segloop/raster.h"

namespace segloop {

// Max-subtracted softmax of one pixel's scores into out.
void SoftmaxInto(std::span<const double> logits, std::span<double> out);

ProbabilityMap Softmax(const LogitMap& logits);

// Index of the largest score, ties toward the lowest class id.
ClassId ArgmaxClass(std::span<const double> scores);

SegmentationMask ArgmaxMask(const LogitMap& logits);

}  // namespace segloop

#endif  // SEGLOOP_PROBABILITY_H_
