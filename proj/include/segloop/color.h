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

#ifndef SEGLOOP_COLOR_H_
#define SEGLOOP_COLOR_H_

#include <cstdint>

#include "segloop/taxonomy.h"

namespace segloop {

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

Hsv RgbToHsv(Rgb c);
Rgb HsvToRgb(const Hsv& hsv);

// Integer luma (0.299, 0.587, 0.114), rounded.
std::uint8_t Gray(Rgb c);

}  // namespace segloop

#endif  // SEGLOOP_COLOR_H_
