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

#include "segloop/color.h"

#include <algorithm>
#include <cmath>

namespace segloop {

Hsv RgbToHsv(Rgb c) {
  const int max = std::max({c.r, c.g, c.b});
  const int min = std::min({c.r, c.g, c.b});
  const int delta = max - min;
  Hsv out;
  out.v = max / 255.0;
  out.s = max == 0 ? 0.0 : static_cast<double>(delta) / max;
  if (delta == 0) return out;
  double h = 0.0;
  if (max == c.r) {
    h = 60.0 * static_cast<double>(c.g - c.b) / delta;
  } else if (max == c.g) {
    h = 60.0 * (2.0 + static_cast<double>(c.b - c.r) / delta);
  } else {
    h = 60.0 * (4.0 + static_cast<double>(c.r - c.g) / delta);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb HsvToRgb(const Hsv& hsv) {
  const double c = hsv.v * hsv.s;
  const double hp = std::fmod(hsv.h, 360.0) / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = hsv.v - c;
  auto to8 = [m](double v) { return static_cast<std::uint8_t>(std::clamp(std::lround((v + m) * 255.0), 0L, 255L)); };
  return {to8(r), to8(g), to8(b)};
}

std::uint8_t Gray(Rgb c) {
  return static_cast<std::uint8_t>((299 * c.r + 587 * c.g + 114 * c.b + 500) / 1000);
}

}  // namespace segloop
