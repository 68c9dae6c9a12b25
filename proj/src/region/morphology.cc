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

#include "segloop/morphology.h"

#include <algorithm>
#include <string>
#include <vector>

#include "segloop/error.h"

namespace segloop {
namespace {

enum class Op { kDilate, kErodeIgnore, kErodeBackground };

// One separable pass along a line of n samples read with the given stride.
void FilterLine(const std::uint8_t* in, std::uint8_t* out, int n, std::size_t stride, int r, Op op,
                std::vector<int>& prefix) {
  prefix.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (in[i * stride] ? 1 : 0);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - r);
    const int hi = std::min(n - 1, i + r);
    const int count = prefix[hi + 1] - prefix[lo];
    const int window = hi - lo + 1;
    bool on = false;
    switch (op) {
      case Op::kDilate: on = count > 0; break;
      case Op::kErodeIgnore: on = count == window; break;
      case Op::kErodeBackground: on = window == 2 * r + 1 && count == window; break;
    }
    out[i * stride] = on ? 1 : 0;
  }
}

RegionSelection Apply(const RegionSelection& sel, int radius, Op op) {
  if (radius < 1) throw Error(ErrorCode::kInvalidArgument, "structuring element radius must be >= 1");
  const int w = sel.width();
  const int h = sel.height();
  std::vector<std::uint8_t> tmp(sel.pixel_count());
  std::vector<std::uint8_t> out(sel.pixel_count());
  std::vector<int> prefix;
  const auto* src = sel.bits().data();
  for (int y = 0; y < h; ++y) {
    FilterLine(src + static_cast<std::size_t>(y) * w, tmp.data() + static_cast<std::size_t>(y) * w, w, 1, radius, op,
               prefix);
  }
  for (int x = 0; x < w; ++x) {
    FilterLine(tmp.data() + x, out.data() + x, h, static_cast<std::size_t>(w), radius, op, prefix);
  }
  return RegionSelection(w, h, std::move(out));
}

}  // namespace

RegionSelection Dilate(const RegionSelection& sel, int radius) { return Apply(sel, radius, Op::kDilate); }

RegionSelection Erode(const RegionSelection& sel, int radius, ErosionBorder border) {
  return Apply(sel, radius, border == ErosionBorder::kIgnore ? Op::kErodeIgnore : Op::kErodeBackground);
}

RegionSelection Open(const RegionSelection& sel, int radius) { return Dilate(Erode(sel, radius), radius); }

RegionSelection Close(const RegionSelection& sel, int radius) {
  if (radius < 1) throw Error(ErrorCode::kInvalidArgument, "structuring element radius must be >= 1");
  const int w = sel.width();
  const int h = sel.height();
  RegionSelection padded(w + 2 * radius, h + 2 * radius);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) padded.set(x + radius, y + radius, sel.contains(x, y));
  }
  const RegionSelection closed = Erode(Dilate(padded, radius), radius);
  RegionSelection out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.set(x, y, closed.contains(x + radius, y + radius));
  }
  return out;
}

RegionSelection Union(const RegionSelection& a, const RegionSelection& b) {
  CheckSameSize(a, b, "Union");
  RegionSelection out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out.set(i, a.contains(i) || b.contains(i));
  return out;
}

RegionSelection Intersect(const RegionSelection& a, const RegionSelection& b) {
  CheckSameSize(a, b, "Intersect");
  RegionSelection out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out.set(i, a.contains(i) && b.contains(i));
  return out;
}

RegionSelection Subtract(const RegionSelection& a, const RegionSelection& b) {
  CheckSameSize(a, b, "Subtract");
  RegionSelection out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out.set(i, a.contains(i) && !b.contains(i));
  return out;
}

RegionSelection ClassIndicator(const SegmentationMask& mask, ClassId c) {
  RegionSelection out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) out.set(i, mask.at(i) == c);
  return out;
}

}  // namespace segloop
