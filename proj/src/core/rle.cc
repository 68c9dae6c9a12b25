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

#include "segloop/rle.h"

#include "segloop/error.h"

namespace segloop {

std::vector<std::uint32_t> EncodeRle(const RegionSelection& selection) {
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  for (std::uint8_t bit : selection.bits()) {
    if (bit != current) {
      runs.push_back(length);
      current = bit;
      length = 0;
    }
    ++length;
  }
  runs.push_back(length);
  return runs;
}

RegionSelection DecodeRle(int width, int height, std::span<const std::uint32_t> runs) {
  RegionSelection sel(width, height);
  std::size_t pos = 0;
  bool on = false;
  for (std::uint32_t run : runs) {
    if (pos + run > sel.pixel_count()) throw Error(ErrorCode::kBadFormat, "RLE runs exceed selection size");
    for (std::uint32_t k = 0; k < run; ++k) sel.set(pos + k, on);
    pos += run;
    on = !on;
  }
  if (pos != sel.pixel_count()) throw Error(ErrorCode::kBadFormat, "RLE runs do not cover the selection");
  return sel;
}

nlohmann::json SelectionToJson(const RegionSelection& selection) {
  return {{"width", selection.width()}, {"height", selection.height()}, {"runs", EncodeRle(selection)}};
}

RegionSelection SelectionFromJson(const nlohmann::json& j) {
  try {
    const auto runs = j.at("runs").get<std::vector<std::uint32_t>>();
    return DecodeRle(j.at("width").get<int>(), j.at("height").get<int>(), runs);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("selection: ") + e.what());
  }
}

}  // namespace segloop
