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

#ifndef SEGLOOP_RLE_H_
#define SEGLOOP_RLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "segloop/raster.h"

namespace segloop {

// Row-major run lengths alternating unselected/selected, always starting with
// an unselected run (possibly zero). Runs sum to width * height.
std::vector<std::uint32_t> EncodeRle(const RegionSelection& selection);
RegionSelection DecodeRle(int width, int height, std::span<const std::uint32_t> runs);

// {"width": W, "height": H, "runs": [...]}
nlohmann::json SelectionToJson(const RegionSelection& selection);
RegionSelection SelectionFromJson(const nlohmann::json& j);

}  // namespace segloop

#endif  // SEGLOOP_RLE_H_
