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

#include "segloop/taxonomy.h"

#include "segloop/error.h"

namespace segloop {

const std::array<TaxonomyEntry, kNumClasses>& Taxonomy() {
  static const std::array<TaxonomyEntry, kNumClasses> kEntries = {{
      {0, "background", {0, 0, 0}},
      {1, "sky", {70, 130, 180}},
      {2, "trees", {107, 142, 35}},
      {3, "buildings", {220, 20, 60}},
      {4, "impervious", {128, 64, 128}},
      {5, "pervious", {152, 251, 152}},
      {6, "non_permanent", {250, 170, 30}},
  }};
  return kEntries;
}

std::string_view ClassName(ClassId id) {
  if (!IsValidClass(id)) {
    throw Error(ErrorCode::kClassOutOfRange, "class id " + std::to_string(id));
  }
  return Taxonomy()[id].name;
}

Rgb ClassColor(ClassId id) {
  if (!IsValidClass(id)) {
    throw Error(ErrorCode::kClassOutOfRange, "class id " + std::to_string(id));
  }
  return Taxonomy()[id].color;
}

std::optional<ClassId> ClassFromName(std::string_view name) {
  for (const auto& entry : Taxonomy()) {
    if (entry.name == name) return entry.id;
  }
  return std::nullopt;
}

}  // namespace segloop
