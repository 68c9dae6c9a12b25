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

#ifndef SEGLOOP_TAXONOMY_H_
#define SEGLOOP_TAXONOMY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace segloop {

using ClassId = std::uint8_t;

inline constexpr int kNumClasses = 7;

// Fixed id order; 0 doubles as the ignore / fallback class.
enum class SemanticClass : ClassId {
  kBackground = 0,
  kSky = 1,
  kTrees = 2,
  kBuildings = 3,
  kImpervious = 4,
  kPervious = 5,
  kNonPermanent = 6,
};

constexpr ClassId Id(SemanticClass c) { return static_cast<ClassId>(c); }

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct TaxonomyEntry {
  ClassId id;
  std::string_view name;
  Rgb color;
};

// The seven-class taxonomy with its visualization palette.
const std::array<TaxonomyEntry, kNumClasses>& Taxonomy();

std::string_view ClassName(ClassId id);
Rgb ClassColor(ClassId id);
std::optional<ClassId> ClassFromName(std::string_view name);

inline bool IsValidClass(int id) { return id >= 0 && id < kNumClasses; }

}  // namespace segloop

#endif  // SEGLOOP_TAXONOMY_H_
