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

#ifndef SEGLOOP_MANIFEST_H_
#define SEGLOOP_MANIFEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segloop/digest.h"

namespace segloop {

enum class Face : std::uint8_t { kUp, kDown, kNorth, kSouth, kEast, kWest, kFlat };
enum class Split : std::uint8_t { kTrain, kVal, kTest };

std::string_view FaceName(Face face);
Face FaceFromName(std::string_view name);
std::string_view SplitName(Split split);
Split SplitFromName(std::string_view name);

inline constexpr std::array<Face, 6> kCubemapFaces = {Face::kUp,   Face::kDown, Face::kNorth,
                                                      Face::kSouth, Face::kEast, Face::kWest};

struct SiteEntry {
  std::string site_id;
  Split split = Split::kTrain;
  // Face image paths, relative to the image store root.
  std::map<Face, std::string> faces;
  std::map<Face, Digest> hashes;
};

struct DatasetManifest {
  std::vector<SiteEntry> sites;

  const SiteEntry* FindSite(std::string_view site_id) const;
  SiteEntry* FindSite(std::string_view site_id);
  std::set<Digest> HashesIn(Split split) const;
  // Split of the site/face whose recorded hash equals digest, if any.
  std::optional<Split> SplitOfHash(const Digest& digest) const;
};

struct SplitRatios {
  double train = 0.70;
  double val = 0.10;
  double test = 0.20;
};

// Seeded site-level shuffle; val/test counts are floor(n * ratio) and the
// remainder goes to train. Sites are returned in input order.
DatasetManifest SplitSites(const std::vector<std::string>& site_ids, std::uint64_t seed,
                           SplitRatios ratios = {});

enum class ViolationKind { kMissingImage, kHashMismatch, kMissingHash };

struct ManifestViolation {
  ViolationKind kind;
  std::string site_id;
  Face face;
  std::string detail;
};

std::string_view ViolationKindName(ViolationKind kind);

// Recomputes every face digest from files under store_root. Empty result means ok.
std::vector<ManifestViolation> VerifyManifest(const DatasetManifest& manifest,
                                              const std::filesystem::path& store_root);

// Fills hashes for every listed face by reading the files under store_root.
void HashFaces(DatasetManifest& manifest, const std::filesystem::path& store_root);

std::string ManifestToJson(const DatasetManifest& manifest);
DatasetManifest ManifestFromJson(std::string_view json);
// Digest of the canonical JSON serialization.
Digest ManifestDigest(const DatasetManifest& manifest);

}  // namespace segloop

#endif  // SEGLOOP_MANIFEST_H_
