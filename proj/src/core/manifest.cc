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

#include "segloop/manifest.h"

#include <cmath>
#include <random>

#include "json.hpp"
#include "segloop/error.h"
#include "segloop/file_util.h"

namespace segloop {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view FaceName(Face face) {
  switch (face) {
    case Face::kUp: return "up";
    case Face::kDown: return "down";
    case Face::kNorth: return "north";
    case Face::kSouth: return "south";
    case Face::kEast: return "east";
    case Face::kWest: return "west";
    case Face::kFlat: return "flat";
  }
  return "flat";
}

Face FaceFromName(std::string_view name) {
  for (Face f : {Face::kUp, Face::kDown, Face::kNorth, Face::kSouth, Face::kEast, Face::kWest, Face::kFlat}) {
    if (FaceName(f) == name) return f;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown face '" + std::string(name) + "'");
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split SplitFromName(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown split '" + std::string(name) + "'");
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kMissingImage: return "MissingImage";
    case ViolationKind::kHashMismatch: return "HashMismatch";
    case ViolationKind::kMissingHash: return "MissingHash";
  }
  return "Unknown";
}

const SiteEntry* DatasetManifest::FindSite(std::string_view site_id) const {
  for (const auto& site : sites) {
    if (site.site_id == site_id) return &site;
  }
  return nullptr;
}

SiteEntry* DatasetManifest::FindSite(std::string_view site_id) {
  for (auto& site : sites) {
    if (site.site_id == site_id) return &site;
  }
  return nullptr;
}

std::set<Digest> DatasetManifest::HashesIn(Split split) const {
  std::set<Digest> out;
  for (const auto& site : sites) {
    if (site.split != split) continue;
    for (const auto& [face, digest] : site.hashes) out.insert(digest);
  }
  return out;
}

std::optional<Split> DatasetManifest::SplitOfHash(const Digest& digest) const {
  for (const auto& site : sites) {
    for (const auto& [face, d] : site.hashes) {
      if (d == digest) return site.split;
    }
  }
  return std::nullopt;
}

DatasetManifest SplitSites(const std::vector<std::string>& site_ids, std::uint64_t seed, SplitRatios ratios) {
  if (site_ids.size() < 3) {
    throw Error(ErrorCode::kTooFewSites, "need at least 3 sites, got " + std::to_string(site_ids.size()));
  }
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be nonnegative and sum to 1");
  }
  const std::size_t n = site_ids.size();
  // The epsilon keeps products like 80 * 0.1 from flooring to 7.
  const auto n_val = static_cast<std::size_t>(std::floor(n * ratios.val + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(n * ratios.test + 1e-9));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng() % (i + 1);
    std::swap(order[i], order[j]);
  }

  DatasetManifest manifest;
  manifest.sites.resize(n);
  for (std::size_t i = 0; i < n; ++i) manifest.sites[i].site_id = site_ids[i];
  for (std::size_t rank = 0; rank < n; ++rank) {
    Split split = Split::kTrain;
    if (rank >= n - n_test) {
      split = Split::kTest;
    } else if (rank >= n - n_test - n_val) {
      split = Split::kVal;
    }
    manifest.sites[order[rank]].split = split;
  }
  return manifest;
}

std::vector<ManifestViolation> VerifyManifest(const DatasetManifest& manifest, const fs::path& store_root) {
  std::vector<ManifestViolation> violations;
  for (const auto& site : manifest.sites) {
    for (const auto& [face, rel] : site.faces) {
      const fs::path path = store_root / rel;
      auto it = site.hashes.find(face);
      if (it == site.hashes.end()) {
        violations.push_back({ViolationKind::kMissingHash, site.site_id, face, rel});
        continue;
      }
      if (!fs::exists(path)) {
        violations.push_back({ViolationKind::kMissingImage, site.site_id, face, path.string()});
        continue;
      }
      const Digest actual = Sha256(ReadFileBytes(path));
      if (actual != it->second) {
        violations.push_back({ViolationKind::kHashMismatch, site.site_id, face,
                              "expected " + DigestToHex(it->second) + " got " + DigestToHex(actual)});
      }
    }
  }
  return violations;
}

void HashFaces(DatasetManifest& manifest, const fs::path& store_root) {
  for (auto& site : manifest.sites) {
    for (const auto& [face, rel] : site.faces) site.hashes[face] = Sha256(ReadFileBytes(store_root / rel));
  }
}

std::string ManifestToJson(const DatasetManifest& manifest) {
  json sites = json::array();
  for (const auto& site : manifest.sites) {
    json faces = json::object();
    json hashes = json::object();
    for (const auto& [face, rel] : site.faces) faces[std::string(FaceName(face))] = rel;
    for (const auto& [face, digest] : site.hashes) hashes[std::string(FaceName(face))] = DigestToHex(digest);
    sites.push_back({{"site_id", site.site_id},
                     {"split", std::string(SplitName(site.split))},
                     {"faces", faces},
                     {"hashes", hashes}});
  }
  return json{{"sites", sites}}.dump(2);
}

DatasetManifest ManifestFromJson(std::string_view text) {
  DatasetManifest manifest;
  try {
    const json doc = json::parse(text);
    for (const auto& s : doc.at("sites")) {
      SiteEntry site;
      site.site_id = s.at("site_id").get<std::string>();
      site.split = SplitFromName(s.at("split").get<std::string>());
      if (s.contains("faces")) {
        for (const auto& [name, rel] : s.at("faces").items()) site.faces[FaceFromName(name)] = rel.get<std::string>();
      }
      if (s.contains("hashes")) {
        for (const auto& [name, hex] : s.at("hashes").items()) {
          site.hashes[FaceFromName(name)] = DigestFromHex(hex.get<std::string>());
        }
      }
      manifest.sites.push_back(std::move(site));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("manifest: ") + e.what());
  }
  return manifest;
}

Digest ManifestDigest(const DatasetManifest& manifest) {
  const std::string canonical = ManifestToJson(manifest);
  return Sha256(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(canonical.data()),
                                              canonical.size()));
}

}  // namespace segloop
