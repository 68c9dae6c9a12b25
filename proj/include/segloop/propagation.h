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

#ifndef SEGLOOP_PROPAGATION_H_
#define SEGLOOP_PROPAGATION_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "segloop/backbone.h"
#include "segloop/digest.h"
#include "segloop/manifest.h"
#include "segloop/raster.h"
#include "segloop/records.h"
#include "segloop/region.h"

namespace segloop {

inline constexpr int kHsvBins = 64;
inline constexpr int kLbpBins = 256;

// 8 hue x 4 saturation x 2 value bins, index = h * 8 + s * 2 + v.
int HsvBin(Rgb c);

// Colour and texture signature of a region. Histograms are L1-normalised;
// the embedding is the toy backbone's hidden activations mean-pooled over the
// region.
struct RegionDescriptor {
  std::vector<double> hsv_hist = std::vector<double>(kHsvBins, 0.0);
  std::vector<double> lbp_hist = std::vector<double>(kLbpBins, 0.0);
  std::optional<std::vector<double>> embedding;

  friend bool operator==(const RegionDescriptor&, const RegionDescriptor&) = default;
};

// Per-image state shared by every region described in that image.
class DescriptorContext {
 public:
  DescriptorContext(const ImageRaster& image, const ToyBackboneParams* model = nullptr);

  RegionDescriptor Compute(const RegionSelection& sel) const;

 private:
  const ImageRaster& image_;
  std::vector<std::uint8_t> gray_;
  std::vector<double> hidden_;  // pixel_count * kHiddenUnits, empty without a model
};

// LBP uses region pixels whose 8 neighbours all lie inside the frame; bit k
// is set iff neighbour k (clockwise from top-left) is strictly brighter.
// Throws kEmptyRegion, kRegionTooThin.
RegionDescriptor ComputeDescriptor(const ImageRaster& image, const RegionSelection& sel,
                                   const ToyBackboneParams* model = nullptr);

// 0 when either vector is all-zero.
double Cosine(std::span<const double> a, std::span<const double> b);

// Per-family cosines; the embedding family is present iff both have one.
FamilySims CompareDescriptors(const RegionDescriptor& a, const RegionDescriptor& b);
double CombinedScore(const FamilySims& sims);
int Corroboration(const FamilySims& sims, double tau);
double MaxFamilySim(const FamilySims& sims);

struct CandidateRegion {
  std::string site_id;
  Face face = Face::kFlat;
  Digest image_hash{};
  RegionSelection selection;
  RegionDescriptor descriptor;

  friend bool operator==(const CandidateRegion&, const CandidateRegion&) = default;
};

struct IndexBuildParams {
  int grid = 8;
  double tolerance = 32.0;
  Connectivity connectivity = Connectivity::kFour;

  friend bool operator==(const IndexBuildParams&, const IndexBuildParams&) = default;
};

struct PropagationIndex {
  Digest manifest_digest{};
  IndexBuildParams params;
  std::set<Digest> train_hashes;
  std::vector<CandidateRegion> candidates;

  friend bool operator==(const PropagationIndex&, const PropagationIndex&) = default;
};

// Encoded image file bytes for one (site, face). The bytes are hashed before
// anything is decoded.
struct IndexSource {
  std::string site_id;
  Face face = Face::kFlat;
  std::vector<std::uint8_t> file_bytes;
};

// Candidate regions of one image: wand growth from a g x g grid of seeds at
// ((2i+1)W/2g, (2j+1)H/2g), row-major. Seeds on already-covered pixels are
// skipped; each region keeps only newly covered pixels and is dropped when
// too thin for a descriptor.
std::vector<CandidateRegion> ExtractCandidates(const ImageRaster& image, const std::string& site_id, Face face,
                                               const Digest& image_hash, const IndexBuildParams& params,
                                               const ToyBackboneParams* model = nullptr);

// Throws kLeakageViolation naming the hash of any source whose digest is not
// in the manifest's train split.
PropagationIndex BuildIndex(const DatasetManifest& manifest, std::span<const IndexSource> sources,
                            const IndexBuildParams& params = {}, const ToyBackboneParams* model = nullptr);

struct LeakageFinding {
  std::size_t candidate = 0;
  std::string site_id;
  Face face = Face::kFlat;
  Digest hash{};
  std::optional<Split> split;  // absent when the manifest does not know the hash
};

// Every candidate whose hash is not in the manifest's train split. Empty means ok.
std::vector<LeakageFinding> VerifyNoLeakage(const PropagationIndex& index, const DatasetManifest& manifest);

struct Match {
  std::size_t candidate = 0;
  FamilySims sims;
  double combined = 0.0;
  int corroboration = 0;
};

struct QueryParams {
  int k = 5;
  double tau = 0.85;
  // Candidates from this (site, face) are skipped.
  std::optional<std::pair<std::string, Face>> exclude;
};

// Top-k by combined score, descending; ties keep insertion order.
std::vector<Match> Query(const PropagationIndex& index, const RegionDescriptor& desc, const QueryParams& params = {});

struct PropagationParams {
  double tau = 0.85;
  int k = 5;
  double review_factor = 0.8;
};

struct ReviewItem {
  Match match;
  CorrectionRecord proposed;
};

struct PropagationOutcome {
  std::vector<CorrectionRecord> auto_applied;
  std::vector<Match> auto_matches;
  std::vector<ReviewItem> review_queue;
};

enum class MatchDecision { kAutoApply, kReview, kDrop };

// Corroboration >= 2 auto-applies; otherwise some positive family and
// combined >= review_factor * tau queues for review; the rest are dropped.
MatchDecision DecideMatch(const Match& match, const PropagationParams& params);

// Id of the record proposed for (source record, candidate); doubles as the
// idempotency key.
std::string PropagatedRecordId(const std::string& source_record, std::size_t candidate);

// Top-k matches sorted by DecideMatch; auto-applied records relabel the
// whole candidate. Throws kNotHumanProvenance.
PropagationOutcome Propagate(const CorrectionRecord& correction, const ImageRaster& source_image,
                             const PropagationIndex& index, const PropagationParams& params = {},
                             const ToyBackboneParams* model = nullptr);

// SEGX: "SEGX", u32 version=1, 32-byte manifest digest, u32 grid, f64
// tolerance, u8 connectivity, u32 hash count + hashes, u32 candidate count,
// then per candidate: site (u16 length + bytes), u8 face, 32-byte hash,
// u32 width, u32 height, u32 run count + u32 runs, u8 has_embedding,
// 64 + 256 (+32) float32.
std::vector<std::uint8_t> EncodeIndex(const PropagationIndex& index);
PropagationIndex DecodeIndex(std::span<const std::uint8_t> bytes);

}  // namespace segloop

#endif  // SEGLOOP_PROPAGATION_H_
