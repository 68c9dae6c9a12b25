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

#ifndef SEGLOOP_RECORDS_H_
#define SEGLOOP_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "segloop/digest.h"
#include "segloop/manifest.h"
#include "segloop/raster.h"

namespace segloop {

enum class InterventionType : std::uint8_t { kFeatureSuppression, kBoundaryRefinement, kContextReweighting };

std::string_view InterventionTypeName(InterventionType type);
InterventionType InterventionTypeFromName(std::string_view name);

// Cosine similarity per descriptor family; the embedding family is absent
// when no backbone embedding was computed.
struct FamilySims {
  double hsv = 0.0;
  double lbp = 0.0;
  std::optional<double> embedding;

  friend bool operator==(const FamilySims&, const FamilySims&) = default;
};

struct HumanProvenance {
  int interactions = 0;
  double elapsed_s = 0.0;

  friend bool operator==(const HumanProvenance&, const HumanProvenance&) = default;
};

struct PropagatedProvenance {
  std::string source_record;
  FamilySims family_similarities;
  bool confirmed = false;

  friend bool operator==(const PropagatedProvenance&, const PropagatedProvenance&) = default;
};

using Provenance = std::variant<HumanProvenance, PropagatedProvenance>;

// One intervention: segmentation[region] <- corrected_class.
struct CorrectionRecord {
  std::string record_id;
  std::string site_id;
  Face face = Face::kFlat;
  RegionSelection region;
  ClassId corrected_class = 0;
  InterventionType intervention_type = InterventionType::kFeatureSuppression;
  Provenance provenance;
  std::int64_t created_at_ms = 0;
  // Digest of the SEGB encoding of the mask the correction was applied to.
  std::optional<Digest> prior_mask_digest;

  bool IsHuman() const { return std::holds_alternative<HumanProvenance>(provenance); }
  bool IsPropagated() const { return std::holds_alternative<PropagatedProvenance>(provenance); }

  friend bool operator==(const CorrectionRecord&, const CorrectionRecord&) = default;
};

nlohmann::json RecordToJson(const CorrectionRecord& record);
CorrectionRecord RecordFromJson(const nlohmann::json& j);
nlohmann::json FamilySimsToJson(const FamilySims& sims);
FamilySims FamilySimsFromJson(const nlohmann::json& j);

// (image, model prediction, corrected mask) over the corrected region.
struct CounterfactualTriple {
  std::string image_ref;
  SegmentationMask predicted;
  SegmentationMask corrected;
  RegionSelection region;
};

// Builds corrected = predicted with region relabelled to corrected_class.
CounterfactualTriple MakeCounterfactualTriple(std::string image_ref, const SegmentationMask& predicted,
                                              const RegionSelection& region, ClassId corrected_class);

// Throws kDimensionMismatch / kInvalidArgument when the triple's invariants do not hold.
void ValidateTriple(const CounterfactualTriple& triple);

std::int64_t NowMillis();

}  // namespace segloop

#endif  // SEGLOOP_RECORDS_H_
