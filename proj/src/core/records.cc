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

#include "segloop/records.h"

#include <chrono>

#include "segloop/error.h"
#include "segloop/rle.h"

namespace segloop {

using nlohmann::json;

std::string_view InterventionTypeName(InterventionType type) {
  switch (type) {
    case InterventionType::kFeatureSuppression: return "feature_suppression";
    case InterventionType::kBoundaryRefinement: return "boundary_refinement";
    case InterventionType::kContextReweighting: return "context_reweighting";
  }
  return "feature_suppression";
}

InterventionType InterventionTypeFromName(std::string_view name) {
  for (auto t : {InterventionType::kFeatureSuppression, InterventionType::kBoundaryRefinement,
                 InterventionType::kContextReweighting}) {
    if (InterventionTypeName(t) == name) return t;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown intervention type '" + std::string(name) + "'");
}

json FamilySimsToJson(const FamilySims& sims) {
  json j = {{"hsv", sims.hsv}, {"lbp", sims.lbp}};
  j["embedding"] = sims.embedding ? json(*sims.embedding) : json(nullptr);
  return j;
}

FamilySims FamilySimsFromJson(const json& j) {
  FamilySims sims;
  sims.hsv = j.at("hsv").get<double>();
  sims.lbp = j.at("lbp").get<double>();
  if (j.contains("embedding") && !j.at("embedding").is_null()) sims.embedding = j.at("embedding").get<double>();
  return sims;
}

json RecordToJson(const CorrectionRecord& r) {
  json j = {
      {"record_id", r.record_id},
      {"site_id", r.site_id},
      {"face", std::string(FaceName(r.face))},
      {"region", SelectionToJson(r.region)},
      {"corrected_class", r.corrected_class},
      {"intervention_type", std::string(InterventionTypeName(r.intervention_type))},
      {"created_at_ms", r.created_at_ms},
  };
  if (const auto* h = std::get_if<HumanProvenance>(&r.provenance)) {
    j["provenance"] = {{"kind", "human"}, {"interactions", h->interactions}, {"elapsed_s", h->elapsed_s}};
  } else {
    const auto& p = std::get<PropagatedProvenance>(r.provenance);
    j["provenance"] = {{"kind", "propagated"},
                       {"source_record", p.source_record},
                       {"family_similarities", FamilySimsToJson(p.family_similarities)},
                       {"confirmed", p.confirmed}};
  }
  if (r.prior_mask_digest) j["prior_mask_digest"] = DigestToHex(*r.prior_mask_digest);
  return j;
}

CorrectionRecord RecordFromJson(const json& j) {
  try {
    CorrectionRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.site_id = j.at("site_id").get<std::string>();
    r.face = FaceFromName(j.at("face").get<std::string>());
    r.region = SelectionFromJson(j.at("region"));
    const int cls = j.at("corrected_class").get<int>();
    if (!IsValidClass(cls)) throw Error(ErrorCode::kClassOutOfRange, "class " + std::to_string(cls));
    r.corrected_class = static_cast<ClassId>(cls);
    r.intervention_type = InterventionTypeFromName(j.at("intervention_type").get<std::string>());
    r.created_at_ms = j.at("created_at_ms").get<std::int64_t>();
    const json& p = j.at("provenance");
    if (p.at("kind").get<std::string>() == "human") {
      r.provenance = HumanProvenance{p.at("interactions").get<int>(), p.at("elapsed_s").get<double>()};
    } else {
      r.provenance = PropagatedProvenance{p.at("source_record").get<std::string>(),
                                          FamilySimsFromJson(p.at("family_similarities")),
                                          p.at("confirmed").get<bool>()};
    }
    if (j.contains("prior_mask_digest")) r.prior_mask_digest = DigestFromHex(j.at("prior_mask_digest").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("record: ") + e.what());
  }
}

CounterfactualTriple MakeCounterfactualTriple(std::string image_ref, const SegmentationMask& predicted,
                                              const RegionSelection& region, ClassId corrected_class) {
  CheckSameSize(predicted, region, "MakeCounterfactualTriple");
  if (!IsValidClass(corrected_class)) {
    throw Error(ErrorCode::kClassOutOfRange, "class " + std::to_string(corrected_class));
  }
  SegmentationMask corrected = predicted;
  for (std::size_t i = 0; i < region.pixel_count(); ++i) {
    if (region.contains(i)) corrected.set(i, corrected_class);
  }
  return {std::move(image_ref), predicted, std::move(corrected), region};
}

void ValidateTriple(const CounterfactualTriple& t) {
  CheckSameSize(t.predicted, t.corrected, "triple masks");
  CheckSameSize(t.predicted, t.region, "triple region");
  for (std::size_t i = 0; i < t.region.pixel_count(); ++i) {
    if (!t.region.contains(i) && t.predicted.at(i) != t.corrected.at(i)) {
      throw Error(ErrorCode::kInvalidArgument, "triple masks differ outside the region at pixel " + std::to_string(i));
    }
  }
}

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace segloop
