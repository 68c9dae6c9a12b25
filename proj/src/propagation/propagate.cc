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

#include <string>

#include "segloop/error.h"
#include "segloop/propagation.h"

namespace segloop {

std::string PropagatedRecordId(const std::string& source_record, std::size_t candidate) {
  return source_record + ".p" + std::to_string(candidate);
}

MatchDecision DecideMatch(const Match& match, const PropagationParams& params) {
  if (match.corroboration >= 2) return MatchDecision::kAutoApply;
  if (MaxFamilySim(match.sims) > 0.0 && match.combined >= params.review_factor * params.tau) {
    return MatchDecision::kReview;
  }
  return MatchDecision::kDrop;
}

PropagationOutcome Propagate(const CorrectionRecord& correction, const ImageRaster& source_image,
                             const PropagationIndex& index, const PropagationParams& params,
                             const ToyBackboneParams* model) {
  if (!correction.IsHuman()) {
    throw Error(ErrorCode::kNotHumanProvenance, "record " + correction.record_id + " is not human-made");
  }
  const RegionDescriptor source = ComputeDescriptor(source_image, correction.region, model);
  QueryParams query{params.k, params.tau, std::make_pair(correction.site_id, correction.face)};
  PropagationOutcome outcome;
  for (const Match& m : Query(index, source, query)) {
    const CandidateRegion& cand = index.candidates[m.candidate];
    CorrectionRecord rec;
    rec.record_id = PropagatedRecordId(correction.record_id, m.candidate);
    rec.site_id = cand.site_id;
    rec.face = cand.face;
    rec.region = cand.selection;
    rec.corrected_class = correction.corrected_class;
    rec.intervention_type = correction.intervention_type;
    rec.provenance = PropagatedProvenance{correction.record_id, m.sims, false};
    rec.created_at_ms = correction.created_at_ms;
    const MatchDecision decision = DecideMatch(m, params);
    if (decision == MatchDecision::kAutoApply) {
      outcome.auto_applied.push_back(std::move(rec));
      outcome.auto_matches.push_back(m);
    } else if (decision == MatchDecision::kReview) {
      outcome.review_queue.push_back({m, std::move(rec)});
    }
  }
  return outcome;
}

}  // namespace segloop
