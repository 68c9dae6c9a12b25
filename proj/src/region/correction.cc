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
#include "segloop/mask_io.h"
#include "segloop/region.h"

namespace segloop {

AppliedCorrection ApplyCorrection(const SegmentationMask& mask, const RegionSelection& sel, int new_class,
                                  InterventionType type, const Provenance& provenance,
                                  const CorrectionContext& context) {
  CheckSameSize(mask, sel, "ApplyCorrection");
  if (!IsValidClass(new_class)) {
    throw Error(ErrorCode::kClassOutOfRange, "class " + std::to_string(new_class) + " is not in 0..6");
  }
  if (sel.Empty()) throw Error(ErrorCode::kEmptySelection, "correction region is empty");

  AppliedCorrection out{mask, {}, {}};
  const auto cls = static_cast<ClassId>(new_class);
  for (std::size_t i = 0; i < sel.pixel_count(); ++i) {
    if (!sel.contains(i)) continue;
    out.undo.pixels.push_back(i);
    out.undo.prior_labels.push_back(mask.at(i));
    out.mask.set(i, cls);
  }
  CorrectionRecord& r = out.record;
  r.record_id = context.record_id;
  r.site_id = context.site_id;
  r.face = context.face;
  r.region = sel;
  r.corrected_class = cls;
  r.intervention_type = type;
  r.provenance = provenance;
  r.created_at_ms = context.created_at_ms;
  r.prior_mask_digest = Sha256(EncodeBin(mask));
  return out;
}

SegmentationMask UndoCorrection(const SegmentationMask& corrected, const CorrectionRecord& record,
                                const UndoPatch& undo) {
  if (undo.pixels.size() != undo.prior_labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "undo patch is inconsistent");
  }
  SegmentationMask restored = corrected;
  for (std::size_t k = 0; k < undo.pixels.size(); ++k) {
    if (undo.pixels[k] >= restored.pixel_count()) throw Error(ErrorCode::kDimensionMismatch, "undo pixel out of range");
    restored.set(undo.pixels[k], undo.prior_labels[k]);
  }
  if (record.prior_mask_digest && Sha256(EncodeBin(restored)) != *record.prior_mask_digest) {
    throw Error(ErrorCode::kInvalidArgument, "restored mask does not match the record's prior digest");
  }
  return restored;
}

}  // namespace segloop
