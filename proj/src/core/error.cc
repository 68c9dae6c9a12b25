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

#include "segloop/error.h"

namespace segloop {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kWrongColorType: return "WrongColorType";
    case ErrorCode::kPaletteOverflow: return "PaletteOverflow";
    case ErrorCode::kTooFewSites: return "TooFewSites";
    case ErrorCode::kSeedOutOfBounds: return "SeedOutOfBounds";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kClassOutOfRange: return "ClassOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kFewerThanTwoMasks: return "FewerThanTwoMasks";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kRegionTooThin: return "RegionTooThin";
    case ErrorCode::kLeakageViolation: return "LeakageViolation";
    case ErrorCode::kNotHumanProvenance: return "NotHumanProvenance";
    case ErrorCode::kEmptyValidSet: return "EmptyValidSet";
    case ErrorCode::kNoSupervision: return "NoSupervision";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kNoViolatingPixels: return "NoViolatingPixels";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kAlreadyDecided: return "AlreadyDecided";
    case ErrorCode::kBadStore: return "BadStore";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kNothingToUndo: return "NothingToUndo";
  }
  return "Unknown";
}

}  // namespace segloop
