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

#ifndef SEGLOOP_ERROR_H_
#define SEGLOOP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace segloop {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kBadFormat,
  // mask formats
  kBadMagic,
  kTruncatedPayload,
  kLabelOutOfRange,
  kWrongColorType,
  kPaletteOverflow,
  // manifest
  kTooFewSites,
  // region tools
  kSeedOutOfBounds,
  kEmptySelection,
  kClassOutOfRange,
  kDimensionMismatch,
  // failure detection
  kFewerThanTwoMasks,
  // propagation
  kEmptyRegion,
  kRegionTooThin,
  kLeakageViolation,
  kNotHumanProvenance,
  // learning
  kEmptyValidSet,
  kNoSupervision,
  // evaluation
  kEmptyMatrix,
  kEmptyLog,
  kNoViolatingPixels,
  // service
  kNotFound,
  kAlreadyDecided,
  kBadStore,
  kPortInUse,
  kNothingToUndo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segloop

#endif  // SEGLOOP_ERROR_H_
