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

#ifndef SEGLOOP_BACKBONE_H_
#define SEGLOOP_BACKBONE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segloop/features.h"
#include "segloop/raster.h"

namespace segloop {

inline constexpr int kHiddenUnits = 32;

// Per-pixel MLP: logits = W2 * tanh(W1 * phi + b1) + b2.
// All parameters live in one flat vector in declaration order
// W1 (hidden x input, row-major), b1, W2 (classes x hidden), b2.
class ToyBackboneParams {
 public:
  static constexpr std::size_t kW1Size = static_cast<std::size_t>(kHiddenUnits) * kFeatureDims;
  static constexpr std::size_t kB1Offset = kW1Size;
  static constexpr std::size_t kW2Offset = kB1Offset + kHiddenUnits;
  static constexpr std::size_t kB2Offset = kW2Offset + static_cast<std::size_t>(kNumClasses) * kHiddenUnits;
  static constexpr std::size_t kSize = kB2Offset + kNumClasses;

  ToyBackboneParams() : values_(kSize, 0.0) {}
  explicit ToyBackboneParams(std::vector<double> values);

  // Seeded uniform(-0.1, 0.1); values are float-representable so a
  // checkpoint round trip is exact.
  static ToyBackboneParams Init(std::uint64_t seed);

  double w1(int h, int k) const { return values_[static_cast<std::size_t>(h) * kFeatureDims + k]; }
  double b1(int h) const { return values_[kB1Offset + h]; }
  double w2(int c, int h) const { return values_[kW2Offset + static_cast<std::size_t>(c) * kHiddenUnits + h]; }
  double b2(int c) const { return values_[kB2Offset + c]; }
  double& w1(int h, int k) { return values_[static_cast<std::size_t>(h) * kFeatureDims + k]; }
  double& b1(int h) { return values_[kB1Offset + h]; }
  double& w2(int c, int h) { return values_[kW2Offset + static_cast<std::size_t>(c) * kHiddenUnits + h]; }
  double& b2(int c) { return values_[kB2Offset + c]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  friend bool operator==(const ToyBackboneParams&, const ToyBackboneParams&) = default;

 private:
  std::vector<double> values_;
};

// Hidden activations for one pixel's features.
void HiddenActivations(const ToyBackboneParams& params, std::span<const double> features,
                       std::span<double> hidden);
// Logits for one pixel; hidden must already hold HiddenActivations.
void OutputLogits(const ToyBackboneParams& params, std::span<const double> hidden, std::span<double> logits);

LogitMap Forward(const ToyBackboneParams& params, const FeatureField& features);

// SEGW checkpoint: "SEGW", u32 version=1, u32 input, u32 hidden, u32 classes,
// then every parameter as a little-endian float32 in declaration order.
std::vector<std::uint8_t> EncodeCheckpoint(const ToyBackboneParams& params);
ToyBackboneParams DecodeCheckpoint(std::span<const std::uint8_t> bytes);

}  // namespace segloop

#endif  // SEGLOOP_BACKBONE_H_
