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

#include "segloop/backbone.h"

#include <cmath>
#include <random>
#include <string>

#include "segloop/bytes.h"
#include "segloop/error.h"

namespace segloop {

ToyBackboneParams::ToyBackboneParams(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() != kSize) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(kSize) + " parameters, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite parameter");
  }
}

ToyBackboneParams ToyBackboneParams::Init(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> values(kSize);
  for (double& v : values) {
    // 53-bit uniform in [0,1) mapped to [-0.1, 0.1).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = static_cast<float>(-0.1 + 0.2 * u);
  }
  return ToyBackboneParams(std::move(values));
}

void HiddenActivations(const ToyBackboneParams& params, std::span<const double> features,
                       std::span<double> hidden) {
  const double* w = params.values().data();
  for (int h = 0; h < kHiddenUnits; ++h) {
    double a = params.b1(h);
    const double* row = w + static_cast<std::size_t>(h) * kFeatureDims;
    for (int k = 0; k < kFeatureDims; ++k) a += row[k] * features[k];
    hidden[h] = std::tanh(a);
  }
}

void OutputLogits(const ToyBackboneParams& params, std::span<const double> hidden, std::span<double> logits) {
  const double* w2 = params.values().data() + ToyBackboneParams::kW2Offset;
  for (int c = 0; c < kNumClasses; ++c) {
    double z = params.b2(c);
    const double* row = w2 + static_cast<std::size_t>(c) * kHiddenUnits;
    for (int h = 0; h < kHiddenUnits; ++h) z += row[h] * hidden[h];
    logits[c] = z;
  }
}

LogitMap Forward(const ToyBackboneParams& params, const FeatureField& features) {
  LogitMap logits(features.width(), features.height());
  double hidden[kHiddenUnits];
  for (std::size_t i = 0; i < features.pixel_count(); ++i) {
    HiddenActivations(params, features.pixel(i), hidden);
    OutputLogits(params, hidden, logits.pixel(i));
  }
  return logits;
}

std::vector<std::uint8_t> EncodeCheckpoint(const ToyBackboneParams& params) {
  ByteWriter w;
  w.Magic("SEGW");
  w.U32(1);
  w.U32(kFeatureDims);
  w.U32(kHiddenUnits);
  w.U32(kNumClasses);
  for (double v : params.values()) w.F32(static_cast<float>(v));
  return w.Take();
}

ToyBackboneParams DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.ExpectMagic("SEGW");
  const std::uint32_t version = r.U32();
  if (version != 1) throw Error(ErrorCode::kBadFormat, "SEGW version " + std::to_string(version));
  const std::uint32_t input = r.U32();
  const std::uint32_t hidden = r.U32();
  const std::uint32_t classes = r.U32();
  if (input != kFeatureDims || hidden != kHiddenUnits || classes != kNumClasses) {
    throw Error(ErrorCode::kBadFormat, "SEGW layer dims " + std::to_string(input) + "/" + std::to_string(hidden) +
                                           "/" + std::to_string(classes) + " do not match this backbone");
  }
  if (r.remaining() != ToyBackboneParams::kSize * 4) {
    throw Error(ErrorCode::kTruncatedPayload, "SEGW payload size mismatch");
  }
  std::vector<double> values(ToyBackboneParams::kSize);
  for (double& v : values) v = r.F32();
  return ToyBackboneParams(std::move(values));
}

}  // namespace segloop
