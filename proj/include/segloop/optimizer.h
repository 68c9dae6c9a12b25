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

#ifndef SEGLOOP_OPTIMIZER_H_
#define SEGLOOP_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segloop/backbone.h"
#include "segloop/objective.h"

namespace segloop {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  static AdamState Zeros() {
    return {std::vector<double>(ToyBackboneParams::kSize, 0.0), std::vector<double>(ToyBackboneParams::kSize, 0.0), 0};
  }
};

// One bias-corrected Adam update. Weight decay is expected to be folded into
// grads already (it is part of the objective).
void AdamStep(ToyBackboneParams& params, std::span<const double> grads, AdamState& state, const TrainConfig& config);

// Training data for finetuning: base supervision per labelled image, plus the
// pooled counterfactual and propagated pixels that every minibatch carries.
struct FinetuneData {
  std::vector<PixelSamples> base_images;
  PixelSamples counterfactual;
  PixelSamples propagated;

  bool empty() const;
  // Everything in one batch.
  SupervisionBatch FullBatch() const;
};

struct EpochLog {
  int epoch = 0;  // 0 is the evaluation before any update
  LossBreakdown loss;
  int steps = 0;
};

struct TrainingLog {
  std::vector<EpochLog> epochs;

  std::string ToCsv() const;
};

struct FinetuneResult {
  ToyBackboneParams params;
  TrainingLog log;
};

// Minibatch Adam on LossTotal. Base images are visited in a seeded
// per-epoch permutation, batch_size images per step; each step also carries
// all counterfactual and propagated pixels. Each epoch logs the full-data
// loss after its updates. Throws kNoSupervision.
FinetuneResult Finetune(const ToyBackboneParams& initial, const FinetuneData& data, const TrainConfig& config);

}  // namespace segloop

#endif  // SEGLOOP_OPTIMIZER_H_
