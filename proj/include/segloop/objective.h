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

#ifndef SEGLOOP_OBJECTIVE_H_
#define SEGLOOP_OBJECTIVE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "segloop/backbone.h"
#include "segloop/features.h"
#include "segloop/raster.h"

namespace segloop {

struct TrainConfig {
  double lr = 1e-4;
  double weight_decay = 1e-5;
  double lambda_cf = 0.5;
  double lambda_prop = 0.2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 1;
  int batch_size = 8;
  std::uint64_t seed = 0;
};

// Image-level losses. All use per-pixel cross-entropy -ln softmax(z)[label].

// Mean over valid pixels. Throws kEmptyValidSet.
double LossSeg(const LogitMap& logits, const SegmentationMask& labels, const RegionSelection& valid);
// Mean over R with the constant label y*. Throws kEmptyRegion. Bitwise equal
// to LossSeg with a constant-y* mask and valid = R.
double LossCf(const LogitMap& logits, const RegionSelection& region, ClassId corrected_class);

// Correspondences retrieved by similarity search: pixels of a target image
// that should carry label.
struct CorrespondenceSet {
  struct Entry {
    std::size_t target = 0;  // index into the target logits
    RegionSelection pixels;
    ClassId label = 0;
  };
  std::vector<Entry> entries;

  std::size_t PixelCount() const;
};

// Mean over every correspondence pixel; 0 for an empty set.
double LossProp(std::span<const LogitMap> targets, const CorrespondenceSet& correspondences);

// L_seg + lambda_cf * L_cf + lambda_prop * L_prop (no weight decay).
double CombineLosses(double seg, double cf, double prop, const TrainConfig& config);

// Feature/label pairs gathered from one or more images.
struct PixelSamples {
  std::vector<double> features;  // n * kFeatureDims
  std::vector<ClassId> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  void Add(std::span<const double> feature, ClassId label);
  void Append(const PixelSamples& other);
};

// Adds every selected pixel of field with label_of(pixel index).
void GatherPixels(PixelSamples& out, const FeatureField& field, const RegionSelection& selection,
                  const std::function<ClassId(std::size_t)>& label_of);

// Supervision for one optimisation step: base labels (L_seg), pooled
// counterfactual region pixels (L_cf) and propagated correspondences (L_prop).
struct SupervisionBatch {
  PixelSamples base;
  PixelSamples counterfactual;
  PixelSamples propagated;

  bool empty() const { return base.empty() && counterfactual.empty() && propagated.empty(); }
};

struct LossBreakdown {
  double seg = 0.0;
  double cf = 0.0;
  double prop = 0.0;
  double decay = 0.0;  // weight_decay * |theta|^2 / 2
  double total = 0.0;
};

// Missing components contribute 0. Throws kNoSupervision on an empty batch.
LossBreakdown LossTotal(const SupervisionBatch& batch, const ToyBackboneParams& params, const TrainConfig& config);

// Same value as LossTotal; writes the exact gradient w.r.t. every parameter
// into grad (size ToyBackboneParams::kSize).
LossBreakdown LossAndGradient(const SupervisionBatch& batch, const ToyBackboneParams& params,
                              const TrainConfig& config, std::span<double> grad);

}  // namespace segloop

#endif  // SEGLOOP_OBJECTIVE_H_
