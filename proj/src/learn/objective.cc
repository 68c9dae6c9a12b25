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

#include "segloop/objective.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "segloop/error.h"

namespace segloop {
namespace {

// -ln softmax(z)[label], via log-sum-exp around the max.
double CrossEntropy(std::span<const double> z, ClassId label) {
  std::size_t arg = 0;
  for (std::size_t c = 1; c < z.size(); ++c) {
    if (z[c] > z[arg]) arg = c;
  }
  double rest = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    if (c != arg) rest += std::exp(z[c] - z[arg]);
  }
  return z[arg] + std::log1p(rest) - z[label];
}

template <typename LabelOf>
double MeanCrossEntropy(const LogitMap& logits, const RegionSelection& region, LabelOf label_of) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < region.pixel_count(); ++i) {
    if (!region.contains(i)) continue;
    sum += CrossEntropy(logits.pixel(i), label_of(i));
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

struct Component {
  const PixelSamples* samples;
  double weight;  // lambda for this component
  double* loss;   // where the mean cross-entropy is written
};

// Accumulates mean cross-entropy of every component and, when grad is
// nonempty, the gradient of sum_k weight_k * mean_k.
void Accumulate(const ToyBackboneParams& params, std::span<const Component> components, std::span<double> grad) {
  const bool want_grad = !grad.empty();
  double hidden[kHiddenUnits];
  double z[kNumClasses];
  double p[kNumClasses];
  double dz[kNumClasses];
  double da[kHiddenUnits];
  double* g = grad.data();
  for (const Component& comp : components) {
    const PixelSamples& s = *comp.samples;
    if (s.empty()) {
      *comp.loss = 0.0;
      continue;
    }
    const double inv_n = 1.0 / static_cast<double>(s.size());
    const double scale = comp.weight * inv_n;
    double sum = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      std::span<const double> phi(s.features.data() + n * kFeatureDims, kFeatureDims);
      HiddenActivations(params, phi, hidden);
      OutputLogits(params, hidden, z);
      const ClassId y = s.labels[n];
      sum += CrossEntropy(std::span<const double>(z, kNumClasses), y);
      if (!want_grad || scale == 0.0) continue;

      const double zmax = *std::max_element(z, z + kNumClasses);
      double norm = 0.0;
      for (int c = 0; c < kNumClasses; ++c) {
        p[c] = std::exp(z[c] - zmax);
        norm += p[c];
      }
      for (int c = 0; c < kNumClasses; ++c) dz[c] = scale * (p[c] / norm - (c == y ? 1.0 : 0.0));

      double* gw2 = g + ToyBackboneParams::kW2Offset;
      double* gb2 = g + ToyBackboneParams::kB2Offset;
      for (int c = 0; c < kNumClasses; ++c) {
        gb2[c] += dz[c];
        double* row = gw2 + static_cast<std::size_t>(c) * kHiddenUnits;
        for (int h = 0; h < kHiddenUnits; ++h) row[h] += dz[c] * hidden[h];
      }
      for (int h = 0; h < kHiddenUnits; ++h) {
        double dh = 0.0;
        for (int c = 0; c < kNumClasses; ++c) dh += params.w2(c, h) * dz[c];
        da[h] = dh * (1.0 - hidden[h] * hidden[h]);
      }
      double* gb1 = g + ToyBackboneParams::kB1Offset;
      for (int h = 0; h < kHiddenUnits; ++h) {
        gb1[h] += da[h];
        double* row = g + static_cast<std::size_t>(h) * kFeatureDims;
        for (int k = 0; k < kFeatureDims; ++k) row[k] += da[h] * phi[k];
      }
    }
    *comp.loss = sum * inv_n;
  }
}

LossBreakdown Evaluate(const SupervisionBatch& batch, const ToyBackboneParams& params, const TrainConfig& config,
                       std::span<double> grad) {
  if (batch.empty()) throw Error(ErrorCode::kNoSupervision, "supervision batch has no pixels");
  if (!grad.empty()) {
    if (grad.size() != ToyBackboneParams::kSize) throw Error(ErrorCode::kDimensionMismatch, "gradient size");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  LossBreakdown out;
  const Component components[] = {
      {&batch.base, 1.0, &out.seg},
      {&batch.counterfactual, config.lambda_cf, &out.cf},
      {&batch.propagated, config.lambda_prop, &out.prop},
  };
  Accumulate(params, components, grad);
  double sq = 0.0;
  const auto theta = params.values();
  for (double v : theta) sq += v * v;
  out.decay = 0.5 * config.weight_decay * sq;
  if (!grad.empty() && config.weight_decay != 0.0) {
    for (std::size_t j = 0; j < theta.size(); ++j) grad[j] += config.weight_decay * theta[j];
  }
  out.total = CombineLosses(out.seg, out.cf, out.prop, config) + out.decay;
  return out;
}

}  // namespace

double LossSeg(const LogitMap& logits, const SegmentationMask& labels, const RegionSelection& valid) {
  CheckSameSize(logits, labels, "LossSeg labels");
  CheckSameSize(logits, valid, "LossSeg valid");
  if (valid.Empty()) throw Error(ErrorCode::kEmptyValidSet, "no valid pixels");
  return MeanCrossEntropy(logits, valid, [&](std::size_t i) { return labels.at(i); });
}

double LossCf(const LogitMap& logits, const RegionSelection& region, ClassId corrected_class) {
  CheckSameSize(logits, region, "LossCf");
  if (!IsValidClass(corrected_class)) throw Error(ErrorCode::kClassOutOfRange, "corrected class");
  if (region.Empty()) throw Error(ErrorCode::kEmptyRegion, "corrected region is empty");
  return MeanCrossEntropy(logits, region, [corrected_class](std::size_t) { return corrected_class; });
}

std::size_t CorrespondenceSet::PixelCount() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.pixels.Count();
  return n;
}

double LossProp(std::span<const LogitMap> targets, const CorrespondenceSet& correspondences) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : correspondences.entries) {
    if (e.target >= targets.size()) throw Error(ErrorCode::kInvalidArgument, "correspondence target out of range");
    if (!IsValidClass(e.label)) throw Error(ErrorCode::kClassOutOfRange, "correspondence label");
    const LogitMap& logits = targets[e.target];
    CheckSameSize(logits, e.pixels, "LossProp");
    for (std::size_t i = 0; i < e.pixels.pixel_count(); ++i) {
      if (!e.pixels.contains(i)) continue;
      sum += CrossEntropy(logits.pixel(i), e.label);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double CombineLosses(double seg, double cf, double prop, const TrainConfig& config) {
  return seg + config.lambda_cf * cf + config.lambda_prop * prop;
}

void PixelSamples::Add(std::span<const double> feature, ClassId label) {
  features.insert(features.end(), feature.begin(), feature.end());
  labels.push_back(label);
}

void PixelSamples::Append(const PixelSamples& other) {
  features.insert(features.end(), other.features.begin(), other.features.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

void GatherPixels(PixelSamples& out, const FeatureField& field, const RegionSelection& selection,
                  const std::function<ClassId(std::size_t)>& label_of) {
  CheckSameSize(field, selection, "GatherPixels");
  for (std::size_t i = 0; i < selection.pixel_count(); ++i) {
    if (selection.contains(i)) out.Add(field.pixel(i), label_of(i));
  }
}

LossBreakdown LossTotal(const SupervisionBatch& batch, const ToyBackboneParams& params, const TrainConfig& config) {
  return Evaluate(batch, params, config, {});
}

LossBreakdown LossAndGradient(const SupervisionBatch& batch, const ToyBackboneParams& params,
                              const TrainConfig& config, std::span<double> grad) {
  if (grad.size() != ToyBackboneParams::kSize) throw Error(ErrorCode::kDimensionMismatch, "gradient size");
  return Evaluate(batch, params, config, grad);
}

}  // namespace segloop
