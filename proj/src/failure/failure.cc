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

#include "segloop/failure.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segloop/error.h"

namespace segloop {

ScoreMap EntropyMap(const ProbabilityMap& probs) {
  ScoreMap out(probs.width(), probs.height());
  for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
    double h = 0.0;
    for (double p : probs.pixel(i)) {
      if (p > 0.0) h -= p * std::log(p);
    }
    out.at(i) = std::clamp(h, 0.0, std::log(static_cast<double>(kNumClasses)));
  }
  return out;
}

ScoreMap DisagreementMap(std::span<const SegmentationMask> masks) {
  if (masks.size() < 2) throw Error(ErrorCode::kFewerThanTwoMasks, "need at least two masks");
  for (const auto& m : masks) CheckSameSize(masks.front(), m, "DisagreementMap");
  ScoreMap out(masks.front().width(), masks.front().height());
  const double n = static_cast<double>(masks.size());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    int counts[kNumClasses] = {0};
    for (const auto& m : masks) ++counts[m.at(i)];
    const int modal = *std::max_element(counts, counts + kNumClasses);
    out.at(i) = 1.0 - modal / n;
  }
  return out;
}

double SummedClassLogit(const ToyBackboneParams& params, const FeatureField& features, ClassId target) {
  double hidden[kHiddenUnits];
  double z[kNumClasses];
  double sum = 0.0;
  for (std::size_t i = 0; i < features.pixel_count(); ++i) {
    HiddenActivations(params, features.pixel(i), hidden);
    OutputLogits(params, hidden, z);
    sum += z[target];
  }
  return sum;
}

Attribution IntegratedGradients(const ToyBackboneParams& params, const ImageRaster& image,
                                const AttributionParams& attribution) {
  if (!IsValidClass(attribution.target_class)) throw Error(ErrorCode::kClassOutOfRange, "attribution target");
  if (attribution.steps < 1) throw Error(ErrorCode::kInvalidArgument, "attribution steps must be >= 1");
  const FeatureField x = Featurize(image);
  const FeatureField base = Featurize(ImageRaster(image.width(), image.height(), Rgb{0, 0, 0}));
  const int m = attribution.steps;
  const ClassId t = attribution.target_class;

  Attribution out{ScoreMap(image.width(), image.height()), std::vector<double>(image.pixel_count(), 0.0), 0.0};
  double phi[kFeatureDims];
  double hidden[kHiddenUnits];
  double avg_grad[kFeatureDims];
  for (std::size_t i = 0; i < x.pixel_count(); ++i) {
    const auto xi = x.pixel(i);
    const auto bi = base.pixel(i);
    std::fill(avg_grad, avg_grad + kFeatureDims, 0.0);
    for (int s = 0; s < m; ++s) {
      const double alpha = (s + 0.5) / m;
      for (int k = 0; k < kFeatureDims; ++k) phi[k] = bi[k] + alpha * (xi[k] - bi[k]);
      HiddenActivations(params, phi, hidden);
      // d z_t / d phi_k = sum_h W2[t,h] (1 - h^2) W1[h,k]
      for (int h = 0; h < kHiddenUnits; ++h) {
        const double back = params.w2(t, h) * (1.0 - hidden[h] * hidden[h]);
        if (back == 0.0) continue;
        for (int k = 0; k < kFeatureDims; ++k) avg_grad[k] += back * params.w1(h, k);
      }
    }
    double l1 = 0.0;
    double signed_sum = 0.0;
    for (int k = 0; k < kFeatureDims; ++k) {
      const double a = (xi[k] - bi[k]) * avg_grad[k] / m;
      l1 += std::abs(a);
      signed_sum += a;
    }
    out.l1.at(i) = l1;
    out.signed_sum[i] = signed_sum;
    out.total += signed_sum;
  }
  return out;
}

ScoreMap AttributionMap(const ToyBackboneParams& params, const ImageRaster& image,
                        const AttributionParams& attribution) {
  return IntegratedGradients(params, image, attribution).l1;
}

std::vector<RegionSelection> ConnectedComponents(const RegionSelection& sel, Connectivity connectivity) {
  std::vector<RegionSelection> out;
  RegionSelection seen(sel.width(), sel.height());
  for (int y = 0; y < sel.height(); ++y) {
    for (int x = 0; x < sel.width(); ++x) {
      if (!sel.contains(x, y) || seen.contains(x, y)) continue;
      // Flood over the member pixels only: a wand on the indicator image.
      RegionSelection comp(sel.width(), sel.height());
      std::vector<PixelCoord> stack{{x, y}};
      comp.set(x, y, true);
      const int neighbours = static_cast<int>(connectivity);
      static constexpr int kDx[] = {1, -1, 0, 0, 1, 1, -1, -1};
      static constexpr int kDy[] = {0, 0, 1, -1, 1, -1, 1, -1};
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        for (int k = 0; k < neighbours; ++k) {
          const int nx = p.x + kDx[k];
          const int ny = p.y + kDy[k];
          if (sel.contains(nx, ny) && !comp.contains(nx, ny)) {
            comp.set(nx, ny, true);
            stack.push_back({nx, ny});
          }
        }
      }
      for (std::size_t i : comp.Members()) seen.set(i, true);
      out.push_back(std::move(comp));
    }
  }
  return out;
}

std::vector<FlaggedRegion> FlagRegions(const ScoreMap& score, const FlagParams& params) {
  if (params.min_area < 1) throw Error(ErrorCode::kInvalidArgument, "min_area must be >= 1");
  RegionSelection hot(score.width(), score.height());
  for (std::size_t i = 0; i < score.pixel_count(); ++i) hot.set(i, score.at(i) >= params.threshold);
  std::vector<FlaggedRegion> out;
  for (auto& comp : ConnectedComponents(hot, params.connectivity)) {
    const auto members = comp.Members();
    if (members.size() < static_cast<std::size_t>(params.min_area)) continue;
    double sum = 0.0;
    for (std::size_t i : members) sum += score.at(i);
    out.push_back({std::move(comp), sum / static_cast<double>(members.size()), members.size()});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FlaggedRegion& a, const FlaggedRegion& b) { return a.mean_score > b.mean_score; });
  return out;
}

}  // namespace segloop
