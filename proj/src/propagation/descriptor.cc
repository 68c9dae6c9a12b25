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

#include <algorithm>
#include <cmath>

#include "segloop/color.h"
#include "segloop/error.h"
#include "segloop/features.h"
#include "segloop/propagation.h"

namespace segloop {

int HsvBin(Rgb c) {
  const Hsv hsv = RgbToHsv(c);
  const int h = std::min(7, static_cast<int>(std::floor(hsv.h / 45.0)));
  const int s = std::min(3, static_cast<int>(std::floor(hsv.s * 4.0)));
  const int v = std::min(1, static_cast<int>(std::floor(hsv.v * 2.0)));
  return h * 8 + s * 2 + v;
}

DescriptorContext::DescriptorContext(const ImageRaster& image, const ToyBackboneParams* model)
    : image_(image), gray_(image.pixel_count()) {
  for (std::size_t i = 0; i < gray_.size(); ++i) gray_[i] = Gray(image.at(i));
  if (model != nullptr) {
    const FeatureField features = Featurize(image);
    hidden_.resize(image.pixel_count() * kHiddenUnits);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
      HiddenActivations(*model, features.pixel(i),
                        std::span<double>(hidden_.data() + i * kHiddenUnits, kHiddenUnits));
    }
  }
}

RegionDescriptor DescriptorContext::Compute(const RegionSelection& sel) const {
  CheckSameSize(image_, sel, "ComputeDescriptor");
  const int w = image_.width();
  const int h = image_.height();
  RegionDescriptor d;
  std::size_t n = 0;
  std::size_t n_lbp = 0;
  std::vector<double> emb(hidden_.empty() ? 0 : kHiddenUnits, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = image_.Index(x, y);
      if (!sel.contains(i)) continue;
      ++n;
      d.hsv_hist[HsvBin(image_.at(i))] += 1.0;
      if (x >= 1 && y >= 1 && x + 1 < w && y + 1 < h) {
        d.lbp_hist[LbpCodeClamped(gray_, w, h, x, y)] += 1.0;
        ++n_lbp;
      }
      for (std::size_t k = 0; k < emb.size(); ++k) emb[k] += hidden_[i * kHiddenUnits + k];
    }
  }
  if (n == 0) throw Error(ErrorCode::kEmptyRegion, "descriptor of an empty region");
  if (n_lbp == 0) throw Error(ErrorCode::kRegionTooThin, "no region pixel has all 8 neighbours in frame");
  // Kept float-representable so index files round-trip exactly.
  for (double& v : d.hsv_hist) v = static_cast<float>(v / static_cast<double>(n));
  for (double& v : d.lbp_hist) v = static_cast<float>(v / static_cast<double>(n_lbp));
  if (!emb.empty()) {
    for (double& v : emb) v = static_cast<float>(v / static_cast<double>(n));
    d.embedding = std::move(emb);
  }
  return d;
}

RegionDescriptor ComputeDescriptor(const ImageRaster& image, const RegionSelection& sel,
                                   const ToyBackboneParams* model) {
  return DescriptorContext(image, model).Compute(sel);
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors of different length");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

FamilySims CompareDescriptors(const RegionDescriptor& a, const RegionDescriptor& b) {
  FamilySims sims;
  sims.hsv = Cosine(a.hsv_hist, b.hsv_hist);
  sims.lbp = Cosine(a.lbp_hist, b.lbp_hist);
  if (a.embedding && b.embedding) sims.embedding = Cosine(*a.embedding, *b.embedding);
  return sims;
}

double CombinedScore(const FamilySims& sims) {
  if (sims.embedding) return (sims.hsv + sims.lbp + *sims.embedding) / 3.0;
  return (sims.hsv + sims.lbp) / 2.0;
}

int Corroboration(const FamilySims& sims, double tau) {
  int count = (sims.hsv >= tau ? 1 : 0) + (sims.lbp >= tau ? 1 : 0);
  if (sims.embedding && *sims.embedding >= tau) ++count;
  return count;
}

double MaxFamilySim(const FamilySims& sims) {
  double m = std::max(sims.hsv, sims.lbp);
  if (sims.embedding) m = std::max(m, *sims.embedding);
  return m;
}

}  // namespace segloop
