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
#include <string>

#include "segloop/error.h"
#include "segloop/morphology.h"
#include "segloop/png_codec.h"
#include "segloop/propagation.h"

namespace segloop {

std::vector<CandidateRegion> ExtractCandidates(const ImageRaster& image, const std::string& site_id, Face face,
                                               const Digest& image_hash, const IndexBuildParams& params,
                                               const ToyBackboneParams* model) {
  if (params.grid < 1) throw Error(ErrorCode::kInvalidArgument, "index grid must be >= 1");
  const int w = image.width();
  const int h = image.height();
  const int g = params.grid;
  const DescriptorContext context(image, model);
  const WandParams wand{params.tolerance, params.connectivity};
  RegionSelection covered(w, h);
  std::vector<CandidateRegion> out;
  for (int j = 0; j < g; ++j) {
    for (int i = 0; i < g; ++i) {
      const PixelCoord seed{(2 * i + 1) * w / (2 * g), (2 * j + 1) * h / (2 * g)};
      if (covered.contains(seed.x, seed.y)) continue;
      RegionSelection region = Subtract(WandSelect(image, seed, wand), covered);
      covered = Union(covered, region);
      try {
        RegionDescriptor desc = context.Compute(region);
        out.push_back({site_id, face, image_hash, std::move(region), std::move(desc)});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kRegionTooThin && e.code() != ErrorCode::kEmptyRegion) throw;
      }
    }
  }
  return out;
}

PropagationIndex BuildIndex(const DatasetManifest& manifest, std::span<const IndexSource> sources,
                            const IndexBuildParams& params, const ToyBackboneParams* model) {
  PropagationIndex index;
  index.manifest_digest = ManifestDigest(manifest);
  index.params = params;
  index.train_hashes = manifest.HashesIn(Split::kTrain);
  // Every source is checked before any is decoded.
  std::vector<Digest> hashes;
  hashes.reserve(sources.size());
  for (const auto& src : sources) {
    const Digest d = Sha256(src.file_bytes);
    if (!index.train_hashes.contains(d)) {
      throw Error(ErrorCode::kLeakageViolation, "image " + DigestToHex(d) + " (" + src.site_id + "/" +
                                                    std::string(FaceName(src.face)) + ") is not in the train split");
    }
    hashes.push_back(d);
  }
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const ImageRaster image = DecodePngRgb(sources[s].file_bytes);
    auto cands = ExtractCandidates(image, sources[s].site_id, sources[s].face, hashes[s], params, model);
    for (auto& c : cands) index.candidates.push_back(std::move(c));
  }
  return index;
}

std::vector<LeakageFinding> VerifyNoLeakage(const PropagationIndex& index, const DatasetManifest& manifest) {
  const std::set<Digest> train = manifest.HashesIn(Split::kTrain);
  std::vector<LeakageFinding> out;
  for (std::size_t i = 0; i < index.candidates.size(); ++i) {
    const auto& c = index.candidates[i];
    if (train.contains(c.image_hash)) continue;
    out.push_back({i, c.site_id, c.face, c.image_hash, manifest.SplitOfHash(c.image_hash)});
  }
  return out;
}

std::vector<Match> Query(const PropagationIndex& index, const RegionDescriptor& desc, const QueryParams& params) {
  std::vector<Match> all;
  for (std::size_t i = 0; i < index.candidates.size(); ++i) {
    const auto& c = index.candidates[i];
    if (params.exclude && c.site_id == params.exclude->first && c.face == params.exclude->second) continue;
    Match m;
    m.candidate = i;
    m.sims = CompareDescriptors(desc, c.descriptor);
    m.combined = CombinedScore(m.sims);
    m.corroboration = Corroboration(m.sims, params.tau);
    all.push_back(m);
  }
  std::stable_sort(all.begin(), all.end(), [](const Match& a, const Match& b) { return a.combined > b.combined; });
  if (params.k >= 0 && all.size() > static_cast<std::size_t>(params.k)) all.resize(params.k);
  return all;
}

}  // namespace segloop
