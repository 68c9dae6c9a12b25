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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "segloop/color.h"
#include "segloop/digest.h"
#include "segloop/manifest.h"
#include "segloop/morphology.h"
#include "segloop/png_codec.h"
#include "segloop/propagation.h"
#include "test_util.h"

namespace segloop {
namespace {

RegionSelection Full(int w, int h) {
  RegionSelection s(w, h);
  for (std::size_t i = 0; i < s.pixel_count(); ++i) s.set(i, true);
  return s;
}

RegionSelection Rect(int w, int h, int x0, int y0, int x1, int y1) {
  RegionSelection s(w, h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) s.set(x, y, true);
  }
  return s;
}

double Sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Images registered under one face each, with their PNG bytes and hashes.
struct Corpus {
  DatasetManifest manifest;
  std::vector<IndexSource> sources;
  std::vector<ImageRaster> images;

  void Add(const std::string& site, Split split, const ImageRaster& image) {
    IndexSource src{site, Face::kFlat, EncodePngRgb(image)};
    SiteEntry e;
    e.site_id = site;
    e.split = split;
    e.faces[Face::kFlat] = site + "/flat.png";
    e.hashes[Face::kFlat] = Sha256(src.file_bytes);
    manifest.sites.push_back(e);
    sources.push_back(std::move(src));
    images.push_back(image);
  }
  std::vector<IndexSource> TrainSources() const {
    std::vector<IndexSource> out;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (manifest.sites[i].split == Split::kTrain) out.push_back(sources[i]);
    }
    return out;
  }
};

// Left half: a checkerboard of two close colours; right half: flat.
ImageRaster Scene(Rgb a, Rgb b, Rgb right = {128, 128, 128}) {
  ImageRaster img(16, 16, right);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 8; ++x) img.set(x, y, (x + y) % 2 == 0 ? a : b);
  }
  return img;
}

TEST(HsvBin, PureRedIsBinSeven) {
  EXPECT_EQ(HsvBin(Rgb{255, 0, 0}), 7);
  const RegionDescriptor d = ComputeDescriptor(ImageRaster(5, 5, Rgb{255, 0, 0}), Full(5, 5));
  EXPECT_EQ(d.hsv_hist[7], 1.0);
  EXPECT_EQ(Sum(d.hsv_hist), 1.0);
}

TEST(HsvBin, MatchesBinLayout) {
  std::mt19937_64 rng(51);
  const ImageRaster img = testing::RandomImage(rng, 16, 16);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const Hsv hsv = RgbToHsv(img.at(i));
    const int hb = std::min(7, static_cast<int>(hsv.h / 360.0 * 8.0));
    const int sb = std::min(3, static_cast<int>(hsv.s * 4.0));
    const int vb = std::min(1, static_cast<int>(hsv.v * 2.0));
    EXPECT_EQ(HsvBin(img.at(i)), hb * 8 + sb * 2 + vb);
  }
}

TEST(Descriptor, UniformRegionLbpCodeZero) {
  const RegionDescriptor d = ComputeDescriptor(ImageRaster(6, 6, Rgb{40, 90, 200}), Full(6, 6));
  EXPECT_EQ(d.lbp_hist[0], 1.0);
  EXPECT_EQ(Sum(d.lbp_hist), 1.0);
}

TEST(Descriptor, LbpMatchesDirectCount) {
  std::mt19937_64 rng(52);
  const ImageRaster img = testing::RandomImage(rng, 7, 6, 4);
  const RegionSelection sel = Full(7, 6);
  std::vector<double> expected(kLbpBins, 0.0);
  const int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
  const int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
  int n = 0;
  for (int y = 1; y < 5; ++y) {
    for (int x = 1; x < 6; ++x) {
      int code = 0;
      for (int k = 0; k < 8; ++k) {
        if (Gray(img.at(x + dx[k], y + dy[k])) > Gray(img.at(x, y))) code |= 1 << k;
      }
      expected[code] += 1.0;
      ++n;
    }
  }
  const RegionDescriptor d = ComputeDescriptor(img, sel);
  for (int c = 0; c < kLbpBins; ++c) EXPECT_NEAR(d.lbp_hist[c], expected[c] / n, 1e-7) << c;
  EXPECT_NEAR(Sum(d.hsv_hist), 1.0, 1e-6);
}

TEST(Descriptor, Errors) {
  const ImageRaster img(6, 6);
  EXPECT_SEGLOOP_ERROR(ComputeDescriptor(img, RegionSelection(6, 6)), ErrorCode::kEmptyRegion);
  EXPECT_SEGLOOP_ERROR(ComputeDescriptor(img, Rect(6, 6, 0, 0, 6, 1)), ErrorCode::kRegionTooThin);
}

TEST(Descriptor, IdenticalRegionsInTwoImages) {
  const ImageRaster a = Scene({200, 40, 40}, {170, 40, 40});
  ImageRaster b = Scene({200, 40, 40}, {170, 40, 40}, {10, 200, 10});
  const RegionSelection left = Rect(16, 16, 0, 0, 8, 16);
  EXPECT_EQ(ComputeDescriptor(a, left), ComputeDescriptor(b, left));
}

TEST(Descriptor, EmbeddingPresentOnlyWithModel) {
  const ImageRaster img = Scene({200, 40, 40}, {170, 40, 40});
  const ToyBackboneParams model = ToyBackboneParams::Init(1);
  EXPECT_FALSE(ComputeDescriptor(img, Full(16, 16)).embedding.has_value());
  const RegionDescriptor d = ComputeDescriptor(img, Full(16, 16), &model);
  ASSERT_TRUE(d.embedding.has_value());
  EXPECT_EQ(d.embedding->size(), static_cast<std::size_t>(kHiddenUnits));
}

TEST(Cosine, Properties) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(20), b(20);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  EXPECT_NEAR(Cosine(a, a), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(Cosine(a, b), Cosine(b, a));
  EXPECT_GE(Cosine(a, b), -1.0);
  EXPECT_LE(Cosine(a, b), 1.0);
  const std::vector<double> x = {1, 0, 2, 0}, y = {0, 3, 0, 1}, zero(4, 0.0);
  EXPECT_EQ(Cosine(x, y), 0.0);
  EXPECT_EQ(Cosine(x, zero), 0.0);
}

TEST(Index, UniformImageGivesOneCandidate) {
  Corpus c;
  c.Add("s0", Split::kTrain, ImageRaster(16, 16, Rgb{70, 70, 70}));
  const PropagationIndex index = BuildIndex(c.manifest, c.sources, {8, 32.0, Connectivity::kFour});
  ASSERT_EQ(index.candidates.size(), 1u);
  EXPECT_EQ(index.candidates[0].selection.Count(), 256u);
  EXPECT_TRUE(VerifyNoLeakage(index, c.manifest).empty());
}

TEST(Index, RefusesTestImage) {
  Corpus c;
  c.Add("s0", Split::kTrain, ImageRaster(8, 8, Rgb{1, 2, 3}));
  c.Add("s1", Split::kTest, ImageRaster(8, 8, Rgb{4, 5, 6}));
  try {
    BuildIndex(c.manifest, c.sources);
    FAIL() << "expected LeakageViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLeakageViolation);
    EXPECT_NE(std::string(e.what()).find(DigestToHex(c.manifest.sites[1].hashes[Face::kFlat])), std::string::npos);
  }
}

TEST(Index, EmptyTrainSplit) {
  Corpus c;
  c.Add("s0", Split::kVal, ImageRaster(8, 8));
  const PropagationIndex index = BuildIndex(c.manifest, c.TrainSources());
  EXPECT_TRUE(index.candidates.empty());
  EXPECT_TRUE(Query(index, ComputeDescriptor(ImageRaster(8, 8), Full(8, 8))).empty());
}

TEST(Index, CandidatesDisjoint) {
  std::mt19937_64 rng(54);
  Corpus c;
  c.Add("s0", Split::kTrain, testing::RandomImage(rng, 16, 16, 3));
  const PropagationIndex index = BuildIndex(c.manifest, c.sources, {4, 60.0, Connectivity::kFour});
  RegionSelection seen(16, 16);
  for (const auto& cand : index.candidates) {
    EXPECT_GT(cand.selection.Count(), 0u);
    EXPECT_EQ(Intersect(seen, cand.selection).Count(), 0u);
    seen = Union(seen, cand.selection);
  }
}

TEST(Index, RoundTrip) {
  Corpus c;
  c.Add("s0", Split::kTrain, Scene({200, 40, 40}, {170, 40, 40}));
  c.Add("s1", Split::kTrain, Scene({40, 40, 200}, {40, 40, 170}));
  const ToyBackboneParams model = ToyBackboneParams::Init(2);
  const PropagationIndex index = BuildIndex(c.manifest, c.sources, {4, 20.0, Connectivity::kEight}, &model);
  ASSERT_FALSE(index.candidates.empty());
  const auto bytes = EncodeIndex(index);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SEGX");
  EXPECT_EQ(DecodeIndex(bytes), index);
  auto cut = bytes;
  cut.resize(cut.size() - 3);
  EXPECT_SEGLOOP_ERROR(DecodeIndex(cut), ErrorCode::kTruncatedPayload);
}

TEST(Query, SelfMatchAndOrdering) {
  Corpus c;
  c.Add("s0", Split::kTrain, Scene({200, 40, 40}, {170, 40, 40}));
  c.Add("s1", Split::kTrain, Scene({40, 40, 200}, {40, 40, 170}, {30, 30, 30}));
  const PropagationIndex index = BuildIndex(c.manifest, c.sources, {2, 40.0, Connectivity::kFour});
  ASSERT_EQ(index.candidates.size(), 4u) << "expected one textured and one flat half per image";
  for (std::size_t i = 0; i < index.candidates.size(); ++i) {
    const auto matches = Query(index, index.candidates[i].descriptor, {5, 0.85, std::nullopt});
    ASSERT_EQ(matches.size(), 4u);
    EXPECT_EQ(matches[0].candidate, i);
    EXPECT_NEAR(matches[0].combined, 1.0, 1e-9);
    for (std::size_t k = 1; k < matches.size(); ++k) EXPECT_GE(matches[k - 1].combined, matches[k].combined);
  }
  EXPECT_EQ(Query(index, index.candidates[0].descriptor, {1, 0.85, std::nullopt}).size(), 1u);
  PropagationIndex three = index;
  three.candidates.pop_back();
  EXPECT_EQ(Query(three, index.candidates[0].descriptor, {5, 0.85, std::nullopt}).size(), 3u);
}

TEST(Query, DisjointHistogramsHaveZeroSim) {
  RegionDescriptor a, b;
  a.hsv_hist[7] = 1.0;
  a.lbp_hist[0] = 1.0;
  b.hsv_hist[40] = 1.0;
  b.lbp_hist[255] = 1.0;
  const FamilySims s = CompareDescriptors(a, b);
  EXPECT_EQ(s.hsv, 0.0);
  EXPECT_EQ(s.lbp, 0.0);
  EXPECT_FALSE(s.embedding.has_value());
}

Match MatchWithSims(double hsv, double lbp, std::optional<double> emb, double tau = 0.85) {
  Match m;
  m.sims = {hsv, lbp, emb};
  m.combined = CombinedScore(m.sims);
  m.corroboration = Corroboration(m.sims, tau);
  return m;
}

TEST(DecideMatch, RuleExamples) {
  const PropagationParams p;
  EXPECT_EQ(DecideMatch(MatchWithSims(0.99, 0.98, 0.97), p), MatchDecision::kAutoApply);
  const Match review = MatchWithSims(0.86, 0.70, 0.65);
  EXPECT_EQ(review.corroboration, 1);
  EXPECT_NEAR(review.combined, (0.86 + 0.70 + 0.65) / 3.0, 1e-15);
  EXPECT_EQ(DecideMatch(review, p), MatchDecision::kReview);
  EXPECT_EQ(DecideMatch(MatchWithSims(0.60, 0.50, 0.40), p), MatchDecision::kDrop);
  EXPECT_EQ(DecideMatch(MatchWithSims(0.0, 0.0, std::nullopt), p), MatchDecision::kDrop);
  EXPECT_EQ(DecideMatch(MatchWithSims(0.85, 0.85, std::nullopt), p), MatchDecision::kAutoApply);
}

CorrectionRecord HumanRecord(const std::string& site, const RegionSelection& region, ClassId cls) {
  CorrectionRecord r;
  r.record_id = "h1";
  r.site_id = site;
  r.region = region;
  r.corrected_class = cls;
  r.intervention_type = InterventionType::kFeatureSuppression;
  r.provenance = HumanProvenance{2, 10.0};
  return r;
}

TEST(Propagate, NearCloneIsAutoApplied) {
  Corpus c;
  const ImageRaster src = Scene({200, 40, 40}, {170, 40, 40});
  c.Add("s0", Split::kTrain, src);
  c.Add("s1", Split::kTrain, Scene({201, 40, 40}, {170, 41, 40}, {40, 180, 40}));
  c.Add("s2", Split::kTrain, Scene({40, 200, 40}, {40, 170, 40}, {200, 200, 200}));
  const PropagationIndex index = BuildIndex(c.manifest, c.sources, {2, 40.0, Connectivity::kFour});
  const RegionSelection left = Rect(16, 16, 0, 0, 8, 16);
  const PropagationOutcome out = Propagate(HumanRecord("s0", left, 3), src, index);
  ASSERT_EQ(out.auto_applied.size(), 1u);
  const CorrectionRecord& rec = out.auto_applied[0];
  EXPECT_EQ(rec.site_id, "s1");
  EXPECT_EQ(rec.region, left);
  EXPECT_EQ(rec.corrected_class, 3);
  ASSERT_TRUE(rec.IsPropagated());
  const auto& prov = std::get<PropagatedProvenance>(rec.provenance);
  EXPECT_EQ(prov.source_record, "h1");
  EXPECT_FALSE(prov.confirmed);
  EXPECT_GE(Corroboration(prov.family_similarities, 0.85), 2);
  EXPECT_EQ(rec.record_id, PropagatedRecordId("h1", out.auto_matches[0].candidate));
  for (const auto& item : out.review_queue) EXPECT_NE(item.match.candidate, out.auto_matches[0].candidate);
  EXPECT_LE(out.auto_applied.size() + out.review_queue.size(), 5u);
}

TEST(Propagate, AutoSetInvariantToCandidateOrder) {
  Corpus c;
  const ImageRaster src = Scene({200, 40, 40}, {170, 40, 40});
  c.Add("s0", Split::kTrain, src);
  c.Add("s1", Split::kTrain, Scene({201, 40, 40}, {170, 41, 40}, {40, 180, 40}));
  c.Add("s2", Split::kTrain, Scene({199, 41, 40}, {171, 40, 40}, {90, 90, 10}));
  c.Add("s3", Split::kTrain, Scene({40, 200, 40}, {40, 170, 40}, {200, 200, 200}));
  PropagationIndex index = BuildIndex(c.manifest, c.sources, {2, 40.0, Connectivity::kFour});
  const CorrectionRecord human = HumanRecord("s0", Rect(16, 16, 0, 0, 8, 16), 3);
  auto auto_sites = [&](const PropagationIndex& idx) {
    std::vector<std::string> s;
    for (const auto& r : Propagate(human, src, idx).auto_applied) s.push_back(r.site_id);
    std::sort(s.begin(), s.end());
    return s;
  };
  const auto forward = auto_sites(index);
  EXPECT_EQ(forward, (std::vector<std::string>{"s1", "s2"}));
  std::reverse(index.candidates.begin(), index.candidates.end());
  EXPECT_EQ(auto_sites(index), forward);
}

TEST(Propagate, RefusesPropagatedRecord) {
  Corpus c;
  const ImageRaster src = Scene({200, 40, 40}, {170, 40, 40});
  c.Add("s0", Split::kTrain, src);
  const PropagationIndex index = BuildIndex(c.manifest, c.sources);
  CorrectionRecord rec = HumanRecord("s0", Rect(16, 16, 0, 0, 8, 16), 3);
  rec.provenance = PropagatedProvenance{"h0", {1.0, 1.0, std::nullopt}, false};
  EXPECT_SEGLOOP_ERROR(Propagate(rec, src, index), ErrorCode::kNotHumanProvenance);
}

TEST(Leakage, InjectedAndForeignHashes) {
  Corpus c;
  c.Add("s0", Split::kTrain, Scene({200, 40, 40}, {170, 40, 40}));
  c.Add("s1", Split::kVal, ImageRaster(16, 16, Rgb{9, 9, 9}));
  PropagationIndex index = BuildIndex(c.manifest, c.TrainSources(), {2, 40.0, Connectivity::kFour});
  EXPECT_TRUE(VerifyNoLeakage(index, c.manifest).empty());

  CandidateRegion injected = index.candidates[0];
  injected.site_id = "s1";
  injected.image_hash = c.manifest.sites[1].hashes[Face::kFlat];
  index.candidates.push_back(injected);
  const auto findings = VerifyNoLeakage(index, c.manifest);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].candidate, index.candidates.size() - 1);
  EXPECT_EQ(findings[0].split, Split::kVal);

  Corpus other;
  other.Add("x", Split::kTrain, ImageRaster(4, 4));
  EXPECT_EQ(VerifyNoLeakage(index, other.manifest).size(), index.candidates.size());
}

}  // namespace
}  // namespace segloop
