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

#include <cmath>

#include "segloop/backbone.h"
#include "segloop/failure.h"
#include "segloop/features.h"
#include "segloop/probability.h"
#include "test_util.h"

namespace segloop {
namespace {

ProbabilityMap OnePixel(std::vector<double> p) { return ProbabilityMap(1, 1, std::move(p)); }

TEST(Entropy, Examples) {
  EXPECT_NEAR(EntropyMap(OnePixel(std::vector<double>(7, 1.0 / 7.0))).at(0), std::log(7.0), 1e-12);
  EXPECT_NEAR(EntropyMap(OnePixel({0, 0, 1, 0, 0, 0, 0})).at(0), 0.0, 1e-15);
  EXPECT_NEAR(EntropyMap(OnePixel({0.5, 0.5, 0, 0, 0, 0, 0})).at(0), std::log(2.0), 1e-12);
}

TEST(Entropy, BoundedBySoftmaxMaximum) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> d(0.0, 3.0);
  std::vector<double> v(50 * kNumClasses);
  for (auto& x : v) x = d(rng);
  const ScoreMap e = EntropyMap(Softmax(LogitMap(10, 5, v)));
  for (std::size_t i = 0; i < e.pixel_count(); ++i) {
    EXPECT_GE(e.at(i), 0.0);
    EXPECT_LE(e.at(i), std::log(7.0) + 1e-12);
  }
}

TEST(Disagreement, Examples) {
  const std::vector<SegmentationMask> same(3, SegmentationMask(2, 2, 4));
  const ScoreMap zero = DisagreementMap(same);
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);

  const std::vector<SegmentationMask> three = {SegmentationMask(1, 1, 1), SegmentationMask(1, 1, 2),
                                               SegmentationMask(1, 1, 3)};
  EXPECT_NEAR(DisagreementMap(three).at(0), 1.0 - 1.0 / 3.0, 1e-12);

  const std::vector<SegmentationMask> four = {SegmentationMask(1, 1, 1), SegmentationMask(1, 1, 1),
                                              SegmentationMask(1, 1, 2), SegmentationMask(1, 1, 2)};
  EXPECT_NEAR(DisagreementMap(four).at(0), 0.5, 1e-12);
}

TEST(Disagreement, Errors) {
  const std::vector<SegmentationMask> one(1, SegmentationMask(2, 2));
  EXPECT_SEGLOOP_ERROR(DisagreementMap(one), ErrorCode::kFewerThanTwoMasks);
  const std::vector<SegmentationMask> mixed = {SegmentationMask(2, 2), SegmentationMask(2, 3)};
  EXPECT_SEGLOOP_ERROR(DisagreementMap(mixed), ErrorCode::kDimensionMismatch);
}

TEST(IntegratedGradients, BaselineImageGivesZero) {
  const ToyBackboneParams params = ToyBackboneParams::Init(3);
  const ImageRaster black(6, 5);
  const Attribution a = IntegratedGradients(params, black, {1, 16});
  for (double v : a.l1.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(a.total, 0.0);
}

TEST(IntegratedGradients, ZeroModelGivesZero) {
  std::mt19937_64 rng(22);
  const Attribution a = IntegratedGradients(ToyBackboneParams(), testing::RandomImage(rng, 6, 6), {3, 16});
  for (double v : a.l1.values()) EXPECT_EQ(v, 0.0);
}

TEST(IntegratedGradients, Completeness) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ToyBackboneParams params = ToyBackboneParams::Init(seed);
    // Scale up so the network is clearly nonlinear over the path.
    for (double& v : params.values()) v *= 8.0;
    const ImageRaster img = testing::RandomImage(rng, 8, 8);
    const ClassId target = static_cast<ClassId>(seed % kNumClasses);
    const Attribution a = IntegratedGradients(params, img, {target, 256});
    const double expected = SummedClassLogit(params, Featurize(img), target) -
                            SummedClassLogit(params, Featurize(ImageRaster(8, 8)), target);
    ASSERT_GT(std::fabs(expected), 1e-3);
    EXPECT_NEAR(a.total, expected, 0.01 * std::fabs(expected)) << "seed " << seed;
    double sum = 0.0;
    for (double v : a.signed_sum) sum += v;
    EXPECT_NEAR(sum, a.total, 1e-9 * (1.0 + std::fabs(a.total)));
  }
}

TEST(IntegratedGradients, MapIsL1) {
  std::mt19937_64 rng(24);
  const ToyBackboneParams params = ToyBackboneParams::Init(7);
  const ImageRaster img = testing::RandomImage(rng, 5, 4);
  const AttributionParams p{2, 8};
  EXPECT_EQ(AttributionMap(params, img, p).values(), IntegratedGradients(params, img, p).l1.values());
}

TEST(FlagRegions, ConstantBelowThreshold) {
  EXPECT_TRUE(FlagRegions(ScoreMap(8, 8, std::vector<double>(64, 0.5)), {1.0, 1, Connectivity::kEight}).empty());
}

TEST(FlagRegions, MinAreaFilter) {
  ScoreMap m(8, 8);
  // Component A: 5 pixels in a row; component B: 2 pixels, far away.
  for (int x = 0; x < 5; ++x) m.at(static_cast<std::size_t>(1 * 8 + x)) = 2.0;
  m.at(6 * 8 + 6) = 2.0;
  m.at(6 * 8 + 7) = 2.0;
  const auto regions = FlagRegions(m, {1.0, 3, Connectivity::kEight});
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0].area, 5u);
  EXPECT_TRUE(regions[0].selection.contains(0, 1));
}

TEST(FlagRegions, SortedByMeanScore) {
  ScoreMap m(8, 8);
  m.at(0) = 0.4;
  m.at(1) = 0.4;
  m.at(6 * 8 + 6) = 0.9;
  m.at(6 * 8 + 7) = 0.9;
  const auto regions = FlagRegions(m, {0.3, 1, Connectivity::kFour});
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_NEAR(regions[0].mean_score, 0.9, 1e-12);
  EXPECT_NEAR(regions[1].mean_score, 0.4, 1e-12);
}

TEST(ConnectedComponents, MatchesLabelCount) {
  // Diagonal neighbours split under 4-connectivity only.
  RegionSelection s(3, 3);
  s.set(0, 0, true);
  s.set(1, 1, true);
  s.set(2, 2, true);
  EXPECT_EQ(ConnectedComponents(s, Connectivity::kFour).size(), 3u);
  EXPECT_EQ(ConnectedComponents(s, Connectivity::kEight).size(), 1u);
}

TEST(ScoreIo, RoundTrips) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<float> d(0.0f, 2.0f);
  std::vector<double> v(35);
  for (auto& x : v) x = d(rng);
  const ScoreMap m(7, 5, v);
  EXPECT_EQ(DecodeScoreMap(EncodeScoreMap(m)).values(), m.values());

  std::vector<double> l(35 * kNumClasses);
  for (auto& x : l) x = d(rng) - 1.0f;
  const LogitMap logits(7, 5, l);
  EXPECT_EQ(DecodeLogitMap(EncodeLogitMap(logits)).values(), logits.values());

  auto bytes = EncodeScoreMap(m);
  bytes.pop_back();
  EXPECT_SEGLOOP_ERROR(DecodeScoreMap(bytes), ErrorCode::kTruncatedPayload);
}

}  // namespace
}  // namespace segloop
