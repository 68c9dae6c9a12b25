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

#include "oracles.h"
#include "segloop/color.h"
#include "segloop/digest.h"
#include "segloop/mask_io.h"
#include "segloop/morphology.h"
#include "segloop/region.h"
#include "test_util.h"

namespace segloop {
namespace {

constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kWhite{255, 255, 255};

TEST(Wand, UniformImageTakesEverything) {
  const ImageRaster img(4, 4, Rgb{10, 20, 30});
  EXPECT_EQ(WandSelect(img, {2, 1}, {0.0, Connectivity::kFour}).Count(), 16u);
}

TEST(Wand, UniqueSeedColourIsSingleton) {
  ImageRaster img(4, 4, kWhite);
  img.set(1, 2, kRed);
  const RegionSelection sel = WandSelect(img, {1, 2}, {0.0, Connectivity::kEight});
  EXPECT_EQ(sel.Count(), 1u);
  EXPECT_TRUE(sel.contains(1, 2));
}

TEST(Wand, DiagonalBlobsDependOnConnectivity) {
  // R R . .
  // R R . .
  // . . R R
  // . . R R
  ImageRaster img(4, 4, kWhite);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      if ((x < 2) == (y < 2)) img.set(x, y, kRed);
    }
  }
  const RegionSelection four = WandSelect(img, {0, 0}, {0.0, Connectivity::kFour});
  const RegionSelection eight = WandSelect(img, {0, 0}, {0.0, Connectivity::kEight});
  EXPECT_EQ(four, oracle::Wand(img, 0, 0, 0.0, false));
  EXPECT_EQ(eight, oracle::Wand(img, 0, 0, 0.0, true));
  EXPECT_EQ(four.Count(), 4u);
  EXPECT_EQ(eight.Count(), 8u);
}

TEST(Wand, MatchesFloodFillOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tol(0.0, 200.0);
  std::uniform_int_distribution<int> coord(0, 15);
  for (int t = 0; t < 300; ++t) {
    const ImageRaster img = testing::RandomImage(rng, 16, 16, 4);
    const double tolerance = tol(rng);
    const int x = coord(rng);
    const int y = coord(rng);
    for (bool eight : {false, true}) {
      const WandParams p{tolerance, eight ? Connectivity::kEight : Connectivity::kFour};
      ASSERT_EQ(WandSelect(img, {x, y}, p), oracle::Wand(img, x, y, tolerance, eight));
    }
  }
}

TEST(Wand, MonotoneInTolerance) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const ImageRaster img = testing::RandomImage(rng, 12, 12, 5);
    const RegionSelection lo = WandSelect(img, {5, 5}, {40.0, Connectivity::kFour});
    const RegionSelection hi = WandSelect(img, {5, 5}, {120.0, Connectivity::kFour});
    EXPECT_TRUE(lo.IsSubsetOf(hi));
  }
}

TEST(Wand, Errors) {
  const ImageRaster img(3, 3);
  EXPECT_SEGLOOP_ERROR(WandSelect(img, {3, 0}, {}), ErrorCode::kSeedOutOfBounds);
  EXPECT_SEGLOOP_ERROR(WandSelect(img, {0, -1}, {}), ErrorCode::kSeedOutOfBounds);
  EXPECT_SEGLOOP_ERROR(WandSelect(img, {0, 0}, {500.0, Connectivity::kFour}), ErrorCode::kInvalidArgument);
  EXPECT_SEGLOOP_ERROR(ConnectivityFromInt(6), ErrorCode::kInvalidArgument);
}

TEST(Wand, FeatureSpaceVariantAgreesOnRgbFeatures) {
  std::mt19937_64 rng(13);
  const ImageRaster img = testing::RandomImage(rng, 10, 10, 3);
  std::vector<double> feats;
  for (auto v : img.data()) feats.push_back(v);
  const RegionSelection a = WandSelect(img, {4, 4}, {130.0, Connectivity::kEight});
  const RegionSelection b = WandSelectFeatures(feats, 3, 10, 10, {4, 4}, 130.0, Connectivity::kEight);
  EXPECT_EQ(a, b);
}

TEST(Refine, ExpandSinglePixel) {
  RegionSelection s(5, 5);
  s.set(2, 2, true);
  EXPECT_EQ(RefineSelection(s, RefineMode::kExpand, 1), RegionSelection::Rect(5, 5, 1, 1, 4, 4));
}

TEST(Refine, FullFrameIsFixed) {
  const RegionSelection full = RegionSelection::Full(6, 4);
  EXPECT_EQ(RefineSelection(full, RefineMode::kExpand, 2), full);
  EXPECT_EQ(RefineSelection(full, RefineMode::kShrink, 2), full);
}

TEST(Refine, OpeningFixesBlock) {
  const RegionSelection block = RegionSelection::Rect(8, 8, 2, 3, 5, 6);
  const RegionSelection out =
      RefineSelection(RefineSelection(block, RefineMode::kShrink, 1), RefineMode::kExpand, 1);
  EXPECT_EQ(out, block);
  EXPECT_EQ(out, oracle::Dilate(oracle::Erode(block, 1, false), 1));
}

TEST(Refine, MatchesMorphologyOracle) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const RegionSelection s = testing::RandomSelection(rng, 8, 8, 0.6);
    const int r = 1 + t % 3;
    const RegionSelection grown = RefineSelection(s, RefineMode::kExpand, r);
    const RegionSelection shrunk = RefineSelection(s, RefineMode::kShrink, r);
    ASSERT_EQ(grown, oracle::Dilate(s, r));
    ASSERT_EQ(shrunk, oracle::Erode(s, r, false));
    ASSERT_EQ(Erode(s, r, ErosionBorder::kBackground), oracle::Erode(s, r, true));
    EXPECT_TRUE(s.IsSubsetOf(grown));
    EXPECT_TRUE(shrunk.IsSubsetOf(s));
  }
  EXPECT_SEGLOOP_ERROR(Dilate(RegionSelection(2, 2), 0), ErrorCode::kInvalidArgument);
}

TEST(SetOps, Basic) {
  const RegionSelection a = RegionSelection::Rect(4, 4, 0, 0, 2, 4);
  const RegionSelection b = RegionSelection::Rect(4, 4, 1, 0, 4, 4);
  EXPECT_EQ(Union(a, b), RegionSelection::Full(4, 4));
  EXPECT_EQ(Intersect(a, b), RegionSelection::Rect(4, 4, 1, 0, 2, 4));
  EXPECT_EQ(Subtract(a, b), RegionSelection::Rect(4, 4, 0, 0, 1, 4));
  EXPECT_EQ(ClassIndicator(SegmentationMask(2, 1, {1, 0}), 1).Count(), 1u);
}

CorrectionContext Ctx() { return {"r1", "site", Face::kFlat, 5}; }

TEST(Correction, WholeFrameToSky) {
  const SegmentationMask m(4, 3, 4);
  const auto applied = ApplyCorrection(m, RegionSelection::Full(4, 3), 1, InterventionType::kFeatureSuppression,
                                       HumanProvenance{1, 1.0}, Ctx());
  EXPECT_EQ(applied.mask, SegmentationMask(4, 3, 1));
  EXPECT_EQ(applied.record.prior_mask_digest, Sha256(EncodeBin(m)));
  EXPECT_EQ(applied.record.corrected_class, 1);
  EXPECT_EQ(applied.record.record_id, "r1");
}

TEST(Correction, Errors) {
  const SegmentationMask m(4, 3);
  EXPECT_SEGLOOP_ERROR(ApplyCorrection(m, RegionSelection(4, 3), 1, InterventionType::kFeatureSuppression,
                                       HumanProvenance{}, Ctx()),
                       ErrorCode::kEmptySelection);
  EXPECT_SEGLOOP_ERROR(ApplyCorrection(m, RegionSelection::Full(4, 3), 7, InterventionType::kFeatureSuppression,
                                       HumanProvenance{}, Ctx()),
                       ErrorCode::kClassOutOfRange);
  EXPECT_SEGLOOP_ERROR(ApplyCorrection(m, RegionSelection::Full(3, 4), 1, InterventionType::kFeatureSuppression,
                                       HumanProvenance{}, Ctx()),
                       ErrorCode::kDimensionMismatch);
}

TEST(Correction, UndoRestoresAndChangesAtMostRegion) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 100; ++t) {
    const SegmentationMask m = testing::RandomMask(rng, 9, 7);
    RegionSelection sel = testing::RandomSelection(rng, 9, 7, 0.3);
    sel.set(0, true);
    const int cls = static_cast<int>(rng() % kNumClasses);
    const auto applied = ApplyCorrection(m, sel, cls, InterventionType::kContextReweighting, HumanProvenance{}, Ctx());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < m.pixel_count(); ++i) {
      if (sel.contains(i)) {
        EXPECT_EQ(applied.mask.at(i), cls);
      } else {
        EXPECT_EQ(applied.mask.at(i), m.at(i));
      }
      changed += applied.mask.at(i) != m.at(i);
    }
    EXPECT_LE(changed, sel.Count());
    EXPECT_EQ(UndoCorrection(applied.mask, applied.record, applied.undo), m);
  }
}

double GrayStd(const ImageRaster& img) {
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double g = Gray(img.at(i));
    sum += g;
    sq += g * g;
  }
  const double n = static_cast<double>(img.pixel_count());
  return std::sqrt(std::max(0.0, sq / n - (sum / n) * (sum / n)));
}

TEST(Clahe, ConstantImageStaysConstant) {
  const ImageRaster img(32, 32, Rgb{90, 120, 60});
  const ImageRaster out = Clahe(img);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) EXPECT_EQ(out.at(i), out.at(0));
}

TEST(Clahe, StretchesLowContrastGradient) {
  // Horizontal ramp between two close gray levels.
  ImageRaster img(128, 128);
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) {
      const auto v = static_cast<std::uint8_t>(100 + 40 * x / 127);
      img.set(x, y, Rgb{v, v, v});
    }
  }
  const ImageRaster out = Clahe(img);
  EXPECT_GE(GrayStd(out), GrayStd(img));
}

TEST(Clahe, KeepsHueAndRange) {
  std::mt19937_64 rng(16);
  const ImageRaster img = testing::RandomImage(rng, 40, 24);
  const ImageRaster out = Clahe(img, {2.0, 4, 4});
  ASSERT_EQ(out.width(), img.width());
  int hue_checked = 0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const Hsv a = RgbToHsv(img.at(i));
    const Hsv b = RgbToHsv(out.at(i));
    if (a.s > 0.3 && a.v > 0.3 && b.v > 0.3) {
      const double dh = std::fabs(a.h - b.h);
      EXPECT_LT(std::min(dh, 360.0 - dh), 6.0);
      ++hue_checked;
    }
  }
  EXPECT_GT(hue_checked, 100);
}

TEST(Cleanup, RemovesSpeckle) {
  SegmentationMask m(8, 8, 4);
  m.set(3, 4, 1);
  const SegmentationMask out = MorphCleanup(m);
  EXPECT_EQ(out.at(3, 4), 0);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) {
    if (i != m.Index(3, 4)) {
      EXPECT_EQ(out.at(i), 4);
    }
  }
}

TEST(Cleanup, SpeckleTakesRunnerUpFromLogits) {
  SegmentationMask m(8, 8, 4);
  m.set(3, 4, 1);
  LogitMap logits(8, 8);
  logits.at(m.Index(3, 4), 1) = 5.0;
  logits.at(m.Index(3, 4), 2) = 3.0;
  EXPECT_EQ(MorphCleanup(m, {}, &logits).at(3, 4), 2);
}

TEST(Cleanup, SolidBlockUnchanged) {
  for (int offset : {0, 1, 2, 4}) {
    SegmentationMask m(10, 10, 4);
    for (int y = offset; y < offset + 6; ++y) {
      for (int x = offset; x < offset + 6; ++x) m.set(x, y, 1);
    }
    EXPECT_EQ(MorphCleanup(m), m) << "offset " << offset;
  }
}

TEST(Cleanup, KeepsNarrowStripAtFrameEdge) {
  SegmentationMask m(10, 10, 1);
  for (int y = 0; y < 10; ++y) m.set(9, y, 3);
  EXPECT_EQ(MorphCleanup(m), m);
}

TEST(Cleanup, FillsHole) {
  SegmentationMask m(12, 12, 1);
  m.set(6, 5, 4);
  const SegmentationMask out = MorphCleanup(m);
  EXPECT_EQ(out, SegmentationMask(12, 12, 1));
  // Same answer from the morphology oracle on the sky indicator.
  const RegionSelection sky = ClassIndicator(m, 1);
  const RegionSelection opened = oracle::Dilate(oracle::Erode(sky, 1, false), 1);
  const RegionSelection closed = oracle::Erode(oracle::Dilate(opened, 2), 2, false);
  EXPECT_EQ(closed, RegionSelection::Full(12, 12));
}

}  // namespace
}  // namespace segloop
