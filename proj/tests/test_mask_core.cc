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
#include <set>

#include "segloop/digest.h"
#include "segloop/file_util.h"
#include "segloop/manifest.h"
#include "segloop/mask_io.h"
#include "segloop/png_codec.h"
#include "segloop/probability.h"
#include "segloop/records.h"
#include "segloop/rle.h"
#include "test_util.h"

namespace segloop {
namespace {

using testing::RandomMask;
using testing::TempDir;

std::vector<std::uint8_t> Header(const char* magic, std::uint32_t w, std::uint32_t h) {
  std::vector<std::uint8_t> out(magic, magic + 4);
  for (std::uint32_t v : {1u, w, h}) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  return out;
}

TEST(BinFormat, LengthIsHeaderPlusPixels) {
  EXPECT_EQ(EncodeBin(SegmentationMask(4, 2)).size(), 24u);
}

TEST(BinFormat, HeaderLayout) {
  SegmentationMask m(3, 2, {0, 1, 2, 3, 4, 5});
  const auto bytes = EncodeBin(m);
  auto expected = Header("SEGB", 3, 2);
  for (int i = 0; i < 6; ++i) expected.push_back(static_cast<std::uint8_t>(i));
  EXPECT_EQ(bytes, expected);
}

TEST(BinFormat, RoundTripAndDeterminism) {
  std::mt19937_64 rng(1);
  for (int seed = 0; seed < 100; ++seed) {
    const SegmentationMask m = RandomMask(rng, 8, 8);
    const auto a = EncodeBin(m);
    EXPECT_EQ(a, EncodeBin(m));
    EXPECT_EQ(DecodeBin(a), m);
  }
}

TEST(BinFormat, RoundTripPropertyUpTo64) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int i = 0; i < 1000; ++i) {
    const SegmentationMask m = RandomMask(rng, dim(rng), dim(rng));
    ASSERT_EQ(DecodeBin(EncodeBin(m)), m);
  }
}

TEST(BinFormat, Errors) {
  auto truncated = Header("SEGB", 4, 4);
  truncated.resize(truncated.size() + 10, 0);
  EXPECT_SEGLOOP_ERROR(DecodeBin(truncated), ErrorCode::kTruncatedPayload);

  auto bad_label = Header("SEGB", 2, 1);
  bad_label.push_back(0);
  bad_label.push_back(0x09);
  EXPECT_SEGLOOP_ERROR(DecodeBin(bad_label), ErrorCode::kLabelOutOfRange);

  auto bad_magic = Header("SEGX", 1, 1);
  bad_magic.push_back(0);
  EXPECT_SEGLOOP_ERROR(DecodeBin(bad_magic), ErrorCode::kBadMagic);
}

TEST(BinFormat, SinglePixel) {
  auto bytes = Header("SEGB", 1, 1);
  bytes.push_back(3);
  const SegmentationMask m = DecodeBin(bytes);
  ASSERT_EQ(m.width(), 1);
  ASSERT_EQ(m.height(), 1);
  EXPECT_EQ(m.at(0, 0), 3);
}

TEST(IndexedPng, RoundTripPropertyUpTo64) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int i = 0; i < 1000; ++i) {
    const SegmentationMask m = RandomMask(rng, dim(rng), dim(rng));
    ASSERT_EQ(DecodeIndexedPng(EncodeIndexedPng(m)), m);
  }
}

TEST(IndexedPng, PaletteIsTaxonomy) {
  const SegmentationMask sky(5, 3, Id(SemanticClass::kSky));
  const IndexedPng png = DecodePngIndexed(EncodeIndexedPng(sky));
  for (auto idx : png.indices) {
    EXPECT_EQ(idx, 1);
    EXPECT_EQ(png.palette.at(idx), ClassColor(1));
  }
}

TEST(IndexedPng, AgreesWithColorize) {
  std::mt19937_64 rng(4);
  const SegmentationMask m = RandomMask(rng, 9, 7);
  const IndexedPng png = DecodePngIndexed(EncodeIndexedPng(m));
  const ImageRaster vis = Colorize(m);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) EXPECT_EQ(png.palette.at(png.indices[i]), vis.at(i));
}

TEST(IndexedPng, RejectsTruecolor) {
  EXPECT_SEGLOOP_ERROR(DecodeIndexedPng(EncodePngRgb(ImageRaster(2, 2))), ErrorCode::kWrongColorType);
}

TEST(IndexedPng, RejectsIndexBeyondTaxonomy) {
  IndexedPng png{2, 1, {0, 8}, {}};
  for (int i = 0; i < 9; ++i) png.palette.push_back({static_cast<std::uint8_t>(i), 0, 0});
  EXPECT_SEGLOOP_ERROR(DecodeIndexedPng(EncodePngIndexed(png)), ErrorCode::kPaletteOverflow);
}

TEST(RgbPng, RoundTrip) {
  std::mt19937_64 rng(5);
  const ImageRaster img = testing::RandomImage(rng, 13, 11);
  EXPECT_EQ(DecodePngRgb(EncodePngRgb(img)), img);
}

TEST(Colorize, Contract) {
  const ImageRaster bg = Colorize(SegmentationMask(3, 3));
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(bg.at(i), ClassColor(0));

  std::set<std::tuple<int, int, int>> colors;
  for (int c = 0; c < kNumClasses; ++c) {
    const Rgb rgb = ClassColor(static_cast<ClassId>(c));
    colors.insert({rgb.r, rgb.g, rgb.b});
  }
  EXPECT_EQ(colors.size(), static_cast<std::size_t>(kNumClasses));

  const ImageRaster two = Colorize(SegmentationMask(2, 1, {1, 3}));
  EXPECT_EQ(two.at(0), ClassColor(Id(SemanticClass::kSky)));
  EXPECT_EQ(two.at(1), ClassColor(Id(SemanticClass::kBuildings)));
}

TEST(Overlay, AlphaBlend) {
  const ImageRaster img(1, 1, Rgb{100, 50, 0});
  const SegmentationMask m(1, 1, 1);
  const Rgb c = ClassColor(1);
  const Rgb out = Overlay(img, m, 0.5).at(0);
  EXPECT_NEAR(out.r, 0.5 * 100 + 0.5 * c.r, 0.51);
  EXPECT_NEAR(out.g, 0.5 * 50 + 0.5 * c.g, 0.51);
  EXPECT_NEAR(out.b, 0.5 * 0 + 0.5 * c.b, 0.51);
  EXPECT_EQ(Overlay(img, m, 0.0), img);
  EXPECT_EQ(Overlay(img, m, 1.0), Colorize(m));
}

TEST(Softmax, Examples) {
  LogitMap equal(1, 1);
  const ProbabilityMap p = Softmax(equal);
  for (int c = 0; c < kNumClasses; ++c) EXPECT_NEAR(p.at(0, c), 1.0 / 7.0, 1e-12);

  LogitMap peaked(1, 1, {10, 0, 0, 0, 0, 0, 0});
  EXPECT_NEAR(Softmax(peaked).at(0, 0), std::exp(10.0) / (std::exp(10.0) + 6.0), 1e-12);
  EXPECT_NEAR(Softmax(peaked).at(0, 0), 0.999728, 1e-6);
}

TEST(Softmax, ShiftInvarianceAndNormalisation) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(0.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(kNumClasses), shifted(kNumClasses);
    const double c = d(rng) * 100;
    for (int k = 0; k < kNumClasses; ++k) {
      v[k] = d(rng);
      shifted[k] = v[k] + c;
    }
    const ProbabilityMap a = Softmax(LogitMap(1, 1, v));
    const ProbabilityMap b = Softmax(LogitMap(1, 1, shifted));
    double sum = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      EXPECT_NEAR(a.at(0, k), b.at(0, k), 1e-12);
      sum += a.at(0, k);
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Argmax, Examples) {
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<double> v(kNumClasses, 0.0);
    v[c] = 1.0;
    EXPECT_EQ(ArgmaxMask(LogitMap(1, 1, v)).at(0), c);
  }
  EXPECT_EQ(ArgmaxMask(LogitMap(3, 2)), SegmentationMask(3, 2, 0));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  std::vector<double> v(4 * kNumClasses), t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = d(rng);
    t[i] = std::exp(3.0 * v[i]) + 2.0;
  }
  EXPECT_EQ(ArgmaxMask(LogitMap(2, 2, v)), ArgmaxMask(LogitMap(2, 2, t)));
}

std::vector<std::string> SiteIds(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("site-" + std::to_string(i));
  return ids;
}

std::array<int, 3> Counts(const DatasetManifest& m) {
  std::array<int, 3> c{};
  for (const auto& s : m.sites) ++c[static_cast<int>(s.split)];
  return c;
}

TEST(SplitSites, Counts) {
  EXPECT_EQ(Counts(SplitSites(SiteIds(80), 1)), (std::array<int, 3>{56, 8, 16}));
  EXPECT_EQ(Counts(SplitSites(SiteIds(10), 1)), (std::array<int, 3>{7, 1, 2}));
  EXPECT_SEGLOOP_ERROR(SplitSites(SiteIds(2), 1), ErrorCode::kTooFewSites);
}

TEST(SplitSites, DeterministicPartition) {
  const auto ids = SiteIds(37);
  const DatasetManifest a = SplitSites(ids, 9);
  const DatasetManifest b = SplitSites(ids, 9);
  EXPECT_EQ(ManifestToJson(a), ManifestToJson(b));
  std::set<std::string> seen;
  for (const auto& s : a.sites) EXPECT_TRUE(seen.insert(s.site_id).second);
  EXPECT_EQ(seen, std::set<std::string>(ids.begin(), ids.end()));
  const DatasetManifest other = SplitSites(ids, 10);
  EXPECT_NE(ManifestToJson(a), ManifestToJson(other));
}

class ManifestFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_ = SplitSites(SiteIds(3), 0);
    std::mt19937_64 rng(8);
    for (auto& site : manifest_.sites) {
      for (Face f : {Face::kNorth, Face::kUp}) {
        const std::string rel = "images/" + site.site_id + "/" + std::string(FaceName(f)) + ".png";
        std::filesystem::create_directories((dir_.path() / rel).parent_path());
        WriteFileAtomic(dir_.path() / rel, EncodePngRgb(testing::RandomImage(rng, 4, 4)));
        site.faces[f] = rel;
      }
    }
    HashFaces(manifest_, dir_.path());
  }

  TempDir dir_;
  DatasetManifest manifest_;
};

TEST_F(ManifestFiles, UntouchedIsClean) { EXPECT_TRUE(VerifyManifest(manifest_, dir_.path()).empty()); }

TEST_F(ManifestFiles, FlippedByteIsReported) {
  const SiteEntry& site = manifest_.sites[1];
  const auto path = dir_.path() / site.faces.at(Face::kUp);
  auto bytes = ReadFileBytes(path);
  bytes[bytes.size() / 2] ^= 0x01;
  WriteFileAtomic(path, bytes);
  const auto v = VerifyManifest(manifest_, dir_.path());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kHashMismatch);
  EXPECT_EQ(v[0].site_id, site.site_id);
  EXPECT_EQ(v[0].face, Face::kUp);
}

TEST_F(ManifestFiles, MissingFileIsReported) {
  std::filesystem::remove(dir_.path() / manifest_.sites[0].faces.at(Face::kNorth));
  const auto v = VerifyManifest(manifest_, dir_.path());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kMissingImage);
}

TEST_F(ManifestFiles, JsonRoundTrip) {
  const DatasetManifest back = ManifestFromJson(ManifestToJson(manifest_));
  EXPECT_EQ(ManifestToJson(back), ManifestToJson(manifest_));
  EXPECT_EQ(ManifestDigest(back), ManifestDigest(manifest_));
  for (const auto& site : manifest_.sites) {
    for (const auto& [face, digest] : site.hashes) EXPECT_EQ(back.SplitOfHash(digest), site.split);
  }
}

TEST(Digest, KnownVector) {
  const std::string abc = "abc";
  EXPECT_EQ(DigestToHex(Sha256({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()})),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const Digest d = Sha256({});
  EXPECT_EQ(DigestFromHex(DigestToHex(d)), d);
}

TEST(Rle, RoundTripAndShape) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const RegionSelection sel = testing::RandomSelection(rng, 1 + i % 17, 1 + i % 13, 0.3);
    const auto runs = EncodeRle(sel);
    std::uint64_t total = 0;
    for (auto r : runs) total += r;
    EXPECT_EQ(total, sel.pixel_count());
    EXPECT_EQ(DecodeRle(sel.width(), sel.height(), runs), sel);
    EXPECT_EQ(SelectionFromJson(SelectionToJson(sel)), sel);
  }
  RegionSelection first(2, 1);
  first.set(0, true);
  EXPECT_EQ(EncodeRle(first), (std::vector<std::uint32_t>{0, 1, 1}));
}

TEST(Records, JsonRoundTrip) {
  CorrectionRecord human;
  human.record_id = "h1";
  human.site_id = "s";
  human.face = Face::kEast;
  human.region = RegionSelection::Rect(4, 4, 1, 1, 3, 3);
  human.corrected_class = 3;
  human.intervention_type = InterventionType::kBoundaryRefinement;
  human.provenance = HumanProvenance{3, 12.5};
  human.created_at_ms = 1234;
  human.prior_mask_digest = Sha256({});
  EXPECT_EQ(RecordFromJson(RecordToJson(human)), human);

  CorrectionRecord prop = human;
  prop.record_id = "h1.p0";
  prop.provenance = PropagatedProvenance{"h1", FamilySims{0.9, 0.95, 0.99}, true};
  prop.prior_mask_digest.reset();
  EXPECT_EQ(RecordFromJson(RecordToJson(prop)), prop);
  EXPECT_TRUE(prop.IsPropagated());
}

TEST(Records, CounterfactualTriple) {
  const SegmentationMask pred(3, 3, 1);
  const RegionSelection r = RegionSelection::Rect(3, 3, 0, 0, 2, 1);
  const CounterfactualTriple t = MakeCounterfactualTriple("img", pred, r, 3);
  EXPECT_NO_THROW(ValidateTriple(t));
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(t.corrected.at(i), r.contains(i) ? 3 : 1);
  CounterfactualTriple bad = t;
  bad.corrected.set(8, 5);
  EXPECT_SEGLOOP_ERROR(ValidateTriple(bad), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace segloop
