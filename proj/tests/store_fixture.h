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

#ifndef SEGLOOP_TESTS_STORE_FIXTURE_H_
#define SEGLOOP_TESTS_STORE_FIXTURE_H_

// A small on-disk store: textured train scenes "a" (source), "b" (near-clone
// of a), "g" (same texture, other hue), and a test-split scene "t", each
// with ground truth.

#include <string>

#include "segloop/digest.h"
#include "segloop/file_util.h"
#include "segloop/manifest.h"
#include "segloop/mask_io.h"
#include "segloop/png_codec.h"
#include "segloop/store.h"
#include "test_util.h"

namespace segloop::testing {

inline constexpr int kSceneSize = 16;

// Left half: a checkerboard of two close colours; right half: flat.
inline ImageRaster CheckerScene(Rgb a, Rgb b, Rgb right) {
  ImageRaster img(kSceneSize, kSceneSize, right);
  for (int y = 0; y < kSceneSize; ++y) {
    for (int x = 0; x < kSceneSize / 2; ++x) img.set(x, y, (x + y) % 2 == 0 ? a : b);
  }
  return img;
}

inline RegionSelection LeftHalf() {
  RegionSelection s(kSceneSize, kSceneSize);
  for (int y = 0; y < kSceneSize; ++y) {
    for (int x = 0; x < kSceneSize / 2; ++x) s.set(x, y, true);
  }
  return s;
}

inline IndexBuildParams FixtureIndexParams() { return {2, 40.0, Connectivity::kFour}; }

inline void BuildFixtureStore(const std::filesystem::path& root) {
  struct Site {
    const char* id;
    Split split;
    ImageRaster image;
  };
  const Site sites[] = {
      {"a", Split::kTrain, CheckerScene({200, 40, 40}, {170, 40, 40}, {100, 100, 100})},
      {"b", Split::kTrain, CheckerScene({201, 40, 40}, {170, 41, 40}, {40, 180, 40})},
      {"g", Split::kTrain, CheckerScene({40, 200, 40}, {40, 170, 40}, {200, 200, 200})},
      {"t", Split::kTest, CheckerScene({200, 40, 40}, {170, 40, 40}, {20, 20, 20})},
  };
  DatasetManifest manifest;
  for (const auto& s : sites) {
    const std::string rel = std::string("images/") + s.id + "/flat.png";
    const auto bytes = EncodePngRgb(s.image);
    std::filesystem::create_directories((root / rel).parent_path());
    WriteFileAtomic(root / rel, bytes);
    SiteEntry e;
    e.site_id = s.id;
    e.split = s.split;
    e.faces[Face::kFlat] = rel;
    e.hashes[Face::kFlat] = Sha256(bytes);
    manifest.sites.push_back(e);
  }
  Store store = Store::Create(root, manifest);
  // Ground truth: class 3 on the textured half, 0 elsewhere.
  SegmentationMask gt(kSceneSize, kSceneSize);
  for (int y = 0; y < kSceneSize; ++y) {
    for (int x = 0; x < kSceneSize / 2; ++x) gt.set(x, y, 3);
  }
  for (const auto& s : sites) {
    const auto path = store.GtPath({s.id, Face::kFlat});
    std::filesystem::create_directories(path.parent_path());
    WriteFileAtomic(path, EncodeBin(gt));
  }
}

}  // namespace segloop::testing

#endif  // SEGLOOP_TESTS_STORE_FIXTURE_H_
