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

#ifndef SEGLOOP_TESTS_TEST_UTIL_H_
#define SEGLOOP_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "segloop/error.h"
#include "segloop/raster.h"
#include "segloop/taxonomy.h"

// Expects stmt to throw segloop::Error with the given code.
#define EXPECT_SEGLOOP_ERROR(stmt, expected_code)                        \
  do {                                                                    \
    try {                                                                 \
      stmt;                                                               \
      ADD_FAILURE() << "no error thrown, expected " << #expected_code;    \
    } catch (const ::segloop::Error& e) {                                 \
      EXPECT_EQ(e.code(), expected_code) << e.what();                     \
    }                                                                     \
  } while (0)

namespace segloop::testing {

inline SegmentationMask RandomMask(std::mt19937_64& rng, int w, int h, int classes = kNumClasses) {
  std::uniform_int_distribution<int> d(0, classes - 1);
  std::vector<ClassId> labels(static_cast<std::size_t>(w) * h);
  for (auto& l : labels) l = static_cast<ClassId>(d(rng));
  return SegmentationMask(w, h, std::move(labels));
}

inline ImageRaster RandomImage(std::mt19937_64& rng, int w, int h, int levels = 256) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  const int step = levels > 1 ? 255 / (levels - 1) : 0;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : rgb) v = static_cast<std::uint8_t>(d(rng) * step);
  return ImageRaster(w, h, std::move(rgb));
}

inline RegionSelection RandomSelection(std::mt19937_64& rng, int w, int h, double p = 0.5) {
  std::bernoulli_distribution d(p);
  RegionSelection sel(w, h);
  for (std::size_t i = 0; i < sel.pixel_count(); ++i) sel.set(i, d(rng));
  return sel;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("segloop-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace segloop::testing

#endif  // SEGLOOP_TESTS_TEST_UTIL_H_
