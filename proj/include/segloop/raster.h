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

#ifndef SEGLOOP_RASTER_H_
#define SEGLOOP_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "segloop/taxonomy.h"

namespace segloop {

struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// Row-major RGB, 8 bits per channel.
class ImageRaster {
 public:
  ImageRaster() = default;
  ImageRaster(int width, int height, Rgb fill = {});
  ImageRaster(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb at(std::size_t i) const { return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]}; }
  Rgb at(int x, int y) const { return at(Index(x, y)); }
  void set(std::size_t i, Rgb c) {
    data_[3 * i] = c.r;
    data_[3 * i + 1] = c.g;
    data_[3 * i + 2] = c.b;
  }
  void set(int x, int y, Rgb c) { set(Index(x, y), c); }

  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  friend bool operator==(const ImageRaster&, const ImageRaster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Dense per-pixel class ids, every label < kNumClasses.
class SegmentationMask {
 public:
  SegmentationMask() = default;
  SegmentationMask(int width, int height, ClassId fill = 0);
  SegmentationMask(int width, int height, std::vector<ClassId> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return labels_.size(); }

  ClassId at(std::size_t i) const { return labels_[i]; }
  ClassId at(int x, int y) const { return labels_[Index(x, y)]; }
  void set(std::size_t i, ClassId c);
  void set(int x, int y, ClassId c) { set(Index(x, y), c); }

  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  const std::vector<ClassId>& labels() const { return labels_; }

  friend bool operator==(const SegmentationMask&, const SegmentationMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<ClassId> labels_;
};

// Per-pixel scores over the taxonomy, pixel-major with the class index fastest.
class LogitMap {
 public:
  LogitMap() = default;
  LogitMap(int width, int height);
  LogitMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  double at(std::size_t i, int c) const { return values_[i * kNumClasses + c]; }
  double& at(std::size_t i, int c) { return values_[i * kNumClasses + c]; }
  std::span<const double> pixel(std::size_t i) const {
    return {values_.data() + i * kNumClasses, static_cast<std::size_t>(kNumClasses)};
  }
  std::span<double> pixel(std::size_t i) {
    return {values_.data() + i * kNumClasses, static_cast<std::size_t>(kNumClasses)};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Same layout as LogitMap; each pixel is a distribution over classes.
class ProbabilityMap {
 public:
  ProbabilityMap() = default;
  ProbabilityMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  double at(std::size_t i, int c) const { return values_[i * kNumClasses + c]; }
  std::span<const double> pixel(std::size_t i) const {
    return {values_.data() + i * kNumClasses, static_cast<std::size_t>(kNumClasses)};
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// A pixel subset of a host image.
class RegionSelection {
 public:
  RegionSelection() = default;
  RegionSelection(int width, int height);
  RegionSelection(int width, int height, std::vector<std::uint8_t> membership);

  static RegionSelection Full(int width, int height);
  static RegionSelection Rect(int width, int height, int x0, int y0, int x1, int y1);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return bits_.size(); }
  bool InBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  bool contains(std::size_t i) const { return bits_[i] != 0; }
  bool contains(int x, int y) const { return InBounds(x, y) && bits_[Index(x, y)] != 0; }
  void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
  void set(int x, int y, bool on) { set(Index(x, y), on); }

  std::size_t Index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  std::size_t Count() const;
  bool Empty() const { return Count() == 0; }
  // Indices of member pixels in row-major order.
  std::vector<std::size_t> Members() const;
  bool IsSubsetOf(const RegionSelection& other) const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const RegionSelection&, const RegionSelection&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Nonnegative per-pixel score (entropy, disagreement, attribution).
class ScoreMap {
 public:
  ScoreMap() = default;
  ScoreMap(int width, int height);
  ScoreMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return values_.size(); }
  double at(std::size_t i) const { return values_[i]; }
  double& at(std::size_t i) { return values_[i]; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

void CheckSameSize(int w1, int h1, int w2, int h2, const char* what);

template <typename A, typename B>
void CheckSameSize(const A& a, const B& b, const char* what) {
  CheckSameSize(a.width(), a.height(), b.width(), b.height(), what);
}

}  // namespace segloop

#endif  // SEGLOOP_RASTER_H_
