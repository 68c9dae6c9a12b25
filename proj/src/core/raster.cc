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

#include "segloop/raster.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segloop/error.h"

namespace segloop {
namespace {

std::size_t CheckedArea(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": dimensions must be >= 1, got " +
                                                 std::to_string(width) + "x" + std::to_string(height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

void CheckSameSize(int w1, int h1, int w2, int h2, const char* what) {
  if (w1 != w2 || h1 != h2) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": " + std::to_string(w1) + "x" +
                                                   std::to_string(h1) + " vs " + std::to_string(w2) +
                                                   "x" + std::to_string(h2));
  }
}

ImageRaster::ImageRaster(int width, int height, Rgb fill)
    : width_(width), height_(height), data_(CheckedArea(width, height, "ImageRaster") * 3) {
  for (std::size_t i = 0; i < pixel_count(); ++i) set(i, fill);
}

ImageRaster::ImageRaster(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
  if (data_.size() != CheckedArea(width, height, "ImageRaster") * 3) {
    throw Error(ErrorCode::kDimensionMismatch, "ImageRaster: expected " + std::to_string(pixel_count() * 3) +
                                                   " bytes, got " + std::to_string(data_.size()));
  }
}

SegmentationMask::SegmentationMask(int width, int height, ClassId fill)
    : width_(width), height_(height), labels_(CheckedArea(width, height, "SegmentationMask"), fill) {
  if (!IsValidClass(fill)) throw Error(ErrorCode::kLabelOutOfRange, "fill label " + std::to_string(fill));
}

SegmentationMask::SegmentationMask(int width, int height, std::vector<ClassId> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (labels_.size() != CheckedArea(width, height, "SegmentationMask")) {
    throw Error(ErrorCode::kDimensionMismatch, "SegmentationMask: expected " +
                                                   std::to_string(static_cast<std::size_t>(width) * height) +
                                                   " labels, got " + std::to_string(labels_.size()));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!IsValidClass(labels_[i])) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label " + std::to_string(labels_[i]) + " at pixel " + std::to_string(i));
    }
  }
}

void SegmentationMask::set(std::size_t i, ClassId c) {
  if (!IsValidClass(c)) throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(c));
  labels_[i] = c;
}

LogitMap::LogitMap(int width, int height)
    : width_(width), height_(height), values_(CheckedArea(width, height, "LogitMap") * kNumClasses, 0.0) {}

LogitMap::LogitMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != CheckedArea(width, height, "LogitMap") * kNumClasses) {
    throw Error(ErrorCode::kDimensionMismatch, "LogitMap: wrong value count");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "LogitMap: non-finite value");
  }
}

ProbabilityMap::ProbabilityMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != CheckedArea(width, height, "ProbabilityMap") * kNumClasses) {
    throw Error(ErrorCode::kDimensionMismatch, "ProbabilityMap: wrong value count");
  }
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    double sum = 0.0;
    for (double p : pixel(i)) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "ProbabilityMap: value outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidArgument, "ProbabilityMap: pixel " + std::to_string(i) + " sums to " +
                                                   std::to_string(sum));
    }
  }
}

RegionSelection::RegionSelection(int width, int height)
    : width_(width), height_(height), bits_(CheckedArea(width, height, "RegionSelection"), 0) {}

RegionSelection::RegionSelection(int width, int height, std::vector<std::uint8_t> membership)
    : width_(width), height_(height), bits_(std::move(membership)) {
  if (bits_.size() != CheckedArea(width, height, "RegionSelection")) {
    throw Error(ErrorCode::kDimensionMismatch, "RegionSelection: wrong membership size");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

RegionSelection RegionSelection::Full(int width, int height) {
  return RegionSelection(width, height, std::vector<std::uint8_t>(CheckedArea(width, height, "Full"), 1));
}

RegionSelection RegionSelection::Rect(int width, int height, int x0, int y0, int x1, int y1) {
  RegionSelection sel(width, height);
  for (int y = std::max(0, y0); y < std::min(height, y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(width, x1); ++x) sel.set(x, y, true);
  }
  return sel;
}

std::size_t RegionSelection::Count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> RegionSelection::Members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

bool RegionSelection::IsSubsetOf(const RegionSelection& other) const {
  CheckSameSize(*this, other, "IsSubsetOf");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

ScoreMap::ScoreMap(int width, int height)
    : width_(width), height_(height), values_(CheckedArea(width, height, "ScoreMap"), 0.0) {}

ScoreMap::ScoreMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != CheckedArea(width, height, "ScoreMap")) {
    throw Error(ErrorCode::kDimensionMismatch, "ScoreMap: wrong value count");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "ScoreMap: non-finite value");
  }
  if (std::any_of(values_.begin(), values_.end(), [](double v) { return v < 0.0; })) {
    throw Error(ErrorCode::kInvalidArgument, "ScoreMap: negative score");
  }
}

}  // namespace segloop
