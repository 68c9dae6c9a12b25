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

#ifndef SEGLOOP_EVAL_H_
#define SEGLOOP_EVAL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segloop/manifest.h"
#include "segloop/raster.h"

namespace segloop {

// Rows are ground truth, columns are predictions.
struct ConfusionMatrix {
  std::array<std::uint64_t, kNumClasses * kNumClasses> counts{};

  std::uint64_t at(int gt, int pred) const { return counts[gt * kNumClasses + pred]; }
  std::uint64_t& at(int gt, int pred) { return counts[gt * kNumClasses + pred]; }
  std::uint64_t total() const;
  void Add(const ConfusionMatrix& other);
};

// Counts over pixels not in ignore.
ConfusionMatrix ComputeConfusion(const SegmentationMask& pred, const SegmentationMask& gt,
                                 const RegionSelection* ignore = nullptr);

struct IouResult {
  std::array<std::optional<double>, kNumClasses> per_class;  // absent for zero-union classes
  double mean = 0.0;
};

// IoU_c = TP / (TP + FP + FN); zero-union classes are left out of the mean.
// Throws kEmptyMatrix.
IouResult MeanIou(const ConfusionMatrix& cm);

// X minus its erosion by a (2d+1)^2 square, pixels outside the frame counting
// as background.
RegionSelection BoundaryBand(const RegionSelection& x, int d);

// IoU of the class-c boundary bands; absent when both bands are empty.
std::optional<double> BoundaryIou(const SegmentationMask& pred, const SegmentationMask& gt, ClassId c, int d = 2);

enum class EventKind { kCorrectionApplied, kPropagationRun, kReviewDecision };

// How a correction record came to be applied.
enum class RecordOrigin { kHuman, kAuto, kConfirmed };

std::string_view RecordOriginName(RecordOrigin origin);

struct SessionEvent {
  EventKind kind = EventKind::kCorrectionApplied;
  std::int64_t timestamp_ms = 0;
  // correction_applied
  std::string record_id;
  RecordOrigin origin = RecordOrigin::kHuman;
  std::string site_id;
  Face face = Face::kFlat;
  int interactions = 0;
  double elapsed_s = 0.0;
  // propagation_run
  int auto_count = 0;
  int review_count = 0;
  // review_decision
  std::string item_id;
  bool accepted = false;
};

// Append-only event list with nondecreasing timestamps and unique record ids.
class SessionLog {
 public:
  // Throws kInvalidArgument on a timestamp going backwards or a repeated record id.
  void Append(SessionEvent event);
  const std::vector<SessionEvent>& events() const { return events_; }

  std::string ToJsonl() const;
  static SessionLog FromJsonl(std::string_view text);

 private:
  std::vector<SessionEvent> events_;
};

// Auto-applied records over all applied records. Throws kEmptyLog.
double PropagationGain(const SessionLog& log);

struct EffortStats {
  double mean_seconds_per_image = 0.0;
  double mean_interactions_per_image = 0.0;
  std::size_t images = 0;
  std::size_t human_records = 0;
};

// Means over images of the summed effort of their human records. Throws kEmptyLog.
EffortStats ComputeEffortStats(const SessionLog& log);

// Text table and CSV of the same metrics.
struct MetricsRow {
  std::string label;
  IouResult iou;
  std::optional<double> boundary_iou;
};

std::string MetricsTable(const std::vector<MetricsRow>& rows);
std::string MetricsCsv(const std::vector<MetricsRow>& rows);

}  // namespace segloop

#endif  // SEGLOOP_EVAL_H_
