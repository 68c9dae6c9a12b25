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

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "segloop/error.h"
#include "segloop/eval.h"

namespace segloop {
namespace {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCorrectionApplied:
      return "correction_applied";
    case EventKind::kPropagationRun:
      return "propagation_run";
    case EventKind::kReviewDecision:
      return "review_decision";
  }
  return "unknown";
}

EventKind EventKindFromName(std::string_view name) {
  if (name == "correction_applied") return EventKind::kCorrectionApplied;
  if (name == "propagation_run") return EventKind::kPropagationRun;
  if (name == "review_decision") return EventKind::kReviewDecision;
  throw Error(ErrorCode::kBadFormat, "unknown session event '" + std::string(name) + "'");
}

RecordOrigin RecordOriginFromName(std::string_view name) {
  if (name == "human") return RecordOrigin::kHuman;
  if (name == "auto") return RecordOrigin::kAuto;
  if (name == "confirmed") return RecordOrigin::kConfirmed;
  throw Error(ErrorCode::kBadFormat, "unknown record origin '" + std::string(name) + "'");
}

}  // namespace

std::string_view RecordOriginName(RecordOrigin origin) {
  switch (origin) {
    case RecordOrigin::kHuman:
      return "human";
    case RecordOrigin::kAuto:
      return "auto";
    case RecordOrigin::kConfirmed:
      return "confirmed";
  }
  return "unknown";
}

void SessionLog::Append(SessionEvent event) {
  if (!events_.empty() && event.timestamp_ms < events_.back().timestamp_ms) {
    throw Error(ErrorCode::kInvalidArgument, "session event timestamp goes backwards");
  }
  if (event.kind == EventKind::kCorrectionApplied) {
    for (const auto& e : events_) {
      if (e.kind == EventKind::kCorrectionApplied && e.record_id == event.record_id) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate record id " + event.record_id);
      }
    }
  }
  events_.push_back(std::move(event));
}

std::string SessionLog::ToJsonl() const {
  std::string out;
  for (const auto& e : events_) {
    nlohmann::json j;
    j["event"] = EventKindName(e.kind);
    j["timestamp_ms"] = e.timestamp_ms;
    switch (e.kind) {
      case EventKind::kCorrectionApplied:
        j["record_id"] = e.record_id;
        j["provenance"] = RecordOriginName(e.origin);
        j["site_id"] = e.site_id;
        j["face"] = FaceName(e.face);
        j["interactions"] = e.interactions;
        j["elapsed_s"] = e.elapsed_s;
        break;
      case EventKind::kPropagationRun:
        j["record_id"] = e.record_id;
        j["auto_count"] = e.auto_count;
        j["review_count"] = e.review_count;
        break;
      case EventKind::kReviewDecision:
        j["item_id"] = e.item_id;
        j["decision"] = e.accepted ? "accept" : "reject";
        break;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

SessionLog SessionLog::FromJsonl(std::string_view text) {
  SessionLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBadFormat, std::string("session log: ") + e.what());
    }
    SessionEvent e;
    e.kind = EventKindFromName(j.at("event").get<std::string>());
    e.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
    switch (e.kind) {
      case EventKind::kCorrectionApplied:
        e.record_id = j.at("record_id").get<std::string>();
        e.origin = RecordOriginFromName(j.at("provenance").get<std::string>());
        e.site_id = j.at("site_id").get<std::string>();
        e.face = FaceFromName(j.at("face").get<std::string>());
        e.interactions = j.at("interactions").get<int>();
        e.elapsed_s = j.at("elapsed_s").get<double>();
        break;
      case EventKind::kPropagationRun:
        e.record_id = j.at("record_id").get<std::string>();
        e.auto_count = j.at("auto_count").get<int>();
        e.review_count = j.at("review_count").get<int>();
        break;
      case EventKind::kReviewDecision:
        e.item_id = j.at("item_id").get<std::string>();
        e.accepted = j.at("decision").get<std::string>() == "accept";
        break;
    }
    log.Append(std::move(e));
  }
  return log;
}

double PropagationGain(const SessionLog& log) {
  std::size_t total = 0;
  std::size_t automatic = 0;
  for (const auto& e : log.events()) {
    if (e.kind != EventKind::kCorrectionApplied) continue;
    ++total;
    if (e.origin == RecordOrigin::kAuto) ++automatic;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyLog, "no correction events");
  return static_cast<double>(automatic) / static_cast<double>(total);
}

EffortStats ComputeEffortStats(const SessionLog& log) {
  struct Sum {
    double seconds = 0.0;
    double interactions = 0.0;
  };
  std::map<std::pair<std::string, Face>, Sum> per_image;
  EffortStats stats;
  for (const auto& e : log.events()) {
    if (e.kind != EventKind::kCorrectionApplied || e.origin != RecordOrigin::kHuman) continue;
    auto& s = per_image[{e.site_id, e.face}];
    s.seconds += e.elapsed_s;
    s.interactions += e.interactions;
    ++stats.human_records;
  }
  if (per_image.empty()) throw Error(ErrorCode::kEmptyLog, "no human correction events");
  for (const auto& [key, s] : per_image) {
    stats.mean_seconds_per_image += s.seconds;
    stats.mean_interactions_per_image += s.interactions;
  }
  stats.images = per_image.size();
  stats.mean_seconds_per_image /= static_cast<double>(stats.images);
  stats.mean_interactions_per_image /= static_cast<double>(stats.images);
  return stats;
}

}  // namespace segloop
