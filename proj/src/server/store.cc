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

#include "segloop/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <system_error>

#include "segloop/error.h"
#include "segloop/file_util.h"
#include "segloop/mask_io.h"
#include "segloop/png_codec.h"
#include "segloop/region.h"

namespace segloop {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFile = "manifest.json";

json ReviewItemJson(const ReviewEntry& e) {
  return {{"item_id", e.item_id},
          {"sims", FamilySimsToJson(e.sims)},
          {"combined", e.combined},
          {"corroboration", e.corroboration},
          {"record", RecordToJson(e.proposed)}};
}

ReviewEntry ReviewItemFromJson(const json& j) {
  ReviewEntry e;
  e.item_id = j.at("item_id").get<std::string>();
  e.sims = FamilySimsFromJson(j.at("sims"));
  e.combined = j.at("combined").get<double>();
  e.corroboration = j.at("corroboration").get<int>();
  e.proposed = RecordFromJson(j.at("record"));
  return e;
}

void AppendLine(const fs::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error(ErrorCode::kIo, "write failed on " + path.string());
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

FaceKey KeyOf(const CorrectionRecord& r) { return {r.site_id, r.face}; }

}  // namespace

std::string FaceKeyName(const FaceKey& key) { return key.site_id + "/" + std::string(FaceName(key.face)); }

std::string_view ReviewStateName(ReviewState state) {
  switch (state) {
    case ReviewState::kPending:
      return "pending";
    case ReviewState::kAccepted:
      return "accepted";
    case ReviewState::kRejected:
      return "rejected";
  }
  return "pending";
}

json ReviewEntryToJson(const ReviewEntry& entry) {
  json j = ReviewItemJson(entry);
  j["state"] = ReviewStateName(entry.state);
  j["proposed_class"] = entry.proposed.corrected_class;
  j["source_record"] = std::get<PropagatedProvenance>(entry.proposed.provenance).source_record;
  j["site_id"] = entry.proposed.site_id;
  j["face"] = FaceName(entry.proposed.face);
  return j;
}

Store::Store(fs::path root, DatasetManifest manifest) : root_(std::move(root)), manifest_(std::move(manifest)) {}

Store Store::Create(const fs::path& root, const DatasetManifest& manifest) {
  if (fs::exists(root / kManifestFile)) throw Error(ErrorCode::kBadStore, root.string() + " already holds a store");
  for (const char* dir : {"images", "predictions", "labels", "gt", "masks", "index", "checkpoints", "failures"}) {
    fs::create_directories(root / dir);
  }
  WriteFileAtomic(root / kManifestFile, ManifestToJson(manifest));
  if (!fs::exists(root / "records.log")) AppendLine(root / "records.log", "");
  return Open(root);
}

Store Store::Open(const fs::path& root) {
  if (!fs::exists(root / kManifestFile)) throw Error(ErrorCode::kBadStore, "no manifest.json under " + root.string());
  DatasetManifest manifest;
  try {
    manifest = ManifestFromJson(ReadFileText(root / kManifestFile));
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadStore, std::string("manifest: ") + e.what());
  }
  Store store(root, std::move(manifest));
  store.LoadBaseMasks(store.state_);
  std::map<FaceKey, std::vector<SegmentationMask>> history;
  for (const auto& [key, mask] : store.state_.base) history[key].push_back(mask);
  for (const json& event : store.ReadLog(true)) store.ApplyEvent(store.state_, event, &history);

  // Repair caches that disagree with the replay.
  for (const auto& [key, versions] : history) {
    for (std::size_t v = 0; v < versions.size(); ++v) {
      const auto bytes = EncodeBin(versions[v]);
      const fs::path path = store.VersionPath(key, static_cast<int>(v));
      if (!fs::exists(path) || ReadFileBytes(path) != bytes) WriteFileAtomic(path, bytes);
    }
    const auto current = EncodeBin(store.state_.masks.at(key));
    const fs::path cur = store.MaskDir(key) / "current.bin";
    if (!fs::exists(cur) || ReadFileBytes(cur) != current || !fs::exists(store.MaskDir(key) / "current.png") ||
        !fs::exists(store.MaskDir(key) / "seg_vis.png")) {
      store.WriteCaches(key, store.state_.masks.at(key), store.state_.versions.at(key));
    }
  }
  return store;
}

void Store::SetManifest(DatasetManifest manifest) {
  if (state_.events != 0) throw Error(ErrorCode::kBadStore, "manifest is frozen once records exist");
  manifest_ = std::move(manifest);
  WriteFileAtomic(root_ / kManifestFile, ManifestToJson(manifest_));
  state_ = State{};
  LoadBaseMasks(state_);
}

fs::path Store::ImagePath(const FaceKey& key) const {
  const SiteEntry* site = manifest_.FindSite(key.site_id);
  if (site == nullptr || !site->faces.contains(key.face)) throw Error(ErrorCode::kNotFound, FaceKeyName(key));
  return root_ / site->faces.at(key.face);
}

fs::path Store::PredictionPath(const FaceKey& key) const {
  return root_ / "predictions" / key.site_id / (std::string(FaceName(key.face)) + ".bin");
}
fs::path Store::LogitsPath(const FaceKey& key) const {
  return root_ / "predictions" / key.site_id / (std::string(FaceName(key.face)) + ".segl");
}
fs::path Store::LabelsPath(const FaceKey& key) const {
  return root_ / "labels" / key.site_id / (std::string(FaceName(key.face)) + ".bin");
}
fs::path Store::GtPath(const FaceKey& key) const {
  return root_ / "gt" / key.site_id / (std::string(FaceName(key.face)) + ".bin");
}
fs::path Store::FailuresPath(const FaceKey& key) const {
  return root_ / "failures" / key.site_id / (std::string(FaceName(key.face)) + ".segf");
}
fs::path Store::MaskDir(const FaceKey& key) const {
  return root_ / "masks" / key.site_id / std::string(FaceName(key.face));
}
fs::path Store::VersionPath(const FaceKey& key, int version) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%06d.bin", version);
  return MaskDir(key) / "versions" / name;
}

std::vector<FaceKey> Store::Faces() const {
  std::vector<FaceKey> out;
  for (const auto& site : manifest_.sites) {
    for (const auto& [face, path] : site.faces) out.push_back({site.site_id, face});
  }
  return out;
}

bool Store::Has(const FaceKey& key) const {
  const SiteEntry* site = manifest_.FindSite(key.site_id);
  return site != nullptr && site->faces.contains(key.face);
}

Split Store::SplitOf(const std::string& site_id) const {
  const SiteEntry* site = manifest_.FindSite(site_id);
  if (site == nullptr) throw Error(ErrorCode::kNotFound, "site " + site_id);
  return site->split;
}

ImageRaster Store::LoadImage(const FaceKey& key) const { return DecodePngRgb(LoadImageBytes(key)); }

std::vector<std::uint8_t> Store::LoadImageBytes(const FaceKey& key) const { return ReadFileBytes(ImagePath(key)); }

std::optional<SegmentationMask> Store::LoadMask(const fs::path& path) const {
  if (!fs::exists(path)) return std::nullopt;
  return DecodeBin(ReadFileBytes(path));
}

SegmentationMask Store::BaseMask(const FaceKey& key) const {
  if (auto m = LoadMask(PredictionPath(key))) return *m;
  const ImageRaster image = LoadImage(key);
  return SegmentationMask(image.width(), image.height());
}

void Store::LoadBaseMasks(State& state) const {
  for (const FaceKey& key : Faces()) {
    if (!fs::exists(PredictionPath(key)) && !fs::exists(ImagePath(key))) continue;
    state.base[key] = BaseMask(key);
    state.masks[key] = state.base[key];
    state.versions[key] = 0;
  }
}

const SegmentationMask& Store::CurrentMask(const FaceKey& key) const {
  auto it = state_.masks.find(key);
  if (it == state_.masks.end()) throw Error(ErrorCode::kNotFound, "no mask for " + FaceKeyName(key));
  return it->second;
}

int Store::MaskVersion(const FaceKey& key) const {
  auto it = state_.versions.find(key);
  if (it == state_.versions.end()) throw Error(ErrorCode::kNotFound, "no mask for " + FaceKeyName(key));
  return it->second;
}

std::vector<json> Store::ReadLog(bool repair) const {
  std::vector<json> out;
  const fs::path path = RecordsPath();
  if (!fs::exists(path)) return out;
  const std::string text = ReadFileText(path);
  const std::size_t complete = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
  if (complete < text.size() && repair) fs::resize_file(path, complete);
  std::size_t start = 0;
  while (start < complete) {
    const std::size_t end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBadStore, std::string("records.log: ") + e.what());
    }
  }
  return out;
}

void Store::RebuildFace(State& state, const FaceKey& key) const {
  SegmentationMask mask = state.base.at(key);
  for (const auto& id : state.order) {
    if (state.undone.contains(id)) continue;
    const CorrectionRecord& r = state.records.at(id);
    if (KeyOf(r) != key) continue;
    for (std::size_t i : r.region.Members()) mask.set(i, r.corrected_class);
  }
  state.masks[key] = std::move(mask);
}

void Store::ApplyEvent(State& state, const json& event,
                       std::map<FaceKey, std::vector<SegmentationMask>>* history) const {
  auto apply = [&](CorrectionRecord r) {
    const FaceKey key = KeyOf(r);
    auto it = state.masks.find(key);
    if (it == state.masks.end()) throw Error(ErrorCode::kBadStore, "record " + r.record_id + " targets unknown face");
    if (state.records.contains(r.record_id)) throw Error(ErrorCode::kBadStore, "duplicate record " + r.record_id);
    CheckSameSize(it->second.width(), it->second.height(), r.region.width(), r.region.height(), "replay");
    for (std::size_t i : r.region.Members()) it->second.set(i, r.corrected_class);
    ++state.versions[key];
    if (history != nullptr) (*history)[key].push_back(it->second);
    state.order.push_back(r.record_id);
    state.records.emplace(r.record_id, std::move(r));
  };
  try {
    const std::string kind = event.at("event").get<std::string>();
    if (kind == "correction") {
      apply(RecordFromJson(event.at("record")));
    } else if (kind == "undo") {
      const std::string id = event.at("record_id").get<std::string>();
      auto it = state.records.find(id);
      if (it == state.records.end()) throw Error(ErrorCode::kBadStore, "undo of unknown record " + id);
      state.undone.insert(id);
      const FaceKey key = KeyOf(it->second);
      RebuildFace(state, key);
      ++state.versions[key];
      if (history != nullptr) (*history)[key].push_back(state.masks.at(key));
    } else if (kind == "propagation") {
      for (const json& r : event.at("auto")) apply(RecordFromJson(r));
      for (const json& item : event.at("review")) {
        ReviewEntry e = ReviewItemFromJson(item);
        state.review_order.push_back(e.item_id);
        state.reviews[e.item_id] = std::move(e);
      }
    } else if (kind == "review") {
      const std::string id = event.at("item_id").get<std::string>();
      auto it = state.reviews.find(id);
      if (it == state.reviews.end()) throw Error(ErrorCode::kBadStore, "decision on unknown item " + id);
      const bool accept = event.at("decision").get<std::string>() == "accept";
      it->second.state = accept ? ReviewState::kAccepted : ReviewState::kRejected;
      if (accept) apply(RecordFromJson(event.at("record")));
    } else {
      throw Error(ErrorCode::kBadStore, "unknown event " + kind);
    }
    state.last_ts = std::max(state.last_ts, event.value("ts", std::int64_t{0}));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadStore, std::string("records.log: ") + e.what());
  }
  ++state.events;
}

std::int64_t Store::NextTimestamp() const { return std::max(NowMillis(), state_.last_ts); }

void Store::Commit(json event, const std::set<FaceKey>& touched) {
  AppendLine(RecordsPath(), event.dump() + "\n");
  ApplyEvent(state_, event, nullptr);
  for (const FaceKey& key : touched) WriteCaches(key, state_.masks.at(key), state_.versions.at(key));
}

void Store::WriteCaches(const FaceKey& key, const SegmentationMask& mask, int version) const {
  const fs::path dir = MaskDir(key);
  fs::create_directories(dir / "versions");
  const auto bin = EncodeBin(mask);
  WriteFileAtomic(VersionPath(key, version), bin);
  WriteFileAtomic(dir / "current.png", EncodeIndexedPng(mask));
  WriteFileAtomic(dir / "seg_vis.png", EncodePngRgb(Colorize(mask)));
  // current.bin last: its presence marks the set complete.
  WriteFileAtomic(dir / "current.bin", bin);
}

void Store::WriteAllCaches() const {
  for (const auto& [key, mask] : state_.masks) WriteCaches(key, mask, state_.versions.at(key));
}

CorrectionRecord Store::ApplyHuman(const FaceKey& key, const RegionSelection& selection, int corrected_class,
                                   InterventionType type, const HumanProvenance& provenance) {
  const SegmentationMask& mask = CurrentMask(key);
  char id[32];
  std::snprintf(id, sizeof(id), "h%06zu", state_.events + 1);
  const CorrectionContext ctx{id, key.site_id, key.face, NextTimestamp()};
  AppliedCorrection applied = ApplyCorrection(mask, selection, corrected_class, type, provenance, ctx);
  json event = {{"event", "correction"}, {"ts", ctx.created_at_ms}, {"record", RecordToJson(applied.record)}};
  Commit(std::move(event), {key});
  return applied.record;
}

void Store::Undo(const std::string& record_id) {
  auto it = state_.records.find(record_id);
  if (it == state_.records.end()) throw Error(ErrorCode::kNotFound, "record " + record_id);
  if (state_.undone.contains(record_id)) throw Error(ErrorCode::kNothingToUndo, "record " + record_id + " already undone");
  json event = {{"event", "undo"}, {"ts", NextTimestamp()}, {"record_id", record_id}};
  Commit(std::move(event), {KeyOf(it->second)});
}

PropagationSummary Store::Propagate(const std::string& record_id, const PropagationIndex& index,
                                    const PropagationParams& params) {
  const CorrectionRecord* source = FindRecord(record_id);
  if (source == nullptr || !IsActive(record_id)) throw Error(ErrorCode::kNotFound, "active record " + record_id);
  if (!source->IsHuman()) throw Error(ErrorCode::kNotHumanProvenance, "record " + record_id + " was propagated");
  if (SplitOf(source->site_id) != Split::kTrain) {
    throw Error(ErrorCode::kLeakageViolation, "record " + record_id + " lies outside the train split");
  }
  const PropagationOutcome outcome = segloop::Propagate(*source, LoadImage(KeyOf(*source)), index, params);

  PropagationSummary summary;
  const std::int64_t ts = NextTimestamp();
  std::map<FaceKey, SegmentationMask> scratch;
  std::set<FaceKey> touched;
  auto known = [&](const std::string& id) { return state_.records.contains(id) || state_.reviews.contains(id); };
  json autos = json::array();
  for (std::size_t k = 0; k < outcome.auto_applied.size(); ++k) {
    const CorrectionRecord& proposed = outcome.auto_applied[k];
    if (known(proposed.record_id)) {
      ++summary.duplicates_skipped;
      continue;
    }
    const FaceKey key = KeyOf(proposed);
    if (SplitOf(key.site_id) != Split::kTrain) {
      throw Error(ErrorCode::kLeakageViolation, "index candidate in " + FaceKeyName(key) + " is not train split");
    }
    if (!scratch.contains(key)) scratch[key] = CurrentMask(key);
    const CorrectionContext ctx{proposed.record_id, key.site_id, key.face, ts};
    AppliedCorrection applied = ApplyCorrection(scratch[key], proposed.region, proposed.corrected_class,
                                                proposed.intervention_type, proposed.provenance, ctx);
    scratch[key] = applied.mask;
    touched.insert(key);
    autos.push_back(RecordToJson(applied.record));
    summary.auto_applied.push_back(std::move(applied.record));
  }
  json reviews = json::array();
  for (const ReviewItem& item : outcome.review_queue) {
    if (known(item.proposed.record_id)) {
      ++summary.duplicates_skipped;
      continue;
    }
    ReviewEntry e{item.proposed.record_id, item.match.sims, item.match.combined, item.match.corroboration,
                  item.proposed, ReviewState::kPending};
    e.proposed.created_at_ms = ts;
    reviews.push_back(ReviewItemJson(e));
    summary.queued.push_back(std::move(e));
  }
  json event = {{"event", "propagation"}, {"ts", ts}, {"source", record_id}, {"auto", autos}, {"review", reviews}};
  Commit(std::move(event), touched);
  return summary;
}

ReviewEntry Store::Decide(const std::string& item_id, bool accept) {
  auto it = state_.reviews.find(item_id);
  if (it == state_.reviews.end()) throw Error(ErrorCode::kNotFound, "review item " + item_id);
  if (it->second.state != ReviewState::kPending) {
    throw Error(ErrorCode::kAlreadyDecided, "review item " + item_id + " is " +
                                                std::string(ReviewStateName(it->second.state)));
  }
  const std::int64_t ts = NextTimestamp();
  json event = {{"event", "review"}, {"ts", ts}, {"item_id", item_id}, {"decision", accept ? "accept" : "reject"}};
  std::set<FaceKey> touched;
  if (accept) {
    CorrectionRecord proposed = it->second.proposed;
    std::get<PropagatedProvenance>(proposed.provenance).confirmed = true;
    const FaceKey key = KeyOf(proposed);
    const CorrectionContext ctx{proposed.record_id, key.site_id, key.face, ts};
    AppliedCorrection applied = ApplyCorrection(CurrentMask(key), proposed.region, proposed.corrected_class,
                                                proposed.intervention_type, proposed.provenance, ctx);
    event["record"] = RecordToJson(applied.record);
    touched.insert(key);
  }
  Commit(std::move(event), touched);
  return state_.reviews.at(item_id);
}

const CorrectionRecord* Store::FindRecord(const std::string& record_id) const {
  auto it = state_.records.find(record_id);
  return it == state_.records.end() ? nullptr : &it->second;
}

bool Store::IsActive(const std::string& record_id) const {
  return state_.records.contains(record_id) && !state_.undone.contains(record_id);
}

std::vector<CorrectionRecord> Store::ActiveRecords() const {
  std::vector<CorrectionRecord> out;
  for (const auto& id : state_.order) {
    if (!state_.undone.contains(id)) out.push_back(state_.records.at(id));
  }
  return out;
}

std::vector<ReviewEntry> Store::ReviewItems(bool pending_only) const {
  std::vector<ReviewEntry> out;
  for (const auto& id : state_.review_order) {
    const ReviewEntry& e = state_.reviews.at(id);
    if (!pending_only || e.state == ReviewState::kPending) out.push_back(e);
  }
  return out;
}

SessionLog Store::BuildSessionLog() const {
  SessionLog log;
  auto applied = [&](const json& rj, std::int64_t ts, RecordOrigin origin) {
    const CorrectionRecord r = RecordFromJson(rj);
    SessionEvent e;
    e.kind = EventKind::kCorrectionApplied;
    e.timestamp_ms = ts;
    e.record_id = r.record_id;
    e.origin = origin;
    e.site_id = r.site_id;
    e.face = r.face;
    if (const auto* h = std::get_if<HumanProvenance>(&r.provenance)) {
      e.interactions = h->interactions;
      e.elapsed_s = h->elapsed_s;
    }
    log.Append(std::move(e));
  };
  for (const json& event : ReadLog(false)) {
    const std::string kind = event.at("event").get<std::string>();
    const std::int64_t ts = event.value("ts", std::int64_t{0});
    if (kind == "correction") {
      applied(event.at("record"), ts, RecordOrigin::kHuman);
    } else if (kind == "propagation") {
      SessionEvent e;
      e.kind = EventKind::kPropagationRun;
      e.timestamp_ms = ts;
      e.record_id = event.at("source").get<std::string>();
      e.auto_count = static_cast<int>(event.at("auto").size());
      e.review_count = static_cast<int>(event.at("review").size());
      log.Append(std::move(e));
      for (const json& r : event.at("auto")) applied(r, ts, RecordOrigin::kAuto);
    } else if (kind == "review") {
      SessionEvent e;
      e.kind = EventKind::kReviewDecision;
      e.timestamp_ms = ts;
      e.item_id = event.at("item_id").get<std::string>();
      e.accepted = event.at("decision").get<std::string>() == "accept";
      const bool accepted = e.accepted;
      log.Append(std::move(e));
      if (accepted) applied(event.at("record"), ts, RecordOrigin::kConfirmed);
    }
  }
  return log;
}

std::map<FaceKey, std::vector<SegmentationMask>> Store::ReplayVersions() const {
  State state;
  LoadBaseMasks(state);
  std::map<FaceKey, std::vector<SegmentationMask>> history;
  for (const auto& [key, mask] : state.base) history[key].push_back(mask);
  for (const json& event : ReadLog(false)) ApplyEvent(state, event, &history);
  return history;
}

PropagationIndex Store::LoadOrBuildIndex(const IndexBuildParams& params) const {
  const Digest manifest_digest = ManifestDigest(manifest_);
  if (fs::exists(IndexPath())) {
    PropagationIndex index = DecodeIndex(ReadFileBytes(IndexPath()));
    if (index.manifest_digest == manifest_digest && index.params == params) {
      const auto findings = VerifyNoLeakage(index, manifest_);
      if (!findings.empty()) {
        throw Error(ErrorCode::kLeakageViolation, "stored index holds non-train image " + DigestToHex(findings[0].hash));
      }
      return index;
    }
  }
  const auto violations = VerifyManifest(manifest_, root_);
  if (!violations.empty()) {
    throw Error(ErrorCode::kBadStore, "manifest check failed for " + violations[0].site_id + "/" +
                                          std::string(FaceName(violations[0].face)) + ": " + violations[0].detail);
  }
  std::vector<IndexSource> sources;
  for (const auto& site : manifest_.sites) {
    if (site.split != Split::kTrain) continue;
    for (const auto& [face, path] : site.faces) sources.push_back({site.site_id, face, ReadFileBytes(root_ / path)});
  }
  PropagationIndex index = BuildIndex(manifest_, sources, params);
  fs::create_directories(IndexPath().parent_path());
  WriteFileAtomic(IndexPath(), EncodeIndex(index));
  return index;
}

}  // namespace segloop
