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

#ifndef SEGLOOP_STORE_H_
#define SEGLOOP_STORE_H_

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "segloop/eval.h"
#include "segloop/manifest.h"
#include "segloop/propagation.h"
#include "segloop/raster.h"
#include "segloop/records.h"

namespace segloop {

struct FaceKey {
  std::string site_id;
  Face face = Face::kFlat;

  friend auto operator<=>(const FaceKey&, const FaceKey&) = default;
  friend bool operator==(const FaceKey&, const FaceKey&) = default;
};

std::string FaceKeyName(const FaceKey& key);

enum class ReviewState { kPending, kAccepted, kRejected };

std::string_view ReviewStateName(ReviewState state);

struct ReviewEntry {
  std::string item_id;  // equals the proposed record id
  FamilySims sims;
  double combined = 0.0;
  int corroboration = 0;
  CorrectionRecord proposed;
  ReviewState state = ReviewState::kPending;
};

nlohmann::json ReviewEntryToJson(const ReviewEntry& entry);

struct PropagationSummary {
  std::vector<CorrectionRecord> auto_applied;
  std::vector<ReviewEntry> queued;
  std::size_t duplicates_skipped = 0;
};

// On-disk session store:
//   manifest.json          dataset manifest (splits and hashes)
//   images/                face images, paths as listed in the manifest
//   predictions/S/F.bin    base prediction each mask replay starts from
//   predictions/S/F.segl   logits behind the prediction, when known
//   labels/S/F.bin         training labels
//   gt/S/F.bin             ground truth for evaluation
//   masks/S/F/             current.bin, current.png, seg_vis.png, versions/N.bin
//   records.log            append-only JSONL event log
//   index/index.segx       propagation index
//   checkpoints/           backbone checkpoints
//
// records.log is the only source of truth: each face mask is its base
// prediction with every active (not undone) correction for that face applied
// in log order, and the mask files are caches of that replay. Not
// synchronised; callers serialise mutations.
class Store {
 public:
  // Writes the directory layout and manifest. Throws kBadStore if root
  // already holds a manifest.
  static Store Create(const std::filesystem::path& root, const DatasetManifest& manifest);
  // Replays records.log (a torn final line is dropped and truncated away) and
  // rewrites any mask cache that disagrees with the replay. Throws kBadStore.
  static Store Open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const DatasetManifest& manifest() const { return manifest_; }
  // Replaces the manifest; only allowed while the log is empty.
  void SetManifest(DatasetManifest manifest);

  std::filesystem::path ImagePath(const FaceKey& key) const;
  std::filesystem::path PredictionPath(const FaceKey& key) const;
  std::filesystem::path LogitsPath(const FaceKey& key) const;
  std::filesystem::path LabelsPath(const FaceKey& key) const;
  std::filesystem::path GtPath(const FaceKey& key) const;
  std::filesystem::path FailuresPath(const FaceKey& key) const;
  std::filesystem::path MaskDir(const FaceKey& key) const;
  std::filesystem::path VersionPath(const FaceKey& key, int version) const;
  std::filesystem::path IndexPath() const { return root_ / "index" / "index.segx"; }
  std::filesystem::path CheckpointPath(const std::string& name) const { return root_ / "checkpoints" / (name + ".segw"); }
  std::filesystem::path RecordsPath() const { return root_ / "records.log"; }

  // Every (site, face) of the manifest, in manifest order.
  std::vector<FaceKey> Faces() const;
  bool Has(const FaceKey& key) const;
  Split SplitOf(const std::string& site_id) const;

  ImageRaster LoadImage(const FaceKey& key) const;
  std::vector<std::uint8_t> LoadImageBytes(const FaceKey& key) const;
  std::optional<SegmentationMask> LoadMask(const std::filesystem::path& path) const;
  SegmentationMask BaseMask(const FaceKey& key) const;

  const SegmentationMask& CurrentMask(const FaceKey& key) const;
  int MaskVersion(const FaceKey& key) const;

  // Each mutation appends exactly one event to records.log before updating
  // state and caches.
  CorrectionRecord ApplyHuman(const FaceKey& key, const RegionSelection& selection, int corrected_class,
                              InterventionType type, const HumanProvenance& provenance);
  // Throws kNotFound, kNothingToUndo when the record is not active.
  void Undo(const std::string& record_id);
  // Throws kNotFound, kNotHumanProvenance, kLeakageViolation (source outside
  // the train split). Proposals already applied, queued or decided are skipped.
  PropagationSummary Propagate(const std::string& record_id, const PropagationIndex& index,
                               const PropagationParams& params);
  // Throws kNotFound, kAlreadyDecided.
  ReviewEntry Decide(const std::string& item_id, bool accept);

  const CorrectionRecord* FindRecord(const std::string& record_id) const;
  bool IsActive(const std::string& record_id) const;
  std::vector<CorrectionRecord> ActiveRecords() const;
  std::vector<ReviewEntry> ReviewItems(bool pending_only) const;
  std::size_t EventCount() const { return state_.events; }
  SessionLog BuildSessionLog() const;

  // Every mask version of every face, rebuilt from records.log on disk.
  std::map<FaceKey, std::vector<SegmentationMask>> ReplayVersions() const;
  // Rewrites every mask cache from the in-memory state.
  void WriteAllCaches() const;

  // Loads index/index.segx when it matches the manifest and params, else
  // builds it from the train-split images and saves it. Throws
  // kLeakageViolation when a stored index fails the leakage check.
  PropagationIndex LoadOrBuildIndex(const IndexBuildParams& params) const;

 private:
  struct State {
    std::map<std::string, CorrectionRecord> records;
    std::vector<std::string> order;  // record ids in log order
    std::set<std::string> undone;
    std::map<std::string, ReviewEntry> reviews;
    std::vector<std::string> review_order;
    std::map<FaceKey, SegmentationMask> base;
    std::map<FaceKey, SegmentationMask> masks;
    std::map<FaceKey, int> versions;
    std::size_t events = 0;
    std::int64_t last_ts = 0;
  };

  Store(std::filesystem::path root, DatasetManifest manifest);

  void LoadBaseMasks(State& state) const;
  // Applies one log event; history, when given, receives every new mask version.
  void ApplyEvent(State& state, const nlohmann::json& event,
                  std::map<FaceKey, std::vector<SegmentationMask>>* history) const;
  void RebuildFace(State& state, const FaceKey& key) const;
  void Commit(nlohmann::json event, const std::set<FaceKey>& touched);
  std::int64_t NextTimestamp() const;
  std::vector<nlohmann::json> ReadLog(bool repair) const;
  void WriteCaches(const FaceKey& key, const SegmentationMask& mask, int version) const;

  std::filesystem::path root_;
  DatasetManifest manifest_;
  State state_;
};

}  // namespace segloop

#endif  // SEGLOOP_STORE_H_
