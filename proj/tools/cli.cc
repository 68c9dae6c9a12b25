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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "segloop/backbone.h"
#include "segloop/bias_bench.h"
#include "segloop/config.h"
#include "segloop/error.h"
#include "segloop/eval.h"
#include "segloop/failure.h"
#include "segloop/features.h"
#include "segloop/file_util.h"
#include "segloop/mask_io.h"
#include "segloop/optimizer.h"
#include "segloop/png_codec.h"
#include "segloop/probability.h"
#include "segloop/service.h"
#include "segloop/store.h"

namespace segloop {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string store = ".";
  std::uint64_t seed = 0;
  std::string config;

  PipelineConfig Config() const { return config.empty() ? PipelineConfig{} : PipelineConfig::Load(config); }
};

// Site and face of a store-relative "S/F.ext" path.
std::string RelPath(const std::string& site, Face face, const char* ext) {
  return site + "/" + std::string(FaceName(face)) + ext;
}

ToyBackboneParams LoadCheckpoint(const Store& store, const std::string& name) {
  const fs::path path = store.CheckpointPath(name);
  if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, "checkpoint " + path.string());
  return DecodeCheckpoint(ReadFileBytes(path));
}

SegmentationMask ReadMaskFile(const fs::path& path) {
  const auto bytes = ReadFileBytes(path);
  return path.extension() == ".png" ? DecodeIndexedPng(bytes) : DecodeBin(bytes);
}

std::pair<int, int> ParsePair(const std::string& text) {
  int a = 0;
  int b = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> a >> comma >> b) || comma != ',') throw Error(ErrorCode::kInvalidArgument, "expected x,y: " + text);
  return {a, b};
}

// init

void CmdInit(const Globals& g, std::ostream& out) {
  Store::Create(g.store, DatasetManifest{});
  out << "initialised " << g.store << "\n";
}

// synth-gen

void CmdSynthGen(const Globals& g, const BiasSpec& base_spec, std::ostream& out) {
  BiasSpec spec = base_spec;
  spec.seed = g.seed;
  const BiasDataset data = GenBiasedDataset(spec);
  const fs::path root = g.store;
  if (fs::exists(root / "manifest.json")) throw Error(ErrorCode::kBadStore, g.store + " already holds a store");

  auto write_image = [&](const BenchImage& img, bool labelled) {
    const std::string rel = RelPath(img.site_id, Face::kFlat, ".png");
    fs::create_directories((root / "images" / rel).parent_path());
    WriteFileAtomic(root / "images" / rel, EncodePngRgb(img.image));
    fs::create_directories((root / "gt" / rel).parent_path());
    WriteFileAtomic(root / "gt" / RelPath(img.site_id, Face::kFlat, ".bin"), EncodeBin(img.gt));
    if (labelled) {
      fs::create_directories((root / "labels" / rel).parent_path());
      WriteFileAtomic(root / "labels" / RelPath(img.site_id, Face::kFlat, ".bin"), EncodeBin(img.gt));
    }
  };
  for (const auto& img : data.train) write_image(img, true);
  for (const auto& img : data.pool) write_image(img, false);
  for (const auto& img : data.ood) write_image(img, false);

  Store store = Store::Create(root, data.manifest);
  const ToyBackboneParams base = PretrainBaseline(data, DebiasConfig::Defaults(g.seed).pretrain);
  WriteFileAtomic(store.CheckpointPath("base"), EncodeCheckpoint(base));
  WriteFileAtomic(store.CheckpointPath("current"), EncodeCheckpoint(base));

  nlohmann::json groups = nlohmann::json::array();
  for (const CloneGroup& grp : data.groups) {
    nlohmann::json clones = nlohmann::json::array();
    for (std::size_t c : grp.clones) clones.push_back(data.pool[c].site_id);
    groups.push_back({{"style", grp.style}, {"source", data.pool[grp.source].site_id}, {"clones", clones}});
  }
  WriteFileAtomic(root / "clone_groups.json", groups.dump(2));
  out << "generated " << data.train.size() << " labelled, " << data.pool.size() << " pool, " << data.ood.size()
      << " test images; " << data.CloneCount() << " clones (planted rate " << data.PlantedRate() << ")\n";
}

// ingest

void CmdIngest(const Globals& g, const std::string& dir, std::ostream& out) {
  Store store = Store::Open(g.store);
  if (store.EventCount() != 0) throw Error(ErrorCode::kBadStore, "cannot ingest into a store with records");
  std::map<std::string, std::map<Face, std::string>> found;
  for (const auto& site_dir : fs::directory_iterator(dir)) {
    if (!site_dir.is_directory()) continue;
    for (const auto& file : fs::directory_iterator(site_dir.path())) {
      if (file.path().extension() != ".png") continue;
      const Face face = FaceFromName(file.path().stem().string());
      const std::string site = site_dir.path().filename().string();
      const std::string rel = "images/" + RelPath(site, face, ".png");
      fs::create_directories((store.root() / rel).parent_path());
      fs::copy_file(file.path(), store.root() / rel, fs::copy_options::overwrite_existing);
      found[site][face] = rel;
    }
  }
  if (found.empty()) throw Error(ErrorCode::kNotFound, "no <site>/<face>.png images under " + dir);
  std::vector<std::string> ids;
  for (const auto& [site, faces] : found) ids.push_back(site);
  DatasetManifest manifest = SplitSites(ids, g.seed);
  for (SiteEntry& site : manifest.sites) site.faces = found.at(site.site_id);
  HashFaces(manifest, store.root());
  store.SetManifest(std::move(manifest));
  out << "ingested " << ids.size() << " sites\n";
}

// predict

void CmdPredict(const Globals& g, const std::string& checkpoint, const std::string& external, bool force,
                std::ostream& out) {
  Store store = Store::Open(g.store);
  if (store.EventCount() != 0 && !force) {
    throw Error(ErrorCode::kBadStore, "records exist; predicting would change every replay base (use --force)");
  }
  std::optional<ToyBackboneParams> model;
  if (external.empty()) model = LoadCheckpoint(store, checkpoint);
  std::size_t n = 0;
  for (const FaceKey& key : store.Faces()) {
    LogitMap logits;
    if (model) {
      logits = Forward(*model, Featurize(store.LoadImage(key)));
    } else {
      const fs::path path = fs::path(external) / RelPath(key.site_id, key.face, ".segl");
      if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, "external logits " + path.string());
      logits = DecodeLogitMap(ReadFileBytes(path));
    }
    fs::create_directories(store.PredictionPath(key).parent_path());
    WriteFileAtomic(store.LogitsPath(key), EncodeLogitMap(logits));
    WriteFileAtomic(store.PredictionPath(key), EncodeBin(ArgmaxMask(logits)));
    ++n;
  }
  // Reopening replays the log over the new bases and refreshes the caches.
  Store::Open(g.store).WriteAllCaches();
  out << "predicted " << n << " faces\n";
}

// detect

void CmdDetect(const Globals& g, std::ostream& out) {
  Store store = Store::Open(g.store);
  const PipelineConfig config = g.Config();
  std::size_t faces = 0;
  std::size_t flagged = 0;
  for (const FaceKey& key : store.Faces()) {
    if (!fs::exists(store.LogitsPath(key))) continue;
    const ScoreMap entropy = EntropyMap(Softmax(DecodeLogitMap(ReadFileBytes(store.LogitsPath(key)))));
    fs::create_directories(store.FailuresPath(key).parent_path());
    WriteFileAtomic(store.FailuresPath(key), EncodeScoreMap(entropy));
    const auto regions = FlagRegions(entropy, config.flags);
    flagged += regions.size();
    ++faces;
    if (!regions.empty()) {
      out << FaceKeyName(key) << ": " << regions.size() << " flagged, top mean entropy " << regions[0].mean_score
          << "\n";
    }
  }
  if (faces == 0) throw Error(ErrorCode::kNotFound, "no logits in store; run predict first");
  out << "scored " << faces << " faces, " << flagged << " flagged regions\n";
}

// correct

struct CorrectArgs {
  std::string site;
  std::string face = "flat";
  std::string rect;
  std::string wand;
  double tolerance = -1.0;
  int cls = -1;
  std::string type = "feature_suppression";
  int interactions = 1;
  double elapsed = 0.0;
  int simulate = 0;
};

// Simulated annotator: on each unlabelled train-split face with ground
// truth, takes the largest connected error component and relabels the
// ground-truth component of its majority class that overlaps it.
std::vector<CorrectionRecord> SimulateOnStore(Store& store, int count) {
  struct Candidate {
    FaceKey key;
    std::size_t area;
    RegionSelection region;
    ClassId cls;
  };
  std::vector<Candidate> candidates;
  for (const FaceKey& key : store.Faces()) {
    if (store.SplitOf(key.site_id) != Split::kTrain || fs::exists(store.LabelsPath(key))) continue;
    const auto gt = store.LoadMask(store.GtPath(key));
    if (!gt) continue;
    const SegmentationMask& mask = store.CurrentMask(key);
    RegionSelection wrong(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) wrong.set(i, mask.at(i) != gt->at(i));
    const auto comps = ConnectedComponents(wrong, Connectivity::kFour);
    if (comps.empty()) continue;
    const auto best = std::max_element(comps.begin(), comps.end(),
                                       [](const auto& a, const auto& b) { return a.Count() < b.Count(); });
    std::array<std::size_t, kNumClasses> votes{};
    for (std::size_t i : best->Members()) ++votes[gt->at(i)];
    const auto cls = static_cast<ClassId>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    RegionSelection same(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) same.set(i, gt->at(i) == cls);
    RegionSelection region(mask.width(), mask.height());
    for (const auto& comp : ConnectedComponents(same, Connectivity::kFour)) {
      bool overlaps = false;
      for (std::size_t i : comp.Members()) overlaps = overlaps || best->contains(i);
      if (!overlaps) continue;
      for (std::size_t i : comp.Members()) region.set(i, true);
    }
    candidates.push_back({key, best->Count(), std::move(region), cls});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.area > b.area; });
  std::vector<CorrectionRecord> out;
  for (const Candidate& c : candidates) {
    if (static_cast<int>(out.size()) == count) break;
    out.push_back(store.ApplyHuman(c.key, c.region, c.cls, InterventionType::kFeatureSuppression,
                                   HumanProvenance{2, 20.0}));
  }
  return out;
}

void CmdCorrect(const Globals& g, const CorrectArgs& a, std::ostream& out) {
  Store store = Store::Open(g.store);
  if (a.simulate > 0) {
    for (const CorrectionRecord& r : SimulateOnStore(store, a.simulate)) {
      out << r.record_id << " " << r.site_id << "/" << FaceName(r.face) << " class " << int(r.corrected_class) << " ("
          << r.region.Count() << " px)\n";
    }
    return;
  }
  if (a.site.empty() || a.cls < 0) throw Error(ErrorCode::kInvalidArgument, "--site and --class are required");
  const FaceKey key{a.site, FaceFromName(a.face)};
  if (!store.Has(key)) throw Error(ErrorCode::kNotFound, FaceKeyName(key));
  const SegmentationMask& mask = store.CurrentMask(key);
  RegionSelection sel;
  if (!a.rect.empty()) {
    int x0, y0, x1, y1;
    char c1, c2, c3;
    std::istringstream in(a.rect);
    if (!(in >> x0 >> c1 >> y0 >> c2 >> x1 >> c3 >> y1)) throw Error(ErrorCode::kInvalidArgument, "--rect x0,y0,x1,y1");
    sel = RegionSelection::Rect(mask.width(), mask.height(), x0, y0, x1, y1);
  } else if (!a.wand.empty()) {
    const auto [x, y] = ParsePair(a.wand);
    WandParams params = g.Config().wand;
    if (a.tolerance >= 0.0) params.tolerance = a.tolerance;
    sel = WandSelect(store.LoadImage(key), {x, y}, params);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "one of --rect, --wand, --simulate is required");
  }
  const CorrectionRecord r = store.ApplyHuman(key, sel, a.cls, InterventionTypeFromName(a.type),
                                              HumanProvenance{a.interactions, a.elapsed});
  out << r.record_id << " " << FaceKeyName(key) << " class " << a.cls << " (" << sel.Count() << " px)\n";
}

// propagate

void CmdPropagate(const Globals& g, const std::string& record, bool all, std::ostream& out) {
  Store store = Store::Open(g.store);
  const PipelineConfig config = g.Config();
  std::vector<std::string> ids;
  if (all) {
    for (const CorrectionRecord& r : store.ActiveRecords()) {
      if (r.IsHuman()) ids.push_back(r.record_id);
    }
  } else if (!record.empty()) {
    ids.push_back(record);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--record or --all is required");
  }
  const PropagationIndex index = store.LoadOrBuildIndex(config.index);
  for (const std::string& id : ids) {
    const PropagationSummary s = store.Propagate(id, index, config.propagation);
    out << id << ": " << s.auto_applied.size() << " auto-applied, " << s.queued.size() << " queued, "
        << s.duplicates_skipped << " duplicates skipped\n";
  }
}

// review

void CmdReview(const Globals& g, const std::string& item, const std::string& decision, std::ostream& out) {
  Store store = Store::Open(g.store);
  if (item.empty()) {
    for (const ReviewEntry& e : store.ReviewItems(true)) {
      out << e.item_id << " " << e.proposed.site_id << "/" << FaceName(e.proposed.face) << " combined " << e.combined
          << "\n";
    }
    return;
  }
  if (decision != "accept" && decision != "reject") {
    throw Error(ErrorCode::kInvalidArgument, "--decision must be accept or reject");
  }
  const ReviewEntry e = store.Decide(item, decision == "accept");
  out << e.item_id << " " << ReviewStateName(e.state) << "\n";
}

// train

void CmdTrain(const Globals& g, std::optional<int> epochs, std::optional<double> lr, const std::string& from,
              std::ostream& out) {
  Store store = Store::Open(g.store);
  TrainConfig config = g.Config().train;
  config.seed = g.seed;
  if (epochs) config.epochs = *epochs;
  if (lr) config.lr = *lr;
  const fs::path init_path = store.CheckpointPath(from);
  const ToyBackboneParams initial =
      fs::exists(init_path) ? DecodeCheckpoint(ReadFileBytes(init_path)) : ToyBackboneParams::Init(g.seed);

  std::map<FaceKey, FeatureField> features;
  auto field = [&](const FaceKey& key) -> const FeatureField& {
    auto it = features.find(key);
    if (it == features.end()) it = features.emplace(key, Featurize(store.LoadImage(key))).first;
    return it->second;
  };
  FinetuneData data;
  for (const FaceKey& key : store.Faces()) {
    if (store.SplitOf(key.site_id) != Split::kTrain) continue;
    const auto labels = store.LoadMask(store.LabelsPath(key));
    if (!labels) continue;
    PixelSamples s;
    GatherPixels(s, field(key), RegionSelection::Full(labels->width(), labels->height()),
                 [&](std::size_t i) { return labels->at(i); });
    data.base_images.push_back(std::move(s));
  }
  for (const CorrectionRecord& r : store.ActiveRecords()) {
    const FaceKey key{r.site_id, r.face};
    if (store.SplitOf(key.site_id) != Split::kTrain) continue;
    PixelSamples& target = r.IsHuman() ? data.counterfactual : data.propagated;
    GatherPixels(target, field(key), r.region, [&](std::size_t) { return r.corrected_class; });
  }
  ToyBackboneParams trained = initial;
  TrainingLog log;
  if (config.epochs > 0) {
    FinetuneResult result = Finetune(initial, data, config);
    trained = std::move(result.params);
    log = std::move(result.log);
  }
  WriteFileAtomic(store.CheckpointPath("current"), EncodeCheckpoint(trained));
  WriteFileAtomic(store.root() / "checkpoints" / "training_log.csv", log.ToCsv());
  out << "trained " << config.epochs << " epochs on " << data.base_images.size() << " labelled images, "
      << data.counterfactual.size() << " counterfactual and " << data.propagated.size() << " propagated pixels\n";
  if (!log.epochs.empty()) {
    out << "total loss " << log.epochs.front().loss.total << " -> " << log.epochs.back().loss.total << "\n";
  }
}

// eval

MetricsRow Row(const std::string& label, const std::vector<std::pair<SegmentationMask, SegmentationMask>>& pairs) {
  ConfusionMatrix cm;
  double boundary_sum = 0.0;
  int boundary_n = 0;
  for (const auto& [pred, gt] : pairs) {
    cm.Add(ComputeConfusion(pred, gt));
    for (int c = 0; c < kNumClasses; ++c) {
      if (const auto b = BoundaryIou(pred, gt, static_cast<ClassId>(c))) {
        boundary_sum += *b;
        ++boundary_n;
      }
    }
  }
  MetricsRow row{label, MeanIou(cm), std::nullopt};
  if (boundary_n > 0) row.boundary_iou = boundary_sum / boundary_n;
  return row;
}

void CmdEval(const Globals& g, const std::string& pred, const std::string& gt, const std::string& out_path,
             std::ostream& out) {
  if (!pred.empty() || !gt.empty()) {
    if (pred.empty() || gt.empty()) throw Error(ErrorCode::kInvalidArgument, "--pred and --gt go together");
    const MetricsRow row = Row("file", {{ReadMaskFile(pred), ReadMaskFile(gt)}});
    char line[64];
    std::snprintf(line, sizeof(line), "mIoU %.4f\n", row.iou.mean);
    out << line;
    return;
  }
  Store store = Store::Open(g.store);
  const fs::path ckpt = store.CheckpointPath("current");
  std::optional<ToyBackboneParams> model;
  if (fs::exists(ckpt)) model = DecodeCheckpoint(ReadFileBytes(ckpt));
  std::vector<std::pair<SegmentationMask, SegmentationMask>> base, corrected, retrained, test_base, test_retrained;
  for (const FaceKey& key : store.Faces()) {
    const auto truth = store.LoadMask(store.GtPath(key));
    if (!truth) continue;
    const bool train = store.SplitOf(key.site_id) == Split::kTrain;
    if (train && fs::exists(store.LabelsPath(key))) continue;
    auto& b = train ? base : test_base;
    b.emplace_back(store.BaseMask(key), *truth);
    if (train) corrected.emplace_back(store.CurrentMask(key), *truth);
    if (model) (train ? retrained : test_retrained).emplace_back(PredictMask(*model, store.LoadImage(key)), *truth);
  }
  if (base.empty() && test_base.empty()) throw Error(ErrorCode::kNotFound, "no ground truth in store");
  std::vector<MetricsRow> rows;
  if (!base.empty()) {
    rows.push_back(Row("baseline", base));
    rows.push_back(Row("corrected_masks", corrected));
    if (model) rows.push_back(Row("retrained_model", retrained));
  }
  if (!test_base.empty()) {
    rows.push_back(Row("test_baseline", test_base));
    if (model) rows.push_back(Row("test_retrained_model", test_retrained));
  }
  const fs::path csv = out_path.empty() ? store.root() / "metrics.csv" : fs::path(out_path);
  WriteFileAtomic(csv, MetricsCsv(rows));
  out << MetricsTable(rows) << "wrote " << csv.string() << "\n";
}

// serve

void CmdServe(const Globals& g, const std::string& host, int port, std::ostream& out) {
  Service service(Store::Open(g.store), g.Config());
  const int bound = service.Bind(host, port);
  out << "listening on http://" << host << ":" << bound << "\n" << std::flush;
  service.Run();
}

// export

void CmdExport(const Globals& g, const std::string& dir, std::ostream& out) {
  Store store = Store::Open(g.store);
  const fs::path root = dir;
  std::size_t n = 0;
  for (const FaceKey& key : store.Faces()) {
    const fs::path base = root / key.site_id / std::string(FaceName(key.face));
    fs::create_directories(base);
    const SegmentationMask& mask = store.CurrentMask(key);
    WriteFileAtomic(base / "mask.bin", EncodeBin(mask));
    WriteFileAtomic(base / "mask.png", EncodeIndexedPng(mask));
    WriteFileAtomic(base / "seg_vis.png", EncodePngRgb(Colorize(mask)));
    ++n;
  }
  nlohmann::json records = nlohmann::json::array();
  for (const CorrectionRecord& r : store.ActiveRecords()) records.push_back(RecordToJson(r));
  WriteFileAtomic(root / "records.json", records.dump(2));
  WriteFileAtomic(root / "session_log.jsonl", store.BuildSessionLog().ToJsonl());
  out << "exported " << n << " masks and " << records.size() << " records to " << dir << "\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"segloop: segmentation correction loop"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--store", g.store, "Store root directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config, "Pipeline config JSON");

  std::function<void()> action;

  auto* init = app.add_subcommand("init", "Create an empty store");
  init->callback([&] { action = [&] { CmdInit(g, out); }; });

  BiasSpec spec;
  auto* synth = app.add_subcommand("synth-gen", "Generate the biased synthetic dataset into a new store");
  synth->add_option("--n-train", spec.n_train);
  synth->add_option("--n-pool", spec.n_pool);
  synth->add_option("--n-ood", spec.n_ood);
  synth->add_option("--clone-rate", spec.clone_rate);
  synth->add_option("--width", spec.width);
  synth->add_option("--height", spec.height);
  synth->callback([&] { action = [&] { CmdSynthGen(g, spec, out); }; });

  std::string ingest_dir;
  auto* ingest = app.add_subcommand("ingest", "Copy <site>/<face>.png images into the store and split by site");
  ingest->add_option("dir", ingest_dir)->required();
  ingest->callback([&] { action = [&] { CmdIngest(g, ingest_dir, out); }; });

  std::string checkpoint = "current";
  std::string external;
  bool force = false;
  auto* predict = app.add_subcommand("predict", "Write base predictions and logits for every face");
  predict->add_option("--checkpoint", checkpoint);
  predict->add_option("--external-logits", external, "Directory of <site>/<face>.segl files");
  predict->add_flag("--force", force, "Replace predictions even when records exist");
  predict->callback([&] { action = [&] { CmdPredict(g, checkpoint, external, force, out); }; });

  auto* detect = app.add_subcommand("detect", "Score failures from prediction entropy");
  detect->callback([&] { action = [&] { CmdDetect(g, out); }; });

  CorrectArgs ca;
  auto* correct = app.add_subcommand("correct", "Apply a human correction");
  correct->add_option("--site", ca.site);
  correct->add_option("--face", ca.face);
  correct->add_option("--rect", ca.rect, "x0,y0,x1,y1 (exclusive end)");
  correct->add_option("--wand", ca.wand, "x,y seed");
  correct->add_option("--tolerance", ca.tolerance);
  correct->add_option("--class", ca.cls);
  correct->add_option("--type", ca.type);
  correct->add_option("--interactions", ca.interactions);
  correct->add_option("--elapsed", ca.elapsed);
  correct->add_option("--simulate", ca.simulate, "Simulate N corrections from ground truth");
  correct->callback([&] { action = [&] { CmdCorrect(g, ca, out); }; });

  std::string record;
  bool all = false;
  auto* propagate = app.add_subcommand("propagate", "Propagate human corrections through the index");
  propagate->add_option("--record", record);
  propagate->add_flag("--all", all);
  propagate->callback([&] { action = [&] { CmdPropagate(g, record, all, out); }; });

  std::string item;
  std::string decision;
  auto* review = app.add_subcommand("review", "List pending review items or decide one");
  review->add_option("--item", item);
  review->add_option("--decision", decision);
  review->callback([&] { action = [&] { CmdReview(g, item, decision, out); }; });

  std::optional<int> epochs;
  std::optional<double> lr;
  std::string from = "current";
  auto* train = app.add_subcommand("train", "Finetune the current checkpoint on labels and corrections");
  train->add_option("--epochs", epochs);
  train->add_option("--lr", lr);
  train->add_option("--from", from, "Checkpoint to start from");
  train->callback([&] { action = [&] { CmdTrain(g, epochs, lr, from, out); }; });

  std::string pred;
  std::string gt;
  std::string csv;
  auto* eval = app.add_subcommand("eval", "Evaluate the store, or one --pred/--gt mask pair");
  eval->add_option("--pred", pred);
  eval->add_option("--gt", gt);
  eval->add_option("--out", csv, "Metrics CSV path");
  eval->callback([&] { action = [&] { CmdEval(g, pred, gt, csv, out); }; });

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->callback([&] { action = [&] { CmdServe(g, host, port, out); }; });

  std::string export_dir;
  auto* exp = app.add_subcommand("export", "Write current masks, records and the session log");
  exp->add_option("dir", export_dir)->required();
  exp->callback([&] { action = [&] { CmdExport(g, export_dir, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace segloop
