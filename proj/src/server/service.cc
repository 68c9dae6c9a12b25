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

#include "segloop/service.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "httplib.h"
#include "json.hpp"
#include "segloop/eval.h"
#include "segloop/failure.h"
#include "segloop/file_util.h"
#include "segloop/mask_io.h"
#include "segloop/png_codec.h"
#include "segloop/probability.h"
#include "segloop/records.h"
#include "segloop/region.h"
#include "segloop/rle.h"

namespace segloop {
namespace {

using nlohmann::json;
using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

constexpr const char* kJson = "application/json";
constexpr const char* kPng = "image/png";

void SendError(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"code", code}, {"message", message}}.dump(), kJson);
}

Handler Guard(Handler inner) {
  return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
    try {
      inner(req, res);
    } catch (const Error& e) {
      SendError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
    } catch (const json::exception& e) {
      SendError(res, 422, ErrorCodeName(ErrorCode::kBadFormat), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "Internal", e.what());
    }
  };
}

void SendJson(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void SendBytes(httplib::Response& res, const std::vector<std::uint8_t>& bytes, const char* type) {
  res.set_content(std::string(bytes.begin(), bytes.end()), type);
}

json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("request body: ") + e.what());
  }
}

FaceKey ParseKey(const std::string& site, const std::string& face) {
  try {
    return {site, FaceFromName(face)};
  } catch (const Error&) {
    throw Error(ErrorCode::kNotFound, "face " + face);
  }
}

json IouJson(const IouResult& r) {
  json per = json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    if (r.per_class[c]) per[std::string(ClassName(static_cast<ClassId>(c)))] = *r.per_class[c];
  }
  return {{"miou", r.mean}, {"per_class", per}};
}

std::vector<std::uint8_t> HeatPng(const ScoreMap& score) {
  const double top = std::log(static_cast<double>(kNumClasses));
  std::vector<std::uint8_t> gray(score.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(score.at(i) / top, 0.0, 1.0)));
  }
  return EncodePngGray(score.width(), score.height(), gray);
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kAlreadyDecided:
    case ErrorCode::kNotHumanProvenance:
    case ErrorCode::kLeakageViolation:
    case ErrorCode::kNothingToUndo:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSeedOutOfBounds:
    case ErrorCode::kEmptySelection:
    case ErrorCode::kClassOutOfRange:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kBadFormat:
    case ErrorCode::kEmptyRegion:
    case ErrorCode::kRegionTooThin:
      return 422;
    default:
      return 500;
  }
}

Service::Service(Store store, PipelineConfig config)
    : store_(std::move(store)), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only; httplib's default adds SO_REUSEPORT.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  Routes();
}

Service::~Service() = default;

int Service::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kPortInUse, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Service::Run() { server_->listen_after_bind(); }
void Service::Stop() { server_->stop(); }
void Service::WaitUntilReady() const { server_->wait_until_ready(); }

Service::Session& Service::FindSession(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "session " + id);
  return it->second;
}

std::shared_ptr<const PropagationIndex> Service::IndexSnapshot() {
  if (!index_) index_ = std::make_shared<const PropagationIndex>(store_.LoadOrBuildIndex(config_.index));
  return index_;
}

void Service::Routes() {
  httplib::Server& s = *server_;

  s.Get("/api/sites", Guard([this](const httplib::Request&, httplib::Response& res) {
          std::shared_lock lock(store_mutex_);
          json sites = json::array();
          for (const SiteEntry& site : store_.manifest().sites) {
            json faces = json::array();
            for (const auto& [face, path] : site.faces) faces.push_back(FaceName(face));
            sites.push_back({{"site_id", site.site_id}, {"split", SplitName(site.split)}, {"faces", faces}});
          }
          SendJson(res, {{"sites", sites}});
        }));

  s.Get(R"(/api/sites/([^/]+)/faces/([^/]+)/(image|prediction|overlay|failures|mask))",
        Guard([this](const httplib::Request& req, httplib::Response& res) {
          std::shared_lock lock(store_mutex_);
          const FaceKey key = ParseKey(req.matches[1], req.matches[2]);
          if (!store_.Has(key)) throw Error(ErrorCode::kNotFound, FaceKeyName(key));
          const std::string what = req.matches[3];
          const std::string format = req.get_param_value("format");
          if (what == "image") {
            SendBytes(res, store_.LoadImageBytes(key), kPng);
          } else if (what == "prediction") {
            SendBytes(res, EncodePngRgb(Colorize(store_.BaseMask(key))), kPng);
          } else if (what == "overlay") {
            SendBytes(res, EncodePngRgb(Overlay(store_.LoadImage(key), store_.CurrentMask(key), config_.overlay_alpha)),
                      kPng);
          } else if (what == "mask") {
            const SegmentationMask& mask = store_.CurrentMask(key);
            if (format == "bin") {
              SendBytes(res, EncodeBin(mask), "application/octet-stream");
            } else {
              SendBytes(res, EncodeIndexedPng(mask), kPng);
            }
            res.set_header("X-Mask-Version", std::to_string(store_.MaskVersion(key)));
          } else {
            ScoreMap score;
            if (std::filesystem::exists(store_.FailuresPath(key))) {
              score = DecodeScoreMap(ReadFileBytes(store_.FailuresPath(key)));
            } else if (std::filesystem::exists(store_.LogitsPath(key))) {
              score = EntropyMap(Softmax(DecodeLogitMap(ReadFileBytes(store_.LogitsPath(key)))));
            } else {
              throw Error(ErrorCode::kNotFound, "no failure map or logits for " + FaceKeyName(key));
            }
            if (format == "regions") {
              json regions = json::array();
              for (const FlaggedRegion& r : FlagRegions(score, config_.flags)) {
                regions.push_back({{"selection", SelectionToJson(r.selection)},
                                   {"mean_score", r.mean_score},
                                   {"area", r.area}});
              }
              SendJson(res, {{"width", score.width()}, {"height", score.height()}, {"regions", regions}});
            } else {
              SendBytes(res, HeatPng(score), kPng);
            }
          }
        }));

  s.Post("/api/sessions", Guard([this](const httplib::Request& req, httplib::Response& res) {
           const json body = ParseBody(req);
           std::shared_lock lock(store_mutex_);
           const FaceKey key = ParseKey(body.at("site_id").get<std::string>(),
                                        body.value("face", std::string(FaceName(Face::kFlat))));
           if (!store_.Has(key)) throw Error(ErrorCode::kNotFound, FaceKeyName(key));
           const SegmentationMask& mask = store_.CurrentMask(key);
           std::lock_guard slock(session_mutex_);
           const std::string id = "s" + std::to_string(next_session_++);
           sessions_[id] = Session{key, {}, 0, NowMillis()};
           SendJson(res,
                    {{"session_id", id},
                     {"site_id", key.site_id},
                     {"face", FaceName(key.face)},
                     {"width", mask.width()},
                     {"height", mask.height()},
                     {"version", store_.MaskVersion(key)}},
                    201);
         }));

  s.Post(R"(/api/sessions/([^/]+)/wand)", Guard([this](const httplib::Request& req, httplib::Response& res) {
           const json body = ParseBody(req);
           FaceKey key;
           {
             std::lock_guard slock(session_mutex_);
             Session& session = FindSession(req.matches[1]);
             key = session.key;
             ++session.wand_calls;
           }
           WandParams params = config_.wand;
           params.tolerance = body.value("tolerance", params.tolerance);
           if (body.contains("connectivity")) params.connectivity = ConnectivityFromInt(body["connectivity"].get<int>());
           const PixelCoord seed{body.at("x").get<int>(), body.at("y").get<int>()};
           std::shared_lock lock(store_mutex_);
           const RegionSelection sel = WandSelect(store_.LoadImage(key), seed, params);
           json out = SelectionToJson(sel);
           out["count"] = sel.Count();
           SendJson(res, out);
         }));

  s.Post(R"(/api/sessions/([^/]+)/corrections)", Guard([this](const httplib::Request& req, httplib::Response& res) {
           const json body = ParseBody(req);
           const RegionSelection sel = SelectionFromJson(body.at("selection"));
           const int cls = body.at("class").get<int>();
           const InterventionType type = InterventionTypeFromName(
               body.value("intervention_type", std::string(InterventionTypeName(InterventionType::kFeatureSuppression))));
           std::unique_lock lock(store_mutex_);
           std::lock_guard slock(session_mutex_);
           Session& session = FindSession(req.matches[1]);
           const std::int64_t now = NowMillis();
           HumanProvenance prov;
           prov.interactions = body.value("interactions", std::max(1, session.wand_calls + 1));
           prov.elapsed_s = body.value("elapsed_s", static_cast<double>(now - session.last_commit_ms) / 1000.0);
           const CorrectionRecord record = store_.ApplyHuman(session.key, sel, cls, type, prov);
           session.undo_stack.push_back(record.record_id);
           session.wand_calls = 0;
           session.last_commit_ms = now;
           SendJson(res, {{"record", RecordToJson(record)}, {"version", store_.MaskVersion(session.key)}}, 201);
         }));

  s.Post(R"(/api/sessions/([^/]+)/undo)", Guard([this](const httplib::Request& req, httplib::Response& res) {
           std::unique_lock lock(store_mutex_);
           std::lock_guard slock(session_mutex_);
           Session& session = FindSession(req.matches[1]);
           while (!session.undo_stack.empty() && !store_.IsActive(session.undo_stack.back())) {
             session.undo_stack.pop_back();
           }
           if (session.undo_stack.empty()) throw Error(ErrorCode::kNothingToUndo, "session has no active corrections");
           const std::string id = session.undo_stack.back();
           store_.Undo(id);
           session.undo_stack.pop_back();
           SendJson(res, {{"undone", id}, {"version", store_.MaskVersion(session.key)}});
         }));

  s.Post(R"(/api/propagate/([^/]+))", Guard([this](const httplib::Request& req, httplib::Response& res) {
           std::unique_lock lock(store_mutex_);
           const auto index = IndexSnapshot();
           const PropagationSummary summary = store_.Propagate(req.matches[1], *index, config_.propagation);
           json autos = json::array();
           for (const auto& r : summary.auto_applied) autos.push_back(RecordToJson(r));
           json queued = json::array();
           for (const auto& e : summary.queued) queued.push_back(ReviewEntryToJson(e));
           SendJson(res, {{"source", std::string(req.matches[1])},
                          {"auto_applied", autos},
                          {"queued", queued},
                          {"duplicates_skipped", summary.duplicates_skipped}});
         }));

  s.Get("/api/review-queue", Guard([this](const httplib::Request& req, httplib::Response& res) {
          std::shared_lock lock(store_mutex_);
          json items = json::array();
          for (const auto& e : store_.ReviewItems(req.get_param_value("all") != "1")) items.push_back(ReviewEntryToJson(e));
          SendJson(res, {{"items", items}});
        }));

  s.Post(R"(/api/review/([^/]+))", Guard([this](const httplib::Request& req, httplib::Response& res) {
           const json body = ParseBody(req);
           const std::string decision = body.at("decision").get<std::string>();
           if (decision != "accept" && decision != "reject") {
             throw Error(ErrorCode::kInvalidArgument, "decision must be accept or reject");
           }
           std::unique_lock lock(store_mutex_);
           const ReviewEntry entry = store_.Decide(req.matches[1], decision == "accept");
           json out = ReviewEntryToJson(entry);
           out["version"] = store_.MaskVersion({entry.proposed.site_id, entry.proposed.face});
           SendJson(res, out);
         }));

  s.Get("/api/metrics", Guard([this](const httplib::Request&, httplib::Response& res) {
          std::shared_lock lock(store_mutex_);
          std::map<Split, std::pair<ConfusionMatrix, ConfusionMatrix>> by_split;
          std::map<Split, int> faces;
          for (const FaceKey& key : store_.Faces()) {
            const auto gt = store_.LoadMask(store_.GtPath(key));
            if (!gt) continue;
            auto& [base, current] = by_split[store_.SplitOf(key.site_id)];
            base.Add(ComputeConfusion(store_.BaseMask(key), *gt));
            current.Add(ComputeConfusion(store_.CurrentMask(key), *gt));
            ++faces[store_.SplitOf(key.site_id)];
          }
          json splits = json::object();
          for (const auto& [split, cms] : by_split) {
            splits[std::string(SplitName(split))] = {
                {"faces", faces[split]}, {"baseline", IouJson(MeanIou(cms.first))}, {"current", IouJson(MeanIou(cms.second))}};
          }
          const SessionLog log = store_.BuildSessionLog();
          json gain = nullptr;
          try {
            gain = PropagationGain(log);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kEmptyLog) throw;
          }
          SendJson(res, {{"splits", splits},
                         {"active_records", store_.ActiveRecords().size()},
                         {"review_pending", store_.ReviewItems(true).size()},
                         {"events", store_.EventCount()},
                         {"propagation_gain", gain}});
        }));

  s.Get("/api/stats/effort", Guard([this](const httplib::Request&, httplib::Response& res) {
          std::shared_lock lock(store_mutex_);
          EffortStats stats;
          try {
            stats = ComputeEffortStats(store_.BuildSessionLog());
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kEmptyLog) throw;
          }
          SendJson(res, {{"mean_seconds_per_image", stats.mean_seconds_per_image},
                         {"mean_interactions_per_image", stats.mean_interactions_per_image},
                         {"images", stats.images},
                         {"human_records", stats.human_records}});
        }));

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) SendError(res, res.status, res.status == 404 ? "NotFound" : "HttpError", "no such route");
  });
}

}  // namespace segloop
