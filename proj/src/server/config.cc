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

#include "segloop/config.h"

#include <string>

#include "json.hpp"
#include "segloop/error.h"
#include "segloop/file_util.h"

namespace segloop {
namespace {

using nlohmann::json;

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void ReadConnectivity(const json& j, Connectivity& out) {
  if (j.contains("connectivity")) out = ConnectivityFromInt(j.at("connectivity").get<int>());
}

}  // namespace

PipelineConfig PipelineConfig::FromJson(std::string_view text) {
  PipelineConfig c;
  try {
    const json j = json::parse(text);
    if (j.contains("wand")) {
      Read(j["wand"], "tolerance", c.wand.tolerance);
      ReadConnectivity(j["wand"], c.wand.connectivity);
    }
    if (j.contains("index")) {
      Read(j["index"], "grid", c.index.grid);
      Read(j["index"], "tolerance", c.index.tolerance);
      ReadConnectivity(j["index"], c.index.connectivity);
    }
    if (j.contains("propagation")) {
      Read(j["propagation"], "tau", c.propagation.tau);
      Read(j["propagation"], "k", c.propagation.k);
      Read(j["propagation"], "review_factor", c.propagation.review_factor);
    }
    if (j.contains("train")) {
      const json& t = j["train"];
      Read(t, "lr", c.train.lr);
      Read(t, "weight_decay", c.train.weight_decay);
      Read(t, "lambda_cf", c.train.lambda_cf);
      Read(t, "lambda_prop", c.train.lambda_prop);
      Read(t, "epochs", c.train.epochs);
      Read(t, "batch_size", c.train.batch_size);
    }
    if (j.contains("flags")) {
      Read(j["flags"], "threshold", c.flags.threshold);
      Read(j["flags"], "min_area", c.flags.min_area);
      ReadConnectivity(j["flags"], c.flags.connectivity);
    }
    Read(j, "overlay_alpha", c.overlay_alpha);
    Read(j, "cleanup_sky", c.cleanup_sky);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("config: ") + e.what());
  }
  if (c.wand.tolerance < 0.0 || c.wand.tolerance > kMaxRgbDistance) {
    throw Error(ErrorCode::kInvalidArgument, "wand tolerance out of range");
  }
  if (c.overlay_alpha < 0.0 || c.overlay_alpha > 1.0) throw Error(ErrorCode::kInvalidArgument, "overlay_alpha out of range");
  return c;
}

PipelineConfig PipelineConfig::Load(const std::filesystem::path& path) { return FromJson(ReadFileText(path)); }

}  // namespace segloop
