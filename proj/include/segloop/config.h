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

#ifndef SEGLOOP_CONFIG_H_
#define SEGLOOP_CONFIG_H_

#include <filesystem>
#include <string_view>

#include "segloop/failure.h"
#include "segloop/objective.h"
#include "segloop/propagation.h"
#include "segloop/region.h"

namespace segloop {

// Tunables shared by the CLI and the service. Every key is optional in the
// JSON form:
//   {"wand": {"tolerance", "connectivity"},
//    "index": {"grid", "tolerance", "connectivity"},
//    "propagation": {"tau", "k", "review_factor"},
//    "train": {"lr", "weight_decay", "lambda_cf", "lambda_prop", "epochs", "batch_size"},
//    "flags": {"threshold", "min_area", "connectivity"},
//    "overlay_alpha", "cleanup_sky"}
struct PipelineConfig {
  WandParams wand;
  IndexBuildParams index{8, 24.0, Connectivity::kFour};
  PropagationParams propagation;
  TrainConfig train;
  FlagParams flags;
  double overlay_alpha = 0.5;
  bool cleanup_sky = false;

  static PipelineConfig FromJson(std::string_view json);
  static PipelineConfig Load(const std::filesystem::path& path);
};

}  // namespace segloop

#endif  // SEGLOOP_CONFIG_H_
