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

#include "segloop/optimizer.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "segloop/error.h"

namespace segloop {

void AdamStep(ToyBackboneParams& params, std::span<const double> grads, AdamState& state, const TrainConfig& config) {
  auto theta = params.values();
  if (grads.size() != theta.size() || state.m.size() != theta.size() || state.v.size() != theta.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "AdamStep: shape mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t j = 0; j < theta.size(); ++j) {
    state.m[j] = config.beta1 * state.m[j] + (1.0 - config.beta1) * grads[j];
    state.v[j] = config.beta2 * state.v[j] + (1.0 - config.beta2) * grads[j] * grads[j];
    const double m_hat = state.m[j] / bc1;
    const double v_hat = state.v[j] / bc2;
    theta[j] -= config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

bool FinetuneData::empty() const {
  if (!counterfactual.empty() || !propagated.empty()) return false;
  return std::all_of(base_images.begin(), base_images.end(), [](const PixelSamples& s) { return s.empty(); });
}

SupervisionBatch FinetuneData::FullBatch() const {
  SupervisionBatch batch;
  for (const auto& img : base_images) batch.base.Append(img);
  batch.counterfactual = counterfactual;
  batch.propagated = propagated;
  return batch;
}

std::string TrainingLog::ToCsv() const {
  std::ostringstream out;
  out << "epoch,steps,seg,cf,prop,decay,total\n";
  out.precision(10);
  for (const auto& e : epochs) {
    out << e.epoch << ',' << e.steps << ',' << e.loss.seg << ',' << e.loss.cf << ',' << e.loss.prop << ','
        << e.loss.decay << ',' << e.loss.total << '\n';
  }
  return out.str();
}

FinetuneResult Finetune(const ToyBackboneParams& initial, const FinetuneData& data, const TrainConfig& config) {
  if (data.empty()) throw Error(ErrorCode::kNoSupervision, "finetune needs at least one supervised pixel");
  if (!(config.lr > 0.0) || config.lambda_cf < 0.0 || config.lambda_prop < 0.0 || config.weight_decay < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid training config");
  }
  if (config.epochs < 0) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  const std::size_t batch_images = static_cast<std::size_t>(std::max(1, config.batch_size));

  FinetuneResult result{initial, {}};
  const SupervisionBatch full = data.FullBatch();
  result.log.epochs.push_back({0, LossTotal(full, result.params, config), 0});

  AdamState state = AdamState::Zeros();
  std::vector<double> grad(ToyBackboneParams::kSize);
  std::vector<std::size_t> order(data.base_images.size());
  std::mt19937_64 rng(config.seed);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    const std::size_t n_batches = order.empty() ? 1 : (order.size() + batch_images - 1) / batch_images;
    int steps = 0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      SupervisionBatch batch;
      for (std::size_t k = b * batch_images; k < std::min(order.size(), (b + 1) * batch_images); ++k) {
        batch.base.Append(data.base_images[order[k]]);
      }
      batch.counterfactual = data.counterfactual;
      batch.propagated = data.propagated;
      if (batch.empty()) continue;
      LossAndGradient(batch, result.params, config, grad);
      AdamStep(result.params, grad, state, config);
      ++steps;
    }
    result.log.epochs.push_back({epoch, LossTotal(full, result.params, config), steps});
  }
  return result;
}

}  // namespace segloop
