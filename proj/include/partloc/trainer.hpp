// Copyright 2026 The partloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "partloc/config.hpp"
#include "partloc/synth.hpp"
#include "partloc/toynet.hpp"

namespace partloc {

struct EpochMetrics {
  int epoch = 0;
  double l_raw = 0.0;
  double l_object = 0.0;
  double l_parts = 0.0;
  double l_total = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  ToyNetParams params;
  std::vector<EpochMetrics> history;
};

/// Per-sample SGD over `train` for cfg.epochs epochs, shuffled by a seeded
/// generator; losses are epoch means and accuracy comes from `infer` on
/// `test`. One line per epoch goes to `log` when given.
TrainResult train_toy(const SynthSplit& train, const SynthSplit& test, const RunConfig& cfg,
                      std::ostream* log = nullptr);

/// Object-branch predictions for every sample, in order.
std::vector<int> predict(const ToyNetParams& params, const SynthSplit& split, const PipelineConfig& cfg);

/// `epoch,l_raw,l_object,l_parts,l_total,test_accuracy`, fixed 6 decimals.
std::string format_metrics_csv(const std::vector<EpochMetrics>& history);

}  // namespace partloc
