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

#include "partloc/trainer.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "partloc/eval.hpp"
#include "partloc/pipeline.hpp"
#include "partloc/rng.hpp"

namespace partloc {

std::vector<int> predict(const ToyNetParams& params, const SynthSplit& split, const PipelineConfig& cfg) {
  std::vector<int> preds(split.samples.size());
  for (std::size_t i = 0; i < split.samples.size(); ++i) preds[i] = infer(params, split.samples[i].image, cfg);
  return preds;
}

TrainResult train_toy(const SynthSplit& train, const SynthSplit& test, const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  cfg.pipeline.validate();
  if (train.samples.empty() || test.samples.empty()) throw std::invalid_argument("train_toy: empty split");
  for (const auto* split : {&train, &test})
    for (const auto& s : split->samples)
      if (s.label < 0 || s.label >= cfg.num_classes) throw std::invalid_argument("train_toy: label out of range");

  TrainResult result;
  result.params = ToyNetParams::init(cfg.num_classes, cfg.seed);
  OptimizerState opt(result.params, cfg.sgd);
  Rng order_rng(cfg.seed ^ 0x5DEECE66Dull);

  std::vector<int> gts(test.samples.size());
  for (std::size_t i = 0; i < gts.size(); ++i) gts[i] = test.samples[i].label;

  std::vector<std::size_t> order(train.samples.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    opt.set_epoch(epoch);
    std::iota(order.begin(), order.end(), std::size_t{0});
    order_rng.shuffle(order);

    EpochMetrics m;
    m.epoch = epoch + 1;
    for (std::size_t idx : order) {
      const auto& s = train.samples[idx];
      const LossBundle l = train_step(result.params, opt, s.image, s.label, cfg.pipeline);
      m.l_raw += l.l_raw;
      m.l_object += l.l_object;
      m.l_parts += l.l_parts;
      m.l_total += l.l_total;
    }
    const double n = static_cast<double>(order.size());
    m.l_raw /= n;
    m.l_object /= n;
    m.l_parts /= n;
    m.l_total /= n;
    m.test_accuracy = accuracy(predict(result.params, test, cfg.pipeline), gts);
    result.history.push_back(m);

    if (log) {
      char line[160];
      std::snprintf(line, sizeof line, "epoch %3d  lr %.6g  l_total %.4f  (raw %.4f obj %.4f parts %.4f)  test_acc %.2f\n",
                    m.epoch, static_cast<double>(opt.lr), m.l_total, m.l_raw, m.l_object, m.l_parts,
                    m.test_accuracy);
      *log << line << std::flush;
    }
  }
  return result;
}

std::string format_metrics_csv(const std::vector<EpochMetrics>& history) {
  std::string out = "epoch,l_raw,l_object,l_parts,l_total,test_accuracy\n";
  char line[200];
  for (const auto& m : history) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", m.epoch, m.l_raw, m.l_object, m.l_parts,
                  m.l_total, m.test_accuracy);
    out += line;
  }
  return out;
}

}  // namespace partloc
