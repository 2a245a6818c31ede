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

#include "partloc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "partloc/resize.hpp"

namespace partloc {

template <class T>
std::vector<double> softmax(std::span<const T> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  double hi = logits[0];
  for (T v : logits) hi = std::max(hi, static_cast<double>(v));
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(static_cast<double>(logits[i]) - hi);
    total += p[i];
  }
  for (auto& v : p) v /= total;
  return p;
}

template std::vector<double> softmax(std::span<const float>);
template std::vector<double> softmax(std::span<const double>);

double cross_entropy(std::span<const double> p, int c) {
  if (c < 0 || static_cast<std::size_t>(c) >= p.size())
    throw std::out_of_range("cross_entropy: class " + std::to_string(c) + " outside [0," +
                            std::to_string(p.size()) + ")");
  return -std::log(std::max(p[c], kProbabilityFloor));
}

double parts_loss(const std::vector<std::vector<double>>& ps, int c) {
  double total = 0.0;
  for (const auto& p : ps) total += cross_entropy(p, c);
  return total;
}

LossBundle total_loss(const BranchOutputs& o) {
  const std::size_t k = o.p_raw.size();
  if (o.p_object.size() != k) throw std::invalid_argument("total_loss: raw and object class counts differ");
  for (const auto& p : o.p_parts)
    if (p.size() != k) throw std::invalid_argument("total_loss: part class count differs");
  LossBundle l;
  l.l_raw = cross_entropy(o.p_raw, o.label);
  l.l_object = cross_entropy(o.p_object, o.label);
  l.l_parts = parts_loss(o.p_parts, o.label);
  l.l_total = l.l_raw + l.l_object + l.l_parts;
  return l;
}

int argmax(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argmax: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return static_cast<int>(best);
}

void PipelineConfig::validate() const {
  geometry.validate();
  proposals.validate();
  if (s_big < kToyDownsample || s_big % kToyDownsample != 0 || s_small < kToyDownsample ||
      s_small % kToyDownsample != 0)
    throw std::invalid_argument("s_big and s_small must be positive multiples of 8");
  if (geometry.input_size != s_big) throw std::invalid_argument("geometry.input_size must equal s_big");
  if (geometry.map_size != s_big / kToyDownsample)
    throw std::invalid_argument("geometry.map_size must be s_big/8 = " + std::to_string(s_big / kToyDownsample) +
                                " for the toy network");
  for (const auto& w : proposals.catalog)
    if (w.h > geometry.map_size || w.w > geometry.map_size)
      throw std::invalid_argument("catalog window larger than the feature map");
}

PipelineConfig PipelineConfig::toy() { return {}; }

PipelineConfig PipelineConfig::paper() {
  PipelineConfig c;
  c.geometry = {448, 14};
  c.proposals = ProposalConfig::paper();
  c.s_big = 448;
  c.s_small = 224;
  return c;
}

namespace {

template <class T>
std::vector<double> probabilities(const ToyNetCache<T>& cache) {
  return softmax<T>(cache.logits);
}

// dL/dlogits of -log softmax(z)[label].
template <class T>
std::vector<T> ce_grad(const std::vector<double>& p, int label) {
  std::vector<T> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = static_cast<T>(p[i] - (static_cast<int>(i) == label ? 1.0 : 0.0));
  return g;
}

Tensor to_size(const Tensor& img, int s) {
  if (img.rank() == 3 && img.dim(1) == static_cast<std::size_t>(s) && img.dim(2) == static_cast<std::size_t>(s))
    return img;
  if (img.rank() != 3) throw std::invalid_argument("raw image must be C x H x W");
  return crop_resize(img, pixel_box(0, 0, static_cast<int>(img.dim(2)), static_cast<int>(img.dim(1))), s, s);
}

}  // namespace

BranchPlan plan_branches(const ToyNetParams& params, const Tensor& raw_image, const PipelineConfig& cfg,
                         ForwardCounters* counters) {
  BranchPlan plan;
  plan.images.raw = to_size(raw_image, cfg.s_big);
  plan.raw_cache = forward(params, plan.images.raw);
  if (counters) ++counters->raw;

  plan.object_box = locate(plan.raw_cache.feat_a, plan.raw_cache.feat_b, cfg.geometry, cfg.locate);
  plan.images.object = crop_resize(plan.images.raw, plan.object_box, cfg.s_big, cfg.s_big);
  plan.object_cache = forward(params, plan.images.object);
  if (counters) ++counters->object;

  if (cfg.proposals.total() > 0) {
    plan.proposals = propose(plan.object_cache.feat_b, cfg.geometry, cfg.proposals);
    plan.images.parts.reserve(plan.proposals.size());
    for (const auto& p : plan.proposals)
      plan.images.parts.push_back(crop_resize(plan.images.object, p.pixel, cfg.s_small, cfg.s_small));
  }
  return plan;
}

template <class T>
LossBundle evaluate_branches(const BasicToyNetParams<T>& params, const BranchImages<T>& images, int label,
                             BasicToyNetParams<T>* grads, const ToyNetCache<T>* raw_cache,
                             const ToyNetCache<T>* object_cache, ForwardCounters* counters) {
  auto run = [&](const BasicTensor<T>& img, const ToyNetCache<T>* cached, std::size_t* counter) {
    if (cached && cached->version == params.version) return *cached;
    if (counters && counter) ++*counter;
    return forward(params, img);
  };

  const ToyNetCache<T> raw = run(images.raw, raw_cache, counters ? &counters->raw : nullptr);
  const ToyNetCache<T> obj = run(images.object, object_cache, counters ? &counters->object : nullptr);
  std::vector<ToyNetCache<T>> parts;
  parts.reserve(images.parts.size());
  for (const auto& p : images.parts) parts.push_back(run(p, nullptr, counters ? &counters->part : nullptr));

  BranchOutputs out;
  out.label = label;
  out.p_raw = probabilities(raw);
  out.p_object = probabilities(obj);
  for (const auto& c : parts) out.p_parts.push_back(probabilities(c));
  const LossBundle loss = total_loss(out);

  if (grads) {
    *grads = BasicToyNetParams<T>::zeros(params.num_classes);
    grads->version = params.version;
    axpy(*grads, T{1}, backward(params, raw, std::span<const T>(ce_grad<T>(out.p_raw, label))));
    axpy(*grads, T{1}, backward(params, obj, std::span<const T>(ce_grad<T>(out.p_object, label))));
    for (std::size_t i = 0; i < parts.size(); ++i)
      axpy(*grads, T{1}, backward(params, parts[i], std::span<const T>(ce_grad<T>(out.p_parts[i], label))));
  }
  return loss;
}

template LossBundle evaluate_branches(const BasicToyNetParams<float>&, const BranchImages<float>&, int,
                                      BasicToyNetParams<float>*, const ToyNetCache<float>*,
                                      const ToyNetCache<float>*, ForwardCounters*);
template LossBundle evaluate_branches(const BasicToyNetParams<double>&, const BranchImages<double>&, int,
                                      BasicToyNetParams<double>*, const ToyNetCache<double>*,
                                      const ToyNetCache<double>*, ForwardCounters*);

LossBundle train_step(ToyNetParams& params, OptimizerState& optimizer, const Tensor& raw_image, int label,
                      const PipelineConfig& cfg, ForwardCounters* counters) {
  if (label < 0 || label >= params.num_classes) throw std::out_of_range("train_step: label out of range");
  const BranchPlan plan = plan_branches(params, raw_image, cfg, counters);
  ToyNetParams grads;
  const LossBundle loss =
      evaluate_branches(params, plan.images, label, &grads, &plan.raw_cache, &plan.object_cache, counters);
  sgd_step(params, grads, optimizer);
  return loss;
}

int infer(const ToyNetParams& params, const Tensor& raw_image, const PipelineConfig& cfg, ForwardCounters* counters) {
  const Tensor raw = to_size(raw_image, cfg.s_big);
  const auto raw_cache = forward(params, raw);
  if (counters) ++counters->raw;
  const BBox box = locate(raw_cache.feat_a, raw_cache.feat_b, cfg.geometry, cfg.locate);
  const auto obj_cache = forward(params, crop_resize(raw, box, cfg.s_big, cfg.s_big));
  if (counters) ++counters->object;
  return argmax(probabilities(obj_cache));
}

}  // namespace partloc
