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

// Raw / object / part branches over one shared network.
//
// Training: the raw image is classified and its two last feature blocks
// locate the object; the object crop (same size as the raw input) is
// classified and its last feature block proposes parts; every part crop is
// classified at the small size. The summed cross entropies drive a single
// gradient step. Inference only runs the raw and object branches.

#include <cstddef>
#include <span>
#include <vector>

#include "partloc/aolm.hpp"
#include "partloc/appm.hpp"
#include "partloc/tensor.hpp"
#include "partloc/toynet.hpp"

namespace partloc {

inline constexpr double kProbabilityFloor = 1e-12;

struct BranchOutputs {
  std::vector<double> p_raw;
  std::vector<double> p_object;
  std::vector<std::vector<double>> p_parts;
  int label = 0;
};

struct LossBundle {
  double l_raw = 0.0;
  double l_object = 0.0;
  double l_parts = 0.0;
  double l_total = 0.0;
};

template <class T>
std::vector<double> softmax(std::span<const T> logits);

/// -ln(max(p[c], 1e-12)). Throws std::out_of_range for a bad class index.
double cross_entropy(std::span<const double> p, int c);
double parts_loss(const std::vector<std::vector<double>>& ps, int c);
/// Throws std::invalid_argument if the vectors disagree on the class count.
LossBundle total_loss(const BranchOutputs& outputs);

/// Lowest index wins ties.
int argmax(std::span<const double> v);

struct PipelineConfig {
  GridGeometry geometry{64, 8};
  ProposalConfig proposals = ProposalConfig::toy();
  LocateOptions locate;
  int s_big = 64;
  int s_small = 32;

  /// Throws std::invalid_argument unless the geometry matches what the toy
  /// network produces for s_big inputs.
  void validate() const;

  static PipelineConfig toy();
  static PipelineConfig paper();
};

/// Counts network evaluations per branch.
struct ForwardCounters {
  std::size_t raw = 0;
  std::size_t object = 0;
  std::size_t part = 0;
};

template <class T>
struct BranchImages {
  BasicTensor<T> raw;
  BasicTensor<T> object;
  std::vector<BasicTensor<T>> parts;
};

/// Crops chosen from the raw and object forward passes. The caches are kept
/// so training does not repeat those two passes.
struct BranchPlan {
  BranchImages<float> images;
  BBox object_box;
  std::vector<PartProposal> proposals;
  ToyNetCache<float> raw_cache;
  ToyNetCache<float> object_cache;
};

/// Resizes the raw image to s_big if needed, then runs raw -> locate ->
/// object -> propose and cuts the part crops.
BranchPlan plan_branches(const ToyNetParams& params, const Tensor& raw_image, const PipelineConfig& cfg,
                         ForwardCounters* counters = nullptr);

/// Losses of all three branches on fixed crops; with `grads` set, also the
/// gradient of l_total. Caches, when given, must come from `params`.
template <class T>
LossBundle evaluate_branches(const BasicToyNetParams<T>& params, const BranchImages<T>& images, int label,
                             BasicToyNetParams<T>* grads = nullptr, const ToyNetCache<T>* raw_cache = nullptr,
                             const ToyNetCache<T>* object_cache = nullptr, ForwardCounters* counters = nullptr);

/// One optimizer step on a single labelled image.
LossBundle train_step(ToyNetParams& params, OptimizerState& optimizer, const Tensor& raw_image, int label,
                      const PipelineConfig& cfg, ForwardCounters* counters = nullptr);

/// Object-branch prediction. Never evaluates part crops.
int infer(const ToyNetParams& params, const Tensor& raw_image, const PipelineConfig& cfg,
          ForwardCounters* counters = nullptr);

}  // namespace partloc
