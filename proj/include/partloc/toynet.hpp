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

// Small convolutional classifier with hand-written gradients.
//
//   image 3xSxS -> 4x4 average-pool stem                  (3 x S/4)
//   block_a: conv3x3 3->8 + ReLU + 2x2 max-pool = feat_a   (8 x S/8)
//   block_b: conv3x3 8->16 + ReLU             = feat_b     (16 x S/8)
//   logits = W * mean_{y,x}(feat_b) + b
//
// feat_a and feat_b share the S/8 grid so their masks can be intersected.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "partloc/tensor.hpp"

namespace partloc {

inline constexpr int kToyStemPool = 4;
inline constexpr int kToyDownsample = 8;
inline constexpr int kToyChannelsA = 8;
inline constexpr int kToyChannelsB = 16;

template <class T>
struct BasicToyNetParams {
  int num_classes = 0;
  BasicTensor<T> conv_a_w;  // 8 x 3 x 3 x 3
  BasicTensor<T> conv_a_b;  // 8
  BasicTensor<T> conv_b_w;  // 16 x 8 x 3 x 3
  BasicTensor<T> conv_b_b;  // 16
  BasicTensor<T> fc_w;      // K x 16
  BasicTensor<T> fc_b;      // K
  /// Bumped by every optimizer step; forward caches remember it.
  std::uint64_t version = 0;

  static BasicToyNetParams zeros(int num_classes);
  static BasicToyNetParams init(int num_classes, std::uint64_t seed);

  std::size_t parameter_count() const;

  /// f(name, tensor) over every parameter in a fixed order.
  template <class F>
  void for_each(F&& f) {
    f("block_a.weight", conv_a_w);
    f("block_a.bias", conv_a_b);
    f("block_b.weight", conv_b_w);
    f("block_b.bias", conv_b_b);
    f("fc.weight", fc_w);
    f("fc.bias", fc_b);
  }
  template <class F>
  void for_each(F&& f) const {
    f("block_a.weight", conv_a_w);
    f("block_a.bias", conv_a_b);
    f("block_b.weight", conv_b_w);
    f("block_b.bias", conv_b_b);
    f("fc.weight", fc_w);
    f("fc.bias", fc_b);
  }
};

using ToyNetParams = BasicToyNetParams<float>;

template <class To, class From>
BasicToyNetParams<To> params_cast(const BasicToyNetParams<From>& p) {
  BasicToyNetParams<To> out;
  out.num_classes = p.num_classes;
  out.conv_a_w = tensor_cast<To>(p.conv_a_w);
  out.conv_a_b = tensor_cast<To>(p.conv_a_b);
  out.conv_b_w = tensor_cast<To>(p.conv_b_w);
  out.conv_b_b = tensor_cast<To>(p.conv_b_b);
  out.fc_w = tensor_cast<To>(p.fc_w);
  out.fc_b = tensor_cast<To>(p.fc_b);
  out.version = p.version;
  return out;
}

/// Forward intermediates needed by backward.
template <class T>
struct ToyNetCache {
  std::uint64_t version = 0;
  int image_size = 0;
  BasicTensor<T> stem;    // 3 x S/4 x S/4
  BasicTensor<T> a_act;   // 8 x S/4 x S/4, post-ReLU
  BasicTensor<T> feat_a;  // 8 x S/8 x S/8
  std::vector<std::uint32_t> a_argmax;
  BasicTensor<T> feat_b;  // 16 x S/8 x S/8, post-ReLU
  std::vector<T> pooled;  // 16
  std::vector<T> logits;  // K
};

/// Throws std::invalid_argument unless img is 3 x S x S with S a positive
/// multiple of 8.
template <class T>
ToyNetCache<T> forward(const BasicToyNetParams<T>& params, const BasicTensor<T>& img);

/// Parameter gradients given dL/dlogits. Throws std::logic_error when the
/// cache was produced under a different parameter version.
template <class T>
BasicToyNetParams<T> backward(const BasicToyNetParams<T>& params, const ToyNetCache<T>& cache,
                              std::span<const T> grad_logits);

/// True when both caches took the same max-pool winners and ReLU branches,
/// i.e. the network is on the same smooth piece at both points.
template <class T>
bool same_activation_pattern(const ToyNetCache<T>& a, const ToyNetCache<T>& b);

/// params += scale * other, elementwise.
template <class T>
void axpy(BasicToyNetParams<T>& params, T scale, const BasicToyNetParams<T>& other);

struct SgdConfig {
  double lr = 1e-3;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double lr_decay = 0.1;
  /// The learning rate is multiplied by lr_decay once for every boundary <= epoch.
  std::vector<int> decay_epochs{60};
};

struct OptimizerState {
  SgdConfig config;
  float lr = 1e-3f;
  ToyNetParams velocity;

  OptimizerState(const ToyNetParams& like, SgdConfig cfg);
  /// Apply the step schedule for a zero-based epoch index.
  void set_epoch(int epoch);
};

/// v <- momentum*v - lr*(g + wd*p); p <- p + v.
void sgd_step(ToyNetParams& params, const ToyNetParams& grads, OptimizerState& state);

/// One TNSR file per parameter plus manifest.txt ("name shape" lines).
void save_checkpoint(const ToyNetParams& params, const std::filesystem::path& dir);
ToyNetParams load_checkpoint(const std::filesystem::path& dir);

}  // namespace partloc
