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

#include "partloc/toynet.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "partloc/kernels.hpp"
#include "partloc/rng.hpp"
#include "partloc/tnsr_io.hpp"

namespace partloc {
namespace {

using kernels::Shape3;

template <class T>
void fill_uniform(BasicTensor<T>& t, Rng& rng, double fan_in, double fan_out) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : t.data()) v = static_cast<T>(rng.uniform(-limit, limit));
}

template <class T>
void check_same_shape(const BasicToyNetParams<T>& a, const BasicToyNetParams<T>& b) {
  if (a.num_classes != b.num_classes || a.conv_a_w.dims() != b.conv_a_w.dims() ||
      a.conv_b_w.dims() != b.conv_b_w.dims() || a.fc_w.dims() != b.fc_w.dims())
    throw std::invalid_argument("parameter sets have different shapes");
}

}  // namespace

template <class T>
BasicToyNetParams<T> BasicToyNetParams<T>::zeros(int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  const auto k = static_cast<std::size_t>(num_classes);
  BasicToyNetParams p;
  p.num_classes = num_classes;
  p.conv_a_w = BasicTensor<T>({kToyChannelsA, 3, 3, 3});
  p.conv_a_b = BasicTensor<T>({kToyChannelsA});
  p.conv_b_w = BasicTensor<T>({kToyChannelsB, kToyChannelsA, 3, 3});
  p.conv_b_b = BasicTensor<T>({kToyChannelsB});
  p.fc_w = BasicTensor<T>({k, kToyChannelsB});
  p.fc_b = BasicTensor<T>({k});
  return p;
}

template <class T>
BasicToyNetParams<T> BasicToyNetParams<T>::init(int num_classes, std::uint64_t seed) {
  auto p = zeros(num_classes);
  Rng rng(seed);
  fill_uniform(p.conv_a_w, rng, 3 * 9, kToyChannelsA * 9);
  fill_uniform(p.conv_b_w, rng, kToyChannelsA * 9, kToyChannelsB * 9);
  fill_uniform(p.fc_w, rng, kToyChannelsB, num_classes);
  return p;
}

template <class T>
std::size_t BasicToyNetParams<T>::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const char*, const BasicTensor<T>& t) { n += t.size(); });
  return n;
}

template <class T>
ToyNetCache<T> forward(const BasicToyNetParams<T>& params, const BasicTensor<T>& img) {
  if (img.rank() != 3 || img.dim(0) != 3 || img.dim(1) != img.dim(2))
    throw std::invalid_argument("toynet: expected a 3 x S x S image, got " + shape_string(img.dims()));
  const int s = static_cast<int>(img.dim(1));
  if (s % kToyDownsample != 0)
    throw std::invalid_argument("toynet: image size " + std::to_string(s) + " is not a multiple of 8");

  const int h_a = s / kToyStemPool;
  const int h_b = h_a / 2;
  const auto ua = static_cast<std::size_t>(h_a);
  const auto ub = static_cast<std::size_t>(h_b);

  ToyNetCache<T> c;
  c.version = params.version;
  c.image_size = s;
  c.stem = BasicTensor<T>({3, ua, ua});
  kernels::avgpool_forward<T>(img.data(), {3, s, s}, kToyStemPool, c.stem.data());

  c.a_act = BasicTensor<T>({kToyChannelsA, ua, ua});
  kernels::parallel::conv3x3_forward<T>(c.stem.data(), {3, h_a, h_a}, params.conv_a_w.data(),
                                        params.conv_a_b.data(), kToyChannelsA, c.a_act.data());
  kernels::relu_inplace<T>(c.a_act.data());

  c.feat_a = BasicTensor<T>({kToyChannelsA, ub, ub});
  c.a_argmax.resize(c.feat_a.size());
  kernels::maxpool2_forward<T>(c.a_act.data(), {kToyChannelsA, h_a, h_a}, c.feat_a.data(), c.a_argmax);

  c.feat_b = BasicTensor<T>({kToyChannelsB, ub, ub});
  kernels::parallel::conv3x3_forward<T>(c.feat_a.data(), {kToyChannelsA, h_b, h_b}, params.conv_b_w.data(),
                                        params.conv_b_b.data(), kToyChannelsB, c.feat_b.data());
  kernels::relu_inplace<T>(c.feat_b.data());

  const std::size_t plane = ub * ub;
  c.pooled.assign(kToyChannelsB, T{0});
  for (int ch = 0; ch < kToyChannelsB; ++ch) {
    T acc = 0;
    for (std::size_t i = 0; i < plane; ++i) acc += c.feat_b[ch * plane + i];
    c.pooled[ch] = acc / static_cast<T>(plane);
  }

  const int k = params.num_classes;
  c.logits.assign(k, T{0});
  for (int i = 0; i < k; ++i) {
    T acc = params.fc_b[i];
    for (int j = 0; j < kToyChannelsB; ++j) acc += params.fc_w.at(i, j) * c.pooled[j];
    c.logits[i] = acc;
  }
  return c;
}

template <class T>
BasicToyNetParams<T> backward(const BasicToyNetParams<T>& params, const ToyNetCache<T>& cache,
                              std::span<const T> grad_logits) {
  if (cache.version != params.version) throw std::logic_error("toynet: stale forward cache");
  const int k = params.num_classes;
  if (grad_logits.size() != static_cast<std::size_t>(k) || cache.logits.size() != grad_logits.size())
    throw std::invalid_argument("toynet: gradient length does not match class count");

  auto g = BasicToyNetParams<T>::zeros(k);
  g.version = params.version;

  std::vector<T> d_pooled(kToyChannelsB, T{0});
  for (int i = 0; i < k; ++i) {
    g.fc_b[i] = grad_logits[i];
    for (int j = 0; j < kToyChannelsB; ++j) {
      g.fc_w.at(i, j) = grad_logits[i] * cache.pooled[j];
      d_pooled[j] += params.fc_w.at(i, j) * grad_logits[i];
    }
  }

  const int h_b = static_cast<int>(cache.feat_b.dim(1));
  const int h_a = static_cast<int>(cache.a_act.dim(1));
  const std::size_t plane_b = static_cast<std::size_t>(h_b) * h_b;

  BasicTensor<T> d_feat_b(cache.feat_b.dims());
  for (int ch = 0; ch < kToyChannelsB; ++ch) {
    const T v = d_pooled[ch] / static_cast<T>(plane_b);
    for (std::size_t i = 0; i < plane_b; ++i) d_feat_b[ch * plane_b + i] = v;
  }
  kernels::relu_backward<T>(cache.feat_b.data(), d_feat_b.data());

  BasicTensor<T> d_feat_a(cache.feat_a.dims());
  kernels::parallel::conv3x3_backward<T>(cache.feat_a.data(), {kToyChannelsA, h_b, h_b}, params.conv_b_w.data(),
                                         kToyChannelsB, d_feat_b.data(), d_feat_a.data(), g.conv_b_w.data(),
                                         g.conv_b_b.data());

  BasicTensor<T> d_a_act(cache.a_act.dims());
  kernels::maxpool2_backward<T>(d_feat_a.data(), cache.a_argmax, d_a_act.data());
  kernels::relu_backward<T>(cache.a_act.data(), d_a_act.data());

  kernels::parallel::conv3x3_backward<T>(cache.stem.data(), {3, h_a, h_a}, params.conv_a_w.data(), kToyChannelsA,
                                         d_a_act.data(), std::span<T>{}, g.conv_a_w.data(), g.conv_a_b.data());
  return g;
}

template <class T>
bool same_activation_pattern(const ToyNetCache<T>& a, const ToyNetCache<T>& b) {
  if (a.a_argmax != b.a_argmax) return false;
  for (std::size_t i = 0; i < a.a_act.size(); ++i)
    if ((a.a_act[i] > T{0}) != (b.a_act[i] > T{0})) return false;
  for (std::size_t i = 0; i < a.feat_b.size(); ++i)
    if ((a.feat_b[i] > T{0}) != (b.feat_b[i] > T{0})) return false;
  return true;
}

template <class T>
void axpy(BasicToyNetParams<T>& params, T scale, const BasicToyNetParams<T>& other) {
  check_same_shape(params, other);
  std::vector<BasicTensor<T>*> lhs;
  std::vector<const BasicTensor<T>*> rhs;
  params.for_each([&](const char*, BasicTensor<T>& t) { lhs.push_back(&t); });
  other.for_each([&](const char*, const BasicTensor<T>& t) { rhs.push_back(&t); });
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < lhs[i]->size(); ++j) (*lhs[i])[j] += scale * (*rhs[i])[j];
}

template struct BasicToyNetParams<float>;
template struct BasicToyNetParams<double>;
template ToyNetCache<float> forward(const BasicToyNetParams<float>&, const BasicTensor<float>&);
template ToyNetCache<double> forward(const BasicToyNetParams<double>&, const BasicTensor<double>&);
template BasicToyNetParams<float> backward(const BasicToyNetParams<float>&, const ToyNetCache<float>&,
                                           std::span<const float>);
template BasicToyNetParams<double> backward(const BasicToyNetParams<double>&, const ToyNetCache<double>&,
                                            std::span<const double>);
template bool same_activation_pattern(const ToyNetCache<float>&, const ToyNetCache<float>&);
template bool same_activation_pattern(const ToyNetCache<double>&, const ToyNetCache<double>&);
template void axpy(BasicToyNetParams<float>&, float, const BasicToyNetParams<float>&);
template void axpy(BasicToyNetParams<double>&, double, const BasicToyNetParams<double>&);

OptimizerState::OptimizerState(const ToyNetParams& like, SgdConfig cfg)
    : config(std::move(cfg)), lr(static_cast<float>(config.lr)), velocity(ToyNetParams::zeros(like.num_classes)) {}

void OptimizerState::set_epoch(int epoch) {
  double rate = config.lr;
  for (int boundary : config.decay_epochs)
    if (epoch >= boundary) rate *= config.lr_decay;
  lr = static_cast<float>(rate);
}

void sgd_step(ToyNetParams& params, const ToyNetParams& grads, OptimizerState& state) {
  check_same_shape(params, grads);
  check_same_shape(params, state.velocity);
  const float momentum = static_cast<float>(state.config.momentum);
  const float wd = static_cast<float>(state.config.weight_decay);
  const float lr = state.lr;

  std::vector<Tensor*> ps, vs;
  std::vector<const Tensor*> gs;
  params.for_each([&](const char*, Tensor& t) { ps.push_back(&t); });
  state.velocity.for_each([&](const char*, Tensor& t) { vs.push_back(&t); });
  grads.for_each([&](const char*, const Tensor& t) { gs.push_back(&t); });
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Tensor& p = *ps[i];
    Tensor& v = *vs[i];
    const Tensor& g = *gs[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      v[j] = momentum * v[j] - lr * (g[j] + wd * p[j]);
      p[j] = p[j] + v[j];
    }
  }
  ++params.version;
}

void save_checkpoint(const ToyNetParams& params, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  params.for_each([&](const char* name, const Tensor& t) {
    write_tensor(t, dir / (std::string(name) + ".tnsr"));
    manifest << name << ' ' << shape_string(t.dims()) << '\n';
  });
  std::ofstream out(dir / "manifest.txt", std::ios::trunc);
  out << manifest.str();
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.txt").string());
}

ToyNetParams load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw std::runtime_error("checkpoint manifest missing in " + dir.string());
  const Tensor fc_b = read_tensor(dir / "fc.bias.tnsr");
  if (fc_b.rank() != 1) throw std::runtime_error("checkpoint: fc.bias must be rank 1");
  auto params = ToyNetParams::zeros(static_cast<int>(fc_b.dim(0)));

  std::string line;
  std::size_t listed = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name, shape;
    ls >> name >> shape;
    bool known = false;
    params.for_each([&](const char* pname, Tensor& t) {
      if (name != pname) return;
      known = true;
      Tensor loaded = read_tensor(dir / (name + ".tnsr"));
      if (loaded.dims() != t.dims() || shape_string(loaded.dims()) != shape)
        throw std::runtime_error("checkpoint: " + name + " has shape " + shape_string(loaded.dims()) +
                                 ", expected " + shape_string(t.dims()));
      t = std::move(loaded);
    });
    if (!known) throw std::runtime_error("checkpoint: unknown parameter '" + name + "'");
    ++listed;
  }
  if (listed != 6) throw std::runtime_error("checkpoint: manifest lists " + std::to_string(listed) + " of 6 parameters");
  return params;
}

}  // namespace partloc
