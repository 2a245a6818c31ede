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

#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "partloc/kernels.hpp"
#include "support/gen.hpp"

using namespace partloc::kernels;

namespace {

struct ConvCase {
  Shape3 s;
  int out_c;
  std::vector<float> in, weight, bias, grad_out;
};

ConvCase make_case(std::uint64_t seed, Shape3 s, int out_c) {
  testgen::Gen g(seed);
  ConvCase k{s, out_c, {}, {}, {}, {}};
  k.in = testgen::floats(g, s.size());
  k.weight = testgen::floats(g, static_cast<std::size_t>(out_c) * s.c * 9);
  k.bias = testgen::floats(g, out_c);
  k.grad_out = testgen::floats(g, static_cast<std::size_t>(out_c) * s.plane());
  return k;
}

struct ConvResult {
  std::vector<float> out, grad_in, grad_w, grad_b;
  bool operator==(const ConvResult&) const = default;
};

template <bool Parallel>
ConvResult run(const ConvCase& k) {
  ConvResult r;
  r.out.resize(static_cast<std::size_t>(k.out_c) * k.s.plane());
  r.grad_in.resize(k.s.size());
  r.grad_w.resize(k.weight.size());
  r.grad_b.resize(k.bias.size());
  const std::span<const float> in(k.in), w(k.weight), b(k.bias), go(k.grad_out);
  if constexpr (Parallel) {
    parallel::conv3x3_forward<float>(in, k.s, w, b, k.out_c, r.out);
    parallel::conv3x3_backward<float>(in, k.s, w, k.out_c, go, r.grad_in, r.grad_w, r.grad_b);
  } else {
    serial::conv3x3_forward<float>(in, k.s, w, b, k.out_c, r.out);
    serial::conv3x3_backward<float>(in, k.s, w, k.out_c, go, r.grad_in, r.grad_w, r.grad_b);
  }
  return r;
}

void check_close(const std::vector<float>& a, const std::vector<float>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-5));
}

}  // namespace

TEST_CASE("conv forward on a hand-computed case") {
  // 1 channel 3x3 input, all-ones kernel: each output is the padded 3x3 neighbourhood sum
  const std::vector<float> in{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<float> w(9, 1.0f), b{0.5f};
  std::vector<float> out(9);
  parallel::conv3x3_forward<float>(in, {1, 3, 3}, w, b, 1, out);
  const std::vector<float> expect{12.5f, 21.5f, 16.5f, 27.5f, 45.5f, 33.5f, 24.5f, 39.5f, 28.5f};
  CHECK(out == expect);
}

TEST_CASE("parallel conv kernels agree with the serial reference") {
  for (auto [s, oc] : {std::pair{Shape3{3, 16, 16}, 8}, {Shape3{8, 8, 8}, 16}, {Shape3{2, 5, 7}, 3}, {Shape3{1, 1, 1}, 2}}) {
    const ConvCase k = make_case(100 + s.size(), s, oc);
    const ConvResult a = run<false>(k), b = run<true>(k);
    check_close(a.out, b.out);
    check_close(a.grad_in, b.grad_in);
    check_close(a.grad_w, b.grad_w);
    check_close(a.grad_b, b.grad_b);
  }
}

TEST_CASE("parallel conv results do not depend on the thread count") {
  const ConvCase k = make_case(7, {8, 16, 16}, 16);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const ConvResult one = run<true>(k);
  omp_set_num_threads(4);
  const ConvResult four = run<true>(k);
  omp_set_num_threads(3);
  const ConvResult three = run<true>(k);
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(one == three);
}

TEST_CASE("first layer backward may skip the input gradient") {
  const ConvCase k = make_case(9, {3, 6, 6}, 4);
  const ConvResult full = run<true>(k);
  std::vector<float> gw(k.weight.size()), gb(k.bias.size());
  parallel::conv3x3_backward<float>(k.in, k.s, k.weight, k.out_c, k.grad_out, {}, gw, gb);
  CHECK(gw == full.grad_w);
  CHECK(gb == full.grad_b);
}

TEST_CASE("max-pool picks the first maximum and routes gradient to it") {
  const std::vector<float> in{1, 5, 2, 2,  //
                              5, 0, 2, 2,  //
                              0, 0, 3, 9,  //
                              0, -1, 9, 1};
  std::vector<float> out(4);
  std::vector<std::uint32_t> arg(4);
  maxpool2_forward<float>(in, {1, 4, 4}, out, arg);
  CHECK(out == std::vector<float>{5, 2, 0, 9});
  CHECK(arg == std::vector<std::uint32_t>{1, 2, 8, 11});

  std::vector<float> grad_in(16, 7.0f);
  maxpool2_backward<float>(std::vector<float>{1, 2, 3, 4}, arg, grad_in);
  for (std::size_t i = 0; i < 16; ++i) {
    const float want = i == 1 ? 1.0f : i == 2 ? 2.0f : i == 8 ? 3.0f : i == 11 ? 4.0f : 0.0f;
    CHECK(grad_in[i] == want);
  }
}

TEST_CASE("relu and average pool") {
  std::vector<float> x{-1, 0, 2, -0.5f};
  relu_inplace<float>(x);
  CHECK(x == std::vector<float>{0, 0, 2, 0});
  std::vector<float> g{1, 1, 1, 1};
  relu_backward<float>(x, g);
  CHECK(g == std::vector<float>{0, 0, 1, 0});

  std::vector<float> img(16);
  for (int i = 0; i < 16; ++i) img[i] = static_cast<float>(i);
  std::vector<float> pooled(1);
  avgpool_forward<float>(img, {1, 4, 4}, 4, pooled);
  CHECK(pooled[0] == 7.5f);
}
