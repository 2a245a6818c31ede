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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "partloc/appm.hpp"
#include "partloc/kernels.hpp"

namespace k = partloc::kernels;

namespace {

std::vector<float> noise(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Args: input channels, output channels, spatial size.
struct ConvFixture {
  k::Shape3 s;
  int out_c;
  std::vector<float> in, w, b, out, grad_out, grad_in, grad_w, grad_b;

  explicit ConvFixture(const benchmark::State& st)
      : s{static_cast<int>(st.range(0)), static_cast<int>(st.range(2)), static_cast<int>(st.range(2))},
        out_c(static_cast<int>(st.range(1))),
        in(noise(s.size(), 1)),
        w(noise(static_cast<std::size_t>(out_c) * s.c * 9, 2)),
        b(noise(out_c, 3)),
        out(out_c * s.plane()),
        grad_out(noise(out_c * s.plane(), 4)),
        grad_in(s.size()),
        grad_w(w.size()),
        grad_b(out_c) {}
};

template <bool Parallel>
void BM_ConvForward(benchmark::State& st) {
  ConvFixture f(st);
  for (auto _ : st) {
    if constexpr (Parallel)
      k::parallel::conv3x3_forward<float>(f.in, f.s, f.w, f.b, f.out_c, f.out);
    else
      k::serial::conv3x3_forward<float>(f.in, f.s, f.w, f.b, f.out_c, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.out.size()));
}

template <bool Parallel>
void BM_ConvBackward(benchmark::State& st) {
  ConvFixture f(st);
  for (auto _ : st) {
    if constexpr (Parallel)
      k::parallel::conv3x3_backward<float>(f.in, f.s, f.w, f.out_c, f.grad_out, f.grad_in, f.grad_w, f.grad_b);
    else
      k::serial::conv3x3_backward<float>(f.in, f.s, f.w, f.out_c, f.grad_out, f.grad_in, f.grad_w, f.grad_b);
    benchmark::DoNotOptimize(f.grad_w.data());
  }
}

// Toy network layer shapes at 64 and 256 pixel inputs.
void conv_args(benchmark::internal::Benchmark* b) {
  b->Args({3, 8, 16})->Args({8, 16, 8})->Args({3, 8, 64})->Args({8, 16, 32});
}

BENCHMARK(BM_ConvForward<false>)->Name("conv_forward/serial")->Apply(conv_args);
BENCHMARK(BM_ConvForward<true>)->Name("conv_forward/parallel")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<false>)->Name("conv_backward/serial")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<true>)->Name("conv_backward/parallel")->Apply(conv_args);

void BM_ScoreIntegral(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const partloc::ActivationMap a(n, n, noise(static_cast<std::size_t>(n) * n, 5));
  const auto catalog = partloc::ProposalConfig::paper().catalog;
  for (auto _ : st) benchmark::DoNotOptimize(partloc::score_windows(a, catalog));
}

// Same windows, each summed cell by cell.
void BM_ScoreDirect(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const partloc::ActivationMap a(n, n, noise(static_cast<std::size_t>(n) * n, 5));
  const auto catalog = partloc::ProposalConfig::paper().catalog;
  for (auto _ : st) {
    double total = 0.0;
    for (const auto& spec : catalog)
      for (int y = 0; y + spec.h <= n; ++y)
        for (int x = 0; x + spec.w <= n; ++x) {
          double s = 0.0;
          for (int dy = 0; dy < spec.h; ++dy)
            for (int dx = 0; dx < spec.w; ++dx) s += a.at(y + dy, x + dx);
          total += s / (spec.h * spec.w);
        }
    benchmark::DoNotOptimize(total);
  }
}

BENCHMARK(BM_ScoreIntegral)->Name("window_scores/integral")->Arg(14)->Arg(28);
BENCHMARK(BM_ScoreDirect)->Name("window_scores/direct")->Arg(14)->Arg(28);

}  // namespace

BENCHMARK_MAIN();
