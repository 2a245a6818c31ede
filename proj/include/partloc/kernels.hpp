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

// Dense kernels behind the toy network.
//
// `parallel::` is what the network runs: OpenMP over output channels, each
// output element owned by exactly one thread and accumulated in a fixed
// order, so results do not depend on the thread count. `serial::` is a naive
// gather-style reference kept for tests and benchmarks.
//
// Layouts: activations C x H x W, conv weights O x C x 3 x 3, all row-major.
// 3x3 convolutions use stride 1 and zero padding 1.

#include <cstddef>
#include <cstdint>
#include <span>

namespace partloc::kernels {

struct Shape3 {
  int c;
  int h;
  int w;
  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  std::size_t size() const { return static_cast<std::size_t>(c) * plane(); }
};

namespace serial {

template <class T>
void conv3x3_forward(std::span<const T> in, Shape3 s, std::span<const T> weight, std::span<const T> bias, int out_c,
                     std::span<T> out) {
  for (int o = 0; o < out_c; ++o)
    for (int y = 0; y < s.h; ++y)
      for (int x = 0; x < s.w; ++x) {
        T acc = bias[o];
        for (int c = 0; c < s.c; ++c)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const int iy = y + ky - 1, ix = x + kx - 1;
              if (iy < 0 || iy >= s.h || ix < 0 || ix >= s.w) continue;
              acc += weight[((o * s.c + c) * 3 + ky) * 3 + kx] * in[(c * s.h + iy) * s.w + ix];
            }
        out[(o * s.h + y) * s.w + x] = acc;
      }
}

/// grad_in may be empty (first layer).
template <class T>
void conv3x3_backward(std::span<const T> in, Shape3 s, std::span<const T> weight, int out_c,
                      std::span<const T> grad_out, std::span<T> grad_in, std::span<T> grad_w, std::span<T> grad_b) {
  for (int o = 0; o < out_c; ++o) {
    T gb = 0;
    for (std::size_t i = 0; i < s.plane(); ++i) gb += grad_out[o * s.plane() + i];
    grad_b[o] = gb;
    for (int c = 0; c < s.c; ++c)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          T acc = 0;
          for (int y = 0; y < s.h; ++y)
            for (int x = 0; x < s.w; ++x) {
              const int iy = y + ky - 1, ix = x + kx - 1;
              if (iy < 0 || iy >= s.h || ix < 0 || ix >= s.w) continue;
              acc += grad_out[(o * s.h + y) * s.w + x] * in[(c * s.h + iy) * s.w + ix];
            }
          grad_w[((o * s.c + c) * 3 + ky) * 3 + kx] = acc;
        }
  }
  if (grad_in.empty()) return;
  for (int c = 0; c < s.c; ++c)
    for (int iy = 0; iy < s.h; ++iy)
      for (int ix = 0; ix < s.w; ++ix) {
        T acc = 0;
        for (int o = 0; o < out_c; ++o)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const int y = iy - ky + 1, x = ix - kx + 1;
              if (y < 0 || y >= s.h || x < 0 || x >= s.w) continue;
              acc += weight[((o * s.c + c) * 3 + ky) * 3 + kx] * grad_out[(o * s.h + y) * s.w + x];
            }
        grad_in[(c * s.h + iy) * s.w + ix] = acc;
      }
}

}  // namespace serial

namespace parallel {

template <class T>
void conv3x3_forward(std::span<const T> in, Shape3 s, std::span<const T> weight, std::span<const T> bias, int out_c,
                     std::span<T> out) {
  const std::size_t plane = s.plane();
#pragma omp parallel for schedule(static)
  for (int o = 0; o < out_c; ++o) {
    T* dst = out.data() + o * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = bias[o];
    for (int c = 0; c < s.c; ++c) {
      const T* src = in.data() + c * plane;
      for (int ky = 0; ky < 3; ++ky) {
        const int y_lo = ky == 0 ? 1 : 0;
        const int y_hi = ky == 2 ? s.h - 1 : s.h;
        for (int kx = 0; kx < 3; ++kx) {
          const T wv = weight[((o * s.c + c) * 3 + ky) * 3 + kx];
          const int x_lo = kx == 0 ? 1 : 0;
          const int x_hi = kx == 2 ? s.w - 1 : s.w;
          for (int y = y_lo; y < y_hi; ++y) {
            T* row = dst + static_cast<std::size_t>(y) * s.w;
            const T* srow = src + static_cast<std::size_t>(y + ky - 1) * s.w + (kx - 1);
            for (int x = x_lo; x < x_hi; ++x) row[x] += wv * srow[x];
          }
        }
      }
    }
  }
}

template <class T>
void conv3x3_backward(std::span<const T> in, Shape3 s, std::span<const T> weight, int out_c,
                      std::span<const T> grad_out, std::span<T> grad_in, std::span<T> grad_w, std::span<T> grad_b) {
  const std::size_t plane = s.plane();
#pragma omp parallel for schedule(static)
  for (int o = 0; o < out_c; ++o) {
    const T* g = grad_out.data() + o * plane;
    T gb = 0;
    for (std::size_t i = 0; i < plane; ++i) gb += g[i];
    grad_b[o] = gb;
    for (int c = 0; c < s.c; ++c) {
      const T* src = in.data() + c * plane;
      for (int ky = 0; ky < 3; ++ky) {
        const int y_lo = ky == 0 ? 1 : 0;
        const int y_hi = ky == 2 ? s.h - 1 : s.h;
        for (int kx = 0; kx < 3; ++kx) {
          const int x_lo = kx == 0 ? 1 : 0;
          const int x_hi = kx == 2 ? s.w - 1 : s.w;
          T acc = 0;
          for (int y = y_lo; y < y_hi; ++y) {
            const T* grow = g + static_cast<std::size_t>(y) * s.w;
            const T* srow = src + static_cast<std::size_t>(y + ky - 1) * s.w + (kx - 1);
            for (int x = x_lo; x < x_hi; ++x) acc += grow[x] * srow[x];
          }
          grad_w[((o * s.c + c) * 3 + ky) * 3 + kx] = acc;
        }
      }
    }
  }
  if (grad_in.empty()) return;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < s.c; ++c) {
    T* dst = grad_in.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = 0;
    for (int o = 0; o < out_c; ++o) {
      const T* g = grad_out.data() + o * plane;
      for (int ky = 0; ky < 3; ++ky) {
        const int y_lo = ky == 0 ? 1 : 0;
        const int y_hi = ky == 2 ? s.h - 1 : s.h;
        for (int kx = 0; kx < 3; ++kx) {
          const T wv = weight[((o * s.c + c) * 3 + ky) * 3 + kx];
          const int x_lo = kx == 0 ? 1 : 0;
          const int x_hi = kx == 2 ? s.w - 1 : s.w;
          for (int y = y_lo; y < y_hi; ++y) {
            const T* grow = g + static_cast<std::size_t>(y) * s.w;
            T* drow = dst + static_cast<std::size_t>(y + ky - 1) * s.w + (kx - 1);
            for (int x = x_lo; x < x_hi; ++x) drow[x] += wv * grow[x];
          }
        }
      }
    }
  }
}

}  // namespace parallel

// The elementwise and pooling kernels are memory-bound at these sizes; one
// implementation serves both paths.

template <class T>
void relu_inplace(std::span<T> x) {
  for (auto& v : x) v = v > T{0} ? v : T{0};
}

/// Zero the gradient wherever the forward output was clamped.
template <class T>
void relu_backward(std::span<const T> out, std::span<T> grad) {
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!(out[i] > T{0})) grad[i] = T{0};
}

/// 2x2 max-pool, stride 2. `argmax` stores the flat input index of the winner;
/// the first maximum in (0,0),(0,1),(1,0),(1,1) order wins ties.
template <class T>
void maxpool2_forward(std::span<const T> in, Shape3 s, std::span<T> out, std::span<std::uint32_t> argmax) {
  const int oh = s.h / 2, ow = s.w / 2;
  for (int c = 0; c < s.c; ++c)
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x) {
        std::uint32_t best = static_cast<std::uint32_t>((c * s.h + 2 * y) * s.w + 2 * x);
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            const auto idx = static_cast<std::uint32_t>((c * s.h + 2 * y + dy) * s.w + 2 * x + dx);
            if (in[idx] > in[best]) best = idx;
          }
        const std::size_t o = (static_cast<std::size_t>(c) * oh + y) * ow + x;
        out[o] = in[best];
        argmax[o] = best;
      }
}

template <class T>
void maxpool2_backward(std::span<const T> grad_out, std::span<const std::uint32_t> argmax, std::span<T> grad_in) {
  for (auto& g : grad_in) g = T{0};
  for (std::size_t i = 0; i < grad_out.size(); ++i) grad_in[argmax[i]] += grad_out[i];
}

/// k x k average pool, stride k; requires h and w divisible by k.
template <class T>
void avgpool_forward(std::span<const T> in, Shape3 s, int k, std::span<T> out) {
  const int oh = s.h / k, ow = s.w / k;
  const T inv = T{1} / static_cast<T>(k * k);
  for (int c = 0; c < s.c; ++c)
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x) {
        T acc = 0;
        for (int dy = 0; dy < k; ++dy)
          for (int dx = 0; dx < k; ++dx) acc += in[(c * s.h + y * k + dy) * s.w + x * k + dx];
        out[(static_cast<std::size_t>(c) * oh + y) * ow + x] = acc * inv;
      }
}

}  // namespace partloc::kernels
