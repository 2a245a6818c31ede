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

#include "partloc/resize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace partloc {
namespace {

struct Tap {
  int lo;
  int hi;
  float frac;
};

// Source taps along one axis of a crop [origin, origin+extent).
std::vector<Tap> axis_taps(int origin, int extent, int out) {
  std::vector<Tap> taps(out);
  const double scale = static_cast<double>(extent) / out;
  for (int d = 0; d < out; ++d) {
    double src = (d + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(extent - 1));
    const int lo = static_cast<int>(std::floor(src));
    const int hi = std::min(lo + 1, extent - 1);
    taps[d] = {origin + lo, origin + hi, static_cast<float>(src - lo)};
  }
  return taps;
}

}  // namespace

Tensor crop_resize(const Tensor& img, const BBox& box, int out_h, int out_w) {
  if (img.rank() != 3) throw std::invalid_argument("crop_resize: image must be C x H x W");
  if (out_h < 1 || out_w < 1) throw std::invalid_argument("crop_resize: output size must be positive");
  const int c = static_cast<int>(img.dim(0));
  const int h = static_cast<int>(img.dim(1));
  const int w = static_cast<int>(img.dim(2));
  const BBox crop = clip(box, w, h);
  if (crop.empty()) throw std::invalid_argument("crop_resize: box is empty after clipping");

  Tensor out({static_cast<std::size_t>(c), static_cast<std::size_t>(out_h), static_cast<std::size_t>(out_w)});
  const auto ys = axis_taps(crop.y0, crop.height(), out_h);
  const auto xs = axis_taps(crop.x0, crop.width(), out_w);
  for (int ch = 0; ch < c; ++ch) {
    for (int oy = 0; oy < out_h; ++oy) {
      const Tap ty = ys[oy];
      for (int ox = 0; ox < out_w; ++ox) {
        const Tap tx = xs[ox];
        // lerp as a + (b - a) * t keeps constant regions exact
        const float a = img.at(ch, ty.lo, tx.lo);
        const float b = img.at(ch, ty.lo, tx.hi);
        const float c2 = img.at(ch, ty.hi, tx.lo);
        const float d = img.at(ch, ty.hi, tx.hi);
        const float top = a + (b - a) * tx.frac;
        const float bot = c2 + (d - c2) * tx.frac;
        out.at(ch, oy, ox) = top + (bot - top) * ty.frac;
      }
    }
  }
  return out;
}

}  // namespace partloc
