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

#include "partloc/aolm.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace partloc {

void GridGeometry::validate() const {
  if (input_size < 1 || map_size < 1) throw std::invalid_argument("geometry sizes must be positive");
  if (input_size % map_size != 0)
    throw std::invalid_argument("input_size " + std::to_string(input_size) + " is not a multiple of map_size " +
                                std::to_string(map_size));
}

ActivationMap channel_sum(const Tensor& f) {
  if (f.rank() != 3) throw ShapeError("channel_sum: expected C x H x W, got " + shape_string(f.dims()));
  const std::size_t c = f.dim(0), h = f.dim(1), w = f.dim(2);
  const std::size_t plane = h * w;
  std::vector<double> acc(plane, 0.0);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* src = f.raw() + ch * plane;
    for (std::size_t i = 0; i < plane; ++i) acc[i] += src[i];
  }
  std::vector<float> out(acc.begin(), acc.end());
  return ActivationMap(static_cast<int>(h), static_cast<int>(w), std::move(out));
}

BinaryMask binarize(const ActivationMap& a) {
  BinaryMask m(a.h(), a.w());
  const float thr = a.mean();
  for (int y = 0; y < a.h(); ++y)
    for (int x = 0; x < a.w(); ++x) m.set(y, x, a.at(y, x) > thr);
  return m;
}

BinaryMask largest_component(const BinaryMask& m, Connectivity conn) {
  const int h = m.h(), w = m.w();
  std::vector<int> label(static_cast<std::size_t>(h) * w, -1);
  std::vector<int> stack;
  int best_label = -1;
  std::size_t best_size = 0;
  int next = 0;

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const int seed = sy * w + sx;
      if (!m.at(sy, sx) || label[seed] >= 0) continue;
      const int id = next++;
      std::size_t size = 0;
      label[seed] = id;
      stack.assign(1, seed);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++size;
        const int cy = cur / w, cx = cur % w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dy == 0 && dx == 0) continue;
            if (conn == Connectivity::four && dy != 0 && dx != 0) continue;
            const int ny = cy + dy, nx = cx + dx;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            const int n = ny * w + nx;
            if (m.at(ny, nx) && label[n] < 0) {
              label[n] = id;
              stack.push_back(n);
            }
          }
        }
      }
      // strict > keeps the earliest component on ties
      if (size > best_size) {
        best_size = size;
        best_label = id;
      }
    }
  }

  BinaryMask out(h, w);
  if (best_label < 0) return out;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.set(y, x, label[y * w + x] == best_label);
  return out;
}

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
  if (a.h() != b.h() || a.w() != b.w()) throw ShapeError("intersect: mask dimensions differ");
  BinaryMask out(a.h(), a.w());
  for (int y = 0; y < a.h(); ++y)
    for (int x = 0; x < a.w(); ++x) out.set(y, x, a.at(y, x) && b.at(y, x));
  return out;
}

BBox mask_bbox(const BinaryMask& m) {
  BBox b{m.w(), m.h(), -1, -1, Frame::grid};
  for (int y = 0; y < m.h(); ++y) {
    for (int x = 0; x < m.w(); ++x) {
      if (!m.at(y, x)) continue;
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x + 1);
      b.y1 = std::max(b.y1, y + 1);
    }
  }
  if (b.x1 < 0) throw std::invalid_argument("mask_bbox: mask is empty");
  return b;
}

BBox grid_to_pixels(const BBox& grid, const GridGeometry& g) {
  const int s = g.stride();
  return pixel_box(grid.x0 * s, grid.y0 * s, grid.x1 * s, grid.y1 * s);
}

BBox locate(const Tensor& f_5b, const Tensor& f_5c, const GridGeometry& g, const LocateOptions& opts) {
  g.validate();
  if (f_5b.rank() != 3 || f_5c.rank() != 3) throw ShapeError("locate: feature maps must be C x H x W");
  if (f_5b.dim(1) != f_5c.dim(1) || f_5b.dim(2) != f_5c.dim(2))
    throw ShapeError("locate: feature maps differ in spatial size (" + shape_string(f_5b.dims()) + " vs " +
                     shape_string(f_5c.dims()) + ")");
  if (f_5c.dim(1) != static_cast<std::size_t>(g.map_size) || f_5c.dim(2) != static_cast<std::size_t>(g.map_size))
    throw ShapeError("locate: feature map is " + shape_string(f_5c.dims()) + ", geometry expects " +
                     std::to_string(g.map_size) + "x" + std::to_string(g.map_size));

  const BinaryMask coarse_c = binarize(channel_sum(f_5c));
  const BinaryMask coarse_b = binarize(channel_sum(f_5b));
  const BinaryMask component_c = largest_component(coarse_c, opts.connectivity);

  const BinaryMask& lhs = opts.order == IntersectOrder::component_first ? component_c : coarse_c;
  const BinaryMask joint = largest_component(intersect(lhs, coarse_b), opts.connectivity);

  if (!joint.none()) return grid_to_pixels(mask_bbox(joint), g);
  if (!component_c.none()) return grid_to_pixels(mask_bbox(component_c), g);
  return pixel_box(0, 0, g.input_size, g.input_size);
}

}  // namespace partloc
