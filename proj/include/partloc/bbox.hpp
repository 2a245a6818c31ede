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

#include <algorithm>
#include <cstdint>
#include <ostream>

namespace partloc {

enum class Frame { grid, pixel };

/// Half-open rectangle [x0,x1) x [y0,y1).
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  Frame frame = Frame::pixel;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  std::int64_t area() const {
    return empty() ? 0 : std::int64_t{width()} * std::int64_t{height()};
  }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

  bool operator==(const BBox&) const = default;
};

inline BBox grid_box(int x0, int y0, int x1, int y1) { return {x0, y0, x1, y1, Frame::grid}; }
inline BBox pixel_box(int x0, int y0, int x1, int y1) { return {x0, y0, x1, y1, Frame::pixel}; }

inline std::int64_t intersection_area(const BBox& a, const BBox& b) {
  const std::int64_t w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const std::int64_t h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0 && h > 0) ? w * h : 0;
}

/// Clip to [0,width) x [0,height); may return an empty box.
inline BBox clip(BBox b, int width, int height) {
  b.x0 = std::clamp(b.x0, 0, width);
  b.x1 = std::clamp(b.x1, 0, width);
  b.y0 = std::clamp(b.y0, 0, height);
  b.y1 = std::clamp(b.y1, 0, height);
  return b;
}

inline std::ostream& operator<<(std::ostream& os, const BBox& b) {
  return os << '(' << b.x0 << ',' << b.y0 << ',' << b.x1 << ',' << b.y1
            << (b.frame == Frame::grid ? " grid)" : " px)");
}

}  // namespace partloc
