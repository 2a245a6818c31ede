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

#include <cstdint>
#include <span>
#include <vector>

#include "partloc/bbox.hpp"

namespace partloc {

/// Channel-aggregated activation map with its cached arithmetic mean.
class ActivationMap {
 public:
  ActivationMap(int h, int w, std::vector<float> values);

  int h() const { return h_; }
  int w() const { return w_; }
  float mean() const { return mean_; }
  float at(int y, int x) const { return values_[static_cast<std::size_t>(y) * w_ + x]; }
  std::span<const float> values() const { return values_; }

 private:
  int h_;
  int w_;
  std::vector<float> values_;
  float mean_;
};

/// H x W mask whose elements are exactly 0 or 1.
class BinaryMask {
 public:
  BinaryMask(int h, int w) : h_(h), w_(w), bits_(static_cast<std::size_t>(h) * w, 0) {}
  BinaryMask(int h, int w, std::vector<std::uint8_t> bits);

  int h() const { return h_; }
  int w() const { return w_; }
  bool at(int y, int x) const { return bits_[static_cast<std::size_t>(y) * w_ + x] != 0; }
  void set(int y, int x, bool v) { bits_[static_cast<std::size_t>(y) * w_ + x] = v ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t count() const;
  bool none() const { return count() == 0; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int h_;
  int w_;
  std::vector<std::uint8_t> bits_;
};

/// Summed-area table in double: S[y][x] = sum of A over [0,y) x [0,x).
class IntegralImage {
 public:
  explicit IntegralImage(const ActivationMap& a);
  IntegralImage(int h, int w, std::span<const float> values);

  int h() const { return h_; }
  int w() const { return w_; }
  double at(int y, int x) const { return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

  /// Sum over [y0,y1) x [x0,x1).
  double rect_sum(int y0, int x0, int y1, int x1) const {
    return at(y1, x1) - at(y0, x1) - at(y1, x0) + at(y0, x0);
  }
  double rect_sum(const BBox& b) const { return rect_sum(b.y0, b.x0, b.y1, b.x1); }

 private:
  int h_;
  int w_;
  std::vector<double> sums_;
};

inline IntegralImage integral(const ActivationMap& a) { return IntegralImage(a); }

}  // namespace partloc
