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

#include "partloc/maps.hpp"

#include <algorithm>
#include <stdexcept>

namespace partloc {

ActivationMap::ActivationMap(int h, int w, std::vector<float> values)
    : h_(h), w_(w), values_(std::move(values)) {
  if (h < 1 || w < 1) throw std::invalid_argument("activation map must be at least 1x1");
  if (values_.size() != static_cast<std::size_t>(h) * w)
    throw std::invalid_argument("activation map size mismatch");
  double total = 0.0;
  for (float v : values_) total += v;
  mean_ = static_cast<float>(total / static_cast<double>(values_.size()));
}

BinaryMask::BinaryMask(int h, int w, std::vector<std::uint8_t> bits) : h_(h), w_(w), bits_(std::move(bits)) {
  if (bits_.size() != static_cast<std::size_t>(h) * w) throw std::invalid_argument("mask size mismatch");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

IntegralImage::IntegralImage(const ActivationMap& a) : IntegralImage(a.h(), a.w(), a.values()) {}

IntegralImage::IntegralImage(int h, int w, std::span<const float> values)
    : h_(h), w_(w), sums_(static_cast<std::size_t>(h + 1) * (w + 1), 0.0) {
  if (h < 1 || w < 1 || values.size() != static_cast<std::size_t>(h) * w)
    throw std::invalid_argument("integral image: bad map size");
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += values[static_cast<std::size_t>(y) * w + x];
      sums_[(y + 1) * stride + (x + 1)] = sums_[y * stride + (x + 1)] + row;
    }
  }
}

}  // namespace partloc
