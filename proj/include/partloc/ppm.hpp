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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "partloc/bbox.hpp"
#include "partloc/tensor.hpp"

namespace partloc {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kOrange{255, 165, 0};
inline constexpr Rgb kYellow{255, 255, 0};
inline constexpr Rgb kGreen{0, 255, 0};

/// Outline color for a part of the given rank: red, orange, yellow, then
/// green for rank 3 and beyond.
Rgb rank_color(int rank);

/// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

  Rgb get(int x, int y) const;
  void set(int x, int y, Rgb c);
  bool operator==(const RgbImage&) const = default;
};

/// 3 x H x W (or 1 x H x W, replicated) in [0,1] -> bytes, round(clamp(v)*255).
RgbImage to_rgb(const Tensor& img);

/// Binary P6 with maxval 255.
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

/// Outline drawn inside the box edges. The box is clipped to the image first;
/// returns false when clipping changed it (nothing drawn if it became empty).
bool draw_outline(RgbImage& img, const BBox& box, Rgb color, int thickness = 2);

}  // namespace partloc
