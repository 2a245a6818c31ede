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

#include "partloc/ppm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace partloc {

Rgb rank_color(int rank) {
  switch (rank) {
    case 0: return kRed;
    case 1: return kOrange;
    case 2: return kYellow;
    default: return kGreen;
  }
}

Rgb RgbImage::get(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RgbImage::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = c[0];
  pixels[i + 1] = c[1];
  pixels[i + 2] = c[2];
}

RgbImage to_rgb(const Tensor& img) {
  if (img.rank() != 3 || (img.dim(0) != 3 && img.dim(0) != 1))
    throw std::invalid_argument("to_rgb: expected 3 x H x W or 1 x H x W, got " + shape_string(img.dims()));
  const int h = static_cast<int>(img.dim(1)), w = static_cast<int>(img.dim(2));
  RgbImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Rgb px{};
      for (int c = 0; c < 3; ++c) {
        const float v = img.at(img.dim(0) == 3 ? c : 0, y, x);
        const float clamped = std::isnan(v) ? 0.f : std::clamp(v, 0.f, 1.f);
        px[c] = static_cast<std::uint8_t>(std::lround(clamped * 255.f));
      }
      out.set(x, y, px);
    }
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_ppm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write error on " + path.string());
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto token = [&] {
    skip_space();
    std::string t;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) t += bytes[pos++];
    return t;
  };

  if (token() != "P6") throw std::runtime_error(path.string() + ": not a binary PPM (P6)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": malformed PPM header");
  }
  if (w < 1 || h < 1 || maxval != 255) throw std::runtime_error(path.string() + ": only 8-bit P6 is supported");
  ++pos;  // single whitespace before the raster
  RgbImage img(w, h);
  if (bytes.size() < pos + img.pixels.size()) throw std::runtime_error(path.string() + ": truncated PPM raster");
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), img.pixels.size(), img.pixels.begin());
  return img;
}

bool draw_outline(RgbImage& img, const BBox& box, Rgb color, int thickness) {
  const BBox b = clip(box, img.width, img.height);
  const bool unchanged = b == box;
  if (b.empty()) return false;
  for (int y = b.y0; y < b.y1; ++y)
    for (int x = b.x0; x < b.x1; ++x) {
      const bool edge = x < b.x0 + thickness || x >= b.x1 - thickness || y < b.y0 + thickness || y >= b.y1 - thickness;
      if (edge) img.set(x, y, color);
    }
  return unchanged;
}

}  // namespace partloc
