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

#include "partloc/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "partloc/csv_io.hpp"
#include "partloc/rng.hpp"
#include "partloc/tnsr_io.hpp"

namespace partloc {
namespace {

// splitmix64 finalizer; decorrelates per-sample seeds.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Dominant channel of each class tint is >= 0.8, backgrounds stay <= 0.25, and
// texture only dims a blob to 60%, so every blob pixel differs from the
// background by at least 0.23 in some channel.
constexpr std::array<std::array<double, 3>, kNumBlobClasses> kTints{{
    {0.95, 0.35, 0.25},
    {0.30, 0.90, 0.35},
    {0.30, 0.45, 0.95},
    {0.90, 0.85, 0.25},
}};

}  // namespace

SynthSample render_sample(std::uint64_t seed, int label, int s) {
  if (label < 0 || label >= kNumBlobClasses) throw std::invalid_argument("render_sample: bad label");
  if (s < 16) throw std::invalid_argument("render_sample: image too small");
  Rng rng(seed);

  std::array<float, 3> bg{};
  for (auto& v : bg) v = static_cast<float>(rng.uniform(0.05, 0.25));
  std::array<float, 3> fg{};
  for (int c = 0; c < 3; ++c)
    fg[c] = static_cast<float>(std::clamp(kTints[label][c] + rng.uniform(-0.05, 0.05), 0.0, 1.0));

  const int extent = rng.uniform_int(static_cast<int>(s * 0.30), static_cast<int>(s * 0.55));
  const int ox = rng.uniform_int(1, s - 1 - extent);
  const int oy = rng.uniform_int(1, s - 1 - extent);
  const bool vertical = rng.uniform() < 0.5;
  const double half = extent / 2.0;

  SynthSample out;
  out.seed = seed;
  out.label = label;
  out.image = Tensor({3, static_cast<std::size_t>(s), static_cast<std::size_t>(s)});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x) out.image.at(c, y, x) = bg[c];

  BBox tight{s, s, -1, -1, Frame::pixel};
  for (int v = 0; v < extent; ++v) {
    for (int u = 0; u < extent; ++u) {
      const double du = u + 0.5 - half, dv = v + 0.5 - half;
      bool inside = false;
      float shade = 1.0f;
      switch (static_cast<BlobClass>(label)) {
        case BlobClass::square:
          inside = true;
          shade = ((u / 4 + v / 4) % 2 == 0) ? 1.0f : 0.8f;
          break;
        case BlobClass::disc: {
          const double r = std::sqrt(du * du + dv * dv);
          inside = r <= half;
          shade = (static_cast<int>(r / 3.0) % 2 == 0) ? 1.0f : 0.75f;
          break;
        }
        case BlobClass::cross:
          inside = std::abs(du) <= extent / 6.0 || std::abs(dv) <= extent / 6.0;
          break;
        case BlobClass::stripe: {
          const double across = vertical ? du : dv;
          inside = std::abs(across) <= extent / 5.0;
          shade = (((u + v) / 4) % 2 == 0) ? 1.0f : 0.6f;
          break;
        }
      }
      if (!inside) continue;
      const int x = ox + u, y = oy + v;
      for (int c = 0; c < 3; ++c) out.image.at(c, y, x) = fg[c] * shade;
      tight.x0 = std::min(tight.x0, x);
      tight.y0 = std::min(tight.y0, y);
      tight.x1 = std::max(tight.x1, x + 1);
      tight.y1 = std::max(tight.y1, y + 1);
    }
  }
  out.gt_box = tight;
  return out;
}

SynthDataset gen_dataset(std::uint64_t seed, int n_train, int n_test, int s) {
  if (n_train < 1 || n_test < 1) throw std::invalid_argument("gen_dataset: split sizes must be >= 1");
  if (s < 16 || s % 4 != 0) throw std::invalid_argument("gen_dataset: image size must be a multiple of 4, >= 16");
  SynthDataset ds;
  auto fill = [&](SynthSplit& split, int n, std::uint64_t stream) {
    split.samples.reserve(n);
    for (int i = 0; i < n; ++i)
      split.samples.push_back(
          render_sample(mix(seed ^ mix(stream + static_cast<std::uint64_t>(i))), i % kNumBlobClasses, s));
  };
  fill(ds.train, n_train, 0);
  fill(ds.test, n_test, 1ull << 32);
  return ds;
}

std::string sample_id(std::size_t index, std::size_t count) {
  std::size_t width = 3;
  for (std::size_t n = count > 0 ? count - 1 : 0; n >= 1000; n /= 10) ++width;
  std::string s = std::to_string(index);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

void write_split(const SynthSplit& split, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  std::vector<LabelRow> labels;
  std::vector<BoxRow> boxes;
  for (std::size_t i = 0; i < split.samples.size(); ++i) {
    const auto& smp = split.samples[i];
    const std::string id = sample_id(i, split.samples.size());
    write_tensor(smp.image, dir / "images" / (id + ".tnsr"));
    labels.push_back({id, smp.label});
    boxes.push_back({id, smp.gt_box});
  }
  write_labels_csv(labels, dir / "labels.csv");
  write_boxes_csv(boxes, dir / "boxes.csv");
}

SynthSplit read_split(const std::filesystem::path& dir) {
  const auto labels = read_labels_csv(dir / "labels.csv");
  const auto boxes = read_boxes_csv(dir / "boxes.csv");
  if (labels.size() != boxes.size()) throw CsvError(dir.string() + ": labels.csv and boxes.csv differ in length");
  SynthSplit split;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].id != boxes[i].id) throw CsvError(dir.string() + ": id mismatch at row " + std::to_string(i + 1));
    SynthSample smp;
    smp.image = read_tensor(dir / "images" / (labels[i].id + ".tnsr"));
    smp.label = labels[i].label;
    smp.gt_box = boxes[i].box;
    split.samples.push_back(std::move(smp));
  }
  return split;
}

void write_dataset(const SynthDataset& ds, const std::filesystem::path& dir) {
  write_split(ds.train, dir / "train");
  write_split(ds.test, dir / "test");
}

PlantedFeatureMaps plant_regions(std::uint64_t seed, int c, int h, int w, const std::vector<PlantedRegion>& regions,
                                 float noise_sigma) {
  if (c < 1 || h < 1 || w < 1) throw std::invalid_argument("plant: sizes must be positive");
  if (regions.empty()) throw std::invalid_argument("plant: no regions");
  for (const auto& r : regions)
    if (r.box.empty() || r.box.x0 < 0 || r.box.y0 < 0 || r.box.x1 > w || r.box.y1 > h)
      throw std::invalid_argument("plant: box must be non-empty and inside the grid");

  PlantedFeatureMaps out;
  out.planted_box = regions.front().box;
  out.planted_box.frame = Frame::grid;
  out.hot_value = regions.front().hot_value;
  out.noise_sigma = noise_sigma;

  const std::vector<std::size_t> dims{static_cast<std::size_t>(c), static_cast<std::size_t>(h),
                                      static_cast<std::size_t>(w)};
  Tensor clean(dims, out.base_value);
  for (int ch = 0; ch < c; ++ch)
    for (const auto& r : regions)
      for (int y = r.box.y0; y < r.box.y1; ++y)
        for (int x = r.box.x0; x < r.box.x1; ++x) clean.at(ch, y, x) = r.hot_value;

  Rng rng(seed);
  auto noisy = [&]() {
    Tensor t = clean;
    if (noise_sigma > 0.0f)
      for (auto& v : t.data()) v += static_cast<float>(noise_sigma * rng.normal());
    return t;
  };
  out.f_5b = noisy();
  out.f_5c = noisy();
  return out;
}

PlantedFeatureMaps plant(std::uint64_t seed, int c, int h, int w, const BBox& box, float noise_sigma) {
  return plant_regions(seed, c, h, w, {{box, 1.0f}}, noise_sigma);
}

}  // namespace partloc
