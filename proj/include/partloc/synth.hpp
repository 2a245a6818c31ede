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
#include <filesystem>
#include <string>
#include <vector>

#include "partloc/bbox.hpp"
#include "partloc/tensor.hpp"

namespace partloc {

enum class BlobClass { square = 0, disc = 1, cross = 2, stripe = 3 };
inline constexpr int kNumBlobClasses = 4;

struct SynthSample {
  Tensor image;  // 3 x S x S, values in [0,1]
  int label = 0;
  BBox gt_box;   // pixel frame, tight around every non-background pixel
  std::uint64_t seed = 0;
};

struct SynthSplit {
  std::vector<SynthSample> samples;
};

struct SynthDataset {
  SynthSplit train;
  SynthSplit test;
};

/// One blob on a constant background, fully determined by (seed, label, s).
SynthSample render_sample(std::uint64_t seed, int label, int s);

/// Labels cycle 0,1,2,3 so every class gets n/4 samples (n divisible by 4).
/// Throws std::invalid_argument for n < 1 or s not a positive multiple of 4.
SynthDataset gen_dataset(std::uint64_t seed, int n_train, int n_test, int s);

/// `<dir>/images/NNN.tnsr`, `<dir>/labels.csv`, `<dir>/boxes.csv`.
void write_split(const SynthSplit& split, const std::filesystem::path& dir);
SynthSplit read_split(const std::filesystem::path& dir);
/// Writes `<dir>/train` and `<dir>/test`.
void write_dataset(const SynthDataset& ds, const std::filesystem::path& dir);

std::string sample_id(std::size_t index, std::size_t count);

struct PlantedRegion {
  BBox box;  // grid frame
  float hot_value = 1.0f;
};

struct PlantedFeatureMaps {
  Tensor f_5b;
  Tensor f_5c;
  BBox planted_box;
  float hot_value = 1.0f;
  float base_value = 0.0f;
  float noise_sigma = 0.0f;
};

/// Both maps are base_value everywhere and hot_value inside `box` on every
/// channel, plus independent Gaussian noise per map when sigma > 0.
PlantedFeatureMaps plant(std::uint64_t seed, int c, int h, int w, const BBox& box, float noise_sigma);

/// Several hot regions with their own values (regions must not overlap).
PlantedFeatureMaps plant_regions(std::uint64_t seed, int c, int h, int w, const std::vector<PlantedRegion>& regions,
                                 float noise_sigma);

}  // namespace partloc
