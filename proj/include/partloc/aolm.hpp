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

// Object localization from the last two feature blocks: aggregate channels,
// threshold at the map mean, keep the largest connected region, intersect
// the two layers' masks and bound the result.

#include <stdexcept>

#include "partloc/bbox.hpp"
#include "partloc/maps.hpp"
#include "partloc/tensor.hpp"

namespace partloc {

/// Input image size in pixels and feature-map size in cells (square).
struct GridGeometry {
  int input_size = 448;
  int map_size = 14;

  int stride() const { return input_size / map_size; }
  /// Throws std::invalid_argument unless stride * map_size == input_size.
  void validate() const;
};

enum class Connectivity { four = 4, eight = 8 };

enum class IntersectOrder {
  /// largest_component(M5c) AND M5b, then largest component of the result
  component_first,
  /// M5c AND M5b on the full masks, then largest component
  full_masks,
};

struct LocateOptions {
  Connectivity connectivity = Connectivity::eight;
  IntersectOrder order = IntersectOrder::component_first;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sum over channels of a C x H x W tensor; the mean is cached on the map.
ActivationMap channel_sum(const Tensor& f);

/// 1 where the value strictly exceeds the map mean.
BinaryMask binarize(const ActivationMap& a);

/// Keep the largest connected component of set cells. Equal sizes resolve to
/// the component whose first cell in raster order comes first.
BinaryMask largest_component(const BinaryMask& m, Connectivity conn = Connectivity::eight);

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b);

/// Tightest grid box covering all set cells. Throws std::invalid_argument on
/// an empty mask.
BBox mask_bbox(const BinaryMask& m);

BBox grid_to_pixels(const BBox& grid, const GridGeometry& g);

/// Pixel-frame object box from the second-to-last (f_5b) and last (f_5c)
/// block feature maps. Empty intersection falls back to the last block's
/// component, and an all-zero mask there falls back to the full image.
BBox locate(const Tensor& f_5b, const Tensor& f_5c, const GridGeometry& g, const LocateOptions& opts = {});

}  // namespace partloc
