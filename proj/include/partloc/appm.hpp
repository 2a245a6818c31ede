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

// Part proposals: score every placement of every catalog window by its mean
// activation, then pick a fixed number of low-overlap windows per scale
// category with greedy NMS.

#include <array>
#include <vector>

#include "partloc/aolm.hpp"
#include "partloc/bbox.hpp"
#include "partloc/maps.hpp"
#include "partloc/tensor.hpp"

namespace partloc {

inline constexpr int kNumCategories = 3;

/// Window size in grid cells; category is 1, 2 or 3.
struct WindowSpec {
  int h = 1;
  int w = 1;
  int category = 1;

  bool operator==(const WindowSpec&) const = default;
};

struct ScoredWindow {
  int spec_index = 0;
  WindowSpec spec;
  int y = 0;
  int x = 0;
  double score = 0.0;

  BBox grid_box() const { return partloc::grid_box(x, y, x + spec.w, y + spec.h); }
};

struct ProposalConfig {
  std::vector<WindowSpec> catalog;
  std::array<int, kNumCategories> n_per_category{2, 3, 2};
  double nms_iou = 0.25;

  int total() const { return n_per_category[0] + n_per_category[1] + n_per_category[2]; }
  /// Throws std::invalid_argument on an empty catalog, bad categories,
  /// negative counts or a threshold outside [0,1).
  void validate() const;

  /// {[4x4, 3x5], [6x6, 5x7], [8x8, 6x10, 7x9, 7x10]} with N = (2,3,2), for 14x14 maps.
  static ProposalConfig paper();
  /// {[2x2], [3x3], [4x4]} with N = (2,3,2), for 8x8 maps.
  static ProposalConfig toy();
};

struct PartProposal {
  BBox grid;
  BBox pixel;
  int category = 1;
  int rank = 0;
  double score = 0.0;
  int spec_index = 0;
};

/// Every placement of every spec, in (spec index, y, x) order, scored with an
/// integral image. Throws std::invalid_argument if a spec does not fit.
std::vector<ScoredWindow> score_windows(const ActivationMap& a, const std::vector<WindowSpec>& catalog);

/// Per category: sort by score descending (ties by y, x, spec index), accept
/// a window only if its IoU with every accepted window of that category is
/// below the threshold, stop at N_c. Output is ordered by (category, rank);
/// pixel boxes are left unset.
std::vector<PartProposal> nms_select(const std::vector<ScoredWindow>& windows, const ProposalConfig& config);

/// Full pipeline on the object image's last-block feature map. Pixel boxes
/// are clamped to the object image.
std::vector<PartProposal> propose(const Tensor& f_obj, const GridGeometry& g, const ProposalConfig& config);

}  // namespace partloc
