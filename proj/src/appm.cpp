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

#include "partloc/appm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "partloc/eval.hpp"

namespace partloc {

void ProposalConfig::validate() const {
  if (catalog.empty()) throw std::invalid_argument("proposal catalog is empty");
  for (const auto& s : catalog) {
    if (s.h < 1 || s.w < 1) throw std::invalid_argument("window sizes must be >= 1");
    if (s.category < 1 || s.category > kNumCategories)
      throw std::invalid_argument("window category must be 1, 2 or 3");
  }
  for (int n : n_per_category)
    if (n < 0) throw std::invalid_argument("per-category counts must be >= 0");
  if (!(nms_iou >= 0.0 && nms_iou < 1.0)) throw std::invalid_argument("nms_iou must be in [0,1)");
}

ProposalConfig ProposalConfig::paper() {
  ProposalConfig c;
  c.catalog = {{4, 4, 1}, {3, 5, 1}, {6, 6, 2}, {5, 7, 2}, {8, 8, 3}, {6, 10, 3}, {7, 9, 3}, {7, 10, 3}};
  c.n_per_category = {2, 3, 2};
  return c;
}

ProposalConfig ProposalConfig::toy() {
  ProposalConfig c;
  c.catalog = {{2, 2, 1}, {3, 3, 2}, {4, 4, 3}};
  c.n_per_category = {2, 3, 2};
  return c;
}

std::vector<ScoredWindow> score_windows(const ActivationMap& a, const std::vector<WindowSpec>& catalog) {
  for (const auto& s : catalog)
    if (s.h < 1 || s.w < 1 || s.h > a.h() || s.w > a.w())
      throw std::invalid_argument("window " + std::to_string(s.h) + "x" + std::to_string(s.w) +
                                  " does not fit a " + std::to_string(a.h()) + "x" + std::to_string(a.w()) + " map");

  const IntegralImage sat(a);
  const int n_specs = static_cast<int>(catalog.size());
  std::vector<std::vector<ScoredWindow>> per_spec(catalog.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_specs; ++i) {
    const WindowSpec s = catalog[i];
    const double inv_area = 1.0 / (static_cast<double>(s.h) * s.w);
    auto& out = per_spec[i];
    out.reserve(static_cast<std::size_t>(a.h() - s.h + 1) * (a.w() - s.w + 1));
    for (int y = 0; y + s.h <= a.h(); ++y)
      for (int x = 0; x + s.w <= a.w(); ++x)
        out.push_back({i, s, y, x, sat.rect_sum(y, x, y + s.h, x + s.w) * inv_area});
  }

  std::vector<ScoredWindow> all;
  for (auto& v : per_spec) all.insert(all.end(), v.begin(), v.end());
  return all;
}

std::vector<PartProposal> nms_select(const std::vector<ScoredWindow>& windows, const ProposalConfig& config) {
  std::vector<PartProposal> out;
  for (int cat = 1; cat <= kNumCategories; ++cat) {
    const int want = config.n_per_category[cat - 1];
    if (want <= 0) continue;

    std::vector<const ScoredWindow*> pool;
    for (const auto& w : windows)
      if (w.spec.category == cat) pool.push_back(&w);
    std::sort(pool.begin(), pool.end(), [](const ScoredWindow* a, const ScoredWindow* b) {
      if (a->score != b->score) return a->score > b->score;
      if (a->y != b->y) return a->y < b->y;
      if (a->x != b->x) return a->x < b->x;
      return a->spec_index < b->spec_index;
    });

    std::vector<BBox> kept;
    for (const ScoredWindow* w : pool) {
      if (static_cast<int>(kept.size()) == want) break;
      const BBox box = w->grid_box();
      const bool clear = std::all_of(kept.begin(), kept.end(),
                                     [&](const BBox& k) { return iou(box, k) < config.nms_iou; });
      if (!clear) continue;
      PartProposal p;
      p.grid = box;
      p.category = cat;
      p.rank = static_cast<int>(kept.size());
      p.score = w->score;
      p.spec_index = w->spec_index;
      out.push_back(p);
      kept.push_back(box);
    }
  }
  return out;
}

std::vector<PartProposal> propose(const Tensor& f_obj, const GridGeometry& g, const ProposalConfig& config) {
  g.validate();
  config.validate();
  const ActivationMap a = channel_sum(f_obj);
  if (a.h() != g.map_size || a.w() != g.map_size)
    throw ShapeError("propose: feature map is " + shape_string(f_obj.dims()) + ", geometry expects " +
                     std::to_string(g.map_size) + "x" + std::to_string(g.map_size));
  auto proposals = nms_select(score_windows(a, config.catalog), config);
  for (auto& p : proposals) p.pixel = clip(grid_to_pixels(p.grid, g), g.input_size, g.input_size);
  return proposals;
}

}  // namespace partloc
