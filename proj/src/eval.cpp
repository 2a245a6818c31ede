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

#include "partloc/eval.hpp"

#include <stdexcept>

namespace partloc {

double iou(const BBox& a, const BBox& b) {
  if (a.frame != b.frame) throw std::invalid_argument("iou: boxes are in different frames");
  if (a.empty() || b.empty()) throw std::invalid_argument("iou: empty box");
  const std::int64_t inter = intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double pcp(const std::vector<LocalizationRecord>& records, double threshold) {
  if (records.empty()) throw std::invalid_argument("pcp: no records");
  std::size_t hits = 0;
  for (const auto& r : records)
    if (iou(r.pred, r.gt) > threshold) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(records.size());
}

double accuracy(const std::vector<int>& preds, const std::vector<int>& gts) {
  if (preds.size() != gts.size()) throw std::invalid_argument("accuracy: length mismatch");
  if (preds.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == gts[i]) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace partloc
