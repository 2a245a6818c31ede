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

#include <string>
#include <vector>

#include "partloc/bbox.hpp"

namespace partloc {

/// Intersection over union in exact integer areas; 0 for disjoint boxes.
/// Throws std::invalid_argument on a frame mismatch or an empty box.
double iou(const BBox& a, const BBox& b);

struct LocalizationRecord {
  std::string id;
  BBox pred;
  BBox gt;
};

/// Percentage of records whose IoU is strictly above `threshold`.
double pcp(const std::vector<LocalizationRecord>& records, double threshold = 0.5);

/// Percentage of positions where preds[i] == gts[i].
double accuracy(const std::vector<int>& preds, const std::vector<int>& gts);

}  // namespace partloc
