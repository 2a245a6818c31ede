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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "partloc/appm.hpp"
#include "partloc/bbox.hpp"

namespace partloc {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoxRow {
  std::string id;
  BBox box;  // pixel frame
};

struct LabelRow {
  std::string id;
  int label = 0;
};

/// `id,x0,y0,x1,y1` with a header line.
std::vector<BoxRow> read_boxes_csv(const std::filesystem::path& path);
void write_boxes_csv(const std::vector<BoxRow>& rows, const std::filesystem::path& path);

/// `id,label` with a header line.
std::vector<LabelRow> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::vector<LabelRow>& rows, const std::filesystem::path& path);

/// `category,rank,score,x0,y0,x1,y1` (pixel boxes) with a header line.
std::string format_proposals_csv(const std::vector<PartProposal>& proposals);
std::vector<PartProposal> read_proposals_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal, always with a fractional part ("100.0").
std::string format_number(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace partloc
