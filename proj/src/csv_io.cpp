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

#include "partloc/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace partloc {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
    std::size_t start = field.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string{} : field.substr(start));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class N>
N parse_field(const std::string& s, const std::filesystem::path& path, std::size_t line_no) {
  N v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw CsvError(path.string() + ":" + std::to_string(line_no) + ": cannot parse '" + s + "'");
  return v;
}

// Calls row(fields, line_no) for every non-empty line after the header.
template <class F>
void for_each_row(const std::filesystem::path& path, const std::string& header, std::size_t n_fields, F&& row) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      seen_header = true;
      if (line != header) throw CsvError(path.string() + ": expected header '" + header + "'");
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != n_fields)
      throw CsvError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(n_fields) +
                     " fields, got " + std::to_string(fields.size()));
    row(fields, line_no);
  }
  if (!seen_header) throw CsvError(path.string() + ": missing header '" + header + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write error on " + path.string());
}

std::vector<BoxRow> read_boxes_csv(const std::filesystem::path& path) {
  std::vector<BoxRow> rows;
  for_each_row(path, "id,x0,y0,x1,y1", 5, [&](const std::vector<std::string>& f, std::size_t ln) {
    BoxRow r;
    r.id = f[0];
    r.box = pixel_box(parse_field<int>(f[1], path, ln), parse_field<int>(f[2], path, ln),
                      parse_field<int>(f[3], path, ln), parse_field<int>(f[4], path, ln));
    rows.push_back(r);
  });
  return rows;
}

void write_boxes_csv(const std::vector<BoxRow>& rows, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "id,x0,y0,x1,y1\n";
  for (const auto& r : rows) os << r.id << ',' << r.box.x0 << ',' << r.box.y0 << ',' << r.box.x1 << ',' << r.box.y1 << '\n';
  write_text_file(path, os.str());
}

std::vector<LabelRow> read_labels_csv(const std::filesystem::path& path) {
  std::vector<LabelRow> rows;
  for_each_row(path, "id,label", 2, [&](const std::vector<std::string>& f, std::size_t ln) {
    rows.push_back({f[0], parse_field<int>(f[1], path, ln)});
  });
  return rows;
}

void write_labels_csv(const std::vector<LabelRow>& rows, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "id,label\n";
  for (const auto& r : rows) os << r.id << ',' << r.label << '\n';
  write_text_file(path, os.str());
}

std::string format_proposals_csv(const std::vector<PartProposal>& proposals) {
  std::ostringstream os;
  os << "category,rank,score,x0,y0,x1,y1\n";
  for (const auto& p : proposals)
    os << p.category << ',' << p.rank << ',' << format_number(p.score) << ',' << p.pixel.x0 << ',' << p.pixel.y0
       << ',' << p.pixel.x1 << ',' << p.pixel.y1 << '\n';
  return os.str();
}

std::vector<PartProposal> read_proposals_csv(const std::filesystem::path& path) {
  std::vector<PartProposal> out;
  for_each_row(path, "category,rank,score,x0,y0,x1,y1", 7, [&](const std::vector<std::string>& f, std::size_t ln) {
    PartProposal p;
    p.category = parse_field<int>(f[0], path, ln);
    p.rank = parse_field<int>(f[1], path, ln);
    p.score = parse_field<double>(f[2], path, ln);
    p.pixel = pixel_box(parse_field<int>(f[3], path, ln), parse_field<int>(f[4], path, ln),
                        parse_field<int>(f[5], path, ln), parse_field<int>(f[6], path, ln));
    out.push_back(p);
  });
  return out;
}

}  // namespace partloc
