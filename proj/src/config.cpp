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

#include "partloc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace partloc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class N>
N parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  N v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError(key + ": cannot parse '" + text + "' as a number");
  return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number<int>(key, item));
  }
  return out;
}

void set_key(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const std::string full = section + "." + key;
  auto& p = cfg.pipeline;
  if (section == "geometry") {
    if (key == "input_size") return void(p.geometry.input_size = parse_number<int>(full, value));
    if (key == "map_size") return void(p.geometry.map_size = parse_number<int>(full, value));
  } else if (section == "proposal") {
    if (key == "catalog") return void(p.proposals.catalog = parse_catalog(value));
    if (key == "n_per_category") {
      const auto n = parse_int_list(full, value);
      if (n.size() != 3) throw ConfigError(full + ": expected three comma-separated counts");
      p.proposals.n_per_category = {n[0], n[1], n[2]};
      return;
    }
    if (key == "nms_iou") return void(p.proposals.nms_iou = parse_number<double>(full, value));
  } else if (section == "locate") {
    if (key == "connectivity") {
      const int c = parse_number<int>(full, value);
      if (c != 4 && c != 8) throw ConfigError(full + ": must be 4 or 8");
      p.locate.connectivity = c == 4 ? Connectivity::four : Connectivity::eight;
      return;
    }
    if (key == "order") {
      const std::string v = trim(value);
      if (v == "component_first") return void(p.locate.order = IntersectOrder::component_first);
      if (v == "full_masks") return void(p.locate.order = IntersectOrder::full_masks);
      throw ConfigError(full + ": must be component_first or full_masks");
    }
  } else if (section == "optimizer") {
    if (key == "lr") return void(cfg.sgd.lr = parse_number<double>(full, value));
    if (key == "momentum") return void(cfg.sgd.momentum = parse_number<double>(full, value));
    if (key == "weight_decay") return void(cfg.sgd.weight_decay = parse_number<double>(full, value));
    if (key == "lr_decay") return void(cfg.sgd.lr_decay = parse_number<double>(full, value));
    if (key == "lr_decay_epochs") return void(cfg.sgd.decay_epochs = parse_int_list(full, value));
  } else if (section == "train") {
    if (key == "epochs") return void(cfg.epochs = parse_number<int>(full, value));
    if (key == "s_big") return void(p.s_big = parse_number<int>(full, value));
    if (key == "s_small") return void(p.s_small = parse_number<int>(full, value));
    if (key == "seed") return void(cfg.seed = parse_number<std::uint64_t>(full, value));
    if (key == "num_classes") return void(cfg.num_classes = parse_number<int>(full, value));
  } else {
    throw ConfigError("unknown section [" + section + "]");
  }
  throw ConfigError("unknown key '" + full + "'");
}

}  // namespace

std::vector<WindowSpec> parse_catalog(const std::string& text) {
  const std::string t = trim(text);
  if (t == "paper") return ProposalConfig::paper().catalog;
  if (t == "toy") return ProposalConfig::toy().catalog;
  std::vector<WindowSpec> out;
  std::istringstream ss(t);
  std::string item;
  while (ss >> item) {
    const auto x = item.find('x');
    const auto colon = item.find(':');
    if (x == std::string::npos || colon == std::string::npos || colon < x)
      throw ConfigError("proposal.catalog: entry '" + item + "' is not HxW:category");
    WindowSpec s;
    s.h = parse_number<int>("proposal.catalog", item.substr(0, x));
    s.w = parse_number<int>("proposal.catalog", item.substr(x + 1, colon - x - 1));
    s.category = parse_number<int>("proposal.catalog", item.substr(colon + 1));
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError("proposal.catalog: empty");
  return out;
}

void RunConfig::validate() const {
  try {
    pipeline.geometry.validate();
    pipeline.proposals.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& w : pipeline.proposals.catalog)
    if (w.h > pipeline.geometry.map_size || w.w > pipeline.geometry.map_size)
      throw ConfigError("proposal.catalog: window " + std::to_string(w.h) + "x" + std::to_string(w.w) +
                        " exceeds map_size " + std::to_string(pipeline.geometry.map_size));
  if (pipeline.s_big < 1 || pipeline.s_small < 1) throw ConfigError("train.s_big and train.s_small must be positive");
  if (!(sgd.lr > 0.0) || !std::isfinite(sgd.lr)) throw ConfigError("optimizer.lr must be positive");
  if (!(sgd.momentum >= 0.0 && sgd.momentum < 1.0)) throw ConfigError("optimizer.momentum must be in [0,1)");
  if (!(sgd.weight_decay >= 0.0)) throw ConfigError("optimizer.weight_decay must be >= 0");
  if (!(sgd.lr_decay > 0.0 && sgd.lr_decay <= 1.0)) throw ConfigError("optimizer.lr_decay must be in (0,1]");
  for (int e : sgd.decay_epochs)
    if (e < 0) throw ConfigError("optimizer.lr_decay_epochs must be >= 0");
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (num_classes < 1) throw ConfigError("train.num_classes must be >= 1");
}

RunConfig RunConfig::toy() {
  RunConfig c;
  c.profile = "toy";
  c.pipeline = PipelineConfig::toy();
  c.sgd.lr = 1e-3;
  c.sgd.momentum = 0.9;
  c.sgd.weight_decay = 1e-4;
  c.sgd.lr_decay = 0.1;
  c.sgd.decay_epochs = {20};
  c.epochs = 30;
  c.seed = 7;
  c.num_classes = 4;
  return c;
}

RunConfig RunConfig::paper() {
  RunConfig c;
  c.profile = "paper";
  c.pipeline = PipelineConfig::paper();
  c.sgd.lr = 1e-3;
  c.sgd.momentum = 0.9;
  c.sgd.weight_decay = 1e-4;
  c.sgd.lr_decay = 0.1;
  c.sgd.decay_epochs = {60};
  c.epochs = 80;
  c.seed = 7;
  c.num_classes = 200;
  return c;
}

RunConfig RunConfig::from_profile(const std::string& name) {
  if (name == "toy") return toy();
  if (name == "paper") return paper();
  throw ConfigError("unknown profile '" + name + "' (expected toy or paper)");
}

RunConfig parse_config(const std::string& text, const std::string& fallback_profile) {
  struct Entry {
    std::string section, key, value;
    int line;
  };
  std::vector<Entry> entries;
  std::string profile = fallback_profile;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      if (key != "profile") throw ConfigError("line " + std::to_string(line_no) + ": unknown top-level key '" + key + "'");
      profile = value;
      continue;
    }
    entries.push_back({section, key, value, line_no});
  }

  RunConfig cfg = RunConfig::from_profile(profile);
  for (const auto& e : entries) {
    try {
      set_key(cfg, e.section, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::string& fallback_profile) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), fallback_profile);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override '" + assignment + "' is not section.key=value");
  set_key(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
          trim(assignment.substr(eq + 1)));
}

}  // namespace partloc
