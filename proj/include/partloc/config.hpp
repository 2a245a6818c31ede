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

// Run configuration: built-in `toy` / `paper` profiles overridden by a
// line-based `key = value` file with `[section]` headers.
//
//   profile = toy                      # top level, before any section
//   [geometry]   input_size, map_size
//   [proposal]   catalog (toy | paper | "HxW:cat HxW:cat ..."),
//                n_per_category ("2,3,2"), nms_iou
//   [locate]     connectivity (4 | 8), order (component_first | full_masks)
//   [optimizer]  lr, momentum, weight_decay, lr_decay, lr_decay_epochs ("20,40")
//   [train]      epochs, s_big, s_small, seed, num_classes
//
// Unknown sections or keys are errors.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "partloc/pipeline.hpp"
#include "partloc/toynet.hpp"

namespace partloc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string profile = "toy";
  PipelineConfig pipeline;
  SgdConfig sgd;
  int epochs = 30;
  std::uint64_t seed = 7;
  int num_classes = 4;

  /// Range checks on every field; throws ConfigError.
  void validate() const;

  static RunConfig toy();
  static RunConfig paper();
  /// Throws ConfigError for an unknown profile name.
  static RunConfig from_profile(const std::string& name);
};

/// Parse config text; `profile` (if present) selects the starting profile,
/// defaulting to `fallback_profile`. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& fallback_profile = "toy");
RunConfig load_config(const std::filesystem::path& path, const std::string& fallback_profile = "toy");

/// Apply one `section.key=value` override. Throws ConfigError.
void apply_override(RunConfig& cfg, const std::string& assignment);

std::vector<WindowSpec> parse_catalog(const std::string& text);

}  // namespace partloc
