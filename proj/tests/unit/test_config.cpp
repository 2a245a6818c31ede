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

#include <doctest.h>

#include "partloc/config.hpp"

using namespace partloc;

TEST_CASE("built-in profiles") {
  const RunConfig toy = RunConfig::toy();
  CHECK_NOTHROW(toy.validate());
  CHECK(toy.pipeline.geometry.input_size == 64);
  CHECK(toy.pipeline.geometry.map_size == 8);
  CHECK(toy.pipeline.s_small == 32);
  CHECK(toy.pipeline.proposals.total() == 7);
  CHECK(toy.epochs == 30);

  const RunConfig paper = RunConfig::paper();
  CHECK_NOTHROW(paper.validate());
  CHECK(paper.pipeline.geometry.input_size == 448);
  CHECK(paper.pipeline.geometry.map_size == 14);
  CHECK(paper.pipeline.s_big == 448);
  CHECK(paper.pipeline.s_small == 224);
  CHECK(paper.pipeline.proposals.catalog.size() == 8);
  CHECK(paper.pipeline.proposals.n_per_category == std::array<int, 3>{2, 3, 2});
  CHECK(paper.sgd.lr == 1e-3);
  CHECK(paper.sgd.momentum == 0.9);
  CHECK(paper.sgd.weight_decay == 1e-4);

  CHECK_THROWS_AS(RunConfig::from_profile("huge"), ConfigError);
}

TEST_CASE("config text overrides the profile") {
  const RunConfig c = parse_config(R"(
# comment
profile = toy
[proposal]
catalog = 2x2:1 3x2:2 4x4:3   # trailing comment
n_per_category = 1, 2, 0
nms_iou = 0.4
[locate]
connectivity = 4
order = full_masks
[optimizer]
lr = 0.05
lr_decay_epochs = 5, 10
[train]
epochs = 3
seed = 99
)");
  CHECK(c.pipeline.proposals.catalog == std::vector<WindowSpec>{{2, 2, 1}, {3, 2, 2}, {4, 4, 3}});
  CHECK(c.pipeline.proposals.n_per_category == std::array<int, 3>{1, 2, 0});
  CHECK(c.pipeline.proposals.nms_iou == 0.4);
  CHECK(c.pipeline.locate.connectivity == Connectivity::four);
  CHECK(c.pipeline.locate.order == IntersectOrder::full_masks);
  CHECK(c.sgd.lr == 0.05);
  CHECK(c.sgd.decay_epochs == std::vector<int>{5, 10});
  CHECK(c.epochs == 3);
  CHECK(c.seed == 99);

  CHECK(parse_config("profile = paper\n").pipeline.geometry.map_size == 14);
  CHECK(parse_config("[proposal]\ncatalog = paper\n", "paper").pipeline.proposals.catalog.size() == 8);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[optimizer]\nlearning_rate = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[optimiser]\nlr = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("lr = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[optimizer]\nlr = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[optimizer]\nlr = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[locate]\nconnectivity = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[proposal]\nn_per_category = 1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[proposal]\ncatalog = 9x9:1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[geometry]\nmap_size = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[train\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[train]\nepochs\n"), ConfigError);

  try {
    parse_config("[train]\n\nepochs = 0\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("epochs") != std::string::npos);
  }
}

TEST_CASE("command-line overrides") {
  RunConfig c = RunConfig::toy();
  apply_override(c, "proposal.n_per_category=0,0,0");
  apply_override(c, "train.epochs = 2");
  CHECK(c.pipeline.proposals.total() == 0);
  CHECK(c.epochs == 2);
  CHECK_THROWS_AS(apply_override(c, "epochs=2"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "train.nope=2"), ConfigError);
}
