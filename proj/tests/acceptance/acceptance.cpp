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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "partloc/aolm.hpp"
#include "partloc/appm.hpp"
#include "partloc/eval.hpp"
#include "partloc/pipeline.hpp"
#include "partloc/synth.hpp"
#include "partloc/toynet.hpp"
#include "support/gen.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

using namespace partloc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Random grid box: side lengths uniform in [1, n], then a uniform position.
// The whole grid is excluded since nothing lies above the mean there and
// locate takes the full-image fallback.
BBox planted_box(testgen::Gen& g, int n) {
  const int w = g.integer(1, n);
  const int h = w == n ? g.integer(1, n - 1) : g.integer(1, n);
  const int x0 = g.integer(0, n - w), y0 = g.integer(0, n - h);
  return grid_box(x0, y0, x0 + w, y0 + h);
}

// Corner-uniform boxes, as testgen::box_within draws them. Most are a few
// cells wide, which mean thresholding cannot separate from sigma 0.05 noise.
BBox corner_box(testgen::Gen& g, int n) {
  BBox b = testgen::box_within(g, n, n, Frame::grid);
  if (b.area() == static_cast<std::int64_t>(n) * n) b.y1 -= 1;
  return b;
}

double noisy_pcp(testgen::Gen& g, BBox (*draw)(testgen::Gen&, int)) {
  std::vector<LocalizationRecord> records;
  for (int t = 0; t < 200; ++t) {
    const int n = g.integer(8, 14);
    const GridGeometry geo{32 * n, n};
    const BBox box = draw(g, n);
    const PlantedFeatureMaps fx = plant(g.next(), g.integer(1, 16), n, n, box, 0.05f);
    records.push_back({std::to_string(t), locate(fx.f_5b, fx.f_5c, geo), grid_to_pixels(box, geo)});
  }
  return pcp(records, 0.5);
}

void aolm_oracle() {
  const auto t0 = Clock::now();
  testgen::Gen g(1001);
  int exact = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = g.integer(8, 14);
    const GridGeometry geo{32 * n, n};
    const BBox box = t % 2 == 0 ? planted_box(g, n) : corner_box(g, n);
    const PlantedFeatureMaps fx = plant(g.next(), g.integer(1, 16), n, n, box, 0.0f);
    if (locate(fx.f_5b, fx.f_5c, geo) == grid_to_pixels(box, geo)) ++exact;
  }
  const double p = noisy_pcp(g, planted_box);
  const double secs = seconds_since(t0);
  // informational only
  const double corner = noisy_pcp(g, corner_box);
  report("aolm_oracle", exact == 200 && p >= 90.0 && secs < 10.0,
         "exact " + std::to_string(exact) + "/200, noisy pcp " + fmt(p) + "%, " + fmt(secs) + " s (corner-uniform boxes: " +
             fmt(corner) + "%)");
}

void appm_scoring() {
  testgen::Gen g(1002);
  const auto catalog = ProposalConfig::paper().catalog;
  double worst = 0.0;
  std::size_t windows = 0;
  for (int t = 0; t < 100; ++t) {
    const ActivationMap a = testgen::activation_map(g, 14, 14, 0.0, 10.0);
    for (const ScoredWindow& w : score_windows(a, catalog)) {
      const double direct = oracle::direct_sum(a, w.y, w.x, w.y + w.spec.h, w.x + w.spec.w) / (w.spec.h * w.spec.w);
      worst = std::max(worst, std::abs(w.score - direct) / std::max(std::abs(direct), 1e-300));
      ++windows;
    }
  }
  report("appm_scoring", windows > 0 && worst <= 1e-5,
         std::to_string(windows) + " windows, max relative error " + fmt(worst));
}

void nms_contract() {
  testgen::Gen g(1003);
  int fixtures = 0, bad = 0;
  auto check = [&](const std::vector<ScoredWindow>& ws, const ProposalConfig& cfg) {
    ++fixtures;
    const auto got = nms_select(ws, cfg);
    const auto want = oracle::brute_nms(ws, cfg);
    bool ok = got.size() == want.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i)
      ok = got[i].category == want[i].category && got[i].spec_index == want[i].spec_index && got[i].grid.y0 == want[i].y &&
           got[i].grid.x0 == want[i].x && got[i].score == want[i].score;
    for (std::size_t i = 0; i < got.size(); ++i)
      for (std::size_t j = i + 1; j < got.size(); ++j) {
        if (got[i].category != got[j].category) continue;
        ok = ok && iou(got[i].grid, got[j].grid) < cfg.nms_iou && got[i].score >= got[j].score && got[i].rank < got[j].rank;
      }
    for (int c = 1; c <= kNumCategories; ++c) {
      int n = 0;
      for (const auto& p : got) n += p.category == c;
      ok = ok && n <= cfg.n_per_category[c - 1];
    }
    if (!ok) ++bad;
  };

  for (int t = 0; t < 100; ++t) {
    // coarse values force score ties
    std::vector<float> coarse = testgen::floats(g, 14 * 14, 0.0, 4.0);
    for (float& v : coarse) v = std::round(v);
    const ActivationMap a(14, 14, coarse);
    ProposalConfig cfg = ProposalConfig::paper();
    check(score_windows(a, cfg.catalog), cfg);
    cfg.nms_iou = g.real(0.0, 0.9);
    cfg.n_per_category = {g.integer(0, 6), g.integer(0, 6), g.integer(0, 6)};
    check(score_windows(a, cfg.catalog), cfg);
  }
  for (int t = 0; t < 50; ++t) {
    const ActivationMap a = testgen::activation_map(g, 8, 8);
    check(score_windows(a, ProposalConfig::toy().catalog), ProposalConfig::toy());
  }
  report("nms_contract", bad == 0, std::to_string(fixtures - bad) + "/" + std::to_string(fixtures) + " fixtures");
}

std::vector<double> simplex(testgen::Gen& g, int k) {
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += (v = g.real(1e-3, 1.0));
  for (auto& v : p) v /= s;
  return p;
}

void loss_algebra() {
  testgen::Gen g(1004);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = g.integer(2, 200);
    BranchOutputs o{simplex(g, k), simplex(g, k), {}, g.integer(0, k - 1)};
    for (int i = g.integer(0, 7); i > 0; --i) o.p_parts.push_back(simplex(g, k));
    const LossBundle l = total_loss(o);
    worst = std::max(worst, std::abs(l.l_total - (l.l_raw + l.l_object + l.l_parts)));
  }
  double ce = 0.0;
  for (int k : {4, 200})
    for (int c = 0; c < k; ++c) ce = std::max(ce, std::abs(cross_entropy(std::vector<double>(k, 1.0 / k), c) - std::log(k)));
  report("loss_algebra", worst <= 1e-6 && ce <= 1e-6, "sum error " + fmt(worst) + ", uniform CE error " + fmt(ce));
}

void gradient_check() {
  const auto t0 = Clock::now();
  const std::size_t params = ToyNetParams::init(4, 1).parameter_count();
  gradcheck::Report total;
  std::size_t failed = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testgen::Gen g(seed);
    auto p = params_cast<double>(ToyNetParams::init(4, seed));
    for (auto& v : p.conv_a_b.data()) v = g.real(-0.1, 0.1);
    for (auto& v : p.conv_b_b.data()) v = g.real(-0.1, 0.1);
    for (auto& v : p.fc_b.data()) v = g.real(-0.1, 0.1);
    const auto img = tensor_cast<double>(testgen::tensor(g, {3, 32, 32}, 0.0, 1.0));
    const int label = static_cast<int>(seed % 4);
    const auto base = forward(p, img);
    std::vector<double> up = softmax<double>(base.logits);
    up[label] -= 1.0;
    const auto analytic = backward(p, base, std::span<const double>(up));
    const auto r = gradcheck::run(p, analytic, [&](const BasicToyNetParams<double>& q, bool& same) {
      const auto c = forward(q, img);
      same = same_activation_pattern(base, c);
      return cross_entropy(softmax<double>(c.logits), label);
    });
    total.checked += r.checked;
    total.skipped += r.skipped;
    failed += r.failed;
    total.max_rel = std::max(total.max_rel, r.max_rel);
  }
  const double secs = seconds_since(t0);
  report("gradient_check", params <= 5000 && failed == 0 && total.max_rel <= 1e-3 && total.skip_rate() < 0.05 && secs < 60.0,
         std::to_string(params) + " params, " + std::to_string(total.checked) + " checked, max relative error " +
             fmt(total.max_rel) + ", skip rate " + fmt(100.0 * total.skip_rate()) + "%, " + fmt(secs) + " s");
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "partloc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double final_accuracy(const CliResult& r) {
  const std::string key = "final test_accuracy=";
  const auto at = r.out.rfind(key);
  return at == std::string::npos ? -1.0 : std::stod(r.out.substr(at + key.size()));
}

void end_to_end() {
  const fs::path root = PARTLOC_ACCEPTANCE_TMP;
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path data = root / "data";

  const CliResult s = cli_run({"synth", "--seed", "7", "--n-train", "400", "--n-test", "200", "--size", "64", "--out", data.string()});
  if (s.code != 0) {
    report("end_to_end", false, "synth failed: " + s.err);
    report("determinism", false, "no data");
    return;
  }

  auto train = [&](const std::string& name, std::vector<std::string> extra) {
    std::vector<std::string> args{"train-toy", "--data", data.string(), "--out", (root / name).string(), "--profile", "toy",
                                  "--set", "train.epochs=30"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto t0 = Clock::now();
    const CliResult r = cli_run(args);
    return std::make_pair(r, seconds_since(t0));
  };

  const auto [full, full_secs] = train("full", {});
  const auto [ablate, ablate_secs] = train("no_parts", {"--set", "proposal.n_per_category=0,0,0"});
  const double acc = final_accuracy(full);
  const double acc0 = final_accuracy(ablate);
  report("end_to_end", full.code == 0 && ablate.code == 0 && acc >= 90.0 && acc0 <= acc + 2.0 && full_secs < 300.0,
         "three-branch accuracy " + fmt(acc) + "% in " + fmt(full_secs) + " s, without parts " + fmt(acc0) + "% in " +
             fmt(ablate_secs) + " s");

  const CliResult again = train("repeat", {}).first;
  const std::string m1 = slurp(root / "full" / "metrics.csv"), m2 = slurp(root / "repeat" / "metrics.csv");
  report("determinism", again.code == 0 && !m1.empty() && m1 == m2,
         std::to_string(m1.size()) + " bytes of metrics.csv, identical: " + (m1 == m2 ? "yes" : "no"));
}

void metric_fixtures() {
  const double v = iou(pixel_box(0, 0, 2, 2), pixel_box(1, 1, 3, 3));
  // IoU exactly 0.5 must not count, anything above must
  const BBox gt = pixel_box(0, 0, 4, 1);
  const std::vector<LocalizationRecord> at_half{{"a", pixel_box(0, 0, 2, 1), gt}};
  const std::vector<LocalizationRecord> above{{"a", pixel_box(0, 0, 3, 1), gt}};
  const bool exact_half = iou(at_half[0].pred, gt) == 0.5;
  const double p_half = pcp(at_half, 0.5), p_above = pcp(above, 0.5);
  report("metric_fixtures", std::abs(v - 1.0 / 7.0) <= 1e-9 && exact_half && p_half == 0.0 && p_above == 100.0,
         "iou " + fmt(v) + ", pcp at 0.5 " + fmt(p_half) + "%, above " + fmt(p_above) + "%");
}

}  // namespace

int main() {
  aolm_oracle();
  appm_scoring();
  nms_contract();
  loss_algebra();
  gradient_check();
  end_to_end();
  metric_fixtures();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
