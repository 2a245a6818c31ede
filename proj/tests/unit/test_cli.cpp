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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "partloc/csv_io.hpp"
#include "partloc/eval.hpp"
#include "partloc/ppm.hpp"
#include "partloc/synth.hpp"
#include "partloc/tnsr_io.hpp"

using namespace partloc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "partloc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(PARTLOC_TEST_TMP);
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string text(const fs::path& p, const std::string& body) {
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("locate on planted maps") {
  const PlantedFeatureMaps fx = plant(3, 4, 14, 14, grid_box(3, 2, 9, 6), 0.0f);
  write_tensor(fx.f_5b, tmp("f5b.tnsr"));
  write_tensor(fx.f_5c, tmp("f5c.tnsr"));
  const Result r = run({"locate", "--profile", "paper", "--f5b", tmp("f5b.tnsr").string(), "--f5c", tmp("f5c.tnsr").string(),
                        "--id", "bird", "--out", tmp("box.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "bird,96,64,288,192\n");
  CHECK(slurp(tmp("box.csv")) == "id,x0,y0,x1,y1\nbird,96,64,288,192\n");
}

TEST_CASE("locate errors and fallback") {
  write_tensor(Tensor({2, 14, 14}, 1.0f), tmp("flat.tnsr"));
  Result r = run({"locate", "--profile", "paper", "--f5b", tmp("flat.tnsr").string(), "--f5c", tmp("flat.tnsr").string(), "--out",
                  tmp("flat.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "000,0,0,448,448\n");

  write_tensor(Tensor({2, 7, 7}, 1.0f), tmp("small.tnsr"));
  r = run({"locate", "--profile", "paper", "--f5b", tmp("small.tnsr").string(), "--f5c", tmp("flat.tnsr").string(), "--out",
           tmp("x.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("differ") != std::string::npos);

  r = run({"locate", "--profile", "paper", "--f5b", tmp("missing.tnsr").string(), "--f5c", tmp("flat.tnsr").string(), "--out",
           tmp("x.csv").string()});
  CHECK(r.code == 1);

  r = run({"locate", "--profile", "paper", "--set", "locate.connectivity=5", "--f5b", tmp("flat.tnsr").string(), "--f5c",
           tmp("flat.tnsr").string(), "--out", tmp("never.csv").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(tmp("never.csv")));

  r = run({"locate", "--f5b", tmp("flat.tnsr").string()});
  CHECK(r.code == 2);
}

TEST_CASE("propose with the default 14x14 profile") {
  Tensor f({8, 14, 14});
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<float>((i * 7919) % 101) / 100.0f;
  write_tensor(f, tmp("obj.tnsr"));
  const Result r = run({"propose", "--profile", "paper", "--features", tmp("obj.tnsr").string(), "--out", tmp("parts.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(tmp("parts.csv")));
  const auto rows = read_proposals_csv(tmp("parts.csv"));
  CHECK(rows.size() <= 7);
  int per[3] = {0, 0, 0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ++per[rows[i].category - 1];
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[i].category == rows[j].category) CHECK(iou(rows[i].pixel, rows[j].pixel) < 0.25);
  }
  CHECK(per[0] <= 2);
  CHECK(per[1] <= 3);
  CHECK(per[2] <= 2);
}

TEST_CASE("propose a single hot cell") {
  Tensor f({1, 14, 14});
  f.at(0, 5, 11) = 1.0f;
  write_tensor(f, tmp("hot.tnsr"));
  const std::string cfg = text(tmp("one.cfg"), "profile = paper\n[proposal]\ncatalog = 1x1:1\nn_per_category = 1,0,0\n");
  const Result r = run({"propose", "--config", cfg, "--features", tmp("hot.tnsr").string(), "--out", tmp("hot.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "category,rank,score,x0,y0,x1,y1\n1,0,1.0,352,160,384,192\n");
}

TEST_CASE("eval commands") {
  const std::string boxes = text(tmp("gt.csv"), "id,x0,y0,x1,y1\na,0,0,4,2\nb,0,0,10,1\n");
  Result r = run({"eval-pcp", "--pred", boxes, "--gt", boxes});
  CHECK(r.code == 0);
  CHECK(r.out == "pcp=100.0\n");

  const std::string half = text(tmp("half.csv"), "id,x0,y0,x1,y1\nb,0,0,6,1\na,0,0,2,2\n");
  r = run({"eval-pcp", "--pred", half, "--gt", boxes});
  CHECK(r.out == "pcp=50.0\n");
  r = run({"eval-pcp", "--pred", half, "--gt", boxes, "--threshold", "0.4"});
  CHECK(r.out == "pcp=100.0\n");

  const std::string missing = text(tmp("one.csv"), "id,x0,y0,x1,y1\na,0,0,4,2\n");
  CHECK(run({"eval-pcp", "--pred", missing, "--gt", boxes}).code == 1);
  CHECK(run({"eval-pcp", "--pred", text(tmp("bad.csv"), "id,x0\n"), "--gt", boxes}).code == 1);

  const std::string gt = text(tmp("labels.csv"), "id,label\n0,1\n1,2\n2,3\n3,0\n");
  const std::string pred = text(tmp("pred.csv"), "id,label\n3,0\n0,1\n1,0\n2,0\n");
  r = run({"eval-acc", "--pred", pred, "--gt", gt});
  CHECK(r.code == 0);
  CHECK(r.out == "accuracy=50.0\n");
}

TEST_CASE("synth is idempotent and validates first") {
  const fs::path a = tmp("synth_a"), b = tmp("synth_b");
  fs::remove_all(a);
  fs::remove_all(b);
  CHECK(run({"synth", "--seed", "7", "--n-train", "8", "--n-test", "4", "--size", "32", "--out", a.string()}).code == 0);
  CHECK(run({"synth", "--seed", "7", "--n-train", "8", "--n-test", "4", "--size", "32", "--out", b.string()}).code == 0);
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path other = b / fs::relative(e.path(), a);
    REQUIRE(fs::exists(other));
    CHECK(slurp(e.path()) == slurp(other));
  }
  CHECK(fs::exists(a / "train" / "images" / "007.tnsr"));

  const fs::path c = tmp("synth_c");
  fs::remove_all(c);
  CHECK(run({"synth", "--size", "20", "--out", c.string()}).code == 2);
  CHECK_FALSE(fs::exists(c));
}

TEST_CASE("train-toy end to end on a tiny dataset") {
  const fs::path data = tmp("tiny"), out = tmp("tiny_run");
  fs::remove_all(data);
  fs::remove_all(out);
  REQUIRE(run({"synth", "--seed", "3", "--n-train", "16", "--n-test", "8", "--size", "64", "--out", data.string()}).code == 0);
  const Result r = run({"train-toy", "--data", data.string(), "--out", out.string(), "--set", "train.epochs=2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("final test_accuracy=") != std::string::npos);
  CHECK(fs::exists(out / "checkpoint" / "manifest.txt"));
  CHECK(fs::exists(out / "predictions.csv"));
  const std::string metrics = slurp(out / "metrics.csv");
  CHECK(metrics.rfind("epoch,l_raw,l_object,l_parts,l_total,test_accuracy\n", 0) == 0);
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 3);

  const fs::path bad = tmp("bad_run");
  fs::remove_all(bad);
  CHECK(run({"train-toy", "--data", data.string(), "--out", bad.string(), "--set", "train.epochs=0"}).code == 2);
  CHECK(run({"train-toy", "--data", data.string(), "--out", bad.string(), "--profile", "paper"}).code == 2);
  CHECK(run({"train-toy", "--data", tmp("nowhere").string(), "--out", bad.string()}).code == 1);
  CHECK_FALSE(fs::exists(bad));
}

TEST_CASE("visualize an 8x8 fixture") {
  write_ppm(RgbImage(8, 8), tmp("black.ppm"));
  const std::string pred = text(tmp("vis_pred.csv"), "id,x0,y0,x1,y1\nx,1,1,7,7\n");
  const Result r = run({"visualize", "--image", tmp("black.ppm").string(), "--pred", pred, "--out", tmp("vis.ppm").string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());

  // G = green outline pixel, . = untouched
  const char* expect[8] = {"........",  //
                           ".GGGGGG.",  //
                           ".GGGGGG.",  //
                           ".GG..GG.",  //
                           ".GG..GG.",  //
                           ".GGGGGG.",  //
                           ".GGGGGG.",  //
                           "........"};
  std::string want = "P6\n8 8\n255\n";
  for (const char* row : expect)
    for (int x = 0; x < 8; ++x) want += row[x] == 'G' ? std::string("\x00\xff\x00", 3) : std::string(3, '\0');
  CHECK(slurp(tmp("vis.ppm")) == want);

  // a 3x3 box is all outline at thickness 2
  const std::string small = text(tmp("vis_small.csv"), "id,x0,y0,x1,y1\nx,2,2,5,5\n");
  REQUIRE(run({"visualize", "--image", tmp("black.ppm").string(), "--gt", small, "--out", tmp("small.ppm").string()}).code == 0);
  const RgbImage img = read_ppm(tmp("small.ppm"));
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) CHECK(img.get(x, y) == (x >= 2 && x < 5 && y >= 2 && y < 5 ? kRed : Rgb{0, 0, 0}));
}

TEST_CASE("visualize edge cases") {
  RgbImage base(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) base.set(x, y, {static_cast<std::uint8_t>(x * 30), static_cast<std::uint8_t>(y * 30), 7});
  write_ppm(base, tmp("base.ppm"));

  const std::string empty = text(tmp("empty.csv"), "id,x0,y0,x1,y1\n");
  REQUIRE(run({"visualize", "--image", tmp("base.ppm").string(), "--gt", empty, "--out", tmp("same.ppm").string()}).code == 0);
  CHECK(slurp(tmp("same.ppm")) == slurp(tmp("base.ppm")));

  const std::string full = text(tmp("full.csv"), "id,x0,y0,x1,y1\nx,0,0,8,8\n");
  REQUIRE(run({"visualize", "--image", tmp("base.ppm").string(), "--pred", full, "--out", tmp("full.ppm").string()}).code == 0);
  const RgbImage hug = read_ppm(tmp("full.ppm"));
  CHECK(hug.get(0, 0) == kGreen);
  CHECK(hug.get(7, 7) == kGreen);
  CHECK(hug.get(1, 4) == kGreen);
  CHECK(hug.get(3, 3) == base.get(3, 3));

  const std::string outside = text(tmp("outside.csv"), "id,x0,y0,x1,y1\nx,4,4,12,12\n");
  const Result r = run({"visualize", "--image", tmp("base.ppm").string(), "--gt", outside, "--out", tmp("clip.ppm").string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(read_ppm(tmp("clip.ppm")).get(7, 7) == kRed);

  const std::string parts = text(tmp("vis_parts.csv"), "category,rank,score,x0,y0,x1,y1\n1,0,1.0,0,0,4,4\n1,1,0.5,4,4,8,8\n");
  REQUIRE(run({"visualize", "--image", tmp("base.ppm").string(), "--parts", parts, "--out", tmp("parts.ppm").string()}).code == 0);
  const RgbImage pp = read_ppm(tmp("parts.ppm"));
  CHECK(pp.get(0, 0) == kRed);
  CHECK(pp.get(7, 7) == kOrange);

  // TNSR input is converted to 8-bit
  write_tensor(Tensor({3, 4, 4}, 1.0f), tmp("white.tnsr"));
  REQUIRE(run({"visualize", "--image", tmp("white.tnsr").string(), "--out", tmp("white.ppm").string()}).code == 0);
  CHECK(read_ppm(tmp("white.ppm")).get(2, 2) == Rgb{255, 255, 255});
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
