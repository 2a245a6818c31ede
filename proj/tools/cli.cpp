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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "partloc/aolm.hpp"
#include "partloc/appm.hpp"
#include "partloc/config.hpp"
#include "partloc/csv_io.hpp"
#include "partloc/eval.hpp"
#include "partloc/ppm.hpp"
#include "partloc/synth.hpp"
#include "partloc/tnsr_io.hpp"
#include "partloc/trainer.hpp"

namespace partloc::cli {
namespace fs = std::filesystem;
namespace {

/// Bad input data (as opposed to bad configuration).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string profile = "toy";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value config file");
  cmd->add_option("--profile", o.profile, "starting profile when no config sets one (toy|paper)");
  cmd->add_option("--set", o.overrides, "override as section.key=value (repeatable)");
}

RunConfig resolve_config(const CommonOptions& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig::from_profile(o.profile) : load_config(o.config_path, o.profile);
  for (const auto& a : o.overrides) apply_override(cfg, a);
  cfg.validate();
  return cfg;
}

Tensor load_feature_map(const std::string& path) {
  Tensor t = read_tensor(path);
  if (t.rank() != 3) throw DataError(path + ": expected a C x H x W feature map, got " + shape_string(t.dims()));
  return t;
}

void require_map_size(const Tensor& f, const GridGeometry& g, const std::string& path) {
  if (f.dim(1) != static_cast<std::size_t>(g.map_size) || f.dim(2) != static_cast<std::size_t>(g.map_size))
    throw DataError(path + ": spatial size " + std::to_string(f.dim(1)) + "x" + std::to_string(f.dim(2)) +
                    " does not match geometry.map_size " + std::to_string(g.map_size));
}

bool is_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  return in && magic[0] == 'P' && magic[1] == '6';
}

std::vector<BoxRow> select_rows(std::vector<BoxRow> rows, const std::string& id) {
  if (id.empty()) return rows;
  std::erase_if(rows, [&](const BoxRow& r) { return r.id != id; });
  return rows;
}

int cmd_locate(const CommonOptions& common, const std::string& f5b_path, const std::string& f5c_path,
               const std::string& id, const std::string& out_path, std::ostream& out) {
  const RunConfig cfg = resolve_config(common);
  const Tensor f5b = load_feature_map(f5b_path);
  const Tensor f5c = load_feature_map(f5c_path);
  if (f5b.dim(1) != f5c.dim(1) || f5b.dim(2) != f5c.dim(2))
    throw DataError("feature maps differ in spatial size: " + shape_string(f5b.dims()) + " vs " +
                    shape_string(f5c.dims()));
  require_map_size(f5c, cfg.pipeline.geometry, f5c_path);
  const BBox box = locate(f5b, f5c, cfg.pipeline.geometry, cfg.pipeline.locate);
  write_boxes_csv({{id, box}}, out_path);
  out << id << ',' << box.x0 << ',' << box.y0 << ',' << box.x1 << ',' << box.y1 << '\n';
  return kOk;
}

int cmd_propose(const CommonOptions& common, const std::string& features, const std::string& out_path,
                std::ostream& out) {
  const RunConfig cfg = resolve_config(common);
  const Tensor f = load_feature_map(features);
  require_map_size(f, cfg.pipeline.geometry, features);
  const auto proposals = propose(f, cfg.pipeline.geometry, cfg.pipeline.proposals);
  const std::string csv = format_proposals_csv(proposals);
  write_text_file(out_path, csv);
  out << csv;
  return kOk;
}

int cmd_train(const CommonOptions& common, const std::string& data_dir, const std::string& out_dir,
              std::ostream& out) {
  RunConfig cfg = resolve_config(common);
  try {
    cfg.pipeline.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const SynthSplit train = read_split(fs::path(data_dir) / "train");
  const SynthSplit test = read_split(fs::path(data_dir) / "test");
  if (train.samples.empty() || test.samples.empty()) throw DataError(data_dir + ": empty train or test split");
  for (const auto* split : {&train, &test})
    for (const auto& s : split->samples)
      if (s.label < 0 || s.label >= cfg.num_classes)
        throw DataError(data_dir + ": label " + std::to_string(s.label) + " outside [0, num_classes)");

  const TrainResult result = train_toy(train, test, cfg, &out);

  fs::create_directories(out_dir);
  save_checkpoint(result.params, fs::path(out_dir) / "checkpoint");
  write_text_file(fs::path(out_dir) / "metrics.csv", format_metrics_csv(result.history));
  const auto preds = predict(result.params, test, cfg.pipeline);
  std::vector<LabelRow> rows;
  for (std::size_t i = 0; i < preds.size(); ++i) rows.push_back({sample_id(i, preds.size()), preds[i]});
  write_labels_csv(rows, fs::path(out_dir) / "predictions.csv");
  out << "final test_accuracy=" << format_number(result.history.back().test_accuracy) << '\n';
  return kOk;
}

int cmd_eval_pcp(const std::string& pred_path, const std::string& gt_path, double threshold, std::ostream& out) {
  const auto preds = read_boxes_csv(pred_path);
  const auto gts = read_boxes_csv(gt_path);
  std::map<std::string, BBox> pred_by_id;
  for (const auto& r : preds) pred_by_id[r.id] = r.box;
  std::vector<LocalizationRecord> records;
  for (const auto& g : gts) {
    const auto it = pred_by_id.find(g.id);
    if (it == pred_by_id.end()) throw DataError(pred_path + ": no prediction for id '" + g.id + "'");
    if (it->second.empty() || g.box.empty()) throw DataError("empty box for id '" + g.id + "'");
    records.push_back({g.id, it->second, g.box});
  }
  if (records.empty()) throw DataError(gt_path + ": no ground-truth rows");
  out << "pcp=" << format_number(pcp(records, threshold)) << '\n';
  return kOk;
}

int cmd_eval_acc(const std::string& pred_path, const std::string& gt_path, std::ostream& out) {
  const auto preds = read_labels_csv(pred_path);
  const auto gts = read_labels_csv(gt_path);
  std::map<std::string, int> pred_by_id;
  for (const auto& r : preds) pred_by_id[r.id] = r.label;
  std::vector<int> p, g;
  for (const auto& r : gts) {
    const auto it = pred_by_id.find(r.id);
    if (it == pred_by_id.end()) throw DataError(pred_path + ": no prediction for id '" + r.id + "'");
    p.push_back(it->second);
    g.push_back(r.label);
  }
  if (g.empty()) throw DataError(gt_path + ": no ground-truth rows");
  out << "accuracy=" << format_number(accuracy(p, g)) << '\n';
  return kOk;
}

int cmd_synth(std::uint64_t seed, int n_train, int n_test, int size, const std::string& out_dir, std::ostream& out) {
  if (n_train < 1 || n_test < 1) throw ConfigError("--n-train and --n-test must be >= 1");
  if (size < 16 || size % 8 != 0) throw ConfigError("--size must be a multiple of 8, at least 16");
  const SynthDataset ds = gen_dataset(seed, n_train, n_test, size);
  write_dataset(ds, out_dir);
  out << "wrote " << n_train << " train / " << n_test << " test samples to " << out_dir << '\n';
  return kOk;
}

int cmd_visualize(const std::string& image_path, const std::string& gt_path, const std::string& pred_path,
                  const std::string& parts_path, const std::string& id, const std::string& out_path,
                  std::ostream& err) {
  RgbImage img = is_ppm(image_path) ? read_ppm(image_path) : to_rgb(read_tensor(image_path));

  std::vector<std::pair<BBox, Rgb>> outlines;
  if (!gt_path.empty())
    for (const auto& r : select_rows(read_boxes_csv(gt_path), id)) outlines.push_back({r.box, kRed});
  if (!pred_path.empty())
    for (const auto& r : select_rows(read_boxes_csv(pred_path), id)) outlines.push_back({r.box, kGreen});
  if (!parts_path.empty())
    for (const auto& p : read_proposals_csv(parts_path)) outlines.push_back({p.pixel, rank_color(p.rank)});

  for (const auto& [box, color] : outlines) {
    if (box.empty()) throw DataError("empty box in overlay input");
    if (!draw_outline(img, box, color))
      err << "warning: box (" << box.x0 << ',' << box.y0 << ',' << box.x1 << ',' << box.y1
          << ") extends outside the " << img.width << "x" << img.height << " image; clipped\n";
  }
  write_ppm(img, out_path);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly-supervised object localization and part proposal toolkit"};
  app.name(args.empty() ? "partloc" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  CommonOptions common;

  std::string f5b, f5c, locate_id = "000", locate_out;
  auto* locate_cmd = app.add_subcommand("locate", "object box from two feature maps (TNSR)");
  add_common(locate_cmd, common);
  locate_cmd->add_option("--f5b", f5b, "second-to-last block feature map")->required();
  locate_cmd->add_option("--f5c", f5c, "last block feature map")->required();
  locate_cmd->add_option("--id", locate_id, "row id for the output");
  locate_cmd->add_option("--out", locate_out, "boxes.csv to write")->required();

  std::string features, propose_out;
  auto* propose_cmd = app.add_subcommand("propose", "ranked part windows from an object feature map");
  add_common(propose_cmd, common);
  propose_cmd->add_option("--features", features, "object-image feature map (TNSR)")->required();
  propose_cmd->add_option("--out", propose_out, "proposals CSV to write")->required();

  std::string data_dir, train_out;
  auto* train_cmd = app.add_subcommand("train-toy", "train the toy three-branch model on a synth dataset");
  add_common(train_cmd, common);
  train_cmd->add_option("--data", data_dir, "dataset directory with train/ and test/")->required();
  train_cmd->add_option("--out", train_out, "output directory")->required();

  std::string pcp_pred, pcp_gt;
  double threshold = 0.5;
  auto* pcp_cmd = app.add_subcommand("eval-pcp", "percentage of boxes with IoU above a threshold");
  pcp_cmd->add_option("--pred", pcp_pred, "predicted boxes.csv")->required();
  pcp_cmd->add_option("--gt", pcp_gt, "ground-truth boxes.csv")->required();
  pcp_cmd->add_option("--threshold", threshold, "IoU must be strictly greater")->check(CLI::Range(0.0, 1.0));

  std::string acc_pred, acc_gt;
  auto* acc_cmd = app.add_subcommand("eval-acc", "classification accuracy from two labels.csv files");
  acc_cmd->add_option("--pred", acc_pred, "predicted labels.csv")->required();
  acc_cmd->add_option("--gt", acc_gt, "ground-truth labels.csv")->required();

  std::uint64_t seed = 7;
  int n_train = 400, n_test = 200, size = 64;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "generate a labelled blob dataset");
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--n-train", n_train);
  synth_cmd->add_option("--n-test", n_test);
  synth_cmd->add_option("--size", size, "image side in pixels");
  synth_cmd->add_option("--out", synth_out, "dataset directory")->required();

  std::string vis_image, vis_gt, vis_pred, vis_parts, vis_id, vis_out;
  auto* vis_cmd = app.add_subcommand("visualize", "draw boxes onto an image (P6 PPM output)");
  vis_cmd->add_option("--image", vis_image, "TNSR (3xHxW in [0,1]) or P6 PPM")->required();
  vis_cmd->add_option("--gt", vis_gt, "ground-truth boxes.csv (red)");
  vis_cmd->add_option("--pred", vis_pred, "predicted boxes.csv (green)");
  vis_cmd->add_option("--parts", vis_parts, "proposals CSV (red/orange/yellow/green by rank)");
  vis_cmd->add_option("--id", vis_id, "only draw boxes.csv rows with this id");
  vis_cmd->add_option("--out", vis_out, "output .ppm")->required();

  std::vector<const char*> argv;
  std::vector<std::string> owned = args.empty() ? std::vector<std::string>{"partloc"} : args;
  for (const auto& a : owned) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (*locate_cmd) return cmd_locate(common, f5b, f5c, locate_id, locate_out, out);
    if (*propose_cmd) return cmd_propose(common, features, propose_out, out);
    if (*train_cmd) return cmd_train(common, data_dir, train_out, out);
    if (*pcp_cmd) return cmd_eval_pcp(pcp_pred, pcp_gt, threshold, out);
    if (*acc_cmd) return cmd_eval_acc(acc_pred, acc_gt, out);
    if (*synth_cmd) return cmd_synth(seed, n_train, n_test, size, synth_out, out);
    if (*vis_cmd) return cmd_visualize(vis_image, vis_gt, vis_pred, vis_parts, vis_id, vis_out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kConfigError;
}

}  // namespace partloc::cli
