// Copyright 2026 The mapstab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mapstab: temporal stability evaluation for vectorized map predictions.
//
//   mapstab eval      --pred FILE [--gt FILE] [--map] [--format human|machine]
//   mapstab gen       --out FILE | --pred-out FILE --gt-out FILE [scenario/perturbation flags]
//   mapstab sweep     --pred FILE [--gt FILE] --ms 2,3,5,10
//   mapstab sweep     --knob jitter --values 0.1,0.5,1.5 [scenario/perturbation flags]
//   mapstab plot-data --kind scatter_map_mas|per_class_bars|m_sweep REPORT...
//
// Exit status: 0 success, 1 usage, 2 input validation, 3 no evaluable pairs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mapstab/io.hpp"
#include "mapstab/pipeline.hpp"
#include "mapstab/synthgen.hpp"

namespace {

using mapstab::Json;

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoPairs = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags that override the resolved EvalConfig.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> m;
  std::optional<double> tau, beta, omega, match_gate;
  std::optional<std::size_t> n_samples;
  std::optional<std::string> loc_map;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--m", m, "maximum frame interval M");
    app.add_option("--tau", tau, "presence score threshold");
    app.add_option("--beta", beta, "zero-stability lateral deviation (m)");
    app.add_option("--omega", omega, "loc weight in the combined index");
    app.add_option("--n-samples", n_samples, "resampling count N");
    app.add_option("--match-gate", match_gate, "max Chamfer cost of a GT match (m)");
    app.add_option("--loc-map", loc_map, "linear or exp");
  }

  mapstab::EvalConfig resolve() const {
    mapstab::EvalConfig c;
    if (!config_path.empty()) mapstab::load_config_file(config_path, c);
    if (seed) c.seed = *seed;
    if (m) c.max_interval = *m;
    if (tau) c.tau = *tau;
    if (beta) c.beta = *beta;
    if (omega) c.omega = *omega;
    if (n_samples) c.n_samples = *n_samples;
    if (match_gate) c.match_gate = *match_gate;
    try {
      if (loc_map) c.loc_map = mapstab::parse_loc_map(*loc_map);
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

// Scenario and perturbation flags shared by `gen` and knob sweeps.
struct GenFlags {
  std::size_t scenes = 1;
  std::size_t length = 50;
  std::string path = "straight";
  double speed = 1.0;
  double radius = 100.0;
  std::uint64_t seed = 0;
  mapstab::PerturbationSpec pert;

  void add_to(CLI::App& app, bool with_seed) {
    app.add_option("--scenes", scenes, "number of scenes")->capture_default_str();
    app.add_option("--length", length, "frames per scene")->capture_default_str();
    app.add_option("--path", path, "straight, arc or mixed")->capture_default_str();
    app.add_option("--speed", speed, "ego speed (m/frame)")->capture_default_str();
    app.add_option("--radius", radius, "arc radius (m)")->capture_default_str();
    if (with_seed) app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--jitter", pert.jitter_sigma, "per-vertex lateral noise sigma (m)");
    app.add_option("--flicker", pert.flicker_prob, "per-frame score flicker probability");
    app.add_option("--bend", pert.shape_noise, "midpoint bend angle sigma (rad)");
    app.add_option("--dropout", pert.dropout_prob, "per-frame element dropout probability");
    app.add_option("--offset", pert.lateral_offset, "constant lateral offset (m)");
    app.add_option("--drift", pert.drift_sigma, "AR(1) lateral drift sigma (m)");
    app.add_option("--drift-corr", pert.drift_corr, "AR(1) drift coefficient");
    app.add_option("--score-base", pert.score_base, "score of a stable prediction");
    app.add_option("--flicker-score", pert.flicker_score, "score on a flicker draw");
  }

  std::vector<mapstab::SequenceView> generate(std::uint64_t s,
                                              const mapstab::PerturbationSpec& p) const {
    if (path != "straight" && path != "arc" && path != "mixed") {
      throw UsageError("--path must be straight, arc or mixed");
    }
    std::vector<mapstab::SequenceView> out;
    try {
      for (std::size_t i = 0; i < scenes; ++i) {
        mapstab::EgoPath ego;
        ego.speed = speed;
        ego.radius = radius;
        const bool arc = path == "arc" || (path == "mixed" && i % 2 == 1);
        ego.kind = arc ? mapstab::PathKind::kArc : mapstab::PathKind::kStraight;
        if (path == "mixed" && i % 4 == 3) ego.radius = -radius;
        const auto spec = mapstab::make_scenario("scene-" + std::to_string(i), length, ego, s + i);
        out.push_back(mapstab::perturb(mapstab::generate_gt(spec), p, s));
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return out;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mapstab::InputError("cannot write '" + path + "'");
  out << text;
}

std::vector<double> parse_list(const std::string& csv, const char* flag) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad value '" + part + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

Json report_json(const mapstab::EvaluationReport& report,
                 const std::vector<mapstab::InputDigest>& digests) {
  return mapstab::report_to_json(report, digests);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal stability evaluation for vectorized map predictions"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a prediction sequence");
  mapstab::EvalInputs eval_inputs;
  ConfigFlags eval_cfg;
  std::string eval_out, eval_format = "human";
  bool eval_map = false;
  eval->add_option("--pred", eval_inputs.pred_path, "prediction (or combined) sequence file")
      ->required();
  eval->add_option("--gt", eval_inputs.gt_path, "GT sequence file (split mode)");
  eval->add_option("--out", eval_out, "report path (default stdout)");
  eval->add_option("--format", eval_format, "human or machine")
      ->check(CLI::IsMember({"human", "machine"}));
  eval->add_flag("--map", eval_map, "also compute Chamfer mAP");
  eval_cfg.add_to(*eval);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic sequence file");
  GenFlags gen_flags;
  std::string gen_out, gen_pred_out, gen_gt_out;
  gen_flags.add_to(*gen, true);
  gen->add_option("--out", gen_out, "combined sequence file");
  gen->add_option("--pred-out", gen_pred_out, "predictions-only sequence file");
  gen->add_option("--gt-out", gen_gt_out, "GT-only sequence file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate over an M grid or a perturbation grid");
  mapstab::EvalInputs sweep_inputs;
  ConfigFlags sweep_cfg;
  GenFlags sweep_gen;
  std::string sweep_ms, sweep_knob, sweep_values, sweep_out;
  bool sweep_map = false;
  sweep->add_option("--pred", sweep_inputs.pred_path, "prediction (or combined) sequence file");
  sweep->add_option("--gt", sweep_inputs.gt_path, "GT sequence file (split mode)");
  sweep->add_option("--ms", sweep_ms, "comma-separated M values, e.g. 2,3,5,10");
  sweep->add_option("--knob", sweep_knob, "jitter, flicker, bend, dropout, offset or drift");
  sweep->add_option("--values", sweep_values, "comma-separated knob values");
  sweep->add_option("--out", sweep_out, "sweep document path (default stdout)");
  sweep->add_flag("--map", sweep_map, "also compute Chamfer mAP");
  sweep_cfg.add_to(*sweep);
  sweep_gen.add_to(*sweep, false);

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "turn reports into a CSV table");
  std::string plot_kind, plot_labels, plot_out;
  std::vector<std::string> plot_reports;
  plot->add_option("--kind", plot_kind, "scatter_map_mas, per_class_bars or m_sweep")->required();
  plot->add_option("--labels", plot_labels, "comma-separated labels, one per report file");
  plot->add_option("--out", plot_out, "CSV path (default stdout)");
  plot->add_option("reports", plot_reports, "report or sweep documents")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eval) {
      const auto config = eval_cfg.resolve();
      const auto result = mapstab::run_eval(eval_inputs, config, eval_map);
      for (const auto& id : result.report.skipped_scene_ids) {
        std::cerr << "warning: scene '" << id << "' skipped (not longer than M)\n";
      }
      const std::string text = eval_format == "machine"
                                   ? report_json(result.report, result.digests).dump(2) + "\n"
                                   : mapstab::report_to_text(result.report);
      write_output(eval_out, text);
    } else if (*gen) {
      if (gen_out.empty() && (gen_pred_out.empty() || gen_gt_out.empty())) {
        throw UsageError("gen needs --out, or both --pred-out and --gt-out");
      }
      const auto scenes = gen_flags.generate(gen_flags.seed, gen_flags.pert);
      auto dump = [&](const std::string& path, mapstab::SequenceContent content) {
        std::ostringstream s;
        mapstab::write_sequences(s, scenes, content);
        write_output(path, s.str());
      };
      if (!gen_out.empty()) dump(gen_out, mapstab::SequenceContent::kCombined);
      if (!gen_pred_out.empty()) dump(gen_pred_out, mapstab::SequenceContent::kPredictions);
      if (!gen_gt_out.empty()) dump(gen_gt_out, mapstab::SequenceContent::kGroundTruth);
    } else if (*sweep) {
      const auto base = sweep_cfg.resolve();
      Json doc;
      Json reports = Json::array();
      if (!sweep_ms.empty()) {
        if (sweep_inputs.pred_path.empty()) throw UsageError("an M sweep needs --pred");
        doc["sweep"] = "m";
        for (const double mv : parse_list(sweep_ms, "--ms")) {
          if (mv < 1 || mv != static_cast<double>(static_cast<std::size_t>(mv))) {
            throw UsageError("--ms values must be positive integers");
          }
          auto config = base;
          config.max_interval = static_cast<std::size_t>(mv);
          const auto result = mapstab::run_eval(sweep_inputs, config, sweep_map);
          reports.push_back({{"label", "M=" + std::to_string(config.max_interval)},
                             {"report", report_json(result.report, result.digests)}});
        }
      } else if (!sweep_knob.empty()) {
        doc["sweep"] = sweep_knob;
        for (const double v : parse_list(sweep_values, "--values")) {
          auto pert = sweep_gen.pert;
          if (sweep_knob == "jitter") {
            pert.jitter_sigma = v;
          } else if (sweep_knob == "flicker") {
            pert.flicker_prob = v;
          } else if (sweep_knob == "bend") {
            pert.shape_noise = v;
          } else if (sweep_knob == "dropout") {
            pert.dropout_prob = v;
          } else if (sweep_knob == "offset") {
            pert.lateral_offset = v;
          } else if (sweep_knob == "drift") {
            pert.drift_sigma = v;
          } else {
            throw UsageError("unknown --knob '" + sweep_knob + "'");
          }
          const auto scenes = sweep_gen.generate(base.seed, pert);
          const auto report = mapstab::evaluate(scenes, base, sweep_map);
          if (report.counts.frame_pairs == 0) {
            throw mapstab::NoEvaluablePairs("no evaluable frame pairs in generated corpus");
          }
          std::ostringstream label;
          label << sweep_knob << '=' << v;
          reports.push_back({{"label", label.str()}, {"report", report_json(report, {})}});
        }
      } else {
        throw UsageError("sweep needs --ms or --knob/--values");
      }
      doc["reports"] = std::move(reports);
      write_output(sweep_out, doc.dump(2) + "\n");
    } else if (*plot) {
      mapstab::PlotKind kind;
      try {
        kind = mapstab::parse_plot_kind(plot_kind);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::vector<std::string> labels;
      if (!plot_labels.empty()) {
        std::stringstream in(plot_labels);
        std::string part;
        while (std::getline(in, part, ',')) labels.push_back(part);
        if (labels.size() != plot_reports.size()) {
          throw UsageError("--labels needs one label per report file");
        }
      }
      std::vector<mapstab::LabeledReport> all;
      for (std::size_t i = 0; i < plot_reports.size(); ++i) {
        std::ifstream in(plot_reports[i]);
        if (!in) throw mapstab::InputError("cannot open '" + plot_reports[i] + "'");
        Json doc;
        try {
          doc = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw mapstab::InputError(plot_reports[i] + ": " + e.what());
        }
        std::string label = labels.empty() ? plot_reports[i] : labels[i];
        if (labels.empty()) {
          const auto slash = label.find_last_of('/');
          if (slash != std::string::npos) label = label.substr(slash + 1);
        }
        const auto expanded = mapstab::expand_reports(doc, label);
        all.insert(all.end(), expanded.begin(), expanded.end());
      }
      std::string csv;
      try {
        csv = mapstab::emit_plot_data(all, kind);
      } catch (const nlohmann::json::exception& e) {
        throw mapstab::InputError(std::string("malformed report: ") + e.what());
      }
      write_output(plot_out, csv);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mapstab::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const mapstab::NoEvaluablePairs& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoPairs;
  }
  return 0;
}
