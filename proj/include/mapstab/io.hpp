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

// File formats.
//
// Sequence file: one JSON object per line, one frame per line:
//
//   {"scene_id": "s0", "frame_index": 0, "timestamp": 0.0,
//    "ego_pose": {"x": 0.0, "y": 0.0, "yaw": 0.0},
//    "predictions": [{"class": "divider", "points": [[x, y], ...], "score": 0.9}],
//    "ground_truth": [{"class": "divider", "points": [[x, y], ...], "track_id": "t0"}]}
//
// Points are ego-frame meters; the pose maps the ego frame to the world
// frame. Either list may be omitted when predictions and GT live in separate
// files. Frames of a scene must appear with strictly increasing
// frame_index.
//
// Config file: `key = value` lines, `#` starts a comment.
//
// Report: a JSON document (machine format, scores in [0, 1]) or a text table
// (human format, scores on a 0-100 scale).

#ifndef MAPSTAB_IO_HPP_
#define MAPSTAB_IO_HPP_

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mapstab/config.hpp"
#include "mapstab/pipeline.hpp"
#include "mapstab/random.hpp"
#include "mapstab/sampling.hpp"

namespace mapstab {

inline constexpr std::string_view kToolkitName = "mapstab";
inline constexpr std::string_view kToolkitVersion = "0.1.0";

// Malformed or invariant-breaking input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs were valid but yielded no frame pair to evaluate.
class NoEvaluablePairs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Sequence files

enum class SequenceContent { kCombined, kPredictions, kGroundTruth };

namespace detail {

inline std::string where(std::size_t line, std::string_view field) {
  return "line " + std::to_string(line) + ": " + std::string(field);
}

inline double number_field(const Json& obj, const char* key, std::size_t line,
                           const std::string& ctx) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where(line, ctx + key) + ": missing");
  if (!it->is_number()) throw InputError(where(line, ctx + key) + ": expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw InputError(where(line, ctx + key) + ": not finite");
  return v;
}

inline PolyLine2D parse_points(const Json& elem, std::size_t line, const std::string& ctx) {
  const auto it = elem.find("points");
  if (it == elem.end() || !it->is_array()) {
    throw InputError(where(line, ctx + "points") + ": expected an array of [x, y]");
  }
  if (it->size() < 2) {
    throw InputError(where(line, ctx + "points") + ": polyline needs at least 2 points, got " +
                     std::to_string(it->size()));
  }
  std::vector<Point2D> pts;
  pts.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const Json& p = (*it)[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InputError(where(line, ctx + "points[" + std::to_string(i) + "]") +
                       ": expected [x, y]");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    return PolyLine2D(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw InputError(where(line, ctx + "points") + ": " + e.what());
  }
}

inline std::string parse_class(const Json& elem, std::size_t line, const std::string& ctx) {
  const auto it = elem.find("class");
  if (it == elem.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw InputError(where(line, ctx + "class") + ": expected a non-empty string");
  }
  return it->get<std::string>();
}

inline std::vector<MapElement> parse_predictions(const Json& arr, std::size_t line) {
  if (!arr.is_array()) throw InputError(where(line, "predictions") + ": expected an array");
  std::vector<MapElement> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "predictions[" + std::to_string(i) + "].";
    const Json& e = arr[i];
    if (!e.is_object()) throw InputError(where(line, ctx) + ": expected an object");
    std::string cls = parse_class(e, line, ctx);
    PolyLine2D geom = parse_points(e, line, ctx);
    const double score = number_field(e, "score", line, ctx);
    if (score < 0.0 || score > 1.0) throw InputError(where(line, ctx + "score") + ": outside [0, 1]");
    std::string id = "p" + std::to_string(i);
    if (const auto it = e.find("id"); it != e.end() && it->is_string()) id = it->get<std::string>();
    out.push_back(make_prediction(std::move(id), std::move(cls), std::move(geom), score));
  }
  return out;
}

inline std::vector<MapElement> parse_ground_truth(const Json& arr, std::size_t line) {
  if (!arr.is_array()) throw InputError(where(line, "ground_truth") + ": expected an array");
  std::vector<MapElement> out;
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "ground_truth[" + std::to_string(i) + "].";
    const Json& e = arr[i];
    if (!e.is_object()) throw InputError(where(line, ctx) + ": expected an object");
    std::string cls = parse_class(e, line, ctx);
    PolyLine2D geom = parse_points(e, line, ctx);
    const auto it = e.find("track_id");
    std::string track;
    if (it != e.end() && it->is_string()) {
      track = it->get<std::string>();
    } else if (it != e.end() && it->is_number_integer()) {
      track = std::to_string(it->get<std::int64_t>());
    } else {
      throw InputError(where(line, ctx + "track_id") + ": expected a string or integer");
    }
    if (std::find(seen.begin(), seen.end(), track) != seen.end()) {
      throw InputError(where(line, ctx + "track_id") + ": duplicate track '" + track + "'");
    }
    seen.push_back(track);
    out.push_back(make_ground_truth(std::move(track), std::move(cls), std::move(geom)));
  }
  return out;
}

inline FrameRecord parse_frame(std::string_view text, std::size_t line, SequenceContent content) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError("line " + std::to_string(line) + ": expected an object");
  FrameRecord f;
  const auto sid = j.find("scene_id");
  if (sid == j.end() || !sid->is_string()) {
    throw InputError(where(line, "scene_id") + ": expected a string");
  }
  f.scene_id = sid->get<std::string>();
  const auto fi = j.find("frame_index");
  if (fi == j.end() || !fi->is_number_integer()) {
    throw InputError(where(line, "frame_index") + ": expected an integer");
  }
  f.frame_index = fi->get<std::int64_t>();
  f.timestamp = number_field(j, "timestamp", line, "");
  const auto pose = j.find("ego_pose");
  if (pose == j.end() || !pose->is_object()) {
    throw InputError(where(line, "ego_pose") + ": expected {x, y, yaw}");
  }
  f.ego_pose = RigidPose2D(number_field(*pose, "x", line, "ego_pose."),
                           number_field(*pose, "y", line, "ego_pose."),
                           number_field(*pose, "yaw", line, "ego_pose."));
  if (content != SequenceContent::kGroundTruth) {
    if (const auto it = j.find("predictions"); it != j.end()) {
      f.predictions = parse_predictions(*it, line);
    } else if (content == SequenceContent::kPredictions) {
      throw InputError(where(line, "predictions") + ": missing");
    }
  }
  if (content != SequenceContent::kPredictions) {
    if (const auto it = j.find("ground_truth"); it != j.end()) {
      f.ground_truth = parse_ground_truth(*it, line);
    } else if (content == SequenceContent::kGroundTruth) {
      throw InputError(where(line, "ground_truth") + ": missing");
    }
  }
  return f;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace detail

// Parses a sequence document, validates it, and groups frames into scenes
// in order of first appearance.
inline std::vector<SequenceView> parse_sequences(std::string_view text,
                                                 SequenceContent content = SequenceContent::kCombined) {
  std::vector<SequenceView> scenes;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 0;
  std::size_t frames = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    FrameRecord f = detail::parse_frame(line, line_no, content);
    auto [it, inserted] = index.emplace(f.scene_id, scenes.size());
    if (inserted) scenes.push_back(SequenceView{f.scene_id, {}});
    SequenceView& seq = scenes[it->second];
    if (!seq.frames.empty()) {
      const FrameRecord& prev = seq.frames.back();
      if (f.frame_index <= prev.frame_index) {
        throw InputError("line " + std::to_string(line_no) + ": scene '" + f.scene_id +
                         "': frame_index " + std::to_string(f.frame_index) +
                         " is not after frame " + std::to_string(prev.frame_index));
      }
      if (!(f.timestamp > prev.timestamp)) {
        throw InputError("line " + std::to_string(line_no) + ": scene '" + f.scene_id +
                         "': timestamp of frame " + std::to_string(f.frame_index) +
                         " is not after the previous frame");
      }
    }
    seq.frames.push_back(std::move(f));
    ++frames;
    if (end == text.size()) break;
  }
  if (frames == 0) throw InputError("no frames");
  return scenes;
}

inline std::vector<SequenceView> load_sequences(const std::string& path,
                                                SequenceContent content = SequenceContent::kCombined) {
  try {
    return parse_sequences(detail::read_file(path), content);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Joins a predictions-only and a GT-only load on (scene_id, frame_index).
// Poses must agree.
inline std::vector<SequenceView> merge_split(std::vector<SequenceView> gt,
                                             const std::vector<SequenceView>& pred) {
  std::map<std::string, const SequenceView*> by_scene;
  for (const auto& s : pred) by_scene.emplace(s.scene_id, &s);
  if (by_scene.size() != gt.size()) {
    throw InputError("prediction and GT files cover different scene sets");
  }
  for (auto& g : gt) {
    const auto it = by_scene.find(g.scene_id);
    if (it == by_scene.end()) throw InputError("scene '" + g.scene_id + "' has no predictions");
    const SequenceView& p = *it->second;
    if (p.frames.size() != g.frames.size()) {
      throw InputError("scene '" + g.scene_id + "': prediction and GT frame counts differ");
    }
    for (std::size_t i = 0; i < g.frames.size(); ++i) {
      FrameRecord& gf = g.frames[i];
      const FrameRecord& pf = p.frames[i];
      if (gf.frame_index != pf.frame_index) {
        throw InputError("scene '" + g.scene_id + "': frame " + std::to_string(gf.frame_index) +
                         " has no matching prediction frame");
      }
      const double dx = gf.ego_pose.x() - pf.ego_pose.x();
      const double dy = gf.ego_pose.y() - pf.ego_pose.y();
      const double dyaw = normalize_angle(gf.ego_pose.yaw() - pf.ego_pose.yaw());
      if (std::abs(dx) > 1e-6 || std::abs(dy) > 1e-6 || std::abs(dyaw) > 1e-6) {
        throw InputError("scene '" + g.scene_id + "': frame " + std::to_string(gf.frame_index) +
                         ": ego poses of prediction and GT files disagree");
      }
      gf.predictions = pf.predictions;
    }
  }
  return gt;
}

inline Json frame_to_json(const FrameRecord& f, SequenceContent content) {
  auto points = [](const PolyLine2D& poly) {
    Json arr = Json::array();
    for (const auto& p : poly.points()) arr.push_back({p.x, p.y});
    return arr;
  };
  Json j;
  j["scene_id"] = f.scene_id;
  j["frame_index"] = f.frame_index;
  j["timestamp"] = f.timestamp;
  j["ego_pose"] = {{"x", f.ego_pose.x()}, {"y", f.ego_pose.y()}, {"yaw", f.ego_pose.yaw()}};
  if (content != SequenceContent::kGroundTruth) {
    Json preds = Json::array();
    for (const auto& e : f.predictions) {
      preds.push_back({{"id", e.element_id},
                       {"class", e.class_label},
                       {"points", points(e.geometry)},
                       {"score", e.score.value_or(0.0)}});
    }
    j["predictions"] = std::move(preds);
  }
  if (content != SequenceContent::kPredictions) {
    Json gts = Json::array();
    for (const auto& e : f.ground_truth) {
      gts.push_back({{"class", e.class_label},
                     {"points", points(e.geometry)},
                     {"track_id", e.gt_track_id.value_or(e.element_id)}});
    }
    j["ground_truth"] = std::move(gts);
  }
  return j;
}

inline void write_sequences(std::ostream& out, const std::vector<SequenceView>& scenes,
                            SequenceContent content = SequenceContent::kCombined) {
  for (const auto& s : scenes) {
    for (const auto& f : s.frames) out << frame_to_json(f, content).dump() << '\n';
  }
}

inline std::string digest(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(bytes));
  return buf;
}

// ---------------------------------------------------------------------------
// Config files

// Applies `key = value` lines onto `config`.
inline void apply_config_text(std::string_view text, EvalConfig& config) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    auto number = [&]() {
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw InputError("config line " + std::to_string(line_no) + ": '" + key +
                         "' expects a number, got '" + value + "'");
      }
    };
    auto count = [&]() {
      const double v = number();
      if (v < 0 || v != std::floor(v)) {
        throw InputError("config line " + std::to_string(line_no) + ": '" + key +
                         "' expects a non-negative integer");
      }
      return static_cast<std::size_t>(v);
    };
    if (key == "m") {
      config.max_interval = count();
    } else if (key == "n_samples") {
      config.n_samples = count();
    } else if (key == "tau") {
      config.tau = number();
    } else if (key == "beta") {
      config.beta = number();
    } else if (key == "omega") {
      config.omega = number();
    } else if (key == "x_min") {
      config.range.x_min = number();
    } else if (key == "x_max") {
      config.range.x_max = number();
    } else if (key == "y_min") {
      config.range.y_min = number();
    } else if (key == "y_max") {
      config.range.y_max = number();
    } else if (key == "match_gate") {
      config.match_gate = number();
    } else if (key == "seed") {
      config.seed = count();
    } else if (key == "loc_map") {
      try {
        config.loc_map = parse_loc_map(value);
      } catch (const std::invalid_argument& e) {
        throw InputError("config line " + std::to_string(line_no) + ": " + e.what());
      }
    } else if (key == "ap_thresholds") {
      config.ap_thresholds.clear();
      std::istringstream parts(value);
      std::string part;
      while (std::getline(parts, part, ',')) {
        try {
          config.ap_thresholds.push_back(std::stod(trim(part)));
        } catch (const std::exception&) {
          throw InputError("config line " + std::to_string(line_no) +
                           ": bad ap_thresholds entry '" + part + "'");
        }
      }
    } else {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

inline void load_config_file(const std::string& path, EvalConfig& config) {
  try {
    apply_config_text(detail::read_file(path), config);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

struct InputDigest {
  std::string role;
  std::string digest;
};

inline Json config_to_json(const EvalConfig& c) {
  return Json{{"m", c.max_interval},
              {"n_samples", c.n_samples},
              {"tau", c.tau},
              {"beta", c.beta},
              {"omega", c.omega},
              {"range", {c.range.x_min, c.range.x_max, c.range.y_min, c.range.y_max}},
              {"match_gate", c.match_gate},
              {"seed", c.seed},
              {"loc_map", std::string(to_string(c.loc_map))},
              {"ap_thresholds", c.ap_thresholds}};
}

namespace detail {

inline Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json stability_to_json(const StabilityReport& r) {
  Json per_class = Json::object();
  for (const auto& [label, c] : r.per_class) {
    per_class[label] = {{"presence", opt(c.presence_mean)},
                        {"loc", opt(c.loc_mean)},
                        {"shape", opt(c.shape_mean)},
                        {"stability", opt(c.stability_mean)},
                        {"instances", c.instance_count}};
  }
  return Json{{"presence", opt(r.presence)},
              {"loc", opt(r.loc)},
              {"shape", opt(r.shape)},
              {"mas", opt(r.mas)},
              {"per_class", std::move(per_class)}};
}

}  // namespace detail

inline Json report_to_json(const EvaluationReport& r, const std::vector<InputDigest>& inputs) {
  Json j;
  j["toolkit"] = {{"name", std::string(kToolkitName)}, {"version", std::string(kToolkitVersion)}};
  Json in = Json::array();
  for (const auto& d : inputs) in.push_back({{"role", d.role}, {"digest", d.digest}});
  j["inputs"] = std::move(in);
  j["config"] = config_to_json(r.config);
  j["counts"] = {{"scenes", r.counts.scenes},
                 {"skipped_scenes", r.counts.skipped_scenes},
                 {"frame_pairs", r.counts.frame_pairs},
                 {"matched_instances", r.counts.matched_instances},
                 {"one_sided_instances", r.counts.one_sided_instances},
                 {"incomparable_instances", r.counts.incomparable_instances}};
  j["skipped_scenes"] = r.skipped_scene_ids;
  j["stability"] = detail::stability_to_json(r.stability);
  j["stability_matched_only"] = detail::stability_to_json(r.matched_only);
  if (r.ap) {
    Json per_class = Json::object();
    for (const auto& [label, c] : r.ap->per_class) {
      per_class[label] = {{"ap", c.ap},
                          {"ap_per_threshold", c.ap_per_threshold},
                          {"gt", c.gt_count},
                          {"predictions", c.prediction_count}};
    }
    j["accuracy"] = {{"thresholds", r.ap->thresholds},
                     {"map", r.ap->map},
                     {"per_class", std::move(per_class)}};
  }
  return j;
}

inline std::string format_points(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v * 100.0);
  return buf;
}

inline std::string report_to_text(const EvaluationReport& r) {
  std::ostringstream out;
  const auto& c = r.config;
  char line[256];
  std::snprintf(line, sizeof line,
                "%s %s  M=%zu N=%zu tau=%g beta=%g omega=%g loc_map=%s seed=%" PRIu64 "\n",
                kToolkitName.data(), kToolkitVersion.data(), c.max_interval, c.n_samples, c.tau,
                c.beta, c.omega, to_string(c.loc_map).data(), c.seed);
  out << line;
  std::snprintf(line, sizeof line,
                "scenes %zu (skipped %zu)  frame pairs %zu  instances %zu  one-sided %zu  "
                "incomparable %zu\n\n",
                r.counts.scenes, r.counts.skipped_scenes, r.counts.frame_pairs,
                r.counts.matched_instances, r.counts.one_sided_instances,
                r.counts.incomparable_instances);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %9s %9s %9s %9s %9s\n", "class", "instances", "Presence",
                "Loc", "Shape", "Stability");
  out << line;
  for (const auto& [label, cls] : r.stability.per_class) {
    std::snprintf(line, sizeof line, "%-14s %9zu %9s %9s %9s %9s\n", label.c_str(),
                  cls.instance_count, format_points(cls.presence_mean).c_str(),
                  format_points(cls.loc_mean).c_str(), format_points(cls.shape_mean).c_str(),
                  format_points(cls.stability_mean).c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "%-14s %9zu %9s %9s %9s %9s\n", "mean",
                r.stability.instance_count(), format_points(r.stability.presence).c_str(),
                format_points(r.stability.loc).c_str(), format_points(r.stability.shape).c_str(),
                format_points(r.stability.mas).c_str());
  out << line << '\n';
  out << "mAS                " << format_points(r.stability.mas) << '\n';
  out << "mAS (matched only) " << format_points(r.matched_only.mas) << '\n';
  if (r.ap) out << "mAP                " << format_points(r.ap->map) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Plot data

enum class PlotKind { kScatterMapMas, kPerClassBars, kMSweep };

inline PlotKind parse_plot_kind(std::string_view s) {
  if (s == "scatter_map_mas") return PlotKind::kScatterMapMas;
  if (s == "per_class_bars") return PlotKind::kPerClassBars;
  if (s == "m_sweep") return PlotKind::kMSweep;
  throw std::invalid_argument("unknown plot kind '" + std::string(s) +
                              "' (expected scatter_map_mas, per_class_bars or m_sweep)");
}

struct LabeledReport {
  std::string label;
  Json report;
};

// Expands a report document or a sweep document ({"reports": [{"label",
// "report"}, ...]}) into labeled reports.
inline std::vector<LabeledReport> expand_reports(const Json& doc, const std::string& label) {
  std::vector<LabeledReport> out;
  if (doc.contains("reports")) {
    for (const auto& entry : doc.at("reports")) {
      out.push_back({entry.at("label").get<std::string>(), entry.at("report")});
    }
  } else {
    out.push_back({label, doc});
  }
  return out;
}

// Comma-separated table with a header row; scores on a 0-100 scale.
inline std::string emit_plot_data(const std::vector<LabeledReport>& reports, PlotKind kind) {
  if (reports.empty()) throw std::invalid_argument("plot data needs at least one report");
  auto pts = [](const Json& v) -> std::string {
    if (v.is_null()) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v.get<double>() * 100.0);
    return buf;
  };
  std::ostringstream out;
  switch (kind) {
    case PlotKind::kScatterMapMas:
      out << "label,mAP,mAS\n";
      for (const auto& r : reports) {
        if (!r.report.contains("accuracy")) {
          throw InputError("report '" + r.label + "' has no accuracy section (run eval --map)");
        }
        out << r.label << ',' << pts(r.report.at("accuracy").at("map")) << ','
            << pts(r.report.at("stability").at("mas")) << '\n';
      }
      break;
    case PlotKind::kPerClassBars:
      out << "label,class,presence,loc,shape,stability\n";
      for (const auto& r : reports) {
        for (const auto& [cls, v] : r.report.at("stability").at("per_class").items()) {
          out << r.label << ',' << cls << ',' << pts(v.at("presence")) << ','
              << pts(v.at("loc")) << ',' << pts(v.at("shape")) << ',' << pts(v.at("stability"))
              << '\n';
        }
      }
      break;
    case PlotKind::kMSweep:
      out << "M,label,presence,loc,shape,mAS\n";
      for (const auto& r : reports) {
        const Json& s = r.report.at("stability");
        out << r.report.at("config").at("m").get<std::size_t>() << ',' << r.label << ','
            << pts(s.at("presence")) << ',' << pts(s.at("loc")) << ',' << pts(s.at("shape"))
            << ',' << pts(s.at("mas")) << '\n';
      }
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// eval

struct EvalInputs {
  std::string pred_path;  // combined file when gt_path is empty
  std::string gt_path;
};

struct EvalResult {
  EvaluationReport report;
  std::vector<InputDigest> digests;
};

inline EvalResult run_eval(const EvalInputs& inputs, const EvalConfig& config, bool with_ap) {
  EvalResult out;
  std::vector<SequenceView> scenes;
  auto load = [](const std::string& path, SequenceContent content, std::string* bytes) {
    *bytes = detail::read_file(path);
    try {
      return parse_sequences(*bytes, content);
    } catch (const InputError& e) {
      throw InputError(path + ": " + e.what());
    }
  };
  std::string bytes;
  if (inputs.gt_path.empty()) {
    scenes = load(inputs.pred_path, SequenceContent::kCombined, &bytes);
    out.digests.push_back({"combined", digest(bytes)});
  } else {
    auto pred = load(inputs.pred_path, SequenceContent::kPredictions, &bytes);
    out.digests.push_back({"predictions", digest(bytes)});
    auto gt = load(inputs.gt_path, SequenceContent::kGroundTruth, &bytes);
    out.digests.push_back({"ground_truth", digest(bytes)});
    scenes = merge_split(std::move(gt), pred);
  }
  out.report = evaluate(scenes, config, with_ap);
  if (out.report.counts.frame_pairs == 0) {
    throw NoEvaluablePairs("no evaluable frame pairs: " +
                           std::to_string(out.report.counts.skipped_scenes) + " of " +
                           std::to_string(out.report.counts.scenes) +
                           " scenes are not longer than M = " + std::to_string(config.max_interval));
  }
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_IO_HPP_
