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

// Synthetic map sequences: world-anchored GT elements observed from a
// scripted ego trajectory, and predictions derived from them with
// controlled instability (flicker, per-frame jitter, correlated drift,
// midpoint bends, dropout, constant offset).
//
// Randomness is drawn from streams keyed by (seed, scene, frame, track), so
// changing one perturbation knob never reshuffles the draws behind another.

#ifndef MAPSTAB_SYNTHGEN_HPP_
#define MAPSTAB_SYNTHGEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapstab/geometry.hpp"
#include "mapstab/matching.hpp"
#include "mapstab/random.hpp"
#include "mapstab/sampling.hpp"

namespace mapstab {

enum class PathKind { kStraight, kArc };

struct EgoPath {
  PathKind kind = PathKind::kStraight;
  double speed = 1.0;     // meters per frame
  double radius = 100.0;  // arc only; positive turns left

  // Pose after travelling arc length s from the origin (heading +x).
  RigidPose2D pose_at(double s) const {
    if (kind == PathKind::kStraight) return RigidPose2D(s, 0.0, 0.0);
    const double heading = s / radius;
    return RigidPose2D(radius * std::sin(heading), radius * (1.0 - std::cos(heading)), heading);
  }

  // World point at arc length s, displaced `lateral` meters to the left.
  Point2D point_at(double s, double lateral) const {
    return pose_at(s).apply({0.0, lateral});
  }
};

struct TemplateElement {
  std::string track_id;
  std::string class_label;
  PolyLine2D world;
};

struct ScenarioSpec {
  std::string scene_id = "scene-0";
  std::size_t length = 50;
  EgoPath path{};
  std::vector<TemplateElement> elements;
  PerceptionRange range{};
  double frame_period = 0.1;  // seconds
  std::uint64_t seed = 0;

  void validate() const {
    if (length < 2) throw std::invalid_argument("scenario needs at least 2 frames");
    if (!(path.speed >= 0.0)) throw std::invalid_argument("ego speed must be >= 0");
    if (path.kind == PathKind::kArc && !(std::abs(path.radius) > 1.0)) {
      throw std::invalid_argument("arc radius must exceed 1 m");
    }
    if (!(frame_period > 0.0)) throw std::invalid_argument("frame period must be > 0");
    range.validate();
  }
};

// Element following the path between arc lengths [s0, s1] at a lateral
// offset, with vertices every `spacing` meters of path.
inline PolyLine2D path_parallel(const EgoPath& path, double s0, double s1, double lateral,
                                double spacing) {
  std::vector<Point2D> pts;
  const auto n = static_cast<std::size_t>(std::ceil((s1 - s0) / spacing));
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = std::min(s1, s0 + static_cast<double>(i) * spacing);
    pts.push_back(path.point_at(s, lateral));
  }
  return PolyLine2D(std::move(pts));
}

// Closed ring spanning [s - depth/2, s + depth/2] along the path and
// [-half_width, half_width] across it.
inline PolyLine2D crosswalk_ring(const EgoPath& path, double s, double depth, double half_width) {
  const double a = s - 0.5 * depth;
  const double b = s + 0.5 * depth;
  return PolyLine2D({path.point_at(a, -half_width), path.point_at(b, -half_width),
                     path.point_at(b, half_width), path.point_at(a, half_width),
                     path.point_at(a, -half_width)});
}

struct RoadLayout {
  std::vector<double> divider_offsets{-3.5, 0.0, 3.5};
  std::vector<double> boundary_offsets{-7.0, 7.0};
  double vertex_spacing = 5.0;
  double crosswalk_every = 35.0;  // meters of path; <= 0 disables
  double crosswalk_depth = 4.0;
};

// A multi-lane road along the ego path, covering the whole drive plus a
// margin on both ends. The seed shifts crosswalk placement.
inline ScenarioSpec make_scenario(std::string scene_id, std::size_t length, EgoPath path,
                                  std::uint64_t seed, const RoadLayout& layout = {}) {
  ScenarioSpec spec;
  spec.scene_id = std::move(scene_id);
  spec.length = length;
  spec.path = path;
  spec.seed = seed;
  const double drive = path.speed * static_cast<double>(length);
  const double margin = 40.0;
  int next_id = 0;
  auto id = [&] { return "t" + std::to_string(next_id++); };
  for (double off : layout.divider_offsets) {
    spec.elements.push_back({id(), "divider",
                             path_parallel(path, -margin, drive + margin, off,
                                           layout.vertex_spacing)});
  }
  for (double off : layout.boundary_offsets) {
    spec.elements.push_back({id(), "boundary",
                             path_parallel(path, -margin, drive + margin, off,
                                           layout.vertex_spacing)});
  }
  if (layout.crosswalk_every > 0.0 && !layout.boundary_offsets.empty()) {
    RandomEngine rng = make_stream(seed, "layout/" + spec.scene_id);
    double half_width = 0.0;
    for (double off : layout.boundary_offsets) half_width = std::max(half_width, std::abs(off));
    const double first = -margin / 2 + layout.crosswalk_every * uniform01(rng);
    for (double s = first; s < drive + margin / 2; s += layout.crosswalk_every) {
      spec.elements.push_back(
          {id(), "crosswalk", crosswalk_ring(path, s, layout.crosswalk_depth, half_width)});
    }
  }
  return spec;
}

// GT-only sequence: each world template expressed in every frame's ego
// frame and clipped to the perception range.
inline SequenceView generate_gt(const ScenarioSpec& spec) {
  spec.validate();
  SequenceView seq;
  seq.scene_id = spec.scene_id;
  seq.frames.reserve(spec.length);
  for (std::size_t f = 0; f < spec.length; ++f) {
    FrameRecord frame;
    frame.scene_id = spec.scene_id;
    frame.frame_index = static_cast<std::int64_t>(f);
    frame.timestamp = static_cast<double>(f) * spec.frame_period;
    frame.ego_pose = spec.path.pose_at(spec.path.speed * static_cast<double>(f));
    const RigidPose2D world_to_ego = frame.ego_pose.inverse();
    for (const auto& tmpl : spec.elements) {
      std::vector<Point2D> local;
      local.reserve(tmpl.world.size());
      for (const auto& p : tmpl.world.points()) local.push_back(world_to_ego.apply(p));
      const auto clipped = clip_to_range(PolyLine2D(std::move(local)), spec.range);
      if (!clipped) continue;
      frame.ground_truth.push_back(make_ground_truth(tmpl.track_id, tmpl.class_label, *clipped));
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

struct PerturbationSpec {
  double flicker_prob = 0.0;  // per element per frame
  double jitter_sigma = 0.0;  // meters, i.i.d. per vertex per frame
  double shape_noise = 0.0;   // radians, std-dev of the midpoint bend angle
  double dropout_prob = 0.0;
  double score_base = 0.9;
  double flicker_score = 0.1;    // score assigned on a flicker draw
  double lateral_offset = 0.0;   // meters, constant bias in every frame
  double drift_sigma = 0.0;      // meters, stationary std-dev of AR(1) drift
  double drift_corr = 0.8;       // frame-to-frame AR(1) coefficient
  std::vector<std::string> classes;  // classes to perturb; empty means all

  bool applies_to(const std::string& class_label) const {
    return classes.empty() ||
           std::find(classes.begin(), classes.end(), class_label) != classes.end();
  }

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    };
    prob(flicker_prob, "flicker_prob");
    prob(dropout_prob, "dropout_prob");
    prob(score_base, "score_base");
    prob(flicker_score, "flicker_score");
    if (!(drift_corr >= 0.0 && drift_corr < 1.0)) {
      throw std::invalid_argument("drift_corr must lie in [0, 1)");
    }
    if (!(jitter_sigma >= 0.0) || !(shape_noise >= 0.0) || !(drift_sigma >= 0.0)) {
      throw std::invalid_argument("noise scales must be >= 0");
    }
    if (!std::isfinite(lateral_offset)) throw std::invalid_argument("lateral_offset must be finite");
  }
};

// Replaces the stretch of width 2w around the half-length point with a tent
// whose apex turns by `angle` radians.
inline std::vector<Point2D> bend_at_midpoint(const PolyLine2D& poly, double angle) {
  const auto pts = poly.points();
  const double total = poly.length();
  const double w = std::min(0.5, total / 4.0);
  const double mid = total / 2.0;
  auto point_at = [&](double s, Point2D* dir) {
    double acc = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double len = distance(pts[i - 1], pts[i]);
      if (acc + len >= s || i + 1 == pts.size()) {
        const double t = std::clamp((s - acc) / len, 0.0, 1.0);
        if (dir) *dir = {(pts[i].x - pts[i - 1].x) / len, (pts[i].y - pts[i - 1].y) / len};
        return Point2D{pts[i - 1].x + t * (pts[i].x - pts[i - 1].x),
                       pts[i - 1].y + t * (pts[i].y - pts[i - 1].y)};
      }
      acc += len;
    }
    return pts.back();
  };
  Point2D dir;
  const Point2D foot_a = point_at(mid - w, nullptr);
  Point2D apex = point_at(mid, &dir);
  const Point2D foot_b = point_at(mid + w, nullptr);
  const double h = w * std::tan(angle / 2.0);
  apex = {apex.x - dir.y * h, apex.y + dir.x * h};

  std::vector<Point2D> out;
  double acc = 0.0;
  bool inserted = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) acc += distance(pts[i - 1], pts[i]);
    if (acc <= mid - w) {
      out.push_back(pts[i]);
    } else if (acc >= mid + w) {
      if (!inserted) {
        out.insert(out.end(), {foot_a, apex, foot_b});
        inserted = true;
      }
      out.push_back(pts[i]);
    }
  }
  if (!inserted) out.insert(out.end(), {foot_a, apex, foot_b});
  return out;
}

// Derives predictions from a GT sequence. Predictions carry no track id.
inline SequenceView perturb(const SequenceView& gt_seq, const PerturbationSpec& pert,
                            std::uint64_t seed) {
  pert.validate();
  SequenceView out = gt_seq;

  // AR(1) lateral drift per track, advanced over every frame of the scene.
  std::vector<std::vector<std::pair<std::string, double>>> drift(out.frames.size());
  if (pert.drift_sigma > 0.0) {
    std::vector<std::string> tracks;
    for (const auto& f : out.frames) {
      for (const auto& g : f.ground_truth) {
        if (std::find(tracks.begin(), tracks.end(), *g.gt_track_id) == tracks.end()) {
          tracks.push_back(*g.gt_track_id);
        }
      }
    }
    const double innovation = pert.drift_sigma * std::sqrt(1.0 - pert.drift_corr * pert.drift_corr);
    for (const auto& track : tracks) {
      RandomEngine rng = make_stream(seed, "drift/" + out.scene_id + "/" + track);
      std::normal_distribution<double> normal;
      double o = pert.drift_sigma * normal(rng);
      for (std::size_t f = 0; f < out.frames.size(); ++f) {
        if (f > 0) o = pert.drift_corr * o + innovation * normal(rng);
        drift[f].emplace_back(track, o);
      }
    }
  }

  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    FrameRecord& frame = out.frames[f];
    frame.predictions.clear();
    for (const auto& gt : frame.ground_truth) {
      const std::string key = out.scene_id + "/" + std::to_string(frame.frame_index) + "/" +
                              *gt.gt_track_id;
      RandomEngine rng = make_stream(seed, "element/" + key);
      const double u_flicker = uniform01(rng);
      const double u_drop = uniform01(rng);
      const double z_bend = std::normal_distribution<double>{}(rng);
      if (!pert.applies_to(gt.class_label)) {
        frame.predictions.push_back(make_prediction("p" + std::to_string(frame.predictions.size()),
                                                    gt.class_label, gt.geometry, pert.score_base));
        continue;
      }
      if (u_drop < pert.dropout_prob) continue;

      std::vector<Point2D> pts(gt.geometry.points().begin(), gt.geometry.points().end());
      // Closed rings (crosswalks) are not bent: a tent on a ring edge would
      // move the ring's x-extent rather than its curvature.
      const bool closed = pts.front() == pts.back();
      if (pert.shape_noise > 0.0 && !closed) {
        pts = bend_at_midpoint(gt.geometry, pert.shape_noise * z_bend);
      }
      if (pert.jitter_sigma > 0.0) {
        RandomEngine jitter_rng = make_stream(seed, "jitter/" + key);
        std::normal_distribution<double> normal(0.0, pert.jitter_sigma);
        for (auto& p : pts) p.y += normal(jitter_rng);
      }
      double shift = pert.lateral_offset;
      for (const auto& [track, o] : drift[f]) {
        if (track == *gt.gt_track_id) shift += o;
      }
      if (shift != 0.0) {
        for (auto& p : pts) p.y += shift;
      }
      auto geometry = make_polyline(pts);
      if (!geometry) continue;
      const double score = u_flicker < pert.flicker_prob ? pert.flicker_score : pert.score_base;
      frame.predictions.push_back(make_prediction(
          "p" + std::to_string(frame.predictions.size()), gt.class_label, std::move(*geometry),
          score));
    }
  }
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_SYNTHGEN_HPP_
