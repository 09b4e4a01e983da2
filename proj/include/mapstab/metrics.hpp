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

// Per-instance temporal stability (presence, localization, shape and the
// combined index) and its class-level aggregation into mAS.

#ifndef MAPSTAB_METRICS_HPP_
#define MAPSTAB_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapstab/config.hpp"
#include "mapstab/geometry.hpp"
#include "mapstab/matching.hpp"

namespace mapstab {

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    ++count_;
  }
  double sum() const { return sum_ + comp_; }
  std::size_t count() const { return count_; }
  std::optional<double> mean() const {
    if (count_ == 0) return std::nullopt;
    return sum() / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::size_t count_ = 0;
};

// 1.0 when both scores sit on the same side of tau, 0.5 on a flicker. A
// missing score counts as 0.
inline double presence(std::optional<double> score_history,
                       std::optional<double> score_current, double tau) {
  const bool above_h = score_history.value_or(0.0) >= tau;
  const bool above_c = score_current.value_or(0.0) >= tau;
  return above_h == above_c ? 1.0 : 0.5;
}

inline double mean_abs_lateral_deviation(const ResampledPair& pair) {
  CompensatedSum s;
  for (std::size_t i = 0; i < pair.size(); ++i) {
    s.add(std::abs(pair.y_current[i] - pair.y_history[i]));
  }
  return s.sum() / static_cast<double>(pair.size());
}

inline double loc_score_from_deviation(double d, double beta, LocMap map = LocMap::kLinear) {
  if (map == LocMap::kExponential) {
    return std::exp(-2.0 * std::numbers::ln2 * d / beta);
  }
  return std::clamp(1.0 - d / beta, 0.0, 1.0);
}

inline double loc_stability(const ResampledPair& pair, double beta,
                            LocMap map = LocMap::kLinear) {
  return loc_score_from_deviation(mean_abs_lateral_deviation(pair), beta, map);
}

// nullopt when fewer than three samples make curvature undefined.
inline std::optional<double> shape_stability(const ResampledPair& pair) {
  if (pair.size() < 3) return std::nullopt;
  const double k_cur = curvature(pair.current_points());
  const double k_hist = curvature(pair.history_points());
  return 1.0 - std::abs(k_cur - k_hist) / std::numbers::pi;
}

inline double combine_stability(double presence_score, double loc, std::optional<double> shape,
                                double omega) {
  if (!shape) return presence_score * loc;
  return presence_score * (omega * loc + (1.0 - omega) * *shape);
}

struct InstanceStability {
  std::string gt_track_id;
  std::string class_label;
  double presence = 1.0;
  std::optional<double> loc;
  std::optional<double> shape;
  double stability = 0.0;
  // Matched in only one frame of its pair; loc and shape are scored 0.
  bool one_sided = false;
};

// History geometry expressed in the current ego frame, clipped to range and
// resampled against the current geometry.
inline std::optional<ResampledPair> align_pair(const PolyLine2D& current,
                                               const PolyLine2D& history,
                                               const RigidPose2D& pose_current,
                                               const RigidPose2D& pose_history,
                                               const EvalConfig& config) {
  const PolyLine2D moved = transform_polyline(history, pose_history, pose_current);
  const auto clipped = clip_to_range(moved, config.range);
  if (!clipped) return std::nullopt;
  return resample_pair(current, *clipped, config.n_samples);
}

// Scores a matched pair given its (possibly absent) alignment. An absent
// alignment scores loc = shape = 0.
inline InstanceStability score_instance(const MatchedInstancePair& pair,
                                        const std::optional<ResampledPair>& aligned,
                                        const EvalConfig& config) {
  InstanceStability out;
  out.gt_track_id = pair.gt_track_id;
  out.class_label = pair.class_label;
  out.presence = presence(pair.score_history, pair.score_current, config.tau);
  if (!aligned) {
    out.loc = 0.0;
    out.shape = 0.0;
  } else {
    out.loc = loc_stability(*aligned, config.beta, config.loc_map);
    out.shape = shape_stability(*aligned);
  }
  out.stability = combine_stability(out.presence, *out.loc, out.shape, config.omega);
  return out;
}

inline InstanceStability instance_stability(const MatchedInstancePair& pair,
                                            const EvalConfig& config) {
  return score_instance(pair,
                        align_pair(pair.poly_current, pair.poly_history, pair.pose_current,
                                   pair.pose_history, config),
                        config);
}

inline InstanceStability one_sided_stability(const OneSidedInstance& inst,
                                             const EvalConfig& config) {
  InstanceStability out;
  out.gt_track_id = inst.gt_track_id;
  out.class_label = inst.class_label;
  out.presence = presence(inst.score_history, inst.score_current, config.tau);
  out.loc = 0.0;
  out.shape = 0.0;
  out.stability = combine_stability(out.presence, 0.0, 0.0, config.omega);
  out.one_sided = true;
  return out;
}

struct ClassStability {
  std::optional<double> presence_mean;
  std::optional<double> loc_mean;
  std::optional<double> shape_mean;
  std::optional<double> stability_mean;
  std::size_t instance_count = 0;
};

struct StabilityReport {
  std::map<std::string, ClassStability> per_class;
  // Unweighted means over non-empty classes; `mas` is the stability one.
  std::optional<double> presence;
  std::optional<double> loc;
  std::optional<double> shape;
  std::optional<double> mas;

  std::size_t instance_count() const {
    std::size_t n = 0;
    for (const auto& [_, c] : per_class) n += c.instance_count;
    return n;
  }
};

// Class means, then the unweighted mean over non-empty classes.
inline StabilityReport aggregate(std::span<const InstanceStability> instances) {
  struct Acc {
    CompensatedSum presence, loc, shape, stability;
  };
  std::map<std::string, Acc> acc;
  for (const auto& inst : instances) {
    Acc& a = acc[inst.class_label];
    a.presence.add(inst.presence);
    if (inst.loc) a.loc.add(*inst.loc);
    if (inst.shape) a.shape.add(*inst.shape);
    a.stability.add(inst.stability);
  }
  StabilityReport out;
  CompensatedSum class_mean, class_presence, class_loc, class_shape;
  for (const auto& [label, a] : acc) {
    ClassStability c;
    c.presence_mean = a.presence.mean();
    c.loc_mean = a.loc.mean();
    c.shape_mean = a.shape.mean();
    c.stability_mean = a.stability.mean();
    c.instance_count = a.stability.count();
    if (c.stability_mean) class_mean.add(*c.stability_mean);
    if (c.presence_mean) class_presence.add(*c.presence_mean);
    if (c.loc_mean) class_loc.add(*c.loc_mean);
    if (c.shape_mean) class_shape.add(*c.shape_mean);
    out.per_class.emplace(label, c);
  }
  out.presence = class_presence.mean();
  out.loc = class_loc.mean();
  out.shape = class_shape.mean();
  out.mas = class_mean.mean();
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_METRICS_HPP_
