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

// End-to-end stability evaluation over a set of scenes.

#ifndef MAPSTAB_PIPELINE_HPP_
#define MAPSTAB_PIPELINE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapstab/average_precision.hpp"
#include "mapstab/config.hpp"
#include "mapstab/matching.hpp"
#include "mapstab/metrics.hpp"
#include "mapstab/sampling.hpp"

namespace mapstab {

struct EvaluationCounts {
  std::size_t scenes = 0;
  std::size_t skipped_scenes = 0;
  std::size_t frame_pairs = 0;
  std::size_t matched_instances = 0;
  std::size_t one_sided_instances = 0;
  // Matched in both frames, but neither the predictions nor the GT overlap
  // after alignment; excluded from every mean.
  std::size_t incomparable_instances = 0;
};

struct EvaluationReport {
  EvalConfig config;
  // One-sided instances included with loc = shape = 0.
  StabilityReport stability;
  // Instances matched in both frames only.
  StabilityReport matched_only;
  EvaluationCounts counts;
  std::vector<std::string> skipped_scene_ids;
  std::optional<ApReport> ap;
};

struct SceneResult {
  std::vector<InstanceStability> instances;
  std::size_t frame_pairs = 0;
  std::size_t incomparable = 0;
  bool skipped = false;
};

inline SceneResult evaluate_scene(const SequenceView& seq, const EvalConfig& config) {
  SceneResult out;
  if (seq.length() <= config.max_interval) {
    out.skipped = true;
    return out;
  }
  const auto samples = sample_pairs(seq, config.max_interval, config.seed);
  std::vector<std::optional<FrameMatch>> matches(seq.length());
  auto match_of = [&](std::size_t i) -> const FrameMatch& {
    if (!matches[i]) matches[i] = match_frame(seq.frames[i], config);
    return *matches[i];
  };

  for (const PairSample& s : samples) {
    const FrameRecord& hist = seq.frames[s.anchor];
    const FrameRecord& cur = seq.frames[s.target()];
    const Association assoc = associate_pair(hist, cur, match_of(s.anchor), match_of(s.target()));
    ++out.frame_pairs;
    for (const auto& pair : assoc.pairs) {
      const auto aligned = align_pair(pair.poly_current, pair.poly_history, pair.pose_current,
                                      pair.pose_history, config);
      if (!aligned && !align_pair(pair.gt_current, pair.gt_history, pair.pose_current,
                                  pair.pose_history, config)) {
        ++out.incomparable;
        continue;
      }
      InstanceStability inst = score_instance(pair, aligned, config);
      out.instances.push_back(std::move(inst));
    }
    for (const auto& one : assoc.one_sided) {
      out.instances.push_back(one_sided_stability(one, config));
    }
  }
  return out;
}

// Scenes are evaluated independently and merged in input order.
inline EvaluationReport evaluate(std::span<const SequenceView> scenes, const EvalConfig& config,
                                 bool with_ap = false) {
  config.validate();
  EvaluationReport report;
  report.config = config;
  std::vector<InstanceStability> all;
  std::vector<InstanceStability> matched;
  for (const auto& seq : scenes) {
    ++report.counts.scenes;
    SceneResult r = evaluate_scene(seq, config);
    if (r.skipped) {
      ++report.counts.skipped_scenes;
      report.skipped_scene_ids.push_back(seq.scene_id);
      continue;
    }
    report.counts.frame_pairs += r.frame_pairs;
    report.counts.incomparable_instances += r.incomparable;
    for (auto& inst : r.instances) {
      if (inst.one_sided) {
        ++report.counts.one_sided_instances;
      } else {
        ++report.counts.matched_instances;
        matched.push_back(inst);
      }
      all.push_back(std::move(inst));
    }
  }
  report.stability = aggregate(all);
  report.matched_only = aggregate(matched);
  if (with_ap) {
    std::vector<FrameRecord> frames;
    for (const auto& seq : scenes) frames.insert(frames.end(), seq.frames.begin(), seq.frames.end());
    report.ap = chamfer_ap(frames, config.ap_thresholds, config);
  }
  return report;
}

}  // namespace mapstab

#endif  // MAPSTAB_PIPELINE_HPP_
