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

// Single-frame accuracy: Chamfer-distance average precision per class,
// averaged over distance thresholds, and its class mean (mAP).

#ifndef MAPSTAB_AVERAGE_PRECISION_HPP_
#define MAPSTAB_AVERAGE_PRECISION_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mapstab/config.hpp"
#include "mapstab/matching.hpp"

namespace mapstab {

// Area under the precision envelope (precision made monotonically
// non-increasing in recall). `recall` must be non-decreasing.
inline double area_under_pr(std::span<const double> recall, std::span<const double> precision) {
  std::vector<double> r{0.0};
  std::vector<double> p{0.0};
  r.insert(r.end(), recall.begin(), recall.end());
  p.insert(p.end(), precision.begin(), precision.end());
  r.push_back(1.0);
  p.push_back(0.0);
  for (std::size_t i = p.size() - 1; i > 0; --i) p[i - 1] = std::max(p[i - 1], p[i]);
  double ap = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) ap += (r[i] - r[i - 1]) * p[i];
  return ap;
}

struct ClassAp {
  std::vector<double> ap_per_threshold;
  double ap = 0.0;
  std::size_t gt_count = 0;
  std::size_t prediction_count = 0;
};

struct ApReport {
  std::vector<double> thresholds;
  std::map<std::string, ClassAp> per_class;
  double map = 0.0;
};

// Predictions are ranked by descending score over all frames and greedily
// matched to the nearest unmatched same-class GT in their frame whose
// Chamfer distance is within the threshold. Classes without GT are skipped.
inline ApReport chamfer_ap(std::span<const FrameRecord> frames, std::span<const double> thresholds,
                           const EvalConfig& config) {
  struct Candidate {
    double score;
    std::size_t frame;
    std::size_t pred;
  };
  std::map<std::string, std::vector<Candidate>> candidates;
  std::map<std::string, std::size_t> gt_counts;
  std::vector<CostMatrix> costs;
  costs.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    costs.push_back(frame_cost_matrix(frames[f], config.n_samples));
    for (const auto& g : frames[f].ground_truth) ++gt_counts[g.class_label];
    for (std::size_t i = 0; i < frames[f].predictions.size(); ++i) {
      const auto& p = frames[f].predictions[i];
      candidates[p.class_label].push_back({p.score.value_or(0.0), f, i});
    }
  }

  ApReport out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  for (const auto& [label, gt_count] : gt_counts) {
    auto cands = candidates[label];
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(b.score, a.frame, a.pred) < std::tie(a.score, b.frame, b.pred);
    });
    ClassAp cls;
    cls.gt_count = gt_count;
    cls.prediction_count = cands.size();
    double ap_sum = 0.0;
    for (const double threshold : thresholds) {
      std::vector<std::vector<char>> taken(frames.size());
      for (std::size_t f = 0; f < frames.size(); ++f) {
        taken[f].assign(frames[f].ground_truth.size(), 0);
      }
      std::vector<double> recall, precision;
      recall.reserve(cands.size());
      precision.reserve(cands.size());
      std::size_t tp = 0;
      for (std::size_t rank = 0; rank < cands.size(); ++rank) {
        const Candidate& c = cands[rank];
        const CostMatrix& cost = costs[c.frame];
        std::size_t best = cost.cols();
        double best_cost = threshold;
        for (std::size_t j = 0; j < cost.cols(); ++j) {
          if (taken[c.frame][j]) continue;
          const double d = cost(c.pred, j);
          if (d <= best_cost) {
            best_cost = d;
            best = j;
          }
        }
        if (best != cost.cols()) {
          taken[c.frame][best] = 1;
          ++tp;
        }
        recall.push_back(static_cast<double>(tp) / static_cast<double>(gt_count));
        precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
      }
      const double ap = cands.empty() ? 0.0 : area_under_pr(recall, precision);
      cls.ap_per_threshold.push_back(ap);
      ap_sum += ap;
    }
    cls.ap = thresholds.empty() ? 0.0 : ap_sum / static_cast<double>(thresholds.size());
    out.per_class.emplace(label, std::move(cls));
  }
  double class_sum = 0.0;
  for (const auto& [_, c] : out.per_class) class_sum += c.ap;
  out.map = out.per_class.empty() ? 0.0 : class_sum / static_cast<double>(out.per_class.size());
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_AVERAGE_PRECISION_HPP_
