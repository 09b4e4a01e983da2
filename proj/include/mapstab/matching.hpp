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

// Frame-to-GT assignment and GT-mediated association of predictions across
// two frames.

#ifndef MAPSTAB_MATCHING_HPP_
#define MAPSTAB_MATCHING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mapstab/config.hpp"
#include "mapstab/geometry.hpp"

namespace mapstab {

// A predicted or ground-truth map element. Predictions carry a score, GT
// elements carry a persistent track id.
struct MapElement {
  std::string element_id;
  std::string class_label;
  PolyLine2D geometry;
  std::optional<double> score;
  std::optional<std::string> gt_track_id;

  bool is_prediction() const { return score.has_value(); }
};

inline MapElement make_prediction(std::string id, std::string class_label,
                                  PolyLine2D geometry, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw std::invalid_argument("prediction score must lie in [0, 1]");
  }
  return MapElement{std::move(id), std::move(class_label), std::move(geometry),
                    score, std::nullopt};
}

inline MapElement make_ground_truth(std::string track_id, std::string class_label,
                                    PolyLine2D geometry) {
  std::string id = track_id;
  return MapElement{std::move(id), std::move(class_label), std::move(geometry),
                    std::nullopt, std::move(track_id)};
}

struct FrameRecord {
  std::string scene_id;
  std::int64_t frame_index = 0;
  double timestamp = 0.0;
  RigidPose2D ego_pose;
  std::vector<MapElement> predictions;
  std::vector<MapElement> ground_truth;

  const MapElement* find_gt(const std::string& track_id) const {
    for (const auto& g : ground_truth) {
      if (g.gt_track_id == track_id) return &g;
    }
    return nullptr;
  }
};

// Symmetric Chamfer distance between the arc-length densified point sets.
inline double chamfer_cost(const PolyLine2D& pred, const PolyLine2D& gt,
                           std::size_t resolution) {
  const auto a = densify_by_arc_length(pred, resolution);
  const auto b = densify_by_arc_length(gt, resolution);
  auto directed = [](const std::vector<Point2D>& from, const std::vector<Point2D>& to) {
    double sum = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        const double dx = p.x - q.x;
        const double dy = p.y - q.y;
        best = std::min(best, dx * dx + dy * dy);
      }
      sum += std::sqrt(best);
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

// Dense row-major matrix of assignment costs. Infinite entries are
// forbidden pairings.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols,
             double fill = std::numeric_limits<double>::infinity())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  CostMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged cost matrix");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct Assignment {
  std::size_t row;
  std::size_t col;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

// Minimum-cost assignment (shortest augmenting path with potentials,
// O(n^2 m)). Among all one-to-one assignments it maximizes the number of
// finite-cost pairs and, given that, minimizes their total cost. Pairs
// with infinite cost are never returned. Output is sorted by row.
inline std::vector<Assignment> hungarian(const CostMatrix& cost) {
  const bool transposed = cost.rows() > cost.cols();
  const std::size_t n = transposed ? cost.cols() : cost.rows();
  const std::size_t m = transposed ? cost.rows() : cost.cols();
  if (n == 0) return {};

  auto raw = [&](std::size_t i, std::size_t j) {
    return transposed ? cost(j, i) : cost(i, j);
  };

  // Infinite entries become a penalty larger than any achievable spread of
  // finite totals, so every optimum uses as many finite pairs as possible.
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = raw(i, j);
      if (std::isnan(c)) throw std::invalid_argument("cost matrix contains NaN");
      if (std::isfinite(c)) max_abs = std::max(max_abs, std::abs(c));
    }
  }
  const double forbidden = (2.0 * static_cast<double>(n) + 1.0) * (max_abs + 1.0);
  auto at = [&](std::size_t i, std::size_t j) {
    const double c = raw(i, j);
    return std::isfinite(c) ? c : forbidden;
  };

  // 1-based arrays; column 0 is the virtual source.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Assignment> out;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    const std::size_t i = p[j] - 1;
    if (!std::isfinite(raw(i, j - 1))) continue;
    out.push_back(transposed ? Assignment{j - 1, i} : Assignment{i, j - 1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct MatchedPairEntry {
  std::size_t prediction_index;
  std::size_t gt_index;
  std::string prediction_id;
  std::string gt_track_id;
  double cost;
};

struct FrameMatch {
  std::int64_t frame_index = 0;
  std::vector<MatchedPairEntry> pairs;
  std::vector<std::string> unmatched_predictions;
  std::vector<std::string> unmatched_gt;

  const MatchedPairEntry* find(const std::string& track_id) const {
    for (const auto& p : pairs) {
      if (p.gt_track_id == track_id) return &p;
    }
    return nullptr;
  }
};

// Chamfer cost between every prediction and GT element; class mismatches
// are infinite.
inline CostMatrix frame_cost_matrix(const FrameRecord& frame, std::size_t resolution) {
  CostMatrix cost(frame.predictions.size(), frame.ground_truth.size());
  for (std::size_t i = 0; i < frame.predictions.size(); ++i) {
    for (std::size_t j = 0; j < frame.ground_truth.size(); ++j) {
      const auto& pred = frame.predictions[i];
      const auto& gt = frame.ground_truth[j];
      if (pred.class_label != gt.class_label) continue;
      cost(i, j) = chamfer_cost(pred.geometry, gt.geometry, resolution);
    }
  }
  return cost;
}

inline FrameMatch match_frame(const FrameRecord& frame, const EvalConfig& config) {
  const CostMatrix cost = frame_cost_matrix(frame, config.n_samples);
  FrameMatch out;
  out.frame_index = frame.frame_index;
  std::vector<char> pred_used(frame.predictions.size(), 0);
  std::vector<char> gt_used(frame.ground_truth.size(), 0);
  for (const auto& a : hungarian(cost)) {
    const double c = cost(a.row, a.col);
    if (c > config.match_gate) continue;
    pred_used[a.row] = 1;
    gt_used[a.col] = 1;
    out.pairs.push_back({a.row, a.col, frame.predictions[a.row].element_id,
                         *frame.ground_truth[a.col].gt_track_id, c});
  }
  for (std::size_t i = 0; i < pred_used.size(); ++i) {
    if (!pred_used[i]) out.unmatched_predictions.push_back(frame.predictions[i].element_id);
  }
  for (std::size_t j = 0; j < gt_used.size(); ++j) {
    if (!gt_used[j]) out.unmatched_gt.push_back(*frame.ground_truth[j].gt_track_id);
  }
  return out;
}

// Two predictions, one per frame, linked through a shared GT track.
struct MatchedInstancePair {
  std::string gt_track_id;
  std::string class_label;
  PolyLine2D poly_current;
  PolyLine2D poly_history;
  double score_current;
  double score_history;
  RigidPose2D pose_current;
  RigidPose2D pose_history;
  // GT geometry of the shared track in each frame.
  PolyLine2D gt_current;
  PolyLine2D gt_history;
};

// A GT track visible in both frames but matched by a prediction in only one.
struct OneSidedInstance {
  std::string gt_track_id;
  std::string class_label;
  std::optional<double> score_current;
  std::optional<double> score_history;
};

struct Association {
  std::vector<MatchedInstancePair> pairs;
  std::vector<OneSidedInstance> one_sided;
};

// Pairs predictions matched to the same GT track in frame t (history) and
// frame t+k (current). Output is ordered by track id.
inline Association associate_pair(const FrameRecord& frame_t, const FrameRecord& frame_tk,
                                  const FrameMatch& match_t, const FrameMatch& match_tk) {
  std::map<std::string, const MatchedPairEntry*> hist;
  std::map<std::string, const MatchedPairEntry*> cur;
  for (const auto& p : match_t.pairs) hist.emplace(p.gt_track_id, &p);
  for (const auto& p : match_tk.pairs) cur.emplace(p.gt_track_id, &p);

  Association out;
  for (const auto& [id, h] : hist) {
    const auto it = cur.find(id);
    const MapElement& gt_h = frame_t.ground_truth[h->gt_index];
    if (it == cur.end()) {
      if (frame_tk.find_gt(id) != nullptr) {
        out.one_sided.push_back(
            {id, gt_h.class_label, std::nullopt, frame_t.predictions[h->prediction_index].score});
      }
      continue;
    }
    const MatchedPairEntry* c = it->second;
    const MapElement& pred_h = frame_t.predictions[h->prediction_index];
    const MapElement& pred_c = frame_tk.predictions[c->prediction_index];
    const MapElement& gt_c = frame_tk.ground_truth[c->gt_index];
    out.pairs.push_back(MatchedInstancePair{
        id, gt_c.class_label, pred_c.geometry, pred_h.geometry,
        pred_c.score.value_or(0.0), pred_h.score.value_or(0.0), frame_tk.ego_pose,
        frame_t.ego_pose, gt_c.geometry, gt_h.geometry});
  }
  for (const auto& [id, c] : cur) {
    if (hist.count(id) != 0) continue;
    if (frame_t.find_gt(id) == nullptr) continue;
    const MapElement& gt_c = frame_tk.ground_truth[c->gt_index];
    out.one_sided.push_back(
        {id, gt_c.class_label, frame_tk.predictions[c->prediction_index].score, std::nullopt});
  }
  std::sort(out.one_sided.begin(), out.one_sided.end(),
            [](const OneSidedInstance& a, const OneSidedInstance& b) {
              return a.gt_track_id < b.gt_track_id;
            });
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_MATCHING_HPP_
