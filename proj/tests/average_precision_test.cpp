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


#include "mapstab/average_precision.hpp"

#include <random>

#include <gtest/gtest.h>

namespace mapstab {
namespace {

const std::vector<double> kThresholds{0.5, 1.0, 1.5};

FrameRecord lanes(std::size_t count) {
  FrameRecord f;
  for (std::size_t i = 0; i < count; ++i) {
    const double y = 4.0 * static_cast<double>(i);
    f.ground_truth.push_back(
        make_ground_truth("g" + std::to_string(i), "divider", PolyLine2D{{-10, y}, {10, y}}));
  }
  return f;
}

// Per-rank oracle: AP = (1/G) * sum over true-positive ranks of the best
// precision at that rank or any later rank.
double envelope_oracle(const std::vector<bool>& tp, std::size_t gt) {
  std::vector<double> precision;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    hits += tp[k];
    precision.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
  }
  double ap = 0.0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    if (!tp[k]) continue;
    double best = 0.0;
    for (std::size_t j = k; j < tp.size(); ++j) best = std::max(best, precision[j]);
    ap += best;
  }
  return ap / static_cast<double>(gt);
}

TEST(ChamferAp, PerfectPredictions) {
  FrameRecord f = lanes(3);
  for (const auto& g : f.ground_truth) {
    f.predictions.push_back(make_prediction("p" + g.element_id, g.class_label, g.geometry, 1.0));
  }
  const std::vector<FrameRecord> frames{f};
  const auto r = chamfer_ap(frames, kThresholds, EvalConfig{});
  EXPECT_EQ(r.map, 1.0);
}

TEST(ChamferAp, NoPredictions) {
  const std::vector<FrameRecord> frames{lanes(2)};
  const auto r = chamfer_ap(frames, kThresholds, EvalConfig{});
  EXPECT_EQ(r.map, 0.0);
  EXPECT_EQ(r.per_class.at("divider").prediction_count, 0u);
}

TEST(ChamferAp, OneOfTwoDetected) {
  FrameRecord f = lanes(2);
  f.predictions.push_back(make_prediction("p0", "divider", f.ground_truth[0].geometry, 1.0));
  const std::vector<FrameRecord> frames{f};
  const auto r = chamfer_ap(frames, kThresholds, EvalConfig{});
  for (double ap : r.per_class.at("divider").ap_per_threshold) EXPECT_EQ(ap, 0.5);
  EXPECT_EQ(r.map, 0.5);
}

TEST(ChamferAp, ThresholdsSeparateOffsets) {
  FrameRecord f = lanes(1);
  f.predictions.push_back(make_prediction("p0", "divider", PolyLine2D{{-10, 0.8}, {10, 0.8}}, 0.7));
  const std::vector<FrameRecord> frames{f};
  const auto r = chamfer_ap(frames, kThresholds, EvalConfig{});
  EXPECT_EQ(r.per_class.at("divider").ap_per_threshold, (std::vector<double>{0.0, 1.0, 1.0}));
  EXPECT_NEAR(r.map, 2.0 / 3.0, 1e-15);
}

TEST(ChamferAp, MatchesPerRankOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::bernoulli_distribution hit(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    FrameRecord f = lanes(6);
    // Predictions either sit on a distinct GT or far away; scores distinct.
    std::vector<std::pair<double, bool>> ranked;
    std::size_t next_gt = 0;
    for (int i = 0; i < 8; ++i) {
      const double s = score(rng);
      const bool on = next_gt < 6 && hit(rng);
      const double y = on ? 4.0 * static_cast<double>(next_gt++) : 200.0 + i;
      f.predictions.push_back(
          make_prediction("p" + std::to_string(i), "divider", PolyLine2D{{-10, y}, {10, y}}, s));
      ranked.emplace_back(s, on);
    }
    std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<bool> tp;
    for (const auto& [_, on] : ranked) tp.push_back(on);
    const std::vector<FrameRecord> frames{f};
    const auto r = chamfer_ap(frames, kThresholds, EvalConfig{});
    EXPECT_NEAR(r.map, envelope_oracle(tp, 6), 1e-12) << "trial " << trial;
  }
}

TEST(AreaUnderPr, StepCurve) {
  const std::vector<double> recall{0.5, 0.5, 1.0};
  const std::vector<double> precision{1.0, 0.5, 2.0 / 3.0};
  EXPECT_NEAR(area_under_pr(recall, precision), 0.5 + 0.5 * 2.0 / 3.0, 1e-15);
}

}  // namespace
}  // namespace mapstab
