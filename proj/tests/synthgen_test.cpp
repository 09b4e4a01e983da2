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


#include "mapstab/synthgen.hpp"

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mapstab/pipeline.hpp"

namespace mapstab {
namespace {

SequenceView scene(const std::string& id, PathKind kind, std::uint64_t seed, std::size_t length = 50) {
  EgoPath path;
  path.kind = kind;
  return generate_gt(make_scenario(id, length, path, seed));
}

// Scene of `length` frames with zero ego motion and one lane of exactly n
// vertices placed on the resampling grid across [-15, 15].
SequenceView grid_lane_scene(const std::string& id, std::size_t length, std::size_t n) {
  ScenarioSpec spec;
  spec.scene_id = id;
  spec.length = length;
  spec.path.speed = 0.0;
  std::vector<Point2D> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({-15.0 + static_cast<double>(i) * 30.0 / static_cast<double>(n - 1), 0.0});
  }
  spec.elements.push_back({"lane", "divider", PolyLine2D(pts)});
  return generate_gt(spec);
}

std::vector<SequenceView> corpus(std::size_t scenes, std::uint64_t seed) {
  std::vector<SequenceView> out;
  for (std::size_t i = 0; i < scenes; ++i) {
    out.push_back(scene("scene-" + std::to_string(i), i % 2 ? PathKind::kArc : PathKind::kStraight,
                        seed + i));
  }
  return out;
}

TEST(GenerateGt, StraightLaneIsTranslationInvariant) {
  ScenarioSpec spec;
  spec.length = 20;
  spec.elements.push_back({"lane", "divider", path_parallel(spec.path, -100, 200, 3.5, 1.0)});
  const auto seq = generate_gt(spec);
  ASSERT_EQ(seq.length(), 20u);
  const PolyLine2D& first = seq.frames[0].ground_truth.at(0).geometry;
  for (const auto& f : seq.frames) {
    ASSERT_EQ(f.ground_truth.size(), 1u);
    const PolyLine2D& g = f.ground_truth[0].geometry;
    // The lane slides by whole vertex spacings, so the clipped sets coincide.
    ASSERT_EQ(g.size(), first.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(g[i].x, first[i].x, 1e-9);
      EXPECT_NEAR(g[i].y, first[i].y, 1e-9);
    }
  }
}

TEST(GenerateGt, ElementBehindIsAbsent) {
  ScenarioSpec spec;
  spec.length = 5;
  spec.elements.push_back({"old", "divider", PolyLine2D{{-100, 0}, {-60, 0}}});
  for (const auto& f : generate_gt(spec).frames) EXPECT_TRUE(f.ground_truth.empty());
}

TEST(GenerateGt, DeterministicAndValid) {
  const auto a = scene("s", PathKind::kArc, 5);
  const auto b = scene("s", PathKind::kArc, 5);
  ASSERT_EQ(a.length(), b.length());
  for (std::size_t f = 0; f < a.length(); ++f) {
    ASSERT_EQ(a.frames[f].ground_truth.size(), b.frames[f].ground_truth.size());
    for (std::size_t i = 0; i < a.frames[f].ground_truth.size(); ++i) {
      EXPECT_EQ(a.frames[f].ground_truth[i].geometry, b.frames[f].ground_truth[i].geometry);
    }
  }
  EXPECT_NO_THROW(a.validate());
  for (const auto& f : a.frames) {
    for (const auto& g : f.ground_truth) {
      for (const auto& p : g.geometry.points()) EXPECT_TRUE(PerceptionRange{}.contains(p));
    }
  }
}

TEST(GenerateGt, LayoutHasEveryClass) {
  const auto seq = scene("s", PathKind::kStraight, 1);
  std::set<std::string> classes;
  for (const auto& f : seq.frames) {
    for (const auto& g : f.ground_truth) classes.insert(g.class_label);
  }
  EXPECT_EQ(classes, (std::set<std::string>{"boundary", "crosswalk", "divider"}));
}

TEST(GenerateGt, RejectsBadSpec) {
  ScenarioSpec spec;
  spec.length = 1;
  EXPECT_THROW(generate_gt(spec), std::invalid_argument);
  spec.length = 5;
  spec.path.kind = PathKind::kArc;
  spec.path.radius = 0.5;
  EXPECT_THROW(generate_gt(spec), std::invalid_argument);
}

TEST(Perturb, ZeroKnobsCloneGeometry) {
  const auto gt = scene("s", PathKind::kArc, 2);
  const auto pred = perturb(gt, PerturbationSpec{}, 9);
  for (std::size_t f = 0; f < gt.length(); ++f) {
    const auto& frame = pred.frames[f];
    ASSERT_EQ(frame.predictions.size(), frame.ground_truth.size());
    for (std::size_t i = 0; i < frame.predictions.size(); ++i) {
      EXPECT_EQ(frame.predictions[i].geometry, frame.ground_truth[i].geometry);
      EXPECT_FALSE(frame.predictions[i].gt_track_id.has_value());
      EXPECT_EQ(frame.predictions[i].score, 0.9);
    }
  }
}

TEST(Perturb, FullDropoutEmptiesPredictions) {
  PerturbationSpec p;
  p.dropout_prob = 1.0;
  for (const auto& f : perturb(scene("s", PathKind::kStraight, 2), p, 1).frames) {
    EXPECT_TRUE(f.predictions.empty());
  }
}

TEST(Perturb, Deterministic) {
  PerturbationSpec p;
  p.jitter_sigma = 0.4;
  p.flicker_prob = 0.2;
  p.shape_noise = 0.1;
  p.drift_sigma = 0.5;
  const auto gt = scene("s", PathKind::kArc, 3);
  const auto a = perturb(gt, p, 77);
  const auto b = perturb(gt, p, 77);
  const auto c = perturb(gt, p, 78);
  bool differs = false;
  for (std::size_t f = 0; f < gt.length(); ++f) {
    ASSERT_EQ(a.frames[f].predictions.size(), b.frames[f].predictions.size());
    for (std::size_t i = 0; i < a.frames[f].predictions.size(); ++i) {
      EXPECT_EQ(a.frames[f].predictions[i].geometry, b.frames[f].predictions[i].geometry);
      EXPECT_EQ(a.frames[f].predictions[i].score, b.frames[f].predictions[i].score);
      if (i < c.frames[f].predictions.size() &&
          !(a.frames[f].predictions[i].geometry == c.frames[f].predictions[i].geometry)) {
        differs = true;
      }
    }
  }
  EXPECT_TRUE(differs);
}

TEST(Perturb, RejectsBadSpec) {
  PerturbationSpec p;
  p.flicker_prob = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.jitter_sigma = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.drift_corr = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(BendAtMidpoint, TurnsByTheRequestedAngle) {
  const PolyLine2D line{{0, 0}, {10, 0}};
  const auto bent = bend_at_midpoint(line, 0.4);
  ASSERT_EQ(bent.size(), 5u);
  EXPECT_EQ(bent.front(), line[0]);
  EXPECT_EQ(bent.back(), line[1]);
  // Turning angles at the two feet and the apex sum to 2 * 0.4.
  const double k = curvature(bent);
  EXPECT_NEAR(k * 3.0, 0.8, 1e-12);
}

TEST(Perturb, PerfectCloneScoresHundred) {
  auto scenes = corpus(6, 100);
  PerturbationSpec p;
  p.score_base = 1.0;
  for (auto& s : scenes) s = perturb(s, p, 0);
  const auto r = evaluate(scenes, EvalConfig{});
  EXPECT_NEAR(*r.stability.mas, 1.0, 1e-6);
  EXPECT_EQ(*r.stability.presence, 1.0);
  EXPECT_NEAR(*r.stability.loc, 1.0, 1e-6);
  EXPECT_NEAR(*r.stability.shape, 1.0, 1e-6);
  EXPECT_EQ(r.counts.one_sided_instances, 0u);
}

TEST(Perturb, FlickerMatchesEnumeration) {
  const double p = 0.3;
  // Four outcomes per pair: neither flips, one side flips (two ways), both.
  const double expected = (1 - p) * (1 - p) * 1.0 + 2 * p * (1 - p) * 0.5 + p * p * 1.0;
  auto scenes = corpus(10, 500);
  PerturbationSpec pert;
  pert.flicker_prob = p;
  for (auto& s : scenes) s = perturb(s, pert, 4);
  const auto r = evaluate(scenes, EvalConfig{});
  ASSERT_EQ(r.counts.one_sided_instances, 0u);
  // Presence takes values {0.5, 1}; its std-dev is 0.5 * sqrt(q (1 - q)).
  const double q = 2 * p * (1 - p);
  const double n = static_cast<double>(r.counts.matched_instances);
  const double se = 0.5 * std::sqrt(q * (1 - q) / n);
  double measured = 0.0;
  for (const auto& [_, c] : r.stability.per_class) {
    measured += *c.presence_mean * static_cast<double>(c.instance_count);
  }
  measured /= n;
  EXPECT_NEAR(measured, expected, 3 * se);
}

TEST(Perturb, JitterMatchesFoldedNormalMonteCarlo) {
  const double sigma = 1.0;
  const double beta = 15.0;
  const std::size_t n = 100;
  // Independent two-frame scenes give independent pairs.
  std::vector<SequenceView> scenes;
  PerturbationSpec pert;
  pert.jitter_sigma = sigma;
  for (int i = 0; i < 2000; ++i) {
    scenes.push_back(perturb(grid_lane_scene("g" + std::to_string(i), 2, n), pert, 11));
  }
  EvalConfig config;
  config.max_interval = 1;
  const auto r = evaluate(scenes, config);
  ASSERT_EQ(r.counts.matched_instances, 2000u);

  // Oracle: the per-vertex difference of two independent jitters is
  // N(0, 2 sigma^2); d is the mean of n folded draws.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> diff(0.0, std::sqrt(2.0) * sigma);
  const int samples = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += std::abs(diff(rng));
    d /= static_cast<double>(n);
    const double loc = std::clamp(1.0 - d / beta, 0.0, 1.0);
    sum += loc;
    sum_sq += loc * loc;
  }
  const double mean = sum / samples;
  const double var = sum_sq / samples - mean * mean;
  const double se = std::sqrt(var / 2000.0 + var / samples);
  EXPECT_NEAR(*r.stability.loc, mean, 3 * se);
}

TEST(Perturb, ClassFilterLeavesOtherClassesPerfect) {
  auto scenes = corpus(4, 300);
  PerturbationSpec pert;
  pert.jitter_sigma = 0.5;
  pert.flicker_prob = 0.3;
  pert.shape_noise = 0.3;
  pert.classes = {"divider"};
  for (auto& s : scenes) s = perturb(s, pert, 5);
  const auto r = evaluate(scenes, EvalConfig{});
  const auto& boundary = r.stability.per_class.at("boundary");
  EXPECT_EQ(*boundary.presence_mean, 1.0);
  EXPECT_NEAR(*boundary.loc_mean, 1.0, 1e-6);
  EXPECT_NEAR(*boundary.shape_mean, 1.0, 1e-6);
  EXPECT_LT(*r.stability.per_class.at("divider").stability_mean, 0.95);
}

}  // namespace
}  // namespace mapstab
