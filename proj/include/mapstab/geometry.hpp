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

// Planar geometry for vectorized map elements: rigid SE(2) poses, polylines,
// perception-range clipping, x-parameterized resampling and the mean
// turning-angle curvature proxy.

#ifndef MAPSTAB_GEOMETRY_HPP_
#define MAPSTAB_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mapstab {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline bool is_finite(const Point2D& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Minimum segment length accepted between consecutive polyline vertices.
inline constexpr double kMinSegmentLength = 1e-9;

// An ordered sequence of at least two finite points with no zero-length
// segments. Construction validates and throws std::invalid_argument.
class PolyLine2D {
 public:
  explicit PolyLine2D(std::vector<Point2D> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
      throw std::invalid_argument("polyline needs at least 2 points, got " +
                                  std::to_string(points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!is_finite(points_[i])) {
        throw std::invalid_argument("polyline point " + std::to_string(i) +
                                    " is not finite");
      }
      if (i > 0 && distance(points_[i - 1], points_[i]) <= kMinSegmentLength) {
        throw std::invalid_argument("polyline has duplicate consecutive point at " +
                                    std::to_string(i));
      }
    }
  }

  PolyLine2D(std::initializer_list<Point2D> points)
      : PolyLine2D(std::vector<Point2D>(points)) {}

  std::span<const Point2D> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point2D& operator[](std::size_t i) const { return points_[i]; }

  double length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
      total += distance(points_[i - 1], points_[i]);
    }
    return total;
  }

  friend bool operator==(const PolyLine2D&, const PolyLine2D&) = default;

 private:
  std::vector<Point2D> points_;
};

// Builds a polyline from raw points, dropping consecutive near-duplicates.
// Returns nullopt when fewer than two distinct points remain.
inline std::optional<PolyLine2D> make_polyline(std::span<const Point2D> raw) {
  std::vector<Point2D> pts;
  pts.reserve(raw.size());
  for (const auto& p : raw) {
    if (!is_finite(p)) return std::nullopt;
    if (!pts.empty() && distance(pts.back(), p) <= kMinSegmentLength) continue;
    pts.push_back(p);
  }
  if (pts.size() < 2) return std::nullopt;
  return PolyLine2D(std::move(pts));
}

inline double normalize_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Ego->world transform of one frame. Yaw is kept in (-pi, pi].
class RigidPose2D {
 public:
  RigidPose2D() = default;
  RigidPose2D(double x, double y, double yaw)
      : x_(x), y_(y), yaw_(normalize_angle(yaw)) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(yaw)) {
      throw std::invalid_argument("pose components must be finite");
    }
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double yaw() const { return yaw_; }

  Point2D apply(const Point2D& p) const {
    const double c = std::cos(yaw_);
    const double s = std::sin(yaw_);
    return {c * p.x - s * p.y + x_, s * p.x + c * p.y + y_};
  }

  RigidPose2D inverse() const {
    const double c = std::cos(yaw_);
    const double s = std::sin(yaw_);
    return RigidPose2D(-(c * x_ + s * y_), s * x_ - c * y_, -yaw_);
  }

  // (*this) o other: apply other first.
  RigidPose2D compose(const RigidPose2D& other) const {
    const Point2D t = apply({other.x_, other.y_});
    return RigidPose2D(t.x, t.y, yaw_ + other.yaw_);
  }

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double yaw_ = 0.0;
};

struct PerceptionRange {
  double x_min = -15.0;
  double x_max = 15.0;
  double y_min = -30.0;
  double y_max = 30.0;

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw std::invalid_argument("perception range must satisfy min < max");
    }
  }

  bool contains(const Point2D& p) const {
    return x_min <= p.x && p.x <= x_max && y_min <= p.y && p.y <= y_max;
  }

  friend bool operator==(const PerceptionRange&, const PerceptionRange&) = default;
};

// Maps a polyline expressed in the ego frame of `from_pose` into the ego
// frame of `to_pose`.
inline PolyLine2D transform_polyline(const PolyLine2D& poly,
                                     const RigidPose2D& from_pose,
                                     const RigidPose2D& to_pose) {
  const RigidPose2D rel = to_pose.inverse().compose(from_pose);
  std::vector<Point2D> out;
  out.reserve(poly.size());
  for (const auto& p : poly.points()) out.push_back(rel.apply(p));
  return PolyLine2D(std::move(out));
}

// Point-retention clipping: keeps the points that fall inside the range, in
// order, without inserting boundary intersections.
inline std::optional<PolyLine2D> clip_to_range(const PolyLine2D& poly,
                                               const PerceptionRange& range) {
  std::vector<Point2D> kept;
  kept.reserve(poly.size());
  for (const auto& p : poly.points()) {
    if (range.contains(p)) kept.push_back(p);
  }
  if (kept.size() < 2) return std::nullopt;
  // Dropping an interior point can never merge neighbors into duplicates
  // unless the input revisits a point; make_polyline handles that case.
  return make_polyline(kept);
}

// Sorts points by x and averages y over runs whose x agree within tol.
inline std::vector<Point2D> monotonize_x(std::span<const Point2D> pts,
                                         double tol = 1e-9) {
  std::vector<Point2D> sorted(pts.begin(), pts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Point2D& a, const Point2D& b) { return a.x < b.x; });
  std::vector<Point2D> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double x0 = sorted[i].x;
    double sum_x = 0.0;
    double sum_y = 0.0;
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].x - x0 <= tol) {
      sum_x += sorted[j].x;
      sum_y += sorted[j].y;
      ++j;
    }
    const double n = static_cast<double>(j - i);
    out.push_back({sum_x / n, sum_y / n});
    i = j;
  }
  return out;
}

// Piecewise-linear y(x) over an x-monotone point list; x is clamped to the
// list's extent.
inline double interpolate_y(std::span<const Point2D> mono, double x) {
  if (mono.size() == 1 || x <= mono.front().x) return mono.front().y;
  if (x >= mono.back().x) return mono.back().y;
  const auto it = std::upper_bound(
      mono.begin(), mono.end(), x,
      [](double value, const Point2D& p) { return value < p.x; });
  const Point2D& hi = *it;
  const Point2D& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

struct ResampledPair {
  std::vector<double> xs;
  std::vector<double> y_current;
  std::vector<double> y_history;

  std::size_t size() const { return xs.size(); }

  std::vector<Point2D> current_points() const { return zip(y_current); }
  std::vector<Point2D> history_points() const { return zip(y_history); }

 private:
  std::vector<Point2D> zip(const std::vector<double>& ys) const {
    std::vector<Point2D> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = {xs[i], ys[i]};
    return out;
  }
};

// Minimum width of the shared x-interval for two polylines to be comparable.
inline constexpr double kMinCommonXRange = 1e-6;

// Samples both polylines at n equally spaced abscissae over their common
// x-range. Returns nullopt when the overlap is narrower than
// kMinCommonXRange.
inline std::optional<ResampledPair> resample_pair(const PolyLine2D& current,
                                                  const PolyLine2D& history,
                                                  std::size_t n) {
  if (n < 2) throw std::invalid_argument("resample count must be >= 2");
  const auto cur = monotonize_x(current.points());
  const auto hist = monotonize_x(history.points());
  const double lo = std::max(cur.front().x, hist.front().x);
  const double hi = std::min(cur.back().x, hist.back().x);
  if (!(hi - lo >= kMinCommonXRange)) return std::nullopt;

  ResampledPair out;
  out.xs.resize(n);
  out.y_current.resize(n);
  out.y_history.resize(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? hi : lo + static_cast<double>(i) * step;
    out.xs[i] = x;
    out.y_current[i] = interpolate_y(cur, x);
    out.y_history[i] = interpolate_y(hist, x);
  }
  return out;
}

// Mean turning angle between consecutive segments, in [0, pi].
inline double curvature(std::span<const Point2D> pts) {
  if (pts.size() < 3) throw std::invalid_argument("degenerate polyline");
  double sum = 0.0;
  for (std::size_t j = 0; j + 2 < pts.size(); ++j) {
    const double ax = pts[j + 1].x - pts[j].x;
    const double ay = pts[j + 1].y - pts[j].y;
    const double bx = pts[j + 2].x - pts[j + 1].x;
    const double by = pts[j + 2].y - pts[j + 1].y;
    const double norms = std::hypot(ax, ay) * std::hypot(bx, by);
    if (!(norms > 0.0)) throw std::invalid_argument("degenerate segment");
    const double c = std::clamp((ax * bx + ay * by) / norms, -1.0, 1.0);
    sum += std::acos(c);
  }
  return sum / static_cast<double>(pts.size() - 2);
}

// Resamples a polyline to `count` points equally spaced by arc length.
inline std::vector<Point2D> densify_by_arc_length(const PolyLine2D& poly,
                                                  std::size_t count) {
  if (count < 2) throw std::invalid_argument("densify count must be >= 2");
  const auto pts = poly.points();
  std::vector<double> cumulative(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + distance(pts[i - 1], pts[i]);
  }
  const double total = cumulative.back();
  std::vector<Point2D> out(count);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = total * static_cast<double>(i) / static_cast<double>(count - 1);
    while (seg + 2 < pts.size() && cumulative[seg + 1] < s) ++seg;
    const double seg_len = cumulative[seg + 1] - cumulative[seg];
    const double t = std::clamp((s - cumulative[seg]) / seg_len, 0.0, 1.0);
    out[i] = {pts[seg].x + t * (pts[seg + 1].x - pts[seg].x),
              pts[seg].y + t * (pts[seg + 1].y - pts[seg].y)};
  }
  out.back() = pts.back();
  return out;
}

}  // namespace mapstab

#endif  // MAPSTAB_GEOMETRY_HPP_
