#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "vinedesign/geometry.hpp"

namespace vine {

using Rng = std::mt19937_64;

/// Uniform draw on [lo, hi]; returns lo when the range is a point.
inline double uniform_in(Rng& rng, double lo, double hi) {
  const double u = std::generate_canonical<double, 53>(rng);
  return std::min(hi, lo + (hi - lo) * u);
}

/// Sorted union of disjoint closed angular intervals inside (-pi, pi].
class AngleIntervalSet {
 public:
  AngleIntervalSet() = default;
  explicit AngleIntervalSet(Range r) {
    if (r.lo <= r.hi) intervals_.push_back(r);
  }

  std::span<const Range> intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  double measure() const {
    double m = 0.0;
    for (const auto& r : intervals_) m += r.width();
    return m;
  }

  bool contains(double a) const {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [a](const Range& r) { return r.contains(a); });
  }

  /// Removes the closed cut [lo, hi] from every interval; bisected intervals
  /// keep both remainders.
  void subtract(Range cut) {
    std::vector<Range> out;
    out.reserve(intervals_.size() + 1);
    for (const auto& r : intervals_) {
      if (cut.hi < r.lo || cut.lo > r.hi) {
        out.push_back(r);
        continue;
      }
      if (r.lo < cut.lo) out.push_back({r.lo, cut.lo});
      if (cut.hi < r.hi) out.push_back({cut.hi, r.hi});
    }
    intervals_ = std::move(out);
  }

  void intersect(Range keep) {
    std::vector<Range> out;
    for (const auto& r : intervals_) {
      const double lo = std::max(r.lo, keep.lo);
      const double hi = std::min(r.hi, keep.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
    intervals_ = std::move(out);
  }

 private:
  std::vector<Range> intervals_;
};

inline AngleIntervalSet interval_subtract(AngleIntervalSet set, Range cut) {
  set.subtract(cut);
  return set;
}

/// Removes an angular cut that may extend past +-pi, splitting it at the seam.
inline void subtract_wrapped(AngleIntervalSet& set, double lo, double hi) {
  if (hi - lo >= 2.0 * kPi) {
    set = AngleIntervalSet{};
    return;
  }
  if (lo < -kPi) {
    set.subtract({lo + 2.0 * kPi, kPi});
    set.subtract({-kPi, hi});
  } else if (hi > kPi) {
    set.subtract({lo, kPi});
    set.subtract({-kPi, hi - 2.0 * kPi});
  } else {
    set.subtract({lo, hi});
  }
}

// Widening applied to each forbidden cone so that interval endpoints are
// strictly collision free.
inline constexpr double kConeMargin = 1e-9;

/// Steering angles (relative to `link_dir`) that keep the next link of length
/// `link_len` clear of every obstacle within reach of `node`. Each nearby
/// obstacle removes the cone bounded by the two tangent lines from the node.
/// Returns an empty set when the node lies inside an obstacle.
inline AngleIntervalSet allowed_angle_ranges(Point2 node, Point2 link_dir, double link_len,
                                             std::span<const CircleObstacle> obstacles,
                                             Range dtheta) {
  if (!(link_len > 0.0)) throw std::invalid_argument("allowed_angle_ranges: link length must be positive");
  AngleIntervalSet allowed{dtheta};
  const Rotation2 to_link = rotation_to_x(link_dir);
  for (const auto& obs : obstacles) {
    const Point2 center = to_link.apply(obs.center - node);
    const double d = norm(center);
    if (d > link_len + obs.radius) continue;
    if (d <= obs.radius) return AngleIntervalSet{};

    // Tangent points lie on the circle around the node whose radius is the
    // tangent length sqrt(d^2 - r^2).
    const double tangent_len = std::sqrt(d * d - obs.radius * obs.radius);
    const double towards = std::atan2(center.y, center.x);
    double half_width = std::asin(std::min(1.0, obs.radius / d));
    if (tangent_len > 0.0) {
      const auto tp = circle_circle_intersection({0.0, 0.0}, tangent_len, center, obs.radius);
      if (tp.count == 2) {
        half_width = 0.0;
        for (const auto& p : tp.view()) {
          half_width = std::max(half_width, std::abs(wrap_angle(std::atan2(p.y, p.x) - towards)));
        }
      }
    }
    half_width += kConeMargin;
    subtract_wrapped(allowed, towards - half_width, towards + half_width);
    if (allowed.empty()) break;
  }
  return allowed;
}

/// Uniform draw over the union, each interval weighted by its width. A set of
/// point intervals is sampled uniformly among its points.
inline double sample_uniform(const AngleIntervalSet& set, Rng& rng) {
  if (set.empty()) throw std::invalid_argument("sample_uniform: empty interval set");
  const auto iv = set.intervals();
  const double total = set.measure();
  if (total <= 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, iv.size() - 1);
    return iv[pick(rng)].lo;
  }
  double u = uniform_in(rng, 0.0, total);
  for (const auto& r : iv) {
    if (u <= r.width()) return std::min(r.hi, r.lo + u);
    u -= r.width();
  }
  return iv.back().hi;
}

}  // namespace vine
