#pragma once

// Brute-force reference routines. They are shipped so documented numbers can
// be regenerated, but nothing in the optimization path calls them, and they do
// not reuse the routines they check (grid_search_ik aside, which is an
// optimality reference built on evaluate by definition).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vinedesign/fitness.hpp"
#include "vinedesign/geometry.hpp"
#include "vinedesign/model.hpp"
#include "vinedesign/rankpart.hpp"

namespace vine::oracle {

/// Orders record indices with one nested comparator on bin indices, then raw
/// values, then input position.
inline std::vector<std::size_t> comparator_rank(const std::vector<FitnessRecord>& records, const BinSizes& bins) {
  struct Key {
    double f12_bin;
    int f31a;
    double f33;
    int f31b;
    double f32_bin;
    double f12;
    double f32;
    std::size_t index;
  };
  std::vector<Key> keys;
  keys.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    keys.push_back({std::floor(r.f12_raw / bins.f12), r.f31a, r.f33, r.f31b, std::floor(r.f32_raw / bins.f32),
                    r.f12_raw, r.f32_raw, i});
  }
  auto before = [](const Key& a, const Key& b) {
    if (a.f12_bin != b.f12_bin) return a.f12_bin < b.f12_bin;
    if (a.f31a != b.f31a) return a.f31a < b.f31a;
    if (a.f33 != b.f33) return a.f33 < b.f33;
    if (a.f31b != b.f31b) return a.f31b < b.f31b;
    if (a.f32_bin != b.f32_bin) return a.f32_bin < b.f32_bin;
    if (a.f12 != b.f12) return a.f12 < b.f12;
    if (a.f32 != b.f32) return a.f32 < b.f32;
    return a.index < b.index;
  };
  // insertion sort: quadratic, but obviously correct for the sizes it is used on
  for (std::size_t i = 1; i < keys.size(); ++i) {
    for (std::size_t j = i; j > 0 && before(keys[j], keys[j - 1]); --j) std::swap(keys[j], keys[j - 1]);
  }
  std::vector<std::size_t> order;
  order.reserve(keys.size());
  for (const auto& k : keys) order.push_back(k.index);
  return order;
}

/// Distance from p to the segment by dense sampling. The distance along the
/// segment is convex, so each pass resamples the two steps around the best
/// sample; `passes` rounds of `samples` points (endpoints included) shrink the
/// step to length * (2 / samples)^passes / samples.
inline double sampled_point_segment_distance(Point2 p, Point2 v1, Point2 v2, std::size_t samples = 1001,
                                             int passes = 4) {
  if (samples < 3) throw std::invalid_argument("sampled_point_segment_distance: at least 3 samples required");
  double lo = 0.0, hi = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < passes; ++pass) {
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    double best_t = lo;
    double pass_best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
      const double t = lo + step * static_cast<double>(k);
      const double d = std::hypot(p.x - (v1.x + t * (v2.x - v1.x)), p.y - (v1.y + t * (v2.y - v1.y)));
      if (d < pass_best) {
        pass_best = d;
        best_t = t;
      }
    }
    best = std::min(best, pass_best);
    lo = std::max(0.0, best_t - step);
    hi = std::min(1.0, best_t + step);
  }
  return best;
}

/// Inside/outside transitions along the sampled segment; 2 when every sample
/// lies inside the circle.
inline int sampled_crossings(Point2 v1, Point2 v2, Point2 center, double radius, std::size_t samples = 10000) {
  int transitions = 0;
  bool all_inside = true;
  bool prev = false;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
    const double x = v1.x + t * (v2.x - v1.x) - center.x;
    const double y = v1.y + t * (v2.y - v1.y) - center.y;
    const bool inside = x * x + y * y < radius * radius;
    all_inside = all_inside && inside;
    if (k > 0 && inside != prev) ++transitions;
    prev = inside;
  }
  return all_inside ? 2 : transitions;
}

/// True iff any of `samples` points along the link lies inside the obstacle.
inline bool sweep_collision(Point2 node, double heading, double length, const CircleObstacle& obs,
                            std::size_t samples = 1000) {
  if (samples < 1000) throw std::invalid_argument("sweep_collision: at least 1000 samples required");
  const double cx = std::cos(heading);
  const double cy = std::sin(heading);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = length * static_cast<double>(k) / static_cast<double>(samples - 1);
    const double dx = node.x + t * cx - obs.center.x;
    const double dy = node.y + t * cy - obs.center.y;
    if (dx * dx + dy * dy < obs.radius * obs.radius) return true;
  }
  return false;
}

struct GridSpec {
  int angle_steps{9};
  int length_steps{5};
  int max_links{4};
};

struct GridResult {
  double best_penalized_f12{std::numeric_limits<double>::infinity()};
  Solution best;
  std::size_t evaluated{0};
};

inline constexpr double kGridGuard = 1e7;

namespace detail {

inline std::vector<double> linspace(Range r, int steps) {
  std::vector<double> v;
  if (steps <= 1 || r.lo == r.hi) return {r.lo};
  for (int k = 0; k < steps; ++k) v.push_back(r.lo + r.width() * k / (steps - 1));
  return v;
}

// Advances a mixed-radix counter; false once it wraps.
inline bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& radix) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (++idx[k] < radix[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace detail

/// Exhaustive search over a discretized design: every length combination on
/// the length grid, and for each target independently every steering
/// combination on the angle grid. Penalized fitness is additive over
/// configurations, so the per-target minima sum to the grid optimum.
inline GridResult grid_search_ik(const Task& task, const GridSpec& spec,
                                 const PenaltyFactors& penalty = kDefaultPenalty) {
  const auto& b = task.bounds;
  if (spec.angle_steps < 2 || spec.length_steps < 1) throw std::invalid_argument("grid_search_ik: grid too coarse");
  if (spec.max_links > 4 || b.n_max > spec.max_links) {
    throw std::invalid_argument("grid_search_ik: at most 4 links supported");
  }
  const auto n = static_cast<std::size_t>(b.n_max);
  const auto length_values = detail::linspace(b.length, spec.length_steps);
  std::vector<std::vector<double>> joint_values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Range r = b.joint_range(j);
    joint_values[j] = (r.lo == r.hi) ? std::vector<double>{r.lo} : detail::linspace(r, spec.angle_steps);
  }
  double angle_combos = 1.0;
  for (const auto& v : joint_values) angle_combos *= static_cast<double>(v.size());
  const double total = std::pow(static_cast<double>(length_values.size()), static_cast<double>(n)) * angle_combos *
                       static_cast<double>(task.targets.size());
  if (total > kGridGuard) throw std::invalid_argument("grid_search_ik: grid exceeds size guard");

  GridResult result;
  std::vector<std::size_t> length_idx(n, 0);
  const std::vector<std::size_t> length_radix(n, length_values.size());
  std::vector<std::size_t> angle_radix;
  for (const auto& v : joint_values) angle_radix.push_back(v.size());

  do {
    Solution candidate(task.targets.size(), n);
    for (std::size_t j = 0; j < n; ++j) candidate.lengths[j] = length_values[length_idx[j]];
    double sum = 0.0;
    for (std::size_t i = 0; i < task.targets.size(); ++i) {
      Task single = task;
      single.targets = {task.targets[i]};
      Solution probe(1, n);
      probe.lengths = candidate.lengths;
      double best_row = std::numeric_limits<double>::infinity();
      std::vector<double> best_angles(n, 0.0);
      std::vector<std::size_t> angle_idx(n, 0);
      do {
        auto row = probe.angles(0);
        for (std::size_t j = 0; j < n; ++j) row[j] = joint_values[j][angle_idx[j]];
        const Evaluation e = evaluate(probe, single, penalty);
        ++result.evaluated;
        if (e.penalized_f12 < best_row) {
          best_row = e.penalized_f12;
          best_angles.assign(row.begin(), row.end());
        }
      } while (detail::next_index(angle_idx, angle_radix));
      std::copy(best_angles.begin(), best_angles.end(), candidate.angles(i).begin());
      sum += best_row;
    }
    if (sum < result.best_penalized_f12) {
      result.best_penalized_f12 = sum;
      result.best = candidate;
    }
  } while (detail::next_index(length_idx, length_radix));

  evaluate(result.best, task, penalty);
  return result;
}

/// Worst-case kinematic error introduced by snapping a continuous design to
/// the grid: every joint within half an angle step and every link within half
/// a length step moves each node by at most n * (n * l_hi * da / 2 + dl / 2);
/// the factor 2 covers both the node-distance and the shortfall terms.
inline double grid_resolution_bound(const Task& task, const GridSpec& spec) {
  const auto& b = task.bounds;
  const double n = b.n_max;
  const double da = b.theta.width() / (spec.angle_steps - 1);
  const double dl = spec.length_steps > 1 ? b.length.width() / (spec.length_steps - 1) : b.length.width();
  return static_cast<double>(task.targets.size()) * 2.0 * n * (n * b.length.hi * da / 2.0 + dl / 2.0);
}

}  // namespace vine::oracle
