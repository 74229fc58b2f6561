#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vinedesign/avoid.hpp"
#include "vinedesign/geometry.hpp"

namespace vine {

struct Bounds {
  int n_max{1};
  Range theta{-kPi / 6.0, kPi / 6.0};
  Range length{1.0, 2.0};
  bool first_joint_free{false};

  /// Steering range of joint `j` (0-based). A free base joint may point anywhere.
  Range joint_range(std::size_t j) const {
    if (j == 0) return first_joint_free ? Range{-kPi, kPi} : Range{0.0, 0.0};
    return theta;
  }
};

struct Task {
  std::string unit{"unit"};
  Pose2 home;
  std::vector<Pose2> targets;
  std::vector<CircleObstacle> obstacles;
  Bounds bounds;
  std::optional<double> segment_length;

  /// Defaults to the robot's maximum reach.
  double orientation_segment_length() const {
    return segment_length.value_or(bounds.n_max * bounds.length.hi);
  }
};

/// Extra genes filled in by evaluation for one configuration. `epsilon` counts
/// chain nodes from the first node after the home base; links 1..epsilon keep
/// their genotype steering, joint epsilon+1 steers by `theta_epsilon`, and links
/// epsilon+1..n_bar grow straight, the last one only `last_len` long.
struct CompletionRecord {
  int epsilon{1};
  double theta_epsilon{0.0};
  int n_bar{1};
  double last_len{0.0};
  double shortfall{0.0};

  friend bool operator==(const CompletionRecord&, const CompletionRecord&) = default;
};

/// Genotype: one angle row per target plus the shared length row.
class Solution {
  std::size_t targets_{0};
  std::size_t n_{0};
  std::vector<double> angles_;

 public:
  Solution() = default;
  Solution(std::size_t targets, std::size_t n_max)
      : targets_(targets), n_(n_max), angles_(targets * n_max, 0.0), lengths(n_max, 0.0) {}

  std::size_t target_count() const { return targets_; }
  std::size_t link_count() const { return n_; }

  std::span<double> angles(std::size_t i) { return {angles_.data() + i * n_, n_}; }
  std::span<const double> angles(std::size_t i) const { return {angles_.data() + i * n_, n_}; }
  std::span<const double> angle_matrix() const { return angles_; }

  bool evaluated() const { return targets_ > 0 && completions.size() == targets_; }

  friend bool operator==(const Solution&, const Solution&) = default;

  std::vector<double> lengths;
  std::vector<CompletionRecord> completions;
};

struct Design {
  std::vector<double> lengths;
};

/// Every violated Task invariant, with a readable reason. Empty means valid.
inline std::vector<std::string> validate_task(const Task& task) {
  std::vector<std::string> issues;
  const auto& b = task.bounds;
  if (b.n_max < 1) issues.emplace_back("n_max must be at least 1");
  if (!(b.theta.lo < b.theta.hi)) issues.emplace_back("empty steering range");
  if (!(b.theta.lo > -kPi && b.theta.hi < kPi)) issues.emplace_back("steering range must lie inside (-pi, pi)");
  if (!(b.length.lo < b.length.hi)) issues.emplace_back("empty link length range");
  if (!(b.length.lo > 0.0)) issues.emplace_back("link length lower bound must be positive");
  if (task.targets.empty()) issues.emplace_back("at least one target required");
  if (task.segment_length && !(*task.segment_length > 0.0)) {
    issues.emplace_back("segment_length must be positive");
  }
  auto finite_pose = [](const Pose2& p) {
    return std::isfinite(p.position.x) && std::isfinite(p.position.y) && std::isfinite(p.orientation);
  };
  if (!finite_pose(task.home)) issues.emplace_back("home pose is not finite");
  for (std::size_t i = 0; i < task.targets.size(); ++i) {
    if (!finite_pose(task.targets[i])) issues.push_back("target " + std::to_string(i) + " is not finite");
  }
  for (std::size_t k = 0; k < task.obstacles.size(); ++k) {
    const auto& o = task.obstacles[k];
    const std::string tag = "obstacle " + std::to_string(k);
    if (!(o.radius > 0.0) || !std::isfinite(o.radius)) {
      issues.push_back(tag + ": radius must be positive");
      continue;
    }
    if (distance(task.home.position, o.center) <= o.radius) issues.push_back("home inside " + tag);
    for (std::size_t i = 0; i < task.targets.size(); ++i) {
      if (distance(task.targets[i].position, o.center) <= o.radius) {
        issues.push_back("target inside obstacle (target " + std::to_string(i) + ", " + tag + ")");
      }
    }
  }
  return issues;
}

/// Segment ending at the target along its approach direction.
inline SegmentGeom orientation_segment(const Pose2& target, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("orientation_segment: length must be positive");
  return {target.position - length * unit_from_angle(target.orientation), target.position};
}

struct DrawCounters {
  std::size_t draws{0};
  std::size_t fallbacks{0};
};

/// Fills one configuration's angle row node by node. `base_range(j)` gives the
/// sampling range for joint j before obstacle filtering. With avoidance on the
/// range is intersected with the collision-free steering set at the node built
/// so far; an empty intersection falls back to the unfiltered range.
template <class BaseRange>
void grow_angle_row(const Task& task, std::span<const double> lengths, std::span<double> row, Rng& rng,
                    bool avoidance, BaseRange&& base_range, DrawCounters* counters = nullptr) {
  const auto& b = task.bounds;
  Point2 node = task.home.position;
  double heading = task.home.orientation;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == 0 && !b.first_joint_free) {
      row[j] = 0.0;
    } else {
      const Range base = base_range(j);
      double value;
      if (avoidance && !task.obstacles.empty() && lengths[j] > 0.0) {
        AngleIntervalSet allowed =
            allowed_angle_ranges(node, unit_from_angle(heading), lengths[j], task.obstacles, b.joint_range(j));
        allowed.intersect(base);
        if (allowed.empty()) {
          value = uniform_in(rng, base.lo, base.hi);
          if (counters) ++counters->fallbacks;
        } else {
          value = sample_uniform(allowed, rng);
        }
      } else {
        value = uniform_in(rng, base.lo, base.hi);
      }
      if (counters) ++counters->draws;
      row[j] = value;
    }
    heading += row[j];
    node = node + lengths[j] * unit_from_angle(heading);
  }
}

/// Regenerates one configuration's angles from the full steering bounds.
inline void random_angle_row(const Task& task, std::span<const double> lengths, std::span<double> row, Rng& rng,
                             bool avoidance, DrawCounters* counters = nullptr) {
  grow_angle_row(
      task, lengths, row, rng, avoidance, [&](std::size_t j) { return task.bounds.joint_range(j); }, counters);
}

inline Solution random_solution(const Task& task, Rng& rng, bool avoidance, DrawCounters* counters = nullptr) {
  const auto n = static_cast<std::size_t>(task.bounds.n_max);
  Solution s(task.targets.size(), n);
  for (auto& l : s.lengths) l = uniform_in(rng, task.bounds.length.lo, task.bounds.length.hi);
  for (std::size_t i = 0; i < task.targets.size(); ++i) {
    random_angle_row(task, s.lengths, s.angles(i), rng, avoidance, counters);
  }
  return s;
}

/// Manufacturable link lengths: the shared row truncated at the longest
/// employed extent. Links any configuration uses as interior keep their full
/// length; the final entry is the partial length of the configuration with the
/// largest n_bar (lowest target index on ties).
inline Design design_of(const Solution& s) {
  if (!s.evaluated()) throw std::logic_error("design_of: solution not evaluated");
  std::size_t owner = 0;
  for (std::size_t i = 1; i < s.completions.size(); ++i) {
    if (s.completions[i].n_bar > s.completions[owner].n_bar) owner = i;
  }
  const auto extent = static_cast<std::size_t>(s.completions[owner].n_bar);
  Design d;
  d.lengths.assign(s.lengths.begin(), s.lengths.begin() + static_cast<std::ptrdiff_t>(extent));
  d.lengths.back() = s.completions[owner].last_len;
  return d;
}

/// True when every gene lies within the task bounds.
inline bool within_bounds(const Solution& s, const Task& task, double tol = 1e-12) {
  const auto& b = task.bounds;
  for (double l : s.lengths) {
    if (l < b.length.lo - tol || l > b.length.hi + tol) return false;
  }
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto row = s.angles(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Range r = b.joint_range(j);
      if (row[j] < r.lo - tol || row[j] > r.hi + tol) return false;
    }
  }
  return true;
}

}  // namespace vine
