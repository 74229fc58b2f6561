#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "vinedesign/geometry.hpp"
#include "vinedesign/model.hpp"

namespace vine {

/// The five prioritized objectives, best first: kinematic error, links to the
/// segment, undulation percentage, links on the segment, design length.
struct ObjectiveVector {
  double f12{0.0};
  int f31a{0};
  double f33{0.0};
  int f31b{0};
  double f32{0.0};

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// [steering below bound, steering above bound, short last link,
///  orientation mismatch, obstacle crossings]
using ViolationVector = std::array<double, 5>;
using PenaltyFactors = std::array<double, 5>;

inline constexpr PenaltyFactors kDefaultPenalty{10.0, 10.0, 10.0, 10.0, 100.0};
inline constexpr double kOrientationTolerance = kPi / 18.0;

namespace detail {

struct ConfigurationAnalysis {
  CompletionRecord record;
  double min_distance{0.0};
};

inline double heading_at(std::span<const double> angles, std::size_t links, const Pose2& home) {
  double h = home.orientation;
  for (std::size_t j = 0; j < links; ++j) h += angles[j];
  return h;
}

inline ConfigurationAnalysis analyze_configuration(std::span<const double> angles, std::span<const double> lengths,
                                                   const Pose2& target, const Task& task) {
  const auto nodes = forward_kinematics(angles, lengths, task.home);
  const SegmentGeom seg = orientation_segment(target, task.orientation_segment_length());
  const std::size_t n = angles.size();

  std::size_t eps = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= n; ++j) {
    const double d = point_segment_distance(nodes[j], seg);
    if (d < best) {
      best = d;
      eps = j;
    }
  }

  ConfigurationAnalysis out;
  out.min_distance = best;
  CompletionRecord& rec = out.record;
  rec.epsilon = static_cast<int>(eps);
  const double heading = heading_at(angles, eps, task.home);
  const Point2 to_target = target.position - nodes[eps];
  const double reach = norm(to_target);

  if (!(reach > 0.0)) {
    rec.theta_epsilon = wrap_angle(target.orientation - heading);
    rec.n_bar = rec.epsilon;
    rec.last_len = lengths[eps - 1];
    return out;
  }

  // steer at node eps towards the target, then grow straight
  rec.theta_epsilon = wrap_angle(std::atan2(to_target.y, to_target.x) - heading);
  double covered = 0.0;
  for (std::size_t j = eps; j < n; ++j) {
    if (covered + lengths[j] >= reach) {
      rec.n_bar = static_cast<int>(j + 1);
      rec.last_len = reach - covered;
      return out;
    }
    covered += lengths[j];
  }
  rec.n_bar = static_cast<int>(n);
  rec.last_len = lengths[n - 1];
  rec.shortfall = reach - covered;
  return out;
}

}  // namespace detail

/// Fills the completion record of one configuration: the node closest to the
/// target's orientation segment, the steering that aims the next link at the
/// target, and how many genotype lengths the straight growth consumes.
inline CompletionRecord complete_configuration(std::span<const double> angles, std::span<const double> lengths,
                                               const Pose2& target, const Task& task) {
  return detail::analyze_configuration(angles, lengths, target, task).record;
}

/// Realized chain of an evaluated configuration: genotype links up to node
/// epsilon, then straight links aimed at the target.
inline std::vector<Point2> completed_chain(std::span<const double> angles, std::span<const double> lengths,
                                           const CompletionRecord& rec, const Pose2& home) {
  const auto eps = static_cast<std::size_t>(rec.epsilon);
  std::vector<Point2> chain = forward_kinematics(angles.first(eps), lengths.first(eps), home);
  if (rec.n_bar <= rec.epsilon) return chain;
  const double aim = detail::heading_at(angles, eps, home) + rec.theta_epsilon;
  const Point2 dir = unit_from_angle(aim);
  for (auto j = eps + 1; j <= static_cast<std::size_t>(rec.n_bar); ++j) {
    const double len = (j == static_cast<std::size_t>(rec.n_bar)) ? rec.last_len : lengths[j - 1];
    chain.push_back(chain.back() + len * dir);
  }
  return chain;
}

inline std::vector<Point2> completed_chain(const Solution& s, std::size_t i, const Task& task) {
  return completed_chain(s.angles(i), s.lengths, s.completions.at(i), task.home);
}

/// Sum over targets of the smallest node-to-segment distance (home excluded),
/// plus any straight distance the robot cannot cover.
inline double kinematic_fitness(const Solution& s, const Task& task) {
  double total = 0.0;
  const double seg_len = task.orientation_segment_length();
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto nodes = forward_kinematics(s.angles(i), s.lengths, task.home);
    const SegmentGeom seg = orientation_segment(task.targets[i], seg_len);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < nodes.size(); ++j) best = std::min(best, point_segment_distance(nodes[j], seg));
    total += best + s.completions.at(i).shortfall;
  }
  return total;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Fraction of steering reversals over joints 1..epsilon of one configuration;
/// the correction steering at node epsilon is the last successor.
inline double undulation_ratio(std::span<const double> angles, const CompletionRecord& rec) {
  const auto eps = static_cast<std::size_t>(rec.epsilon);
  int reversals = 0;
  for (std::size_t j = 0; j < eps; ++j) {
    const double next = (j + 1 < eps) ? angles[j + 1] : rec.theta_epsilon;
    if (angles[j] != 0.0 && sign_of(angles[j]) != sign_of(next)) ++reversals;
  }
  return static_cast<double>(reversals) / static_cast<double>(eps);
}

/// f31a, f33, f31b and f32; f12 is left at zero.
inline ObjectiveVector component_objectives(const Solution& s, const Task& /*task*/) {
  ObjectiveVector f;
  double undulation = 0.0;
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto& rec = s.completions.at(i);
    f.f31a += rec.epsilon - 1;
    f.f31b += rec.n_bar - (rec.epsilon - 1);
    double len = rec.last_len;
    for (int j = 0; j + 1 < rec.n_bar; ++j) len += s.lengths[static_cast<std::size_t>(j)];
    f.f32 = std::max(f.f32, len);
    undulation += undulation_ratio(s.angles(i), rec);
  }
  f.f33 = 100.0 * undulation / static_cast<double>(s.target_count());
  return f;
}

inline ViolationVector constraint_violations(const Solution& s, const Task& task) {
  ViolationVector v{};
  const auto& b = task.bounds;
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto& rec = s.completions.at(i);
    const auto angles = s.angles(i);
    const bool steers = rec.n_bar > rec.epsilon;
    if (steers) {
      v[0] += std::max(0.0, b.theta.lo - rec.theta_epsilon);
      v[1] += std::max(0.0, rec.theta_epsilon - b.theta.hi);
    }
    if (rec.n_bar - rec.epsilon == 1) v[2] += std::max(0.0, b.length.lo - rec.last_len);

    double final_heading = detail::heading_at(angles, static_cast<std::size_t>(rec.epsilon), task.home);
    if (steers) final_heading += rec.theta_epsilon;
    const double mismatch = std::abs(wrap_angle(final_heading - task.targets[i].orientation));
    if (mismatch >= kOrientationTolerance) v[3] += mismatch;

    if (!task.obstacles.empty()) {
      const auto chain = completed_chain(s, i, task);
      for (std::size_t j = 1; j < chain.size(); ++j) {
        if (chain[j] == chain[j - 1]) continue;
        const SegmentGeom link{chain[j - 1], chain[j]};
        for (const auto& obs : task.obstacles) v[4] += segment_circle_intersects(link, obs);
      }
    }
  }
  return v;
}

/// Static penalty applied to the kinematic objective only.
inline double penalized_fitness(double f12, const ViolationVector& v, const PenaltyFactors& r) {
  double out = f12;
  for (std::size_t k = 0; k < v.size(); ++k) out += r[k] * v[k];
  return out;
}

struct Evaluation {
  ObjectiveVector objectives;  // f12 is the unpenalized kinematic fitness
  ViolationVector violations{};
  double penalized_f12{0.0};

  bool feasible() const {
    return std::all_of(violations.begin(), violations.end(), [](double x) { return x == 0.0; });
  }
  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct EvaluateOptions {
  /// Rewrite the length genes past every configuration's closest node to the
  /// upper bound before completing.
  bool maximize_straight_links{false};
};

inline void complete_all(Solution& s, const Task& task) {
  s.completions.resize(s.target_count());
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    s.completions[i] = complete_configuration(s.angles(i), s.lengths, task.targets[i], task);
  }
}

/// Completes every configuration and computes objectives, violations and the
/// penalized kinematic fitness. Only the completion records (and, with
/// maximize_straight_links, the straight-section lengths) are written back.
inline Evaluation evaluate(Solution& s, const Task& task, const PenaltyFactors& r = kDefaultPenalty,
                           const EvaluateOptions& opt = {}) {
  if (opt.maximize_straight_links) {
    complete_all(s, task);
    int deepest = 0;
    for (const auto& rec : s.completions) deepest = std::max(deepest, rec.epsilon);
    for (auto j = static_cast<std::size_t>(deepest); j < s.lengths.size(); ++j) s.lengths[j] = task.bounds.length.hi;
  }
  s.completions.resize(s.target_count());
  double f12 = 0.0;
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto a = detail::analyze_configuration(s.angles(i), s.lengths, task.targets[i], task);
    s.completions[i] = a.record;
    f12 += a.min_distance + a.record.shortfall;
  }
  Evaluation e;
  e.objectives = component_objectives(s, task);
  e.objectives.f12 = f12;
  e.violations = constraint_violations(s, task);
  e.penalized_f12 = penalized_fitness(f12, e.violations, r);
  return e;
}

}  // namespace vine
