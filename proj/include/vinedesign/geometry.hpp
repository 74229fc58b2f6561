#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace vine {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGeomTol = 1e-9;

struct Point2 {
  double x{0.0};
  double y{0.0};

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct Pose2 {
  Point2 position;
  double orientation{0.0};
};

struct SegmentGeom {
  Point2 v1;
  Point2 v2;
};

struct CircleObstacle {
  Point2 center;
  double radius{0.0};
};

/// Closed real range [lo, hi].
struct Range {
  double lo{0.0};
  double hi{0.0};

  constexpr double width() const { return hi - lo; }
  constexpr bool contains(double v) const { return lo <= v && v <= hi; }
  constexpr double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// Proper 2D rotation stored as (cos, sin).
struct Rotation2 {
  double c{1.0};
  double s{0.0};

  constexpr Point2 apply(Point2 p) const { return {c * p.x - s * p.y, s * p.x + c * p.y}; }
  constexpr Point2 apply_inverse(Point2 p) const { return {c * p.x + s * p.y, -s * p.x + c * p.y}; }
  constexpr double determinant() const { return c * c + s * s; }
  double angle() const { return std::atan2(s, c); }
};

/// Rotation that maps the direction of `u` onto +x. `u` is normalized first, so
/// any nonzero vector is accepted.
inline Rotation2 rotation_to_x(Point2 u) {
  const double len = norm(u);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument("rotation_to_x: zero-length direction");
  }
  return {u.x / len, -u.y / len};
}

/// Euclidean distance from `p` to the closed segment v1-v2. The segment is
/// centered on the origin and rotated onto the x axis, then one of three cases
/// applies: before v1, over the segment, past v2.
inline double point_segment_distance(Point2 p, Point2 v1, Point2 v2) {
  if (v1 == v2) {
    throw std::invalid_argument("point_segment_distance: degenerate orientation segment");
  }
  const Point2 c = 0.5 * (v1 + v2);
  const Rotation2 rot = rotation_to_x(v2 - c);
  const Point2 a = rot.apply(v1 - c);
  const Point2 b = rot.apply(v2 - c);
  const Point2 q = rot.apply(p - c);
  if (q.x < a.x) return distance(q, a);
  if (q.x <= b.x) return std::abs(q.y);
  return distance(q, b);
}

inline double point_segment_distance(Point2 p, const SegmentGeom& s) {
  return point_segment_distance(p, s.v1, s.v2);
}

/// Up to two points shared by two circles.
struct CircleIntersection {
  std::size_t count{0};
  std::array<Point2, 2> points{};

  std::span<const Point2> view() const { return {points.data(), count}; }
};

inline CircleIntersection circle_circle_intersection(Point2 c1, double r1, Point2 c2, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) {
    throw std::invalid_argument("circle_circle_intersection: radii must be positive");
  }
  const Point2 delta = c2 - c1;
  const double d = norm(delta);
  if (d == 0.0) {
    if (r1 == r2) throw std::invalid_argument("circle_circle_intersection: coincident circles");
    return {};
  }
  const double scale = std::max({d, r1, r2});
  const double outer_gap = d - (r1 + r2);
  const double inner_gap = std::abs(r1 - r2) - d;
  const double tangent_tol = 1e-12 * scale;
  if (outer_gap > tangent_tol || inner_gap > tangent_tol) return {};

  const Point2 ex = delta / d;
  const Point2 ey{-ex.y, ex.x};
  // distance from c1 along ex to the radical line
  const double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h2 = r1 * r1 - along * along;
  if (std::abs(outer_gap) <= tangent_tol || std::abs(inner_gap) <= tangent_tol || h2 <= 0.0) {
    CircleIntersection out;
    out.count = 1;
    out.points[0] = c1 + along * ex;
    return out;
  }
  const double h = std::sqrt(h2);
  CircleIntersection out;
  out.count = 2;
  out.points[0] = c1 + along * ex + h * ey;
  out.points[1] = c1 + along * ex - h * ey;
  return out;
}

/// Number of boundary crossings between the closed segment and the circle.
/// A segment lying entirely inside the circle reports 2 so that it is counted
/// as a collision.
inline int segment_circle_intersects(const SegmentGeom& seg, const CircleObstacle& obs) {
  const Point2 d = seg.v2 - seg.v1;
  const double a = dot(d, d);
  if (a == 0.0) throw std::invalid_argument("segment_circle_intersects: degenerate segment");
  const Point2 f = seg.v1 - obs.center;
  const double b = 2.0 * dot(f, d);
  const double c = dot(f, f) - obs.radius * obs.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  if (disc == 0.0) {
    const double t = -b / (2.0 * a);
    return (t >= 0.0 && t <= 1.0) ? 1 : 0;
  }
  const double sq = std::sqrt(disc);
  // numerically stable roots
  const double qv = -0.5 * (b + std::copysign(sq, b));
  double t1 = qv / a;
  double t2 = (qv != 0.0) ? c / qv : -t1;
  if (t1 > t2) std::swap(t1, t2);
  int count = 0;
  if (t1 >= 0.0 && t1 <= 1.0) ++count;
  if (t2 >= 0.0 && t2 <= 1.0) ++count;
  if (count == 0 && t1 < 0.0 && t2 > 1.0) return 2;
  return count;
}

/// Chain nodes from the home pose: node 0 is the home position, node j adds
/// lengths[j-1] along the cumulative heading.
inline std::vector<Point2> forward_kinematics(std::span<const double> angles,
                                              std::span<const double> lengths, const Pose2& home) {
  if (angles.size() != lengths.size()) {
    throw std::invalid_argument("forward_kinematics: angle and length counts differ");
  }
  std::vector<Point2> nodes;
  nodes.reserve(angles.size() + 1);
  nodes.push_back(home.position);
  double heading = home.orientation;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    heading += angles[j];
    nodes.push_back(nodes.back() + lengths[j] * unit_from_angle(heading));
  }
  return nodes;
}

}  // namespace vine
