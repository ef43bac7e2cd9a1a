#pragma once

/**
 * @file geometry.hpp
 * @brief 2D vectors, polygons, poses and the ray/segment predicates used by the tracer.
 *
 * Scene units are meters. All predicates are epsilon based rather than exact;
 * kHitEpsilon is the single distance scale below which two features are
 * considered coincident.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optics/error.hpp"

namespace optics {

/// Minimum advance along a ray before a boundary counts as hit.
inline constexpr double kHitEpsilon = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline Vec2 rotate(Vec2 v, double radians) {
  if (radians == 0.0) return v;
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

class UnitVec2;
UnitVec2 normalize(Vec2 v);

/// Direction vector with norm 1 (within 1e-12). Only obtainable through
/// normalize() or from_angle(), so holding one is proof of the invariant.
class UnitVec2 {
 public:
  static UnitVec2 from_angle(double radians) { return normalize({std::cos(radians), std::sin(radians)}); }

  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr Vec2 vec() const { return {x_, y_}; }
  constexpr operator Vec2() const { return vec(); }
  constexpr UnitVec2 operator-() const { return UnitVec2(-x_, -y_); }
  /// Heading in (-pi, pi].
  double angle() const { return std::atan2(y_, x_); }

  friend constexpr bool operator==(UnitVec2, UnitVec2) = default;

 private:
  constexpr UnitVec2(double x, double y) : x_(x), y_(y) {}
  friend UnitVec2 normalize(Vec2 v);

  double x_;
  double y_;
};

/// Throws DegenerateVector when |v| <= 1e-12. The result is a fixed point of
/// the division step, which makes normalize(normalize(v)) == normalize(v) exact.
inline UnitVec2 normalize(Vec2 v) {
  const double len = norm(v);
  if (!(len > 1e-12) || !std::isfinite(len)) {
    throw Error(ErrorCode::DegenerateVector, "cannot normalize a vector of length " + std::to_string(len));
  }
  Vec2 u = v / len;
  for (int i = 0; i < 8; ++i) {
    const Vec2 w = u / norm(u);
    if (w == u) break;
    u = w;
  }
  return UnitVec2(u.x, u.y);
}

/// Signed angle from a to b in (-pi, pi].
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

/// Rotation normalized to [0, 2*pi).
inline double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

class Pose {
 public:
  Pose() = default;
  Pose(Vec2 position, double rotation) : position_(position), rotation_(wrap_angle(rotation)) {
    if (!is_finite(position) || !std::isfinite(rotation)) {
      throw Error(ErrorCode::InvalidPose, "pose components must be finite");
    }
  }

  Vec2 position() const { return position_; }
  double rotation() const { return rotation_; }

  Vec2 apply(Vec2 local) const { return rotate(local, rotation_) + position_; }

  friend bool operator==(const Pose&, const Pose&) = default;

 private:
  Vec2 position_{};
  double rotation_ = 0.0;
};

inline double signed_area(std::span<const Vec2> vertices) {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    twice += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  }
  return 0.5 * twice;
}

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

inline bool on_segment_box(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test (touching counts).
inline bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_box(a, b, c)) return true;
  if (o2 == 0 && on_segment_box(a, b, d)) return true;
  if (o3 == 0 && on_segment_box(c, d, a)) return true;
  if (o4 == 0 && on_segment_box(c, d, b)) return true;
  return false;
}

}  // namespace detail

/// Simple, counter-clockwise polygon with non-zero area. Construction
/// validates; clockwise input is rejected rather than reversed.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
      throw Error(ErrorCode::InvalidPolygon, "polygon needs at least 3 vertices");
    }
    for (const Vec2& v : vertices_) {
      if (!is_finite(v)) throw Error(ErrorCode::InvalidPolygon, "polygon vertex is not finite");
    }
    const double area = signed_area(vertices_);
    if (std::abs(area) <= 1e-18) throw Error(ErrorCode::InvalidPolygon, "polygon has zero area");
    if (area < 0.0) throw Error(ErrorCode::InvalidPolygon, "polygon winding is clockwise");
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (vertices_[i] == vertices_[(i + 1) % n]) {
        throw Error(ErrorCode::InvalidPolygon, "polygon has a repeated vertex");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (detail::segments_touch(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n])) {
          throw Error(ErrorCode::InvalidPolygon, "polygon is self-intersecting");
        }
      }
    }
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Vec2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  /// Edge i runs from vertex i to vertex i+1.
  std::pair<Vec2, Vec2> edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }
  double area() const { return signed_area(vertices_); }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  struct Trusted {};
  Polygon(std::vector<Vec2> vertices, Trusted) : vertices_(std::move(vertices)) {}
  friend Polygon apply_pose(const Pose& pose, const Polygon& poly);

  std::vector<Vec2> vertices_;
};

/// Rotates about the local origin, then translates. Rigid motions keep the
/// polygon simple and counter-clockwise, so no re-validation happens.
inline Polygon apply_pose(const Pose& pose, const Polygon& poly) {
  std::vector<Vec2> out;
  out.reserve(poly.size());
  for (const Vec2& v : poly.vertices()) out.push_back(pose.apply(v));
  return Polygon(std::move(out), Polygon::Trusted{});
}

struct Hit {
  double t = 0.0;
  Vec2 point;
};

/// Smallest t > kHitEpsilon such that origin + t*dir lies on the closed
/// segment [a, b]. Parallel and collinear configurations report no hit.
inline std::optional<Hit> intersect_ray_segment(Vec2 origin, UnitVec2 dir, Vec2 a, Vec2 b) {
  const Vec2 edge = b - a;
  const double edge_len = norm(edge);
  const double denom = cross(dir.vec(), edge);
  if (std::abs(denom) <= 1e-14 * edge_len) return std::nullopt;
  const Vec2 to_a = a - origin;
  const double t = cross(to_a, edge) / denom;
  const double s = cross(to_a, dir.vec()) / denom;
  if (!(t > kHitEpsilon)) return std::nullopt;
  constexpr double slack = 1e-12;
  if (s < -slack || s > 1.0 + slack) return std::nullopt;
  return Hit{t, origin + t * dir.vec()};
}

inline double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return distance(p, a + s * ab);
}

enum class Containment { Outside, Inside, OnBoundary };

inline constexpr std::string_view to_string(Containment c) {
  switch (c) {
    case Containment::Outside: return "Outside";
    case Containment::Inside: return "Inside";
    case Containment::OnBoundary: return "OnBoundary";
  }
  return "?";
}

/// Even-odd crossing test with an explicit boundary band of kHitEpsilon.
inline Containment point_in_polygon(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b] = poly.edge(i);
    if (distance_to_segment(p, a, b) <= kHitEpsilon) return Containment::OnBoundary;
  }
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b] = poly.edge(i);
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? Containment::Inside : Containment::Outside;
}

/// Axis-aligned rectangle; rays terminate when they leave it.
struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool valid() const {
    return std::isfinite(min_x) && std::isfinite(min_y) && std::isfinite(max_x) && std::isfinite(max_y) &&
           max_x > min_x && max_y > min_y;
  }
  bool contains_closed(Vec2 p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
  /// Inside by more than kHitEpsilon on every side.
  bool contains_strictly(Vec2 p) const {
    return p.x > min_x + kHitEpsilon && p.x < max_x - kHitEpsilon && p.y > min_y + kHitEpsilon &&
           p.y < max_y - kHitEpsilon;
  }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Distance along dir until a ray starting inside (or on) the rectangle leaves it.
inline double exit_distance(const Bounds& box, Vec2 origin, UnitVec2 dir) {
  double t = std::numeric_limits<double>::infinity();
  if (dir.x() > 0.0) t = std::min(t, (box.max_x - origin.x) / dir.x());
  if (dir.x() < 0.0) t = std::min(t, (box.min_x - origin.x) / dir.x());
  if (dir.y() > 0.0) t = std::min(t, (box.max_y - origin.y) / dir.y());
  if (dir.y() < 0.0) t = std::min(t, (box.min_y - origin.y) / dir.y());
  return std::max(t, 0.0);
}

}  // namespace optics
