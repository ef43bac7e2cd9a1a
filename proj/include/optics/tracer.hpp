#pragma once

/**
 * @file tracer.hpp
 * @brief Event-loop propagation of rays through a validated scene.
 *
 * A ray advances to the nearest boundary, the media on either side of the hit
 * are sampled at hit -/+ kSideEpsilon * normal, and the refraction kernel
 * decides the outgoing direction. One outgoing ray per event; no intensities.
 * Traces end on leaving the bounds, on a grazing or corner hit, or when the
 * event cap is reached.
 */

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optics/error.hpp"
#include "optics/geometry.hpp"
#include "optics/medium.hpp"
#include "optics/refraction.hpp"
#include "optics/scene.hpp"

namespace optics {

/// Offset used to sample the media on both sides of a boundary hit.
inline constexpr double kSideEpsilon = 10.0 * kHitEpsilon;
inline constexpr int kDefaultMaxEvents = 64;

enum class PathEvent { Refracted, TotalInternalReflection, Grazing, ExitedBounds, MaxEventsReached };

constexpr std::string_view to_string(PathEvent e) {
  switch (e) {
    case PathEvent::Refracted: return "refracted";
    case PathEvent::TotalInternalReflection: return "total_internal_reflection";
    case PathEvent::Grazing: return "grazing";
    case PathEvent::ExitedBounds: return "exited_bounds";
    case PathEvent::MaxEventsReached: return "max_events_reached";
  }
  return "?";
}

inline std::optional<PathEvent> path_event_from_string(std::string_view s) {
  for (auto e : {PathEvent::Refracted, PathEvent::TotalInternalReflection, PathEvent::Grazing,
                 PathEvent::ExitedBounds, PathEvent::MaxEventsReached}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

struct Segment {
  Vec2 start;
  Vec2 end;
  std::string medium;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct RayPath {
  Wavelength lambda;
  std::vector<Segment> segments;
  std::vector<PathEvent> events;  // one per internal vertex
  PathEvent terminal = PathEvent::ExitedBounds;

  UnitVec2 final_direction() const { return normalize(segments.back().end - segments.back().start); }
  friend bool operator==(const RayPath&, const RayPath&) = default;
};

struct BoundaryHit {
  double t = 0.0;
  Vec2 point;
  UnitVec2 normal = UnitVec2::from_angle(0.0);  // points into the incident medium
  bool bounds = false;
  /// Corner hit, or a side sample that landed on another boundary.
  bool degenerate = false;
  const Medium* medium_before = nullptr;
  const Medium* medium_after = nullptr;
  double n_before = 1.0;
  double n_after = 1.0;
};

/// Holds a validated copy of a scene; cheap to copy and safe to share
/// between threads.
class Tracer {
 public:
  explicit Tracer(SceneDoc scene) : scene_(std::make_shared<const SceneDoc>(std::move(scene))) {
    require_valid(*scene_);
    prepared_ = std::make_shared<const PreparedScene>(*scene_);
  }

  const SceneDoc& scene() const { return *scene_; }
  const PreparedScene& prepared() const { return *prepared_; }

  std::optional<BoundaryHit> nearest_hit(Vec2 origin, UnitVec2 dir, Wavelength lambda) const {
    const Bounds& box = scene_->bounds;
    if (!box.contains_closed(origin)) return std::nullopt;

    BoundaryHit best;
    best.t = exit_distance(box, origin, dir);
    best.point = origin + best.t * dir.vec();
    best.bounds = true;
    const Vec2* best_a = nullptr;
    const Vec2* best_b = nullptr;

    for (const auto& body : prepared_->bodies()) {
      const auto& verts = body.shape.vertices();
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec2& a = verts[i];
        const Vec2& b = verts[(i + 1) % verts.size()];
        const auto hit = intersect_ray_segment(origin, dir, a, b);
        if (hit && hit->t < best.t) {
          best.t = hit->t;
          best.point = hit->point;
          best.bounds = false;
          best_a = &a;
          best_b = &b;
        }
      }
    }

    if (best.bounds) {
      const Vec2 p = best.point;
      Vec2 n{0.0, 0.0};
      const double tol = 1e-12 * (1.0 + std::abs(p.x) + std::abs(p.y));
      if (std::abs(p.x - box.max_x) <= tol) n = {-1.0, 0.0};
      else if (std::abs(p.x - box.min_x) <= tol) n = {1.0, 0.0};
      else if (std::abs(p.y - box.max_y) <= tol) n = {0.0, -1.0};
      else n = {0.0, 1.0};
      best.normal = normalize(n);
      // Snap onto the box so the exit point itself counts as inside the bounds.
      best.point = {std::clamp(p.x, box.min_x, box.max_x), std::clamp(p.y, box.min_y, box.max_y)};
      const auto m = prepared_->medium_at(origin);
      best.medium_before = best.medium_after = m ? *m : &prepared_->background();
      best.n_before = best.n_after = index_at(*best.medium_before, lambda);
      return best;
    }

    const Vec2 e = *best_b - *best_a;
    Vec2 n{-e.y, e.x};
    if (dot(n, dir.vec()) > 0.0) n = -n;
    best.normal = normalize(n);

    for (const auto& body : prepared_->bodies()) {
      for (const Vec2& v : body.shape.vertices()) {
        if (distance(v, best.point) <= kHitEpsilon) best.degenerate = true;
      }
    }
    const auto before = prepared_->medium_at(best.point + kSideEpsilon * best.normal.vec());
    const auto after = prepared_->medium_at(best.point - kSideEpsilon * best.normal.vec());
    if (!before || !after) {
      best.degenerate = true;
      best.medium_before = best.medium_after = &prepared_->background();
    } else {
      best.medium_before = *before;
      best.medium_after = *after;
    }
    best.n_before = index_at(*best.medium_before, lambda);
    best.n_after = index_at(*best.medium_after, lambda);
    return best;
  }

  /// Origin must lie inside the closed bounds and off every element edge.
  RayPath trace(Vec2 origin, UnitVec2 dir, Wavelength lambda, int max_events = kDefaultMaxEvents) const {
    if (!scene_->bounds.contains_closed(origin)) {
      throw Error(ErrorCode::InvalidParameter, "ray origin lies outside the scene bounds");
    }
    const auto start_medium = prepared_->medium_at(origin);
    if (!start_medium) throw Error(ErrorCode::OnBoundary, "ray origin lies on an element boundary");

    RayPath path{lambda, {}, {}, PathEvent::ExitedBounds};
    const Medium* medium = *start_medium;
    Vec2 vertex = origin;  // where the current segment starts
    Vec2 probe = origin;   // where the next intersection query starts
    int events = 0;

    for (;;) {
      const auto hit = nearest_hit(probe, dir, lambda);
      if (!hit) {
        // The probe offset stepped outside the bounds; close the path here.
        path.terminal = PathEvent::ExitedBounds;
        return path;
      }
      path.segments.push_back({vertex, hit->point, medium->name});
      if (hit->bounds) {
        path.terminal = PathEvent::ExitedBounds;
        return path;
      }
      if (hit->degenerate) {
        path.terminal = PathEvent::Grazing;
        return path;
      }
      if (events >= max_events) {
        path.terminal = PathEvent::MaxEventsReached;
        return path;
      }
      const auto outcome = refract_or_reflect(dir, hit->normal, hit->n_before, hit->n_after);
      if (std::holds_alternative<Grazing>(outcome)) {
        path.terminal = PathEvent::Grazing;
        return path;
      }
      if (std::holds_alternative<Refracted>(outcome)) {
        path.events.push_back(PathEvent::Refracted);
        medium = hit->medium_after;
      } else {
        path.events.push_back(PathEvent::TotalInternalReflection);
        medium = hit->medium_before;
      }
      ++events;
      dir = outcome_direction(outcome);
      vertex = hit->point;
      probe = hit->point + kHitEpsilon * dir.vec();
    }
  }

  /// One path per emitted ray: by direction index, then wavelength descending.
  std::vector<RayPath> trace_source(std::string_view source_id, int max_events = kDefaultMaxEvents) const {
    const Source* source = scene_->find_source(source_id);
    if (!source) throw Error(ErrorCode::UnknownId, "no source with id '" + std::string(source_id) + "'");
    std::vector<RayPath> out;
    for (const auto& ray : emit_rays(*source, white_light_table())) {
      out.push_back(trace(ray.origin, ray.dir, ray.lambda, max_events));
    }
    return out;
  }

  /// Every source in document order.
  std::vector<RayPath> trace_all(int max_events = kDefaultMaxEvents) const {
    std::vector<RayPath> out;
    for (const auto& s : scene_->sources) {
      auto paths = trace_source(s.id, max_events);
      out.insert(out.end(), std::make_move_iterator(paths.begin()), std::make_move_iterator(paths.end()));
    }
    return out;
  }

 private:
  std::shared_ptr<const SceneDoc> scene_;
  std::shared_ptr<const PreparedScene> prepared_;
};

inline std::optional<BoundaryHit> nearest_boundary_hit(const SceneDoc& scene, Vec2 origin, UnitVec2 dir,
                                                       Wavelength lambda) {
  return Tracer(scene).nearest_hit(origin, dir, lambda);
}

inline RayPath trace_ray(const SceneDoc& scene, Vec2 origin, UnitVec2 dir, Wavelength lambda,
                         int max_events = kDefaultMaxEvents) {
  return Tracer(scene).trace(origin, dir, lambda, max_events);
}

inline std::vector<RayPath> trace_source(const SceneDoc& scene, std::string_view source_id,
                                         int max_events = kDefaultMaxEvents) {
  return Tracer(scene).trace_source(source_id, max_events);
}

/// Medium names on either side of internal vertex i. Equal for reflections.
inline std::pair<std::string, std::string> event_media(const RayPath& path, std::size_t i) {
  return {path.segments[i].medium, path.segments[i + 1].medium};
}

}  // namespace optics
