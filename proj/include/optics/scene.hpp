#pragma once

/**
 * @file scene.hpp
 * @brief Scene document: media table, posed polygonal elements, light sources
 *        and world bounds, plus validation, medium lookup and pose editing.
 *
 * Elements never overlap partially: two elements are either disjoint (they
 * may touch along exactly shared edges) or one strictly contains the other.
 * The medium at a point is that of the innermost (smallest) containing
 * element, or the background medium when no element contains it.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "optics/error.hpp"
#include "optics/geometry.hpp"
#include "optics/medium.hpp"

namespace optics {

struct Element {
  std::string id;
  Polygon shape;  // local coordinates
  std::string medium;
  Pose pose;

  Polygon world_shape() const { return apply_pose(pose, shape); }
  friend bool operator==(const Element&, const Element&) = default;
};

struct SingleRay {
  friend bool operator==(const SingleRay&, const SingleRay&) = default;
};
struct Fan {
  int count = 2;
  double spread = 0.0;  // radians
  friend bool operator==(const Fan&, const Fan&) = default;
};
using Beam = std::variant<SingleRay, Fan>;

struct Mono {
  Wavelength lambda;
  friend bool operator==(const Mono&, const Mono&) = default;
};
struct White {
  friend bool operator==(const White&, const White&) = default;
};
using Spectrum = std::variant<Mono, White>;

inline constexpr int kMaxFanCount = 64;
inline constexpr double kMaxFanSpread = std::numbers::pi / 4.0;

/// A flashlight: position is the emitter point, rotation is the beam heading.
struct Source {
  std::string id;
  Pose pose;
  Beam beam = SingleRay{};
  Spectrum spectrum = White{};
  friend bool operator==(const Source&, const Source&) = default;
};

struct SceneDoc {
  std::string background = "air";
  std::vector<Medium> media;
  std::vector<Element> elements;
  std::vector<Source> sources;
  Bounds bounds;

  const Medium* find_medium(std::string_view name) const {
    for (const auto& m : media) {
      if (m.name == name) return &m;
    }
    return nullptr;
  }
  const Element* find_element(std::string_view id) const {
    for (const auto& e : elements) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }
  const Source* find_source(std::string_view id) const {
    for (const auto& s : sources) {
      if (s.id == id) return &s;
    }
    return nullptr;
  }

  friend bool operator==(const SceneDoc&, const SceneDoc&) = default;
};

enum class ViolationKind {
  InvalidBounds,
  InvalidMedium,
  DuplicateMedium,
  UnknownBackground,
  DuplicateId,
  UnknownMedium,
  ElementOutOfBounds,
  PartialOverlap,
  NearCoincidentEdge,
  SourceOutOfBounds,
  SourceOnBoundary,
  InvalidBeam,
};

constexpr std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::InvalidBounds: return "InvalidBounds";
    case ViolationKind::InvalidMedium: return "InvalidMedium";
    case ViolationKind::DuplicateMedium: return "DuplicateMedium";
    case ViolationKind::UnknownBackground: return "UnknownBackground";
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::UnknownMedium: return "UnknownMedium";
    case ViolationKind::ElementOutOfBounds: return "ElementOutOfBounds";
    case ViolationKind::PartialOverlap: return "PartialOverlap";
    case ViolationKind::NearCoincidentEdge: return "NearCoincidentEdge";
    case ViolationKind::SourceOutOfBounds: return "SourceOutOfBounds";
    case ViolationKind::SourceOnBoundary: return "SourceOnBoundary";
    case ViolationKind::InvalidBeam: return "InvalidBeam";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<std::string> ids;
  std::string detail;

  std::string describe() const {
    std::string out(to_string(kind));
    out += "(";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
    out += ")";
    if (!detail.empty()) out += ": " + detail;
    return out;
  }
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised with SceneInvalid or PoseRejected; carries the full violation list.
class SceneError : public Error {
 public:
  SceneError(ErrorCode code, std::vector<Violation> violations)
      : Error(code, summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string out;
    for (const auto& v : vs) out += (out.empty() ? "" : "; ") + v.describe();
    return out;
  }
  std::vector<Violation> violations_;
};

namespace detail {

inline constexpr double kNearEdgeBand = 1e-6;
inline constexpr double kInteriorProbe = 1e-6;

enum class Relation { Disjoint, FirstInsideSecond, SecondInsideFirst, PartialOverlap, NearCoincident };

/// Edges that are parallel, overlapping in projection and closer than
/// kNearEdgeBand without being collinear to within kHitEpsilon.
inline bool near_coincident(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 u = b - a;
  const double len = norm(u);
  const Vec2 w = d - c;
  const double wlen = norm(w);
  if (std::abs(cross(u, w)) > 1e-9 * len * wlen) return false;
  const double dc = std::abs(cross(u, c - a)) / len;
  const double dd = std::abs(cross(u, d - a)) / len;
  const double far = std::max(dc, dd);
  if (far <= kHitEpsilon || far > kNearEdgeBand) return false;
  const double s0 = dot(c - a, u) / (len * len);
  const double s1 = dot(d - a, u) / (len * len);
  const double lo = std::max(0.0, std::min(s0, s1));
  const double hi = std::min(1.0, std::max(s0, s1));
  return (hi - lo) * len > kHitEpsilon;
}

/// Interior crossing of two non-parallel segments, excluding endpoints.
inline bool proper_crossing(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  if (std::abs(denom) <= 1e-14 * norm(r) * norm(s)) return false;
  const double t = cross(c - a, s) / denom;
  const double u = cross(c - a, r) / denom;
  constexpr double eta = 1e-12;
  return t > eta && t < 1.0 - eta && u > eta && u < 1.0 - eta;
}

/// Vertices plus points just inside each edge midpoint.
inline std::vector<Vec2> probe_points(const Polygon& poly) {
  std::vector<Vec2> out = poly.vertices();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto [a, b] = poly.edge(i);
    const Vec2 e = b - a;
    const double len = norm(e);
    const Vec2 inward{-e.y / len, e.x / len};
    const double delta = std::min(kInteriorProbe, 0.01 * len);
    const Vec2 p = 0.5 * (a + b) + delta * inward;
    if (point_in_polygon(p, poly) == Containment::Inside) out.push_back(p);
  }
  return out;
}

struct SideCount {
  bool inside = false;
  bool outside = false;
};

inline SideCount classify_probes(const std::vector<Vec2>& probes, const Polygon& other) {
  SideCount sc;
  for (const Vec2& p : probes) {
    switch (point_in_polygon(p, other)) {
      case Containment::Inside: sc.inside = true; break;
      case Containment::Outside: sc.outside = true; break;
      case Containment::OnBoundary: break;
    }
  }
  return sc;
}

inline Relation relate(const Polygon& a, const Polygon& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [p, q] = a.edge(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto [r, s] = b.edge(j);
      if (proper_crossing(p, q, r, s)) return Relation::PartialOverlap;
      if (near_coincident(p, q, r, s) || near_coincident(r, s, p, q)) return Relation::NearCoincident;
    }
  }
  const SideCount a_in_b = classify_probes(probe_points(a), b);
  const SideCount b_in_a = classify_probes(probe_points(b), a);
  if (a_in_b.inside && a_in_b.outside) return Relation::PartialOverlap;
  if (b_in_a.inside && b_in_a.outside) return Relation::PartialOverlap;
  if (a_in_b.inside && b_in_a.inside) return Relation::PartialOverlap;  // coincident shapes
  if (a_in_b.inside) return Relation::FirstInsideSecond;
  if (b_in_a.inside) return Relation::SecondInsideFirst;
  if (!a_in_b.outside && !b_in_a.outside) return Relation::PartialOverlap;
  return Relation::Disjoint;
}

}  // namespace detail

inline std::vector<Violation> validate(const SceneDoc& scene) {
  std::vector<Violation> out;
  const auto add = [&](ViolationKind kind, std::vector<std::string> ids, std::string detail = {}) {
    out.push_back({kind, std::move(ids), std::move(detail)});
  };

  if (!scene.bounds.valid()) add(ViolationKind::InvalidBounds, {}, "bounds must be a finite non-empty rectangle");

  std::set<std::string> media_names;
  for (const auto& m : scene.media) {
    if (auto why = m.check(); !why.empty()) add(ViolationKind::InvalidMedium, {m.name}, why);
    if (!media_names.insert(m.name).second) add(ViolationKind::DuplicateMedium, {m.name});
  }
  if (!scene.find_medium(scene.background)) add(ViolationKind::UnknownBackground, {scene.background});

  std::set<std::string> ids;
  for (const auto& e : scene.elements) {
    if (!ids.insert(e.id).second) add(ViolationKind::DuplicateId, {e.id});
  }
  for (const auto& s : scene.sources) {
    if (!ids.insert(s.id).second) add(ViolationKind::DuplicateId, {s.id});
  }

  std::vector<Polygon> world;
  world.reserve(scene.elements.size());
  for (const auto& e : scene.elements) {
    world.push_back(e.world_shape());
    if (!scene.find_medium(e.medium)) add(ViolationKind::UnknownMedium, {e.id}, "medium '" + e.medium + "'");
    if (scene.bounds.valid()) {
      const bool inside = std::all_of(world.back().vertices().begin(), world.back().vertices().end(),
                                      [&](Vec2 v) { return scene.bounds.contains_strictly(v); });
      if (!inside) add(ViolationKind::ElementOutOfBounds, {e.id});
    }
  }

  for (std::size_t i = 0; i < world.size(); ++i) {
    for (std::size_t j = i + 1; j < world.size(); ++j) {
      const auto rel = detail::relate(world[i], world[j]);
      if (rel == detail::Relation::PartialOverlap) {
        add(ViolationKind::PartialOverlap, {scene.elements[i].id, scene.elements[j].id});
      } else if (rel == detail::Relation::NearCoincident) {
        add(ViolationKind::NearCoincidentEdge, {scene.elements[i].id, scene.elements[j].id});
      }
    }
  }

  for (const auto& s : scene.sources) {
    const Vec2 p = s.pose.position();
    if (scene.bounds.valid() && !scene.bounds.contains_strictly(p)) add(ViolationKind::SourceOutOfBounds, {s.id});
    for (const auto& poly : world) {
      if (point_in_polygon(p, poly) == Containment::OnBoundary) {
        add(ViolationKind::SourceOnBoundary, {s.id});
        break;
      }
    }
    if (const auto* fan = std::get_if<Fan>(&s.beam)) {
      if (fan->count < 2 || fan->count > kMaxFanCount) {
        add(ViolationKind::InvalidBeam, {s.id}, "fan count must be in [2, 64]");
      }
      if (!(fan->spread > 0.0 && fan->spread <= kMaxFanSpread)) {
        add(ViolationKind::InvalidBeam, {s.id}, "fan spread must be in (0, pi/4]");
      }
    }
  }
  return out;
}

inline void require_valid(const SceneDoc& scene) {
  if (auto v = validate(scene); !v.empty()) throw SceneError(ErrorCode::SceneInvalid, std::move(v));
}

/// World-space view of a validated scene for repeated point queries.
class PreparedScene {
 public:
  struct Body {
    Polygon shape;
    double area;
    const Medium* medium;
    const Element* element;
  };

  explicit PreparedScene(const SceneDoc& scene) : scene_(&scene) {
    for (const auto& e : scene.elements) {
      Polygon world = e.world_shape();
      const double area = world.area();
      bodies_.push_back({std::move(world), area, scene.find_medium(e.medium), &e});
    }
    background_ = scene.find_medium(scene.background);
  }

  const SceneDoc& scene() const { return *scene_; }
  const std::vector<Body>& bodies() const { return bodies_; }
  const Medium& background() const { return *background_; }

  /// Innermost containing medium, or nullopt when p is on an element edge.
  std::optional<const Medium*> medium_at(Vec2 p) const {
    const Body* best = nullptr;
    for (const auto& b : bodies_) {
      switch (point_in_polygon(p, b.shape)) {
        case Containment::OnBoundary: return std::nullopt;
        case Containment::Inside:
          if (!best || b.area < best->area) best = &b;
          break;
        case Containment::Outside: break;
      }
    }
    return best ? best->medium : background_;
  }

 private:
  const SceneDoc* scene_;
  std::vector<Body> bodies_;
  const Medium* background_ = nullptr;
};

/// Name of the medium at p. Throws OnBoundary when p lies within kHitEpsilon of an edge.
inline std::string resolve_medium(const SceneDoc& scene, Vec2 p) {
  const PreparedScene prepared(scene);
  const auto m = prepared.medium_at(p);
  if (!m) throw Error(ErrorCode::OnBoundary, "point lies on an element boundary");
  return (*m)->name;
}

/// Copy of the scene with one element or source moved. The input is untouched.
inline SceneDoc set_pose(const SceneDoc& scene, std::string_view id, const Pose& pose) {
  SceneDoc next = scene;
  bool found = false;
  for (auto& e : next.elements) {
    if (e.id == id) {
      e.pose = pose;
      found = true;
    }
  }
  for (auto& s : next.sources) {
    if (s.id == id) {
      s.pose = pose;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::UnknownId, "no element or source with id '" + std::string(id) + "'");
  if (auto v = validate(next); !v.empty()) throw SceneError(ErrorCode::PoseRejected, std::move(v));
  return next;
}

struct EmittedRay {
  Vec2 origin;
  UnitVec2 dir;
  Wavelength lambda;
};

/// Directions first (in fan order), then wavelengths in table order.
inline std::vector<EmittedRay> emit_rays(const Source& source, const std::vector<Wavelength>& white_table) {
  std::vector<double> headings;
  const double heading = source.pose.rotation();
  if (const auto* fan = std::get_if<Fan>(&source.beam)) {
    const double step = fan->spread / static_cast<double>(fan->count - 1);
    for (int i = 0; i < fan->count; ++i) headings.push_back(heading - 0.5 * fan->spread + step * i);
  } else {
    headings.push_back(heading);
  }
  std::vector<Wavelength> lambdas;
  if (const auto* mono = std::get_if<Mono>(&source.spectrum)) {
    lambdas.push_back(mono->lambda);
  } else {
    lambdas = white_table;
  }
  std::vector<EmittedRay> out;
  out.reserve(headings.size() * lambdas.size());
  for (double h : headings) {
    const UnitVec2 dir = UnitVec2::from_angle(h);
    for (const auto& l : lambdas) out.push_back({source.pose.position(), dir, l});
  }
  return out;
}

}  // namespace optics
