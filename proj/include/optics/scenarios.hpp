#pragma once

/**
 * @file scenarios.hpp
 * @brief Parametric builders for the canonical scenes and the sweeps that
 *        measure them.
 *
 * Scenes:
 *   - oceanarium: a vertical glass wall, water filling part of one side.
 *   - glass_plate: a parallel-faced plate in air.
 *   - regular_prism: a regular k-gon (k = 3 is the classic triangular prism).
 *   - pendant: a regular k-gon (k >= 4) lit off-center by white light.
 *
 * Sweeps:
 *   - spread_sweep: white light through a prism versus incidence on the
 *     first face, with bisection refinement wherever a wavelength starts or
 *     stops exiting through the next face.
 *   - underwater_sweep / visibility_cutoff: look angles from an eye under
 *     water toward the glass wall.
 *   - pendant_scatter: prism orientations for which colors leave through
 *     different faces.
 *
 * Angles are radians throughout; degree conversion happens at the CLI and
 * HTTP edges only.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "optics/error.hpp"
#include "optics/geometry.hpp"
#include "optics/medium.hpp"
#include "optics/refraction.hpp"
#include "optics/scene.hpp"
#include "optics/tracer.hpp"

namespace optics {

inline constexpr double kPi = std::numbers::pi;
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

namespace detail {
inline std::vector<Vec2> rectangle(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}
inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Builders

struct OceanariumParams {
  double wall_thickness = 0.1;
  double tank_width = 6.0;
  double tank_height = 3.0;
  double water_level_fraction = 0.5;
  Medium air = media::air();
  Medium glass = media::window_glass();
  Medium water = media::water();
};

/// Glass wall "wall" spans x in [0, wall_thickness], full tank height. Water
/// "water" fills x in [wall_thickness, wall_thickness + tank_width] up to the
/// stated level. Visitors and the flashlight are on the x < 0 side.
inline SceneDoc oceanarium(const OceanariumParams& p = {}) {
  detail::require(p.wall_thickness > 0.0, "wall_thickness must be > 0");
  detail::require(p.tank_width > 0.0, "tank_width must be > 0");
  detail::require(p.tank_height > 0.0, "tank_height must be > 0");
  detail::require(p.water_level_fraction > 0.0 && p.water_level_fraction <= 1.0,
                  "water_level_fraction must be in (0, 1]");

  const double w = p.wall_thickness;
  const double h = p.tank_height;
  const double level = p.water_level_fraction * h;

  Medium air = p.air;
  Medium glass = p.glass;
  Medium water = p.water;
  air.name = "air";
  glass.name = "glass";
  water.name = "water";

  SceneDoc scene;
  scene.background = "air";
  scene.media = {air, glass, water};
  scene.elements.push_back({"wall", Polygon(detail::rectangle(0.0, 0.0, w, h)), "glass", Pose{}});
  scene.elements.push_back({"water", Polygon(detail::rectangle(w, 0.0, w + p.tank_width, level)), "water", Pose{}});
  scene.bounds = {-3.0, -1.0, w + p.tank_width + 1.0, h + 1.0};
  // The flashlight fan straddles the water line at the wall; the lamp sits
  // under water looking up at the wall. Together they cross every media pair.
  const Vec2 lamp{-1.5, std::min(2.0, 0.9 * h)};
  scene.sources.push_back(
      {"flashlight", Pose(lamp, deg_to_rad(-15.0)), Fan{5, deg_to_rad(10.0)}, Mono{Wavelength(550.0)}});
  const Vec2 diver{w + 0.1, level * (2.0 / 3.0)};
  scene.sources.push_back({"lamp", Pose(diver, deg_to_rad(150.0)), SingleRay{}, Mono{Wavelength(550.0)}});
  require_valid(scene);
  return scene;
}

struct GlassPlateParams {
  double thickness = 1.0;
  double n = 1.5;
  double height = 4.0;
  double incidence = deg_to_rad(30.0);
};

/// Plate "plate" centered at the origin with faces at x = +/- thickness/2.
/// The source hits the center of the left face at the stated incidence.
inline SceneDoc glass_plate(const GlassPlateParams& p = {}) {
  detail::require(p.thickness > 0.0, "thickness must be > 0");
  detail::require(p.height > 0.0, "height must be > 0");
  detail::require(p.n >= 1.0, "n must be >= 1");
  detail::require(std::abs(p.incidence) < deg_to_rad(89.0) + 1e-12, "incidence must be within (-89, 89) degrees");

  const double half_t = 0.5 * p.thickness;
  const double half_h = 0.5 * p.height;
  SceneDoc scene;
  scene.background = "air";
  scene.media = {media::air(), Medium::constant("glass", p.n)};
  scene.elements.push_back({"plate", Polygon(detail::rectangle(-half_t, -half_h, half_t, half_h)), "glass", Pose{}});
  scene.bounds = {-half_t - 4.0, -half_h - 2.0, half_t + 4.0, half_h + 2.0};
  const double run = 3.0;
  const double rise = std::clamp(run * std::tan(p.incidence), -(half_h + 1.5), half_h + 1.5);
  const Vec2 target{-half_t, 0.0};
  const Vec2 origin = target - Vec2{run, rise};
  scene.sources.push_back({"flashlight", Pose(origin, std::atan2(rise, run)), SingleRay{}, Mono{Wavelength(550.0)}});
  require_valid(scene);
  return scene;
}

inline std::vector<Vec2> regular_polygon(int k, double radius) {
  std::vector<Vec2> out;
  for (int i = 0; i < k; ++i) {
    const double a = kPi / 2.0 + 2.0 * kPi * i / k;
    out.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return out;
}

/// First face of a prism in world coordinates: edge 0, from vertex 0 (the
/// apex for k = 3) to vertex 1.
struct FaceFrame {
  Vec2 midpoint;
  UnitVec2 inward;
  UnitVec2 toward_apex;
};

inline FaceFrame first_face(const Polygon& world) {
  const auto [a, b] = world.edge(0);
  const Vec2 e = b - a;
  return {0.5 * (a + b), normalize({-e.y, e.x}), normalize(a - b)};
}

/// Direction hitting the first face at `incidence` from its normal;
/// positive values tilt toward the apex.
inline UnitVec2 incidence_direction(const FaceFrame& f, double incidence) {
  return normalize(std::cos(incidence) * f.inward.vec() + std::sin(incidence) * f.toward_apex.vec());
}

struct PrismParams {
  int sides = 3;
  double radius = 1.0;
  Medium material = media::crown_glass();
  double orientation = 0.0;
  double incidence = deg_to_rad(50.0);
};

/// Regular k-gon "prism" centered at the origin with a white single-ray
/// source aimed at the middle of the first face.
inline SceneDoc regular_prism(const PrismParams& p = {}) {
  detail::require(p.sides >= 3, "k must be >= 3");
  detail::require(p.sides <= 360, "k must be <= 360");
  detail::require(p.radius > 0.0, "radius must be > 0");
  detail::require(std::abs(p.incidence) < deg_to_rad(89.0) + 1e-12, "incidence must be within (-89, 89) degrees");
  if (auto why = p.material.check(); !why.empty()) throw Error(ErrorCode::InvalidParameter, why);
  detail::require(p.material.name != "air", "prism material must differ from the background");

  SceneDoc scene;
  scene.background = "air";
  scene.media = {media::air(), p.material};
  scene.elements.push_back(
      {"prism", Polygon(regular_polygon(p.sides, p.radius)), p.material.name, Pose({0.0, 0.0}, p.orientation)});
  scene.bounds = {-5.0 * p.radius, -5.0 * p.radius, 5.0 * p.radius, 5.0 * p.radius};
  const FaceFrame face = first_face(scene.elements.front().world_shape());
  const UnitVec2 dir = incidence_direction(face, p.incidence);
  const Vec2 origin = face.midpoint - 2.0 * p.radius * dir.vec();
  scene.sources.push_back({"flashlight", Pose(origin, dir.angle()), SingleRay{}, White{}});
  require_valid(scene);
  return scene;
}

struct PendantParams {
  int sides = 6;
  double radius = 1.0;
  Medium material = media::flint_glass();
  double orientation = 0.0;
  /// Height of the horizontal sun ray, as a fraction of the radius.
  double offset = 0.5;
};

/// Regular k-gon "prism" lit by a horizontal white ray from the left.
inline SceneDoc pendant(const PendantParams& p = {}) {
  detail::require(p.sides >= 4, "pendant requires k >= 4");
  detail::require(p.sides <= 360, "k must be <= 360");
  detail::require(p.radius > 0.0, "radius must be > 0");
  detail::require(std::abs(p.offset) < 1.0, "offset must be within (-1, 1)");
  if (auto why = p.material.check(); !why.empty()) throw Error(ErrorCode::InvalidParameter, why);
  detail::require(p.material.name != "air", "pendant material must differ from the background");

  SceneDoc scene;
  scene.background = "air";
  scene.media = {media::air(), p.material};
  scene.elements.push_back(
      {"prism", Polygon(regular_polygon(p.sides, p.radius)), p.material.name, Pose({0.0, 0.0}, p.orientation)});
  scene.bounds = {-5.0 * p.radius, -5.0 * p.radius, 5.0 * p.radius, 5.0 * p.radius};
  scene.sources.push_back({"sun", Pose({-3.0 * p.radius, p.offset * p.radius}, 0.0), SingleRay{}, White{}});
  require_valid(scene);
  return scene;
}

// ---------------------------------------------------------------------------
// Closed forms

/// Minimum deviation 2*asin(n*sin(A/2)) - A of a prism with apex angle A.
inline double min_deviation_angle(double apex, double n) {
  const double s = n * std::sin(0.5 * apex);
  if (s > 1.0) throw Error(ErrorCode::NoTransmission, "n*sin(A/2) > 1: every ray is totally reflected");
  return 2.0 * std::asin(s) - apex;
}

/// Incidence on the first face of a prism with apex angle A below which
/// the ray is totally reflected at the second face (prism in air).
inline std::optional<double> prism_exit_cutoff(double apex, double n) {
  const auto crit = critical_angle(n, 1.0);
  if (!crit) return std::nullopt;
  const double s = n * std::sin(apex - *crit);
  if (s >= 1.0) return std::nullopt;
  return std::asin(s);
}

// ---------------------------------------------------------------------------
// Prism spread sweep

struct SweepRow {
  double incidence = 0.0;
  std::array<std::optional<double>, 7> exit_angle{};  // white-light table order
  std::array<std::optional<double>, 7> deviation{};
  std::optional<double> spread;
  int cones = 0;
};

namespace detail {

inline SceneDoc with_prism_material(SceneDoc scene, const Medium& material) {
  auto it = std::find_if(scene.elements.begin(), scene.elements.end(), [](const Element& e) { return e.id == "prism"; });
  if (it == scene.elements.end()) throw Error(ErrorCode::InvalidParameter, "scene has no element named 'prism'");
  std::erase_if(scene.media, [&](const Medium& m) { return m.name == material.name; });
  scene.media.push_back(material);
  it->medium = material.name;
  scene.sources.clear();
  return scene;
}

class PrismProbe {
 public:
  PrismProbe(const SceneDoc& scene, const Medium& material)
      : tracer_(with_prism_material(scene, material)),
        world_(tracer_.scene().find_element("prism")->world_shape()),
        face_(first_face(world_)),
        material_(material.name) {
    double reach = 0.0;
    for (const Vec2& v : world_.vertices()) reach = std::max(reach, distance(v, face_.midpoint));
    standoff_ = reach;
  }

  struct Exit {
    double angle;
    double deviation;
  };

  /// Exit through the next face straight after entering, if it happens.
  std::optional<Exit> exit_for(double incidence, Wavelength lambda) const {
    const UnitVec2 dir = incidence_direction(face_, incidence);
    const Vec2 origin = face_.midpoint - standoff_ * dir.vec();
    const RayPath path = tracer_.trace(origin, dir, lambda, 2);
    if (path.events.size() < 2) return std::nullopt;
    if (path.events[0] != PathEvent::Refracted || path.events[1] != PathEvent::Refracted) return std::nullopt;
    const auto bg = tracer_.scene().background;
    if (event_media(path, 0) != std::pair{bg, material_} || event_media(path, 1) != std::pair{material_, bg}) {
      return std::nullopt;
    }
    const Vec2 exit_point = path.segments[1].end;
    std::size_t face = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < world_.size(); ++i) {
      const auto [a, b] = world_.edge(i);
      const double d = distance_to_segment(exit_point, a, b);
      if (d < best) {
        best = d;
        face = i;
      }
    }
    const auto [a, b] = world_.edge(face);
    const Vec2 outward{(b - a).y, -(b - a).x};
    const Vec2 out_dir = path.segments[2].end - path.segments[2].start;
    return Exit{signed_angle(out_dir, outward), std::abs(signed_angle(dir.vec(), out_dir))};
  }

  SweepRow row(double incidence, const std::vector<Wavelength>& lambdas) const {
    SweepRow r;
    r.incidence = incidence;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < lambdas.size() && i < r.exit_angle.size(); ++i) {
      if (auto e = exit_for(incidence, lambdas[i])) {
        r.exit_angle[i] = e->angle;
        r.deviation[i] = e->deviation;
        lo = std::min(lo, e->angle);
        hi = std::max(hi, e->angle);
        ++r.cones;
      }
    }
    if (r.cones >= 2) r.spread = hi - lo;
    return r;
  }

 private:
  Tracer tracer_;
  Polygon world_;
  FaceFrame face_;
  std::string material_;
  double standoff_ = 1.0;
};

}  // namespace detail

inline constexpr double kRefineTolerance = 1e-6;

/// Rows at every `step` from `from` to `to` (inclusive), plus a bracketing
/// pair of rows, at most kRefineTolerance apart, around each incidence where
/// a wavelength starts or stops exiting. Rows are sorted by incidence.
inline std::vector<SweepRow> spread_sweep(const SceneDoc& prism_scene, const Medium& material, double from, double to,
                                          double step) {
  detail::require(step > 0.0, "step must be > 0");
  detail::require(to >= from, "sweep range is empty");
  const detail::PrismProbe probe(prism_scene, material);
  const auto lambdas = white_light_table();

  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(from + step * static_cast<double>(i));

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double a : grid) rows.push_back(probe.row(a, lambdas));

  std::vector<double> extra;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const bool lo_exits = rows[i].exit_angle[l].has_value();
      if (lo_exits == rows[i + 1].exit_angle[l].has_value()) continue;
      double lo = rows[i].incidence;
      double hi = rows[i + 1].incidence;
      while (hi - lo > kRefineTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (probe.exit_for(mid, lambdas[l]).has_value() == lo_exits) lo = mid;
        else hi = mid;
      }
      extra.push_back(lo);
      extra.push_back(hi);
    }
  }
  for (double a : extra) rows.push_back(probe.row(a, lambdas));
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.incidence < b.incidence; });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const SweepRow& a, const SweepRow& b) { return a.incidence == b.incidence; }),
             rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Looking out from under the water

enum class RouteTopology { ExitToAir, TirReturnToWater, TirThenTir, Other };

constexpr std::string_view to_string(RouteTopology t) {
  switch (t) {
    case RouteTopology::ExitToAir: return "exit_to_air";
    case RouteTopology::TirReturnToWater: return "tir_return_to_water";
    case RouteTopology::TirThenTir: return "tir_then_tir";
    case RouteTopology::Other: return "other";
  }
  return "?";
}

/// Compact event signature, e.g. "R:water>glass R:glass>air |exited_bounds".
/// Reflections are written "T:<medium>".
inline std::string route_signature(const RayPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const auto [from, to] = event_media(path, i);
    if (path.events[i] == PathEvent::Refracted) out += "R:" + from + ">" + to + " ";
    else out += "T:" + from + " ";
  }
  out += "|";
  out += to_string(path.terminal);
  return out;
}

struct UnderwaterLook {
  double angle = 0.0;  // look angle from the -x axis, positive upward
  bool reaches_wall = false;
  bool visible = false;  // some leg runs through air on the visitors' side
  RouteTopology topology = RouteTopology::Other;
  std::string signature;
};

namespace detail {

class UnderwaterProbe {
 public:
  UnderwaterProbe(const SceneDoc& scene, Vec2 eye) : tracer_(scene), eye_(eye) {
    const Element* wall = scene.find_element("wall");
    const Element* water = scene.find_element("water");
    if (!wall || !water) throw Error(ErrorCode::InvalidParameter, "scene needs elements 'wall' and 'water'");
    wall_shape_ = wall->world_shape();
    wall_medium_ = wall->medium;
    water_medium_ = water->medium;
    wall_min_x_ = wall_shape_.vertex(0).x;
    for (const Vec2& v : wall_shape_.vertices()) wall_min_x_ = std::min(wall_min_x_, v.x);
    const auto at_eye = tracer_.prepared().medium_at(eye);
    if (!at_eye || (*at_eye)->name != water_medium_) {
      throw Error(ErrorCode::BadEyePoint, "eye point is not inside the water");
    }
  }

  UnderwaterLook look(double angle, Wavelength lambda = Wavelength(550.0)) const {
    UnderwaterLook out;
    out.angle = angle;
    const UnitVec2 dir = normalize({-std::cos(angle), std::sin(angle)});
    const RayPath path = tracer_.trace(eye_, dir, lambda);
    out.signature = route_signature(path);
    if (path.events.empty()) return out;
    out.reaches_wall = point_in_polygon(path.segments[0].end, wall_shape_) == Containment::OnBoundary &&
                       path.segments[1].medium == wall_medium_;
    const auto& bg = tracer_.scene().background;
    for (const auto& s : path.segments) {
      if (s.medium == bg && s.start.x <= wall_min_x_ + kSideEpsilon && s.end.x <= wall_min_x_ + kSideEpsilon) {
        out.visible = true;
      }
    }
    out.topology = classify(path);
    return out;
  }

 private:
  RouteTopology classify(const RayPath& path) const {
    const auto& ev = path.events;
    if (ev.size() < 2 || ev[0] != PathEvent::Refracted) return RouteTopology::Other;
    if (event_media(path, 0) != std::pair{water_medium_, wall_medium_}) return RouteTopology::Other;
    const auto& bg = tracer_.scene().background;
    if (ev[1] == PathEvent::Refracted && event_media(path, 1) == std::pair{wall_medium_, bg}) {
      return RouteTopology::ExitToAir;
    }
    if (ev[1] != PathEvent::TotalInternalReflection || ev.size() < 3) return RouteTopology::Other;
    if (ev[2] == PathEvent::Refracted && event_media(path, 2) == std::pair{wall_medium_, water_medium_}) {
      return RouteTopology::TirReturnToWater;
    }
    if (ev[2] == PathEvent::TotalInternalReflection) return RouteTopology::TirThenTir;
    return RouteTopology::Other;
  }

  Tracer tracer_;
  Vec2 eye_;
  Polygon wall_shape_{{{0, 0}, {1, 0}, {0, 1}}};
  std::string wall_medium_;
  std::string water_medium_;
  double wall_min_x_ = 0.0;
};

}  // namespace detail

/// Default underwater eye for an oceanarium: just behind the wall, a third
/// of the water depth below the surface.
inline Vec2 default_eye(const OceanariumParams& p = {}) {
  const double level = p.water_level_fraction * p.tank_height;
  return {p.wall_thickness + 0.1, level * (2.0 / 3.0)};
}

/// Look angles in [from, to] at `step`, positive angles looking upward.
inline std::vector<UnderwaterLook> underwater_sweep(const SceneDoc& scene, Vec2 eye, double from, double to,
                                                    double step) {
  detail::require(step > 0.0, "step must be > 0");
  const detail::UnderwaterProbe probe(scene, eye);
  std::vector<UnderwaterLook> out;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(probe.look(from + step * static_cast<double>(i)));
  return out;
}

inline constexpr double kCutoffTolerance = 1e-4;

/// Largest upward look angle at which the eye still sees the visitors' side
/// of the wall. Scans in 0.25 degree steps while the look ray reaches the
/// wall first, then bisects the first visible -> hidden transition to
/// kCutoffTolerance. Empty when no transition exists in the reachable range.
inline std::optional<double> visibility_cutoff(const SceneDoc& scene, Vec2 eye) {
  const detail::UnderwaterProbe probe(scene, eye);
  const double step = deg_to_rad(0.25);
  UnderwaterLook prev = probe.look(0.0);
  if (!prev.reaches_wall) return std::nullopt;
  for (double a = step; a < kPi / 2.0; a += step) {
    const UnderwaterLook cur = probe.look(a);
    if (!cur.reaches_wall) return std::nullopt;
    if (prev.visible && !cur.visible) {
      double lo = prev.angle;
      double hi = cur.angle;
      while (hi - lo > kCutoffTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (probe.look(mid).visible) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = cur;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pendant scatter

struct PendantExit {
  std::optional<std::size_t> face;       // local edge index of the exit face
  std::optional<double> direction;       // heading of the exiting ray
};

struct PendantScatter {
  double orientation = 0.0;
  std::array<PendantExit, 7> exits{};
  /// Largest angle between exit directions of two colors leaving through
  /// different faces; 0 when all exiting colors share a face.
  double separation = 0.0;
  /// Largest angle between any two exit directions.
  double max_spread = 0.0;
};

/// Where each color of the scene's white source leaves the prism.
inline PendantScatter pendant_exits(const SceneDoc& scene) {
  const Tracer tracer(scene);
  const Element* prism = scene.find_element("prism");
  if (!prism) throw Error(ErrorCode::InvalidParameter, "scene has no element named 'prism'");
  if (scene.sources.empty()) throw Error(ErrorCode::InvalidParameter, "scene has no light source");
  const Polygon world = prism->world_shape();
  const auto paths = tracer.trace_source(scene.sources.front().id);

  PendantScatter out;
  out.orientation = prism->pose.rotation();
  for (std::size_t i = 0; i < paths.size() && i < out.exits.size(); ++i) {
    const RayPath& path = paths[i];
    if (path.terminal != PathEvent::ExitedBounds) continue;
    for (std::size_t e = path.events.size(); e-- > 0;) {
      if (path.events[e] != PathEvent::Refracted) continue;
      if (event_media(path, e) != std::pair{prism->medium, scene.background}) continue;
      const Vec2 p = path.segments[e].end;
      std::size_t face = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t f = 0; f < world.size(); ++f) {
        const auto [a, b] = world.edge(f);
        const double d = distance_to_segment(p, a, b);
        if (d < best) {
          best = d;
          face = f;
        }
      }
      out.exits[i].face = face;
      out.exits[i].direction = normalize(path.segments[e + 1].end - path.segments[e + 1].start).angle();
      break;
    }
  }
  for (std::size_t i = 0; i < out.exits.size(); ++i) {
    for (std::size_t j = i + 1; j < out.exits.size(); ++j) {
      const auto& a = out.exits[i];
      const auto& b = out.exits[j];
      if (!a.direction || !b.direction) continue;
      const double sep = std::abs(signed_angle(UnitVec2::from_angle(*a.direction), UnitVec2::from_angle(*b.direction)));
      out.max_spread = std::max(out.max_spread, sep);
      if (*a.face != *b.face) out.separation = std::max(out.separation, sep);
    }
  }
  return out;
}

inline constexpr double kPendantSeparation = kPi / 6.0;

/// Every orientation in [from, to] at `step`, in order.
inline std::vector<PendantScatter> pendant_sweep(const PendantParams& base, double from, double to, double step) {
  detail::require(step > 0.0, "step must be > 0");
  std::vector<PendantScatter> out;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    PendantParams p = base;
    p.orientation = from + step * static_cast<double>(i);
    PendantScatter s = pendant_exits(pendant(p));
    s.orientation = p.orientation;
    out.push_back(s);
  }
  return out;
}

/// First orientation in the sweep where two colors leave through different
/// faces more than 30 degrees apart.
inline std::optional<PendantScatter> pendant_scatter(int sides, const Medium& material, double from, double to,
                                                     double step) {
  detail::require(sides >= 4, "pendant requires k >= 4");
  PendantParams base;
  base.sides = sides;
  base.material = material;
  for (const auto& s : pendant_sweep(base, from, to, step)) {
    if (s.separation > kPendantSeparation) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Catalog shared by the CLI and the HTTP service

enum class ParamKind { Number, Integer, Angle, Material };

constexpr std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Number: return "number";
    case ParamKind::Integer: return "integer";
    case ParamKind::Angle: return "angle_deg";
    case ParamKind::Material: return "material";
  }
  return "?";
}

struct ParamDescriptor {
  std::string name;
  ParamKind kind = ParamKind::Number;
  double default_number = 0.0;
  std::string default_material;
  std::optional<double> min;
  std::optional<double> max;
  bool min_exclusive = false;
  std::string description;
};

struct ScenarioDescriptor {
  std::string name;
  std::string description;
  std::vector<ParamDescriptor> params;
};

using ParamValue = std::variant<double, std::string>;
using ParamValues = std::map<std::string, ParamValue>;

struct ParamIssue {
  std::string field;
  std::string message;
};

class ParamError : public Error {
 public:
  explicit ParamError(std::vector<ParamIssue> issues)
      : Error(ErrorCode::InvalidParameter, summarize(issues)), issues_(std::move(issues)) {}
  const std::vector<ParamIssue>& issues() const { return issues_; }

 private:
  static std::string summarize(const std::vector<ParamIssue>& issues) {
    std::string out;
    for (const auto& i : issues) out += (out.empty() ? "" : "; ") + i.field + ": " + i.message;
    return out;
  }
  std::vector<ParamIssue> issues_;
};

/// Selectable prism/pendant materials, by name.
inline std::optional<Medium> find_material(std::string_view name) {
  for (const auto& m : media::defaults()) {
    if (m.name == name && m.name != "air") return m;
  }
  return std::nullopt;
}

inline const std::vector<ScenarioDescriptor>& scenario_catalog() {
  static const std::vector<ScenarioDescriptor> catalog = [] {
    using K = ParamKind;
    std::vector<ScenarioDescriptor> c;
    c.push_back({"oceanarium",
                 "Vertical glass wall with water filling part of one side",
                 {
                     {"wall_thickness", K::Number, 0.1, "", 0.0, 10.0, true, "glass wall thickness (m)"},
                     {"tank_width", K::Number, 6.0, "", 0.0, 100.0, true, "water body width (m)"},
                     {"tank_height", K::Number, 3.0, "", 0.0, 100.0, true, "wall height (m)"},
                     {"water_level", K::Number, 0.5, "", 0.0, 1.0, true, "water level as a fraction of tank height"},
                     {"glass_n", K::Number, 1.5, "", 1.0, 4.0, false, "glass refractive index"},
                     {"water_n", K::Number, 1.33, "", 1.0, 4.0, false, "water refractive index"},
                 }});
    c.push_back({"glass_plate",
                 "Parallel-faced plate in air",
                 {
                     {"thickness", K::Number, 1.0, "", 0.0, 100.0, true, "plate thickness (m)"},
                     {"n", K::Number, 1.5, "", 1.0, 4.0, false, "plate refractive index"},
                     {"height", K::Number, 4.0, "", 0.0, 100.0, true, "plate height (m)"},
                     {"incidence", K::Angle, 30.0, "", -89.0, 89.0, false, "incidence on the first face"},
                 }});
    c.push_back({"regular_prism",
                 "Regular k-gon prism lit by white light",
                 {
                     {"k", K::Integer, 3.0, "", 3.0, 360.0, false, "number of faces"},
                     {"radius", K::Number, 1.0, "", 0.0, 100.0, true, "circumradius (m)"},
                     {"material", K::Material, 0.0, "crown", std::nullopt, std::nullopt, false, "prism material"},
                     {"orientation", K::Angle, 0.0, "", -360.0, 360.0, false, "prism rotation"},
                     {"incidence", K::Angle, 50.0, "", -89.0, 89.0, false, "incidence on the first face"},
                 }});
    c.push_back({"pendant",
                 "Regular k-gon pendant lit off-center by a horizontal white ray",
                 {
                     {"k", K::Integer, 6.0, "", 4.0, 360.0, false, "number of faces"},
                     {"radius", K::Number, 1.0, "", 0.0, 100.0, true, "circumradius (m)"},
                     {"material", K::Material, 0.0, "flint", std::nullopt, std::nullopt, false, "pendant material"},
                     {"orientation", K::Angle, 0.0, "", -360.0, 360.0, false, "pendant rotation"},
                     {"offset", K::Number, 0.5, "", -1.0, 1.0, false, "ray height as a fraction of the radius"},
                 }});
    return c;
  }();
  return catalog;
}

inline const ScenarioDescriptor* find_scenario(std::string_view name) {
  for (const auto& d : scenario_catalog()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace detail {

struct ResolvedParams {
  std::map<std::string, double> numbers;
  std::map<std::string, Medium> materials;
};

inline ResolvedParams resolve_params(const ScenarioDescriptor& desc, const ParamValues& values) {
  std::vector<ParamIssue> issues;
  for (const auto& [key, _] : values) {
    const bool known = std::any_of(desc.params.begin(), desc.params.end(), [&](const auto& p) { return p.name == key; });
    if (!known) issues.push_back({key, "unknown parameter"});
  }
  ResolvedParams out;
  for (const auto& p : desc.params) {
    const auto it = values.find(p.name);
    if (p.kind == ParamKind::Material) {
      std::string name = p.default_material;
      if (it != values.end()) {
        if (const auto* s = std::get_if<std::string>(&it->second)) {
          name = *s;
        } else {
          issues.push_back({p.name, "expected a material name"});
          continue;
        }
      }
      if (auto m = find_material(name)) out.materials.emplace(p.name, *m);
      else issues.push_back({p.name, "unknown material '" + name + "' (glass, water, crown, flint)"});
      continue;
    }
    double v = p.default_number;
    if (it != values.end()) {
      if (const auto* d = std::get_if<double>(&it->second)) {
        v = *d;
      } else {
        issues.push_back({p.name, "expected a number"});
        continue;
      }
    }
    if (!std::isfinite(v)) {
      issues.push_back({p.name, "must be finite"});
      continue;
    }
    if (p.kind == ParamKind::Integer && v != std::floor(v)) {
      issues.push_back({p.name, "must be an integer"});
      continue;
    }
    if (p.min && (p.min_exclusive ? !(v > *p.min) : !(v >= *p.min))) {
      issues.push_back({p.name, std::string("must be ") + (p.min_exclusive ? "> " : ">= ") + std::to_string(*p.min)});
      continue;
    }
    if (p.max && !(v <= *p.max)) {
      issues.push_back({p.name, "must be <= " + std::to_string(*p.max)});
      continue;
    }
    out.numbers.emplace(p.name, p.kind == ParamKind::Angle ? deg_to_rad(v) : v);
  }
  if (!issues.empty()) throw ParamError(std::move(issues));
  return out;
}

}  // namespace detail

/// Builds a catalog scenario. Angle parameters are given in degrees.
/// Throws UnknownId for an unknown name and ParamError for bad parameters.
inline SceneDoc instantiate(std::string_view name, const ParamValues& values = {}) {
  const ScenarioDescriptor* desc = find_scenario(name);
  if (!desc) throw Error(ErrorCode::UnknownId, "unknown scenario '" + std::string(name) + "'");
  const auto r = detail::resolve_params(*desc, values);
  const auto num = [&](const char* key) { return r.numbers.at(key); };
  try {
    if (name == "oceanarium") {
      OceanariumParams p;
      p.wall_thickness = num("wall_thickness");
      p.tank_width = num("tank_width");
      p.tank_height = num("tank_height");
      p.water_level_fraction = num("water_level");
      p.glass = Medium::constant("glass", num("glass_n"));
      p.water = Medium::constant("water", num("water_n"));
      return oceanarium(p);
    }
    if (name == "glass_plate") {
      return glass_plate({num("thickness"), num("n"), num("height"), num("incidence")});
    }
    if (name == "regular_prism") {
      return regular_prism({static_cast<int>(num("k")), num("radius"), r.materials.at("material"), num("orientation"),
                            num("incidence")});
    }
    PendantParams p;
    p.sides = static_cast<int>(num("k"));
    p.radius = num("radius");
    p.material = r.materials.at("material");
    p.orientation = num("orientation");
    p.offset = num("offset");
    return pendant(p);
  } catch (const SceneError& e) {
    throw ParamError(std::vector<ParamIssue>{{"scene", e.what()}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidParameter && e.code() != ErrorCode::InvalidPolygon) throw;
    throw ParamError(std::vector<ParamIssue>{{"scene", e.what()}});
  }
}

}  // namespace optics
