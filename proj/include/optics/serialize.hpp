#pragma once

/**
 * @file serialize.hpp
 * @brief Versioned JSON for scene documents and traced paths, and CSV for sweeps.
 *
 * Every real number is rounded to 12 significant digits before it is written,
 * so output is byte-stable and parse(serialize(x)) is a fixed point of
 * serialize. Unknown fields and unknown versions are rejected.
 */

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "optics/error.hpp"
#include "optics/geometry.hpp"
#include "optics/medium.hpp"
#include "optics/scenarios.hpp"
#include "optics/scene.hpp"
#include "optics/tracer.hpp"

namespace optics {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

/// Nearest double to the 12-significant-digit decimal rendering of v.
inline double quantize(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double q = std::strtod(buf, nullptr);
  return q == 0.0 ? 0.0 : q;  // no negative zero
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", quantize(v));
  return buf;
}

namespace detail {

class Reader {
 public:
  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, (where.empty() ? std::string("/") : where) + ": " + what);
  }

  static const Json& field(const Json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    return obj.at(key);
  }

  static void only_fields(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& item : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || item.key() == a;
      if (!ok) fail(where + "/" + item.key(), "unknown field");
    }
  }

  static double number(const Json& obj, const std::string& where, const char* key) {
    const Json& v = field(obj, where, key);
    if (!v.is_number()) fail(where + "/" + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where + "/" + key, "expected a finite number");
    return d;
  }

  static long integer(const Json& obj, const std::string& where, const char* key) {
    const Json& v = field(obj, where, key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<long>();
  }

  static std::string string(const Json& obj, const std::string& where, const char* key) {
    const Json& v = field(obj, where, key);
    if (!v.is_string()) fail(where + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  static const Json& array(const Json& obj, const std::string& where, const char* key) {
    const Json& v = field(obj, where, key);
    if (!v.is_array()) fail(where + "/" + key, "expected an array");
    return v;
  }

  static void version(const Json& root) {
    const long v = integer(root, "", "version");
    if (v != kFormatVersion) {
      throw Error(ErrorCode::UnsupportedVersion, "document version " + std::to_string(v) + " is not supported");
    }
  }

  static Json parse_text(std::string_view text) {
    try {
      return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
  }

  /// Wraps domain errors raised while constructing values (bad polygon,
  /// wavelength out of range, ...) into a ParseError at `where`.
  template <typename F>
  static auto at(const std::string& where, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UnsupportedVersion) throw;
      fail(where, e.what());
    }
  }
};

inline Json pose_json(const Pose& p) {
  Json j;
  j["x"] = quantize(p.position().x);
  j["y"] = quantize(p.position().y);
  j["rot_rad"] = quantize(p.rotation());
  return j;
}

inline Pose pose_from(const Json& j, const std::string& where) {
  Reader::only_fields(j, where, {"x", "y", "rot_rad"});
  return Reader::at(where, [&] {
    return Pose({Reader::number(j, where, "x"), Reader::number(j, where, "y")}, Reader::number(j, where, "rot_rad"));
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scene documents

inline Json scene_to_json(const SceneDoc& scene) {
  Json root;
  root["version"] = kFormatVersion;
  root["background"] = scene.background;
  Json media = Json::array();
  for (const auto& m : scene.media) {
    Json jm;
    jm["name"] = m.name;
    Json model;
    if (const auto* c = std::get_if<ConstantIndex>(&m.model)) {
      model["kind"] = "constant";
      model["n"] = quantize(c->n);
    } else {
      const auto& k = std::get<CauchyIndex>(m.model);
      model["kind"] = "cauchy";
      model["a"] = quantize(k.a);
      model["b_nm2"] = quantize(k.b_nm2);
    }
    jm["model"] = model;
    media.push_back(jm);
  }
  root["media"] = media;
  Json elements = Json::array();
  for (const auto& e : scene.elements) {
    Json je;
    je["id"] = e.id;
    je["medium"] = e.medium;
    je["pose"] = detail::pose_json(e.pose);
    Json verts = Json::array();
    for (const Vec2& v : e.shape.vertices()) verts.push_back(Json::array({quantize(v.x), quantize(v.y)}));
    je["vertices"] = verts;
    elements.push_back(je);
  }
  root["elements"] = elements;
  Json sources = Json::array();
  for (const auto& s : scene.sources) {
    Json js;
    js["id"] = s.id;
    js["pose"] = detail::pose_json(s.pose);
    Json beam;
    if (const auto* fan = std::get_if<Fan>(&s.beam)) {
      beam["kind"] = "fan";
      beam["count"] = fan->count;
      beam["spread_rad"] = quantize(fan->spread);
    } else {
      beam["kind"] = "single";
    }
    js["beam"] = beam;
    Json spectrum;
    if (const auto* mono = std::get_if<Mono>(&s.spectrum)) {
      spectrum["kind"] = "mono";
      spectrum["lambda_nm"] = quantize(mono->lambda.nm());
    } else {
      spectrum["kind"] = "white";
    }
    js["spectrum"] = spectrum;
    sources.push_back(js);
  }
  root["sources"] = sources;
  Json bounds;
  bounds["min_x"] = quantize(scene.bounds.min_x);
  bounds["min_y"] = quantize(scene.bounds.min_y);
  bounds["max_x"] = quantize(scene.bounds.max_x);
  bounds["max_y"] = quantize(scene.bounds.max_y);
  root["bounds"] = bounds;
  return root;
}

inline std::string serialize_scene(const SceneDoc& scene) { return scene_to_json(scene).dump(2) + "\n"; }

/// Structural parse only; call validate() for scene-level invariants.
inline SceneDoc scene_from_json(const Json& root) {
  using detail::Reader;
  Reader::only_fields(root, "", {"version", "background", "media", "elements", "sources", "bounds"});
  Reader::version(root);
  SceneDoc scene;
  scene.background = Reader::string(root, "", "background");

  const Json& media = Reader::array(root, "", "media");
  for (std::size_t i = 0; i < media.size(); ++i) {
    const std::string where = "/media/" + std::to_string(i);
    const Json& jm = media[i];
    Reader::only_fields(jm, where, {"name", "model"});
    const std::string name = Reader::string(jm, where, "name");
    const Json& model = Reader::field(jm, where, "model");
    const std::string mw = where + "/model";
    if (!model.is_object()) Reader::fail(mw, "expected an object");
    const std::string kind = Reader::string(model, mw, "kind");
    if (kind == "constant") {
      Reader::only_fields(model, mw, {"kind", "n"});
      scene.media.push_back(Medium::constant(name, Reader::number(model, mw, "n")));
    } else if (kind == "cauchy") {
      Reader::only_fields(model, mw, {"kind", "a", "b_nm2"});
      scene.media.push_back(Medium::cauchy(name, Reader::number(model, mw, "a"), Reader::number(model, mw, "b_nm2")));
    } else {
      Reader::fail(mw + "/kind", "expected \"constant\" or \"cauchy\"");
    }
  }

  const Json& elements = Reader::array(root, "", "elements");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string where = "/elements/" + std::to_string(i);
    const Json& je = elements[i];
    Reader::only_fields(je, where, {"id", "medium", "pose", "vertices"});
    const std::string id = Reader::string(je, where, "id");
    const std::string medium = Reader::string(je, where, "medium");
    const Pose pose = detail::pose_from(Reader::field(je, where, "pose"), where + "/pose");
    const Json& jv = Reader::array(je, where, "vertices");
    std::vector<Vec2> verts;
    for (std::size_t k = 0; k < jv.size(); ++k) {
      const Json& pt = jv[k];
      const std::string vw = where + "/vertices/" + std::to_string(k);
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        Reader::fail(vw, "expected [x, y]");
      }
      verts.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    Polygon shape = Reader::at(where + "/vertices", [&] { return Polygon(std::move(verts)); });
    scene.elements.push_back({id, std::move(shape), medium, pose});
  }

  const Json& sources = Reader::array(root, "", "sources");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string where = "/sources/" + std::to_string(i);
    const Json& js = sources[i];
    Reader::only_fields(js, where, {"id", "pose", "beam", "spectrum"});
    Source s;
    s.id = Reader::string(js, where, "id");
    s.pose = detail::pose_from(Reader::field(js, where, "pose"), where + "/pose");
    const Json& beam = Reader::field(js, where, "beam");
    const std::string bw = where + "/beam";
    if (!beam.is_object()) Reader::fail(bw, "expected an object");
    const std::string bkind = Reader::string(beam, bw, "kind");
    if (bkind == "single") {
      Reader::only_fields(beam, bw, {"kind"});
      s.beam = SingleRay{};
    } else if (bkind == "fan") {
      Reader::only_fields(beam, bw, {"kind", "count", "spread_rad"});
      s.beam = Fan{static_cast<int>(Reader::integer(beam, bw, "count")), Reader::number(beam, bw, "spread_rad")};
    } else {
      Reader::fail(bw + "/kind", "expected \"single\" or \"fan\"");
    }
    const Json& spectrum = Reader::field(js, where, "spectrum");
    const std::string sw = where + "/spectrum";
    if (!spectrum.is_object()) Reader::fail(sw, "expected an object");
    const std::string skind = Reader::string(spectrum, sw, "kind");
    if (skind == "mono") {
      Reader::only_fields(spectrum, sw, {"kind", "lambda_nm"});
      const double nm = Reader::number(spectrum, sw, "lambda_nm");
      s.spectrum = Reader::at(sw + "/lambda_nm", [&] { return Mono{Wavelength(nm)}; });
    } else if (skind == "white") {
      Reader::only_fields(spectrum, sw, {"kind"});
      s.spectrum = White{};
    } else {
      Reader::fail(sw + "/kind", "expected \"mono\" or \"white\"");
    }
    scene.sources.push_back(std::move(s));
  }

  const Json& jb = Reader::field(root, "", "bounds");
  Reader::only_fields(jb, "/bounds", {"min_x", "min_y", "max_x", "max_y"});
  scene.bounds = {Reader::number(jb, "/bounds", "min_x"), Reader::number(jb, "/bounds", "min_y"),
                  Reader::number(jb, "/bounds", "max_x"), Reader::number(jb, "/bounds", "max_y")};
  return scene;
}

inline SceneDoc parse_scene(std::string_view text) { return scene_from_json(detail::Reader::parse_text(text)); }

// ---------------------------------------------------------------------------
// Traced paths

inline Json paths_to_json(const std::vector<RayPath>& paths) {
  Json root;
  root["version"] = kFormatVersion;
  Json jp = Json::array();
  for (const auto& p : paths) {
    Json j;
    j["lambda_nm"] = quantize(p.lambda.nm());
    Json segs = Json::array();
    for (const auto& s : p.segments) {
      Json js;
      js["x0"] = quantize(s.start.x);
      js["y0"] = quantize(s.start.y);
      js["x1"] = quantize(s.end.x);
      js["y1"] = quantize(s.end.y);
      js["medium"] = s.medium;
      segs.push_back(js);
    }
    j["segments"] = segs;
    Json events = Json::array();
    for (auto e : p.events) events.push_back(std::string(to_string(e)));
    j["events"] = events;
    j["terminal"] = std::string(to_string(p.terminal));
    jp.push_back(j);
  }
  root["paths"] = jp;
  return root;
}

inline std::string serialize_paths(const std::vector<RayPath>& paths) { return paths_to_json(paths).dump(2) + "\n"; }

inline std::vector<RayPath> paths_from_json(const Json& root) {
  using detail::Reader;
  Reader::only_fields(root, "", {"version", "paths"});
  Reader::version(root);
  std::vector<RayPath> out;
  const Json& jp = Reader::array(root, "", "paths");
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string where = "/paths/" + std::to_string(i);
    const Json& j = jp[i];
    Reader::only_fields(j, where, {"lambda_nm", "segments", "events", "terminal"});
    const double nm = Reader::number(j, where, "lambda_nm");
    RayPath path{Reader::at(where + "/lambda_nm", [&] { return Wavelength(nm); }), {}, {}, PathEvent::ExitedBounds};
    const Json& segs = Reader::array(j, where, "segments");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const std::string sw = where + "/segments/" + std::to_string(k);
      Reader::only_fields(segs[k], sw, {"x0", "y0", "x1", "y1", "medium"});
      path.segments.push_back({{Reader::number(segs[k], sw, "x0"), Reader::number(segs[k], sw, "y0")},
                               {Reader::number(segs[k], sw, "x1"), Reader::number(segs[k], sw, "y1")},
                               Reader::string(segs[k], sw, "medium")});
    }
    const Json& events = Reader::array(j, where, "events");
    for (std::size_t k = 0; k < events.size(); ++k) {
      const std::string ew = where + "/events/" + std::to_string(k);
      if (!events[k].is_string()) Reader::fail(ew, "expected a string");
      const auto e = path_event_from_string(events[k].get<std::string>());
      if (!e) Reader::fail(ew, "unknown event");
      path.events.push_back(*e);
    }
    const auto terminal = path_event_from_string(Reader::string(j, where, "terminal"));
    if (!terminal) Reader::fail(where + "/terminal", "unknown event");
    path.terminal = *terminal;
    out.push_back(std::move(path));
  }
  return out;
}

inline std::vector<RayPath> parse_paths(std::string_view text) { return paths_from_json(detail::Reader::parse_text(text)); }

// ---------------------------------------------------------------------------
// Sweep tables

inline std::string spread_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "incidence_deg";
  for (const auto& line : kWhiteLight) out << ",exit_" << static_cast<int>(line.nm);
  out << ",spread_deg,cones\n";
  for (const auto& r : rows) {
    out << format_number(rad_to_deg(r.incidence));
    for (const auto& e : r.exit_angle) {
      out << ',';
      if (e) out << format_number(rad_to_deg(*e));
    }
    out << ',';
    if (r.spread) out << format_number(rad_to_deg(*r.spread));
    out << ',' << r.cones << '\n';
  }
  return out.str();
}

inline std::string underwater_sweep_csv(const std::vector<UnderwaterLook>& rows) {
  std::ostringstream out;
  out << "look_deg,reaches_wall,visible,topology,signature\n";
  for (const auto& r : rows) {
    out << format_number(rad_to_deg(r.angle)) << ',' << (r.reaches_wall ? 1 : 0) << ',' << (r.visible ? 1 : 0) << ','
        << to_string(r.topology) << ',' << r.signature << '\n';
  }
  return out.str();
}

inline std::string pendant_sweep_csv(const std::vector<PendantScatter>& rows) {
  std::ostringstream out;
  out << "orientation_deg";
  for (const auto& line : kWhiteLight) out << ",face_" << static_cast<int>(line.nm);
  for (const auto& line : kWhiteLight) out << ",exit_dir_" << static_cast<int>(line.nm);
  out << ",separation_deg\n";
  for (const auto& r : rows) {
    out << format_number(rad_to_deg(r.orientation));
    for (const auto& e : r.exits) {
      out << ',';
      if (e.face) out << *e.face;
    }
    for (const auto& e : r.exits) {
      out << ',';
      if (e.direction) out << format_number(rad_to_deg(*e.direction));
    }
    out << ',' << format_number(rad_to_deg(r.separation)) << '\n';
  }
  return out.str();
}

}  // namespace optics
