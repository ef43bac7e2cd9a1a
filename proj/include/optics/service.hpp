#pragma once

/**
 * @file service.hpp
 * @brief Transport-independent handlers behind the HTTP API.
 *
 *   GET  /api/scenarios          -> list_scenarios()
 *   POST /api/scenarios/{name}   -> instantiate_scenario(name, body)
 *   POST /api/trace              -> trace_request(body)
 *
 * Handlers are pure functions of their input. Request and response bodies
 * reuse the scene and trace JSON formats verbatim.
 */

#include <chrono>
#include <string>
#include <string_view>

#include "optics/error.hpp"
#include "optics/scenarios.hpp"
#include "optics/scene.hpp"
#include "optics/serialize.hpp"
#include "optics/tracer.hpp"

namespace optics::service {

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  double elapsed_ms = 0.0;
};

namespace detail {

inline Reply json_reply(int status, const Json& j) { return {status, j.dump(2) + "\n"}; }

inline Reply error_reply(int status, const Error& e) {
  Json j;
  j["error"] = std::string(to_string(e.code()));
  j["message"] = e.what();
  if (const auto* se = dynamic_cast<const SceneError*>(&e)) {
    Json vs = Json::array();
    for (const auto& v : se->violations()) {
      Json jv;
      jv["kind"] = std::string(to_string(v.kind));
      jv["ids"] = v.ids;
      jv["detail"] = v.detail;
      vs.push_back(jv);
    }
    j["violations"] = vs;
  }
  if (const auto* pe = dynamic_cast<const ParamError*>(&e)) {
    Json fields = Json::object();
    for (const auto& issue : pe->issues()) fields[issue.field] = issue.message;
    j["fields"] = fields;
  }
  return json_reply(status, j);
}

}  // namespace detail

inline Json scenario_catalog_json() {
  Json list = Json::array();
  for (const auto& d : scenario_catalog()) {
    Json jd;
    jd["name"] = d.name;
    jd["description"] = d.description;
    Json params = Json::array();
    for (const auto& p : d.params) {
      Json jp;
      jp["name"] = p.name;
      jp["kind"] = std::string(to_string(p.kind));
      if (p.kind == ParamKind::Material) {
        jp["default"] = p.default_material;
        jp["choices"] = Json::array({"glass", "water", "crown", "flint"});
      } else {
        jp["default"] = p.default_number;
      }
      if (p.min) jp["min"] = *p.min;
      if (p.max) jp["max"] = *p.max;
      if (p.min) jp["min_exclusive"] = p.min_exclusive;
      jp["description"] = p.description;
      params.push_back(jp);
    }
    jd["params"] = params;
    list.push_back(jd);
  }
  Json root;
  root["scenarios"] = list;
  return root;
}

inline Reply list_scenarios() { return detail::json_reply(200, scenario_catalog_json()); }

/// Body: a JSON object of parameter values (numbers, or strings for
/// materials). An empty body means all defaults.
inline Reply instantiate_scenario(std::string_view name, std::string_view body) {
  if (!find_scenario(name)) {
    return detail::error_reply(404, Error(ErrorCode::UnknownId, "unknown scenario '" + std::string(name) + "'"));
  }
  ParamValues values;
  if (body.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    Json j;
    try {
      j = Json::parse(body.begin(), body.end());
    } catch (const nlohmann::json::parse_error& e) {
      return detail::error_reply(400, Error(ErrorCode::ParseError, e.what()));
    }
    if (!j.is_object()) return detail::error_reply(400, Error(ErrorCode::ParseError, "expected a JSON object"));
    std::vector<ParamIssue> issues;
    for (const auto& item : j.items()) {
      if (item.value().is_number()) values[item.key()] = item.value().get<double>();
      else if (item.value().is_string()) values[item.key()] = item.value().get<std::string>();
      else issues.push_back({item.key(), "expected a number or a string"});
    }
    if (!issues.empty()) return detail::error_reply(422, ParamError(std::move(issues)));
  }
  try {
    return {200, serialize_scene(instantiate(name, values))};
  } catch (const ParamError& e) {
    return detail::error_reply(422, e);
  } catch (const Error& e) {
    return detail::error_reply(422, e);
  }
}

inline constexpr long kMaxRequestEvents = 10000;

/// Body: {"scene": <scene document>, "max_events": optional count}. Traces
/// every source; the reply body is the trace output document.
inline Reply trace_request(std::string_view body) {
  const auto t0 = std::chrono::steady_clock::now();
  SceneDoc scene;
  int max_events = kDefaultMaxEvents;
  try {
    const Json j = optics::detail::Reader::parse_text(body);
    optics::detail::Reader::only_fields(j, "", {"scene", "max_events"});
    scene = scene_from_json(optics::detail::Reader::field(j, "", "scene"));
    if (j.contains("max_events")) {
      const long m = optics::detail::Reader::integer(j, "", "max_events");
      if (m < 0 || m > kMaxRequestEvents) {
        throw Error(ErrorCode::ParseError, "/max_events: must be in [0, " + std::to_string(kMaxRequestEvents) + "]");
      }
      max_events = static_cast<int>(m);
    }
  } catch (const Error& e) {
    return detail::error_reply(400, e);
  }
  try {
    const Tracer tracer(std::move(scene));
    Reply r{200, serialize_paths(tracer.trace_all(max_events))};
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  } catch (const SceneError& e) {
    return detail::error_reply(422, e);
  } catch (const Error& e) {
    return detail::error_reply(422, e);
  }
}

}  // namespace optics::service
