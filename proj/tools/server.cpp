#include "server.hpp"

#include <iostream>

#include "httplib.h"
#include "optics/service.hpp"

namespace optics::tools {

namespace {

void send(httplib::Response& res, const service::Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, reply.content_type);
}

}  // namespace

void register_routes(httplib::Server& server, const std::optional<std::string>& static_dir) {
  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
  server.Get("/api/scenarios",
             [](const httplib::Request&, httplib::Response& res) { send(res, service::list_scenarios()); });
  server.Post(R"(/api/scenarios/([A-Za-z0-9_\-]+))", [](const httplib::Request& req, httplib::Response& res) {
    send(res, service::instantiate_scenario(req.matches[1].str(), req.body));
  });
  server.Post("/api/trace", [](const httplib::Request& req, httplib::Response& res) {
    const service::Reply reply = service::trace_request(req.body);
    send(res, reply);
    res.set_header("X-Elapsed-Ms", std::to_string(reply.elapsed_ms));
  });
  if (static_dir && !server.set_mount_point("/", *static_dir)) {
    std::cerr << "warning: static directory '" << *static_dir << "' not found\n";
  }
}

int serve(const std::string& host, int port, const std::optional<std::string>& static_dir) {
  httplib::Server server;
  register_routes(server, static_dir);
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace optics::tools
