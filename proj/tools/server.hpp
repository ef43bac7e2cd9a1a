#pragma once

#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace optics::tools {

/// Wires the API routes (and optional static UI bundle under /) onto `server`.
void register_routes(httplib::Server& server, const std::optional<std::string>& static_dir);

/// Blocking; returns a process exit code.
int serve(const std::string& host, int port, const std::optional<std::string>& static_dir);

}  // namespace optics::tools
