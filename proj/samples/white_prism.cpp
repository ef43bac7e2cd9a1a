// Traces white light through the default crown-glass prism and prints where
// each color leaves.

#include <cstdio>

#include "optics/optics.hpp"

int main() {
  const optics::SceneDoc scene = optics::regular_prism();
  const optics::Tracer tracer(scene);
  for (const auto& path : tracer.trace_source("flashlight")) {
    const double heading = optics::rad_to_deg(path.final_direction().angle());
    std::printf("%5.0f nm  %zu events  final heading %8.3f deg  %s\n", path.lambda.nm(), path.events.size(), heading,
                std::string(optics::to_string(path.terminal)).c_str());
  }
  return 0;
}
