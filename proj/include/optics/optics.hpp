#pragma once

// Umbrella header.

#include "optics/error.hpp"
#include "optics/geometry.hpp"
#include "optics/medium.hpp"
#include "optics/refraction.hpp"
#include "optics/scenarios.hpp"
#include "optics/scene.hpp"
#include "optics/serialize.hpp"
#include "optics/service.hpp"
#include "optics/svg.hpp"
#include "optics/tracer.hpp"
