#pragma once

/**
 * @file refraction.hpp
 * @brief Boundary interaction kernel: specular reflection, Snell refraction,
 *        total internal reflection and the grazing singularity.
 *
 * Normal convention: the normal passed in always points into the incident
 * medium, i.e. against the incoming direction (d . n < 0). The tracer is
 * responsible for orienting it.
 */

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "optics/error.hpp"
#include "optics/geometry.hpp"

namespace optics {

/// Band on sin^2(theta_t) around 1 that is classified as grazing.
inline constexpr double kGrazeEpsilon = 1e-12;

struct Refracted {
  UnitVec2 dir;
};
struct TotalInternal {
  UnitVec2 dir;
};
struct Grazing {
  UnitVec2 dir;
};

using RefractionOutcome = std::variant<Refracted, TotalInternal, Grazing>;

inline UnitVec2 outcome_direction(const RefractionOutcome& outcome) {
  return std::visit([](const auto& o) { return o.dir; }, outcome);
}

namespace detail {
inline void require_facing(UnitVec2 d, UnitVec2 n) {
  if (!(dot(d.vec(), n.vec()) < 0.0)) {
    throw Error(ErrorCode::BadNormalOrientation, "normal must point against the incident direction");
  }
}
}  // namespace detail

inline UnitVec2 reflect(UnitVec2 d, UnitVec2 n) {
  detail::require_facing(d, n);
  return normalize(d.vec() - 2.0 * dot(d.vec(), n.vec()) * n.vec());
}

inline RefractionOutcome refract_or_reflect(UnitVec2 d, UnitVec2 n, double n1, double n2) {
  detail::require_facing(d, n);
  if (!(n1 >= 1.0) || !(n2 >= 1.0) || !std::isfinite(n1) || !std::isfinite(n2)) {
    throw Error(ErrorCode::BadIndex, "refractive indices must be finite and >= 1");
  }
  const double eta = n1 / n2;
  const double cos_i = -dot(d.vec(), n.vec());
  const double sin2_t = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);

  if (std::abs(sin2_t - 1.0) <= kGrazeEpsilon) {
    const Vec2 tangent = d.vec() + cos_i * n.vec();
    return Grazing{normalize(tangent)};
  }
  if (sin2_t > 1.0) {
    return TotalInternal{reflect(d, n)};
  }
  const double cos_t = std::sqrt(1.0 - sin2_t);
  return Refracted{normalize(eta * d.vec() + (eta * cos_i - cos_t) * n.vec())};
}

/// asin(n2 / n1) when n1 > n2; otherwise no total internal reflection exists.
inline std::optional<double> critical_angle(double n1, double n2) {
  if (!(n1 >= 1.0) || !(n2 >= 1.0)) throw Error(ErrorCode::BadIndex, "refractive indices must be >= 1");
  if (n1 <= n2) return std::nullopt;
  return std::asin(n2 / n1);
}

}  // namespace optics
