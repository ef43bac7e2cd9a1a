#pragma once

/**
 * @file medium.hpp
 * @brief Refractive-index models and the visible-wavelength tables.
 *
 * Two models are supported: a constant index, and Cauchy dispersion
 * n(lambda) = A + B / lambda^2 with lambda in nanometers and B in nm^2.
 */

#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "optics/error.hpp"

namespace optics {

/// Vacuum wavelength in nanometers, restricted to the visible band [380, 780].
class Wavelength {
 public:
  static constexpr double kMinNm = 380.0;
  static constexpr double kMaxNm = 780.0;

  explicit Wavelength(double nanometers) : nm_(nanometers) {
    if (!(nanometers >= kMinNm && nanometers <= kMaxNm)) {
      throw Error(ErrorCode::InvalidWavelength, "wavelength " + std::to_string(nanometers) + " nm outside [380, 780]");
    }
  }

  double nm() const { return nm_; }

  friend bool operator==(const Wavelength&, const Wavelength&) = default;
  friend auto operator<=>(const Wavelength&, const Wavelength&) = default;

 private:
  double nm_;
};

struct ConstantIndex {
  double n = 1.0;
  friend bool operator==(const ConstantIndex&, const ConstantIndex&) = default;
};

struct CauchyIndex {
  double a = 1.0;
  double b_nm2 = 0.0;
  friend bool operator==(const CauchyIndex&, const CauchyIndex&) = default;
};

using IndexModel = std::variant<ConstantIndex, CauchyIndex>;

struct Medium {
  std::string name;
  IndexModel model;

  static Medium constant(std::string name, double n) { return {std::move(name), ConstantIndex{n}}; }
  static Medium cauchy(std::string name, double a, double b_nm2) { return {std::move(name), CauchyIndex{a, b_nm2}}; }

  /// Empty when the model parameters are physical, otherwise a reason.
  std::string check() const {
    if (name.empty()) return "medium name is empty";
    if (const auto* c = std::get_if<ConstantIndex>(&model)) {
      if (!(c->n >= 1.0) || !std::isfinite(c->n)) return "constant index must be >= 1";
    } else {
      const auto& k = std::get<CauchyIndex>(model);
      if (!(k.a >= 1.0) || !std::isfinite(k.a)) return "Cauchy A must be >= 1";
      if (!(k.b_nm2 >= 0.0) || !std::isfinite(k.b_nm2)) return "Cauchy B must be >= 0";
    }
    return {};
  }

  bool dispersive() const {
    const auto* k = std::get_if<CauchyIndex>(&model);
    return k != nullptr && k->b_nm2 > 0.0;
  }

  friend bool operator==(const Medium&, const Medium&) = default;
};

inline double index_at(const Medium& medium, Wavelength lambda) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantIndex>) {
          return m.n;
        } else {
          return m.a + m.b_nm2 / (lambda.nm() * lambda.nm());
        }
      },
      medium.model);
}

namespace media {

inline Medium air() { return Medium::constant("air", 1.0); }
inline Medium water() { return Medium::constant("water", 1.33); }
inline Medium window_glass() { return Medium::constant("glass", 1.5); }
inline Medium crown_glass() { return Medium::cauchy("crown", 1.5046, 4200.0); }
inline Medium flint_glass() { return Medium::cauchy("flint", 1.6200, 10400.0); }

/// Default material table, in serialization order.
inline std::vector<Medium> defaults() { return {air(), window_glass(), water(), crown_glass(), flint_glass()}; }

}  // namespace media

struct SpectralLine {
  double nm;
  const char* color;
};

/// The seven-color white-light table, red to violet.
inline constexpr std::array<SpectralLine, 7> kWhiteLight{{
    {650.0, "red"},
    {610.0, "orange"},
    {580.0, "yellow"},
    {550.0, "green"},
    {470.0, "blue"},
    {440.0, "indigo"},
    {410.0, "violet"},
}};

inline std::vector<Wavelength> white_light_table() {
  std::vector<Wavelength> out;
  for (const auto& line : kWhiteLight) out.emplace_back(line.nm);
  return out;
}

}  // namespace optics
