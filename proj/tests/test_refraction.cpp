#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "optics/medium.hpp"
#include "optics/refraction.hpp"

using namespace optics;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Incoming direction at angle theta from the normal (0, 1), travelling down-right.
UnitVec2 incoming(double theta) { return normalize({std::sin(theta), -std::cos(theta)}); }
const UnitVec2 kUp = normalize({0, 1});

double angle_from_normal(UnitVec2 d, UnitVec2 n) {
  // Angle between d and the normal on the transmitted side (-n).
  return std::atan2(std::abs(cross(d.vec(), n.vec())), -dot(d.vec(), n.vec()));
}

}  // namespace

TEST(IndexAt, ConstantModel) {
  const Medium m = Medium::constant("glass", 1.5);
  EXPECT_EQ(index_at(m, Wavelength(400)), 1.5);
  EXPECT_EQ(index_at(m, Wavelength(700)), 1.5);
}

TEST(IndexAt, CauchyCrownGlass) {
  // A + B / lambda^2 evaluated by hand.
  const Medium crown = media::crown_glass();
  EXPECT_NEAR(index_at(crown, Wavelength(650)), 1.514541, 5e-7);
  EXPECT_NEAR(index_at(crown, Wavelength(410)), 1.529585, 5e-7);
}

TEST(IndexAt, NormalDispersionDecreasesWithWavelength) {
  for (const Medium& m : {media::crown_glass(), media::flint_glass()}) {
    double prev = index_at(m, Wavelength(380));
    for (double nm = 381; nm <= 780; nm += 1) {
      const double n = index_at(m, Wavelength(nm));
      ASSERT_LT(n, prev);
      prev = n;
    }
  }
}

TEST(Wavelength, RejectsOutsideVisibleBand) {
  EXPECT_THROW(Wavelength(379.9), Error);
  EXPECT_THROW(Wavelength(781), Error);
  EXPECT_NO_THROW(Wavelength(380));
  EXPECT_NO_THROW(Wavelength(780));
}

TEST(Medium, CheckRejectsUnphysicalModels) {
  EXPECT_TRUE(Medium::constant("x", 1.0).check().empty());
  EXPECT_FALSE(Medium::constant("x", 0.9).check().empty());
  EXPECT_FALSE(Medium::cauchy("x", 0.99, 10).check().empty());
  EXPECT_FALSE(Medium::cauchy("x", 1.5, -1).check().empty());
}

TEST(WhiteLight, SevenLinesRedToViolet) {
  const auto table = white_light_table();
  ASSERT_EQ(table.size(), 7u);
  EXPECT_EQ(table.front().nm(), 650.0);
  EXPECT_EQ(table.back().nm(), 410.0);
  for (std::size_t i = 1; i < table.size(); ++i) EXPECT_LT(table[i].nm(), table[i - 1].nm());
}

TEST(Reflect, NormalIncidenceRetroReflects) {
  const UnitVec2 r = reflect(normalize({0, -1}), kUp);
  EXPECT_NEAR(r.x(), 0.0, 1e-15);
  EXPECT_NEAR(r.y(), 1.0, 1e-15);
}

TEST(Reflect, FortyFiveDegreeMirror) {
  const UnitVec2 r = reflect(normalize({1, -1}), kUp);
  EXPECT_NEAR(r.x(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.y(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Reflect, RejectsGrazingParallelInput) {
  try {
    (void)reflect(normalize({1, 0}), kUp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadNormalOrientation);
  }
}

TEST(Reflect, IsAnInvolution) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(-1.5, 1.5);
  for (int i = 0; i < 10000; ++i) {
    const UnitVec2 d = incoming(a(rng));
    const UnitVec2 r = reflect(d, kUp);
    ASSERT_NEAR(dot(r.vec(), kUp.vec()), -dot(d.vec(), kUp.vec()), 1e-12);
    // The map d -> d - 2(d.n)n applied twice is the identity.
    const Vec2 twice = r.vec() - 2.0 * dot(r.vec(), kUp.vec()) * kUp.vec();
    ASSERT_NEAR(twice.x, d.x(), 1e-12);
    ASSERT_NEAR(twice.y, d.y(), 1e-12);
  }
}

TEST(RefractOrReflect, NormalIncidencePassesStraight) {
  for (double n2 : {1.0, 1.33, 1.5, 2.4}) {
    const auto out = refract_or_reflect(normalize({0, -1}), kUp, 1.0, n2);
    ASSERT_TRUE(std::holds_alternative<Refracted>(out));
    EXPECT_NEAR(std::get<Refracted>(out).dir.x(), 0.0, 1e-15);
    EXPECT_NEAR(std::get<Refracted>(out).dir.y(), -1.0, 1e-15);
  }
}

TEST(RefractOrReflect, AirToGlassAtThirtyDegrees) {
  const auto out = refract_or_reflect(incoming(30 * kDeg), kUp, 1.0, 1.5);
  ASSERT_TRUE(std::holds_alternative<Refracted>(out));
  // asin(sin 30 / 1.5)
  EXPECT_NEAR(angle_from_normal(std::get<Refracted>(out).dir, kUp) / kDeg, 19.4712206345, 1e-9);
}

TEST(RefractOrReflect, WaterToAirAtSixtyIsTotalInternalReflection) {
  const auto out = refract_or_reflect(incoming(60 * kDeg), kUp, 1.33, 1.0);
  ASSERT_TRUE(std::holds_alternative<TotalInternal>(out));
  const UnitVec2 r = std::get<TotalInternal>(out).dir;
  EXPECT_NEAR(r.x(), std::sin(60 * kDeg), 1e-12);
  EXPECT_NEAR(r.y(), std::cos(60 * kDeg), 1e-12);
}

TEST(RefractOrReflect, ExactCriticalAngleIsGrazing) {
  const auto out = refract_or_reflect(incoming(std::asin(1 / 1.5)), kUp, 1.5, 1.0);
  ASSERT_TRUE(std::holds_alternative<Grazing>(out));
  const UnitVec2 t = std::get<Grazing>(out).dir;
  EXPECT_NEAR(t.x(), 1.0, 1e-12);  // tangent, same tangential sense as the input
  EXPECT_NEAR(t.y(), 0.0, 1e-12);
}

TEST(RefractOrReflect, RejectsBadInputs) {
  try {
    (void)refract_or_reflect(normalize({0, 1}), kUp, 1.0, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadNormalOrientation);
  }
  try {
    (void)refract_or_reflect(incoming(0.1), kUp, 0.5, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadIndex);
  }
}

TEST(RefractOrReflect, SnellInvariantOnRandomEvents) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> idx(1.0, 2.5);
  std::uniform_real_distribution<double> theta(-1.55, 1.55);
  std::uniform_real_distribution<double> spin(0, 2 * std::numbers::pi);
  int refracted = 0;
  for (int i = 0; i < 10000; ++i) {
    const double n1 = idx(rng), n2 = idx(rng), th = theta(rng), rot = spin(rng);
    const UnitVec2 n = UnitVec2::from_angle(rot);
    const UnitVec2 d = normalize(rotate({std::sin(th), -std::cos(th)}, rot - std::numbers::pi / 2));
    const auto out = refract_or_reflect(d, n, n1, n2);
    if (!std::holds_alternative<Refracted>(out)) continue;
    ++refracted;
    const UnitVec2 t = std::get<Refracted>(out).dir;
    const double s1 = cross(n.vec(), d.vec());
    const double s2 = cross(n.vec(), t.vec());
    ASSERT_LT(std::abs(n1 * s1 - n2 * s2), 1e-9);
    ASSERT_GE(s1 * s2, 0.0) << "tangential component changed sign";
    ASSERT_LT(dot(t.vec(), n.vec()), 0.0) << "refracted ray must cross the surface";
    ASSERT_NEAR(norm(t.vec()), 1.0, 1e-12);
  }
  EXPECT_GT(refracted, 5000);
}

TEST(RefractOrReflect, TotalInternalReflectionMatchesCriticalAngle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> idx(1.0, 2.5);
  std::uniform_real_distribution<double> theta(0.0, 1.5707);
  for (int i = 0; i < 10000; ++i) {
    const double n1 = idx(rng), n2 = idx(rng), th = theta(rng);
    const auto crit = critical_angle(n1, n2);
    if (crit && std::abs(th - *crit) < 1e-9) continue;  // grazing band
    const auto out = refract_or_reflect(incoming(th), kUp, n1, n2);
    const bool expect_tir = crit && th > *crit;
    ASSERT_EQ(std::holds_alternative<TotalInternal>(out), expect_tir) << n1 << " " << n2 << " " << th;
  }
}

TEST(RefractOrReflect, KernelReversibility) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> idx(1.0, 2.5);
  std::uniform_real_distribution<double> theta(-1.5, 1.5);
  for (int i = 0; i < 10000; ++i) {
    const double n1 = idx(rng), n2 = idx(rng);
    const UnitVec2 d = incoming(theta(rng));
    const auto out = refract_or_reflect(d, kUp, n1, n2);
    if (!std::holds_alternative<Refracted>(out)) continue;
    const UnitVec2 t = std::get<Refracted>(out).dir;
    const auto back = refract_or_reflect(-t, -kUp, n2, n1);
    ASSERT_TRUE(std::holds_alternative<Refracted>(back));
    ASSERT_NEAR(std::get<Refracted>(back).dir.x(), -d.x(), 1e-9);
    ASSERT_NEAR(std::get<Refracted>(back).dir.y(), -d.y(), 1e-9);
  }
}

TEST(CriticalAngle, ClosedForms) {
  EXPECT_FALSE(critical_angle(1.0, 1.5));
  EXPECT_FALSE(critical_angle(1.33, 1.33));
  EXPECT_NEAR(*critical_angle(1.5, 1.0) / kDeg, 41.810314896, 1e-6);
  EXPECT_NEAR(*critical_angle(1.33, 1.0) / kDeg, 48.753466631, 1e-6);
  EXPECT_NEAR(*critical_angle(1.5, 1.33) / kDeg, 62.457324846, 1e-6);
}
