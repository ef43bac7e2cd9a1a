#include <gtest/gtest.h>

#include <random>

#include "optics/scenarios.hpp"
#include "optics/tracer.hpp"

using namespace optics;

namespace {

SceneDoc empty_scene() {
  SceneDoc s;
  s.media = media::defaults();
  s.bounds = {-10, -10, 10, 10};
  return s;
}

SceneDoc unit_glass_square() {
  SceneDoc s = empty_scene();
  s.elements.push_back({"sq", Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), "glass", Pose{}});
  return s;
}

/// Water on the right of a vertical glass slab in [0, 0.1], air on the left.
SceneDoc wall_scene(double glass_n) {
  SceneDoc s;
  s.media = {media::air(), Medium::constant("glass", glass_n), media::water()};
  s.elements.push_back({"wall", Polygon({{0, -5}, {0.1, -5}, {0.1, 5}, {0, 5}}), "glass", Pose{}});
  s.elements.push_back({"water", Polygon({{0.1, -5}, {5, -5}, {5, 5}, {0.1, 5}}), "water", Pose{}});
  s.bounds = {-6, -6, 6, 6};
  return s;
}

/// Direction from water toward the wall at angle theta from the wall normal.
UnitVec2 toward_wall(double theta) { return normalize({-std::cos(theta), std::sin(theta)}); }

const Wavelength kGreen(550);

double heading_deg(const Segment& s) { return rad_to_deg(normalize(s.end - s.start).angle()); }

}  // namespace

TEST(NearestBoundaryHit, EmptySceneHitsBoundsOnly) {
  const auto hit = nearest_boundary_hit(empty_scene(), {0, 0}, normalize({1, 0}), kGreen);
  ASSERT_TRUE(hit);
  EXPECT_TRUE(hit->bounds);
  EXPECT_DOUBLE_EQ(hit->t, 10.0);
}

TEST(NearestBoundaryHit, NearFaceFromOutside) {
  const auto hit = nearest_boundary_hit(unit_glass_square(), {-1, 0.5}, normalize({1, 0}), kGreen);
  ASSERT_TRUE(hit);
  EXPECT_FALSE(hit->bounds);
  EXPECT_DOUBLE_EQ(hit->t, 1.0);
  EXPECT_EQ(hit->n_before, 1.0);
  EXPECT_EQ(hit->n_after, 1.5);
  EXPECT_EQ(hit->normal.x(), -1.0);  // into the incident medium
}

TEST(NearestBoundaryHit, InnerFaceFromInside) {
  const auto hit = nearest_boundary_hit(unit_glass_square(), {0.5, 0.5}, normalize({1, 0}), kGreen);
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t, 0.5);
  EXPECT_EQ(hit->n_before, 1.5);
  EXPECT_EQ(hit->n_after, 1.0);
  EXPECT_EQ(hit->normal.x(), -1.0);
}

TEST(TraceRay, EmptySceneIsOneSegment) {
  const RayPath p = trace_ray(empty_scene(), {1, 2}, normalize({1, 1}), kGreen);
  ASSERT_EQ(p.segments.size(), 1u);
  EXPECT_TRUE(p.events.empty());
  EXPECT_EQ(p.terminal, PathEvent::ExitedBounds);
  EXPECT_EQ(p.segments[0].medium, "air");
}

TEST(TraceRay, GlassPlateAtThirtyDegrees) {
  const SceneDoc s = glass_plate();
  const auto paths = trace_source(s, "flashlight");
  ASSERT_EQ(paths.size(), 1u);
  const RayPath& p = paths[0];
  ASSERT_EQ(p.segments.size(), 3u);
  EXPECT_EQ(p.events, (std::vector<PathEvent>{PathEvent::Refracted, PathEvent::Refracted}));
  EXPECT_EQ(p.segments[1].medium, "glass");
  EXPECT_NEAR(heading_deg(p.segments[0]), 30.0, 1e-9);
  EXPECT_NEAR(heading_deg(p.segments[1]), 19.4712206345, 1e-9);
  const UnitVec2 in = normalize(p.segments[0].end - p.segments[0].start);
  EXPECT_NEAR(signed_angle(in, p.final_direction()), 0.0, 1e-9);
}

TEST(TraceRay, IndexMatchedPlateIsStraight) {
  GlassPlateParams gp;
  gp.n = 1.0;
  const RayPath p = trace_source(glass_plate(gp), "flashlight")[0];
  for (const auto& seg : p.segments) EXPECT_NEAR(heading_deg(seg), 30.0, 1e-9);
}

TEST(TraceRay, UnderwaterSixtyDegreesReturnsToWater) {
  const RayPath p = trace_ray(wall_scene(1.5), {2, 0}, toward_wall(deg_to_rad(60)), kGreen);
  ASSERT_GE(p.events.size(), 3u);
  EXPECT_EQ(p.events[0], PathEvent::Refracted);
  EXPECT_EQ(p.events[1], PathEvent::TotalInternalReflection);
  EXPECT_EQ(p.events[2], PathEvent::Refracted);
  EXPECT_EQ(p.segments[1].medium, "glass");
  EXPECT_EQ(p.segments[3].medium, "water");
  // Glass-side angle from the wall normal: asin(1.33 sin 60 / 1.5).
  const UnitVec2 in_glass = normalize(p.segments[1].end - p.segments[1].start);
  EXPECT_NEAR(rad_to_deg(std::asin(std::abs(in_glass.y()))), 50.1635240679, 1e-9);
}

TEST(TraceRay, UnderwaterThirtyDegreesExitsIndependentOfGlass) {
  for (double g : {1.4, 1.5, 1.6, 1.7, 1.9}) {
    const RayPath p = trace_ray(wall_scene(g), {2, 0}, toward_wall(deg_to_rad(30)), kGreen);
    ASSERT_EQ(p.events.size(), 2u);
    EXPECT_EQ(p.segments.back().medium, "air");
    const UnitVec2 out = p.final_direction();
    const double air_angle = rad_to_deg(std::asin(std::abs(out.y())));
    EXPECT_NEAR(air_angle, 41.6823253933, 1e-9) << "glass n = " << g;
  }
}

TEST(TraceRay, ChainedMediaIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> theta(0.0, std::asin(1.0 / 1.33) - 1e-3);
  std::uniform_real_distribution<double> glass(1.1, 1.9);
  for (int i = 0; i < 2000; ++i) {
    const double tw = theta(rng);
    const RayPath p = trace_ray(wall_scene(glass(rng)), {2, 0}, toward_wall(tw), kGreen);
    ASSERT_EQ(p.events.size(), 2u);
    ASSERT_NEAR(std::abs(p.final_direction().y()), 1.33 * std::sin(tw), 1e-9);
  }
}

TEST(TraceRay, SegmentInvariants) {
  std::mt19937_64 rng(6);
  const auto table = white_light_table();
  for (const SceneDoc& s : {oceanarium(), glass_plate(), regular_prism(), pendant()}) {
    const Tracer tracer(s);
    std::uniform_real_distribution<double> ux(s.bounds.min_x, s.bounds.max_x);
    std::uniform_real_distribution<double> uy(s.bounds.min_y, s.bounds.max_y);
    std::uniform_real_distribution<double> ua(0, 2 * kPi);
    for (int i = 0; i < 500; ++i) {
      const RayPath p = tracer.trace({ux(rng), uy(rng)}, UnitVec2::from_angle(ua(rng)), table[i % 7], 16);
      ASSERT_LE(p.segments.size(), 17u);
      ASSERT_EQ(p.events.size() + 1, p.segments.size());
      for (std::size_t k = 0; k < p.segments.size(); ++k) {
        ASSERT_GT(distance(p.segments[k].start, p.segments[k].end), kHitEpsilon);
        if (k > 0) {
          ASSERT_EQ(p.segments[k].start, p.segments[k - 1].end);
        }
      }
      // Snell or mirror invariant at every internal vertex.
      for (std::size_t k = 0; k < p.events.size(); ++k) {
        const auto hit = tracer.nearest_hit(p.segments[k].start + kHitEpsilon * normalize(p.segments[k].end -
                                                                                         p.segments[k].start).vec(),
                                            normalize(p.segments[k].end - p.segments[k].start), p.lambda);
        ASSERT_TRUE(hit);
        const Vec2 d0 = normalize(p.segments[k].end - p.segments[k].start).vec();
        const Vec2 d1 = normalize(p.segments[k + 1].end - p.segments[k + 1].start).vec();
        const Vec2 n = hit->normal.vec();
        if (p.events[k] == PathEvent::Refracted) {
          ASSERT_NEAR(hit->n_before * cross(n, d0), hit->n_after * cross(n, d1), 1e-9);
        } else {
          ASSERT_NEAR(cross(n, d0), cross(n, d1), 1e-9);
          ASSERT_NEAR(dot(n, d0), -dot(n, d1), 1e-9);
        }
      }
    }
  }
}

TEST(TraceRay, MaxEventsCap) {
  const SceneDoc s = pendant();
  const Tracer tracer(s);
  // Steep inside a hexagon: long TIR cascades are cut at the cap.
  const RayPath p = tracer.trace({0, 0.1}, UnitVec2::from_angle(1.2), kGreen, 3);
  EXPECT_LE(p.events.size(), 3u);
  const RayPath zero = tracer.trace({0, 0.1}, UnitVec2::from_angle(1.2), kGreen, 0);
  EXPECT_EQ(zero.segments.size(), 1u);
  EXPECT_EQ(zero.terminal, PathEvent::MaxEventsReached);
}

TEST(TraceRay, TirLoopHitsCap) {
  // Diamond loop through the edge midpoints of a glass square: 45 degrees at every face.
  const Tracer tracer(unit_glass_square());
  const RayPath p = tracer.trace({0.75, 0.25}, normalize({1, 1}), kGreen, 10);
  EXPECT_EQ(p.terminal, PathEvent::MaxEventsReached);
  EXPECT_EQ(p.events.size(), 10u);
}

TEST(TraceRay, CornerHitIsGrazing) {
  const RayPath p = trace_ray(unit_glass_square(), {-1, -1}, normalize({1, 1}), kGreen);
  EXPECT_EQ(p.terminal, PathEvent::Grazing);
  EXPECT_EQ(p.segments.size(), 1u);
}

TEST(TraceRay, ErrorPaths) {
  try {
    (void)trace_ray(unit_glass_square(), {0, 0.5}, normalize({1, 0}), kGreen);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnBoundary);
  }
  SceneDoc bad = unit_glass_square();
  bad.elements[0].medium = "oil";
  try {
    (void)trace_ray(bad, {-1, 0.5}, normalize({1, 0}), kGreen);
    FAIL();
  } catch (const SceneError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SceneInvalid);
  }
  EXPECT_THROW((void)trace_source(oceanarium(), "nobody"), Error);
}

TEST(TraceSource, WhiteThroughCrownPrismFansOutByWavelength) {
  const auto paths = trace_source(regular_prism(), "flashlight");
  ASSERT_EQ(paths.size(), 7u);
  std::vector<double> headings;
  for (const auto& p : paths) {
    ASSERT_EQ(p.events.size(), 2u);
    headings.push_back(p.final_direction().angle());
  }
  // Red deviates least, violet most; the beam turns clockwise here.
  for (std::size_t i = 1; i < headings.size(); ++i) EXPECT_LT(headings[i], headings[i - 1] - 1e-6);
}

TEST(TraceSource, WhiteThroughConstantPlateGivesIdenticalPolylines) {
  SceneDoc s = glass_plate();
  s.sources[0].spectrum = White{};
  const auto paths = trace_source(s, "flashlight");
  ASSERT_EQ(paths.size(), 7u);
  for (const auto& p : paths) EXPECT_EQ(p.segments, paths[0].segments);
}

TEST(TraceSource, FanOrderIsDirectionThenWavelength) {
  SceneDoc s = empty_scene();
  s.sources.push_back({"f", Pose({0, 0}, 0), Fan{2, 0.2}, White{}});
  const auto paths = trace_source(s, "f");
  ASSERT_EQ(paths.size(), 14u);
  EXPECT_EQ(paths[0].lambda.nm(), 650.0);
  EXPECT_EQ(paths[6].lambda.nm(), 410.0);
  EXPECT_LT(paths[0].final_direction().y(), 0.0);
  EXPECT_GT(paths[7].final_direction().y(), 0.0);
}

TEST(Reversibility, RandomRaysRetraceTheirVertices) {
  std::mt19937_64 rng(12);
  const auto table = white_light_table();
  int checked = 0;
  for (const SceneDoc& s : {oceanarium(), glass_plate(), regular_prism(), pendant()}) {
    const Tracer tracer(s);
    std::uniform_real_distribution<double> ux(s.bounds.min_x, s.bounds.max_x);
    std::uniform_real_distribution<double> uy(s.bounds.min_y, s.bounds.max_y);
    std::uniform_real_distribution<double> ua(0, 2 * kPi);
    for (int i = 0; i < 200; ++i) {
      const Vec2 origin{ux(rng), uy(rng)};
      const RayPath fwd = tracer.trace(origin, UnitVec2::from_angle(ua(rng)), table[i % 7]);
      if (fwd.terminal != PathEvent::ExitedBounds || fwd.events.empty()) continue;
      const RayPath back = tracer.trace(fwd.segments.back().end, -fwd.final_direction(), fwd.lambda);
      const std::size_t k = fwd.events.size();
      ASSERT_GT(back.segments.size(), k);
      for (std::size_t j = 0; j < k; ++j) {
        ASSERT_LT(distance(back.segments[j].end, fwd.segments[k - 1 - j].end), 1e-6);
        ASSERT_EQ(back.events[j], fwd.events[k - 1 - j]);
      }
      ASSERT_LT(distance_to_segment(origin, back.segments[k].start, back.segments[k].end), 1e-6);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(PathEventNames, RoundTrip) {
  for (auto e : {PathEvent::Refracted, PathEvent::TotalInternalReflection, PathEvent::Grazing, PathEvent::ExitedBounds,
                 PathEvent::MaxEventsReached}) {
    EXPECT_EQ(path_event_from_string(to_string(e)), e);
  }
  EXPECT_FALSE(path_event_from_string("bounced"));
}
