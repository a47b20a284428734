#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hairflow/orientation_field.hpp"
#include "hairflow/path_planner.hpp"

using namespace hairflow;

namespace {

constexpr double pi = std::numbers::pi;

OrientationField uniform(std::uint32_t w, std::uint32_t h, double theta) {
  return {RealRaster(w, h, theta), RealRaster(w, h, 1.0)};
}

}  // namespace

TEST(StepDirection, FirstStepRule) {
  const auto a = step_direction(0.0, std::nullopt);
  EXPECT_EQ(a[0], 1.0);
  EXPECT_EQ(a[1], 0.0);
  const auto b = step_direction(3 * pi / 4, std::nullopt);
  EXPECT_GT(b[1], 0.0);
  const auto c = step_direction(pi / 4, std::array<double, 2>{-1.0, 0.0});
  EXPECT_LT(c[0], 0.0);
  EXPECT_LT(c[1], 0.0);
}

TEST(Plan, UniformFieldGoesStraight) {
  const PixelPath p = plan(uniform(100, 100, 0.0), BinaryMask(100, 100, 1), {10, 50});
  ASSERT_EQ(p.points.size(), 15u);  // 10, 16, ..., 94; 100 leaves the image
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    EXPECT_DOUBLE_EQ(p.points[i].x, 10.0 + 6.0 * double(i));
    EXPECT_DOUBLE_EQ(p.points[i].y, 50.0);
  }
  EXPECT_EQ(p.terminated_by, Termination::image_exit);
  EXPECT_EQ(p.step_px, 6.0);
}

TEST(Plan, IsolatedPixelGivesSinglePoint) {
  BinaryMask m(20, 20);
  m(10, 10) = 1;
  const PixelPath p = plan(uniform(20, 20, 1.0), m, {10, 10});
  ASSERT_EQ(p.points.size(), 1u);
  EXPECT_EQ(p.terminated_by, Termination::mask_exit);
}

TEST(Plan, StartOutsideHair) {
  BinaryMask m(20, 20);
  try {
    plan(uniform(20, 20, 1.0), m, {3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::start_outside_hair);
  }
  EXPECT_THROW(plan(uniform(20, 20, 1.0), BinaryMask(20, 20, 1), {-3, 3}), Error);
  EXPECT_THROW(plan(uniform(20, 21, 1.0), BinaryMask(20, 20, 1), {3, 3}), Error);
}

TEST(Plan, StepCap) {
  PathParams params;
  params.max_steps = 4;
  const PixelPath p = plan(uniform(100, 100, pi / 2), BinaryMask(100, 100, 1), {50, 5}, params);
  EXPECT_EQ(p.points.size(), 5u);
  EXPECT_EQ(p.terminated_by, Termination::step_cap);
}

TEST(Plan, InitialHeadingChoosesSide) {
  PathParams params;
  params.initial_heading = std::array<double, 2>{-1.0, 0.0};
  const PixelPath p = plan(uniform(100, 100, 0.0), BinaryMask(100, 100, 1), {50, 50}, params);
  EXPECT_DOUBLE_EQ(p.points[1].x, 44.0);
  EXPECT_DOUBLE_EQ(p.points.back().x, 2.0);
}

TEST(Plan, InvariantsOnRandomSmoothFields) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 30; ++t) {
    const std::uint32_t n = 80;
    const double a = u(rng) * pi, f = 0.02 + 0.05 * u(rng);
    OrientationField field{RealRaster(n, n), RealRaster(n, n, 1.0)};
    BinaryMask mask(n, n);
    for (std::uint32_t y = 0; y < n; ++y)
      for (std::uint32_t x = 0; x < n; ++x) {
        field.theta(x, y) = wrap_pi(a + std::sin(f * x) + std::cos(f * y));
        mask(x, y) = (x - 40.0) * (x - 40.0) + (y - 40.0) * (y - 40.0) < 35 * 35;
      }
    const PixelPath p = plan(field, mask, {40 + 10 * u(rng), 40 + 10 * u(rng)});
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      const auto [nx, ny] = nearest_pixel(p.points[i]);
      ASSERT_TRUE(mask.contains(nx, ny));
      EXPECT_TRUE(mask(std::uint32_t(nx), std::uint32_t(ny)));
      if (i > 0) {
        const double dx = p.points[i].x - p.points[i - 1].x, dy = p.points[i].y - p.points[i - 1].y;
        EXPECT_NEAR(std::hypot(dx, dy), 6.0, 6e-9);
        if (i > 1) {
          const double px = p.points[i - 1].x - p.points[i - 2].x;
          const double py = p.points[i - 1].y - p.points[i - 2].y;
          EXPECT_GE(dx * px + dy * py, 0.0);
        }
      }
    }
    EXPECT_EQ(plan(field, mask, p.points[0]), p);
  }
}

TEST(Plan, MirrorEquivariance) {
  const std::uint32_t n = 64;
  OrientationField field{RealRaster(n, n), RealRaster(n, n, 1.0)}, flipped = field;
  BinaryMask mask(n, n), fmask(n, n);
  for (std::uint32_t y = 0; y < n; ++y)
    for (std::uint32_t x = 0; x < n; ++x) {
      const double th = wrap_pi(0.3 + 0.04 * x + 0.02 * y);
      field.theta(x, y) = th;
      flipped.theta(n - 1 - x, y) = wrap_pi(pi - th);
      mask(x, y) = fmask(n - 1 - x, y) = (x + y) % 17 != 0 || y < 20;
    }
  const PixelPath a = plan(field, mask, {20.2, 10.3});
  const PixelPath b = plan(flipped, fmask, {n - 1 - 20.2, 10.3});
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_NEAR(b.points[i].x, n - 1 - a.points[i].x, 1e-6);
    EXPECT_NEAR(b.points[i].y, a.points[i].y, 1e-6);
  }
}

TEST(Metrics, Examples) {
  PixelPath straight{{{10, 10}, {16, 10}, {22, 10}}, 6.0, Termination::mask_exit};
  const PathMetrics par = metrics(straight, uniform(40, 40, 0.0));
  EXPECT_NEAR(*par.mean_alignment, 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(par.length_px, 12.0);
  EXPECT_NEAR(*par.mean_turn_rad, 0.0, 1e-12);
  EXPECT_EQ(par.terminated_by, Termination::mask_exit);
  EXPECT_NEAR(*metrics(straight, uniform(40, 40, pi / 2)).mean_alignment, 0.0, 1e-9);

  PixelPath corner{{{10, 10}, {16, 10}, {16, 16}}, 6.0, std::nullopt};
  EXPECT_NEAR(*metrics(corner).mean_turn_rad, pi / 2, 1e-12);
  EXPECT_FALSE(metrics(corner).mean_alignment);

  PixelPath single{{{3, 3}}, 6.0, Termination::mask_exit};
  const PathMetrics s = metrics(single, uniform(40, 40, 0.0));
  EXPECT_EQ(s.length_px, 0.0);
  EXPECT_FALSE(s.mean_alignment);
  EXPECT_FALSE(s.mean_turn_rad);
}

TEST(PathParams, Validation) {
  PathParams p;
  p.step_px = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.max_steps = 0;
  EXPECT_THROW(p.validate(), Error);
}
