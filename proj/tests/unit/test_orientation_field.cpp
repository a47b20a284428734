#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hairflow/orientation_field.hpp"

using namespace hairflow;

namespace {

constexpr double pi = std::numbers::pi;

IntensityImage stripes(std::uint32_t n, double flow_angle, double period) {
  // intensity varies across the flow direction (cos a, sin a)
  IntensityImage img(n, n);
  const double nx = -std::sin(flow_angle), ny = std::cos(flow_angle);
  for (std::uint32_t y = 0; y < n; ++y)
    for (std::uint32_t x = 0; x < n; ++x)
      img(x, y) = 128 + 100 * std::sin(2 * pi * (nx * x + ny * y) / period);
  return img;
}

}  // namespace

TEST(StructureTensor, RampValues) {
  IntensityImage img(10, 10);
  for (std::uint32_t y = 0; y < 10; ++y)
    for (std::uint32_t x = 0; x < 10; ++x) img(x, y) = double(x);
  const StructureTensorField t = structure_tensor(img);
  EXPECT_DOUBLE_EQ(t.j11(5, 5), 64.0);
  EXPECT_DOUBLE_EQ(t.j22(5, 5), 0.0);
  EXPECT_DOUBLE_EQ(t.j12(5, 5), 0.0);
  const auto [theta, coh] = orientation_at(64, 0, 0, 0);
  EXPECT_DOUBLE_EQ(theta, pi / 2);
  EXPECT_DOUBLE_EQ(coh, 1.0);
}

TEST(StructureTensor, OffDiagonalsAgree) {
  const IntensityImage img = stripes(24, 0.7, 9);
  const StructureTensorField t = structure_tensor(img);
  EXPECT_EQ(t.j12, t.j21);
  for (std::size_t i = 0; i < t.j11.size(); ++i) {
    EXPECT_GE(t.j11[i], 0.0);
    EXPECT_GE(t.j22[i], 0.0);
    EXPECT_GE(t.j11[i] * t.j22[i] - t.j12[i] * t.j21[i], -1e-6 * (1 + t.j11[i] * t.j22[i]));
  }
}

TEST(Orientation, RecoversStripeAngles) {
  for (double a : {0.0, pi / 2, 3 * pi / 4, pi / 6}) {
    const OrientationField f = orientation(structure_tensor(stripes(48, a, 10)));
    EXPECT_LT(line_angle_difference(f.theta(24, 24), a), 0.01) << a;
    EXPECT_GT(f.coherence(24, 24), 0.99);
  }
}

TEST(Orientation, ConstantImage) {
  const OrientationField f = orientation(structure_tensor(IntensityImage(8, 8, 9.0)));
  for (std::size_t i = 0; i < f.theta.size(); ++i) {
    EXPECT_DOUBLE_EQ(f.theta[i], pi / 2);
    EXPECT_EQ(f.coherence[i], 0.0);
  }
}

TEST(Orientation, RangesHold) {
  const OrientationField f = field_from_image(stripes(40, 1.1, 7));
  for (std::size_t i = 0; i < f.theta.size(); ++i) {
    EXPECT_GE(f.theta[i], 0.0);
    EXPECT_LT(f.theta[i], pi);
    EXPECT_GE(f.coherence[i], 0.0);
    EXPECT_LE(f.coherence[i], 1.0);
  }
}

TEST(Orientation, PipelineKeepsDirection) {
  const OrientationField f = field_from_image(stripes(64, pi / 3, 12));
  EXPECT_LT(line_angle_difference(f.theta(32, 32), pi / 3), 0.02);
}

TEST(Angles, WrapAndDifference) {
  EXPECT_DOUBLE_EQ(wrap_pi(-0.25), pi - 0.25);
  EXPECT_DOUBLE_EQ(wrap_pi(pi), 0.0);
  EXPECT_NEAR(wrap_pi(7.0), 7.0 - 2 * pi, 1e-15);
  EXPECT_NEAR(line_angle_difference(0.1, pi - 0.1), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(line_angle_difference(0.0, pi / 2), pi / 2);
}

TEST(OrientationParams, Validation) {
  OrientationParams p;
  p.k_E = 2;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.k_delta = 1;
  EXPECT_THROW(p.validate(), Error);
}
