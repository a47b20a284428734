#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numbers>

#include "hairflow/io.hpp"
#include "hairflow/synth.hpp"

using namespace hairflow;
using namespace hairflow::synth;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Synth, HorizontalStripesConstantAlongX) {
  SyntheticSpec s;
  s.size = 64;
  const SyntheticScene sc = generate(s);
  bool varies_in_y = false;
  for (std::uint32_t y = 0; y < 64; ++y) {
    for (std::uint32_t x = 1; x < 64; ++x) EXPECT_EQ(sc.image(x, y), sc.image(0, y));
    varies_in_y |= sc.image(0, y) != sc.image(0, 0);
  }
  EXPECT_TRUE(varies_in_y);
  for (double t : sc.truth.theta.data()) EXPECT_EQ(t, 0.0);
}

TEST(Synth, Deterministic) {
  for (auto kind : {SceneKind::stripes, SceneKind::waves, SceneKind::circular, SceneKind::parting}) {
    SyntheticSpec s;
    s.kind = kind;
    s.size = 48;
    s.noise_sigma = 8;
    s.seed = 5;
    const SyntheticScene a = generate(s), b = generate(s);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.truth, b.truth);
    s.seed = 6;
    EXPECT_NE(generate(s).image, a.image);
  }
}

TEST(Synth, TruthFields) {
  SyntheticSpec s;
  s.kind = SceneKind::circular;
  s.size = 100;
  const double cx = 50, cy = 50;
  s.center = PixelPoint{cx, cy};
  EXPECT_NEAR(truth_theta(s, cx + 20, cy), pi / 2, 1e-12);
  EXPECT_NEAR(truth_theta(s, cx, cy + 20), 0.0, 1e-12);
  s.kind = SceneKind::parting;
  EXPECT_DOUBLE_EQ(truth_theta(s, 10, 50), 3 * pi / 4);
  EXPECT_DOUBLE_EQ(truth_theta(s, 90, 50), pi / 4);
  s.kind = SceneKind::waves;
  EXPECT_NEAR(truth_theta(s, 0, 10), std::atan(2 * pi * 8 / 64), 1e-12);
}

TEST(Synth, SceneParts) {
  SyntheticSpec s;
  s.size = 32;
  const SyntheticScene sc = generate(s);
  EXPECT_EQ(sc.mask, BinaryMask(32, 32, 1));
  EXPECT_TRUE(sc.cloud.valid(31, 31));
  EXPECT_DOUBLE_EQ(sc.cloud.point(3, 4).z, 1.0);
  EXPECT_NEAR(sc.cloud.point(4, 0).x - sc.cloud.point(3, 0).x, 0.001, 1e-15);
  EXPECT_EQ(sc.rgb(5, 5).r, sc.rgb(5, 5).g);
}

TEST(Synth, Validation) {
  SyntheticSpec s;
  s.size = 31;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.period_px = 0;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_EQ(scene_kind_from_string("waves"), SceneKind::waves);
  EXPECT_THROW(scene_kind_from_string("curly"), Error);
  EXPECT_EQ(to_string(SceneKind::parting), "parting");
}

TEST(Compare, HorizontalStripesFieldSidewaysMeshDown) {
  SyntheticSpec s;
  s.size = 96;
  const auto rows = compare_planners(s, default_starts(s, 6, 1));
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    if (r.planner == Planner::field) {
      EXPECT_GT(std::abs(r.dx), 4 * std::abs(r.dy));
    } else {
      EXPECT_GT(r.dy, 4 * std::abs(r.dx));
    }
  }
}

TEST(Compare, VerticalStripesBothDown) {
  SyntheticSpec s;
  s.size = 96;
  s.angle_rad = pi / 2;
  for (const auto& r : compare_planners(s, default_starts(s, 5, 2))) {
    EXPECT_GT(r.dy, 0.0);
    ASSERT_TRUE(r.metrics.mean_alignment);
    EXPECT_GE(*r.metrics.mean_alignment, 0.99);
  }
}

TEST(Compare, WavesFavourTheField) {
  SyntheticSpec s;
  s.kind = SceneKind::waves;
  s.size = 128;
  double field = 0, mesh = 0;
  for (const auto& r : compare_planners(s, default_starts(s, 8, 3)))
    (r.planner == Planner::field ? field : mesh) += r.metrics.mean_alignment.value_or(0);
  EXPECT_GT(field, mesh);
}

TEST(Compare, CsvHasHeaderAndRows) {
  SyntheticSpec s;
  s.size = 48;
  const auto rows = compare_planners(s, default_starts(s, 3, 1));
  const std::string csv = to_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(csv.rfind("planner,", 0), 0u);
}

TEST(DefaultStarts, InsideAndSeeded) {
  SyntheticSpec s;
  s.size = 64;
  const auto a = default_starts(s, 20, 4);
  EXPECT_EQ(a.size(), 20u);
  EXPECT_EQ(a, default_starts(s, 20, 4));
  for (const auto& p : a) {
    EXPECT_GE(p.x, 0);
    EXPECT_LT(p.x, 64);
    EXPECT_GE(p.y, 0);
    EXPECT_LT(p.y, 64);
  }
}
