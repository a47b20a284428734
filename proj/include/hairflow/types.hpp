#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hairflow/raster.hpp"

namespace hairflow {

/// Per-pixel hair-flow line direction theta in [0, pi) and a coherence
/// confidence in [0, 1].
struct OrientationField {
  RealRaster theta;
  RealRaster coherence;

  std::uint32_t width() const noexcept { return theta.width(); }
  std::uint32_t height() const noexcept { return theta.height(); }
  friend bool operator==(const OrientationField&, const OrientationField&) = default;
};

enum class Termination {
  mask_exit,
  image_exit,
  step_cap,
  goal_reached,  // mesh planner only
};

std::string_view to_string(Termination t) noexcept;

struct PixelPath {
  std::vector<PixelPoint> points;
  /// Fixed step length k; 0 for variable-step (mesh) paths.
  double step_px = 0.0;
  std::optional<Termination> terminated_by;

  friend bool operator==(const PixelPath&, const PixelPath&) = default;
};

struct Pose {
  std::array<double, 3> position{};
  /// Unit quaternion (w, x, y, z) with w >= 0.
  std::array<double, 4> orientation_quat{1.0, 0.0, 0.0, 0.0};
  double time_s = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct PosePath {
  std::vector<Pose> poses;
  friend bool operator==(const PosePath&, const PosePath&) = default;
};

}  // namespace hairflow
