#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow {

struct PathParams {
  double step_px = 6.0;
  std::size_t max_steps = 1000;
  /// Preferred direction for the first step. Without it the first step takes
  /// the representative with d_y > 0 (downward), or d_x > 0 when d_y == 0.
  std::optional<std::array<double, 2>> initial_heading;

  void validate() const;
};

/// Signed unit step for a line direction theta given the previous step (or
/// the first-step rule when there is none).
std::array<double, 2> step_direction(double theta,
                                     const std::optional<std::array<double, 2>>& previous) noexcept;

/// Streamline of the orientation field from `start`, stepping step_px along
/// the field direction at the nearest pixel and keeping heading continuity.
/// Stops before the first point whose nearest pixel leaves the image or the
/// mask, or after max_steps steps. Throws start_outside_hair when the start's
/// nearest pixel is not hair.
PixelPath plan(const OrientationField& field, const BinaryMask& mask, const PixelPoint& start,
               const PathParams& params = {});

struct PathMetrics {
  double length_px = 0.0;
  /// Mean |cos| between each step and the field at its midpoint; empty for
  /// single-point paths.
  std::optional<double> mean_alignment;
  /// Mean absolute turning angle between consecutive steps; empty with fewer
  /// than two steps.
  std::optional<double> mean_turn_rad;
  std::optional<Termination> terminated_by;
};

PathMetrics metrics(const PixelPath& path, const OrientationField& field);
/// Length and turning only; mean_alignment stays empty.
PathMetrics metrics(const PixelPath& path);

}  // namespace hairflow
