#pragma once

#include "hairflow/coherence_filter.hpp"
#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow {

struct OrientationParams {
  int k_delta = 3;  // Sobel size for the gradient
  int k_E = 5;      // tensor averaging window
  WindowKind window = WindowKind::box;

  void validate() const;
};

/// Gradient structure tensor: raw products (s0_*) and their windowed means
/// (j11, j12, j21, j22). j12 and j21 come from I_x*I_y and I_y*I_x.
struct StructureTensorField {
  RealRaster s0_xx, s0_xy, s0_yx, s0_yy;
  RealRaster j11, j12, j21, j22;
};

StructureTensorField structure_tensor(const IntensityImage& img, const OrientationParams& params = {});

/// theta = atan2(j12 + j21, j11 - j22) / 2 + pi/2 wrapped into [0, pi); the
/// flow direction, perpendicular to the dominant gradient. Coherence is
/// (l1 - l2) / (l1 + l2), 0 where l1 + l2 == 0.
OrientationField orientation(const StructureTensorField& tensor);

/// Per-pixel form of orientation(): returns {theta, coherence}.
std::pair<double, double> orientation_at(double j11, double j12, double j21, double j22) noexcept;

/// orientation(structure_tensor(shock_iterate(img))).
OrientationField field_from_image(const IntensityImage& img,
                                  const CoherenceParams& coherence = {},
                                  const OrientationParams& orientation = {});

/// Wraps any angle into [0, pi).
double wrap_pi(double theta) noexcept;

/// Smallest angle between two line directions, in [0, pi/2].
double line_angle_difference(double a, double b) noexcept;

}  // namespace hairflow
