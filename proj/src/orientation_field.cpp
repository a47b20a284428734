#include "hairflow/orientation_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hairflow {

void OrientationParams::validate() const {
  if (k_delta < 3 || k_delta % 2 == 0) {
    throw Error(ErrorCode::invalid_argument, "k_delta", "must be odd and >= 3");
  }
  if (k_E < 3 || k_E % 2 == 0) {
    throw Error(ErrorCode::invalid_argument, "k_E", "must be odd and >= 3");
  }
}

double wrap_pi(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  double t = std::fmod(theta, pi);
  if (t < 0.0) t += pi;
  if (t >= pi) t = 0.0;
  return t;
}

double line_angle_difference(double a, double b) noexcept {
  const double d = wrap_pi(a - b);
  return std::min(d, std::numbers::pi - d);
}

StructureTensorField structure_tensor(const IntensityImage& img, const OrientationParams& params) {
  params.validate();
  check_kernel_size(params.k_delta, img.width(), img.height(), "k_delta");
  check_kernel_size(params.k_E, img.width(), img.height(), "k_E");
  const RealRaster ix = sobel(img, Axis::x, params.k_delta);
  const RealRaster iy = sobel(img, Axis::y, params.k_delta);

  StructureTensorField t;
  t.s0_xx = RealRaster(img.width(), img.height());
  t.s0_xy = t.s0_yx = t.s0_yy = t.s0_xx;
  for (std::size_t i = 0; i < img.size(); ++i) {
    t.s0_xx[i] = ix[i] * ix[i];
    t.s0_xy[i] = ix[i] * iy[i];
    t.s0_yx[i] = iy[i] * ix[i];
    t.s0_yy[i] = iy[i] * iy[i];
  }
  t.j11 = window_mean(t.s0_xx, params.k_E, params.window);
  t.j12 = window_mean(t.s0_xy, params.k_E, params.window);
  t.j21 = window_mean(t.s0_yx, params.k_E, params.window);
  t.j22 = window_mean(t.s0_yy, params.k_E, params.window);
  return t;
}

std::pair<double, double> orientation_at(double j11, double j12, double j21,
                                         double j22) noexcept {
  const double theta = wrap_pi(0.5 * std::atan2(j12 + j21, j11 - j22) + 0.5 * std::numbers::pi);
  const double trace = j11 + j22;
  double coherence = 0.0;
  if (trace > 0.0) {
    const double diff = j11 - j22;
    const double off = j12 + j21;  // 2 * j12
    coherence = std::clamp(std::sqrt(diff * diff + off * off) / trace, 0.0, 1.0);
  }
  return {theta, coherence};
}

OrientationField orientation(const StructureTensorField& t) {
  OrientationField f{RealRaster(t.j11.width(), t.j11.height()),
                     RealRaster(t.j11.width(), t.j11.height())};
  for (std::size_t i = 0; i < t.j11.size(); ++i) {
    const auto [theta, coherence] = orientation_at(t.j11[i], t.j12[i], t.j21[i], t.j22[i]);
    f.theta[i] = theta;
    f.coherence[i] = coherence;
  }
  return f;
}

OrientationField field_from_image(const IntensityImage& img, const CoherenceParams& coherence,
                                  const OrientationParams& params) {
  return orientation(structure_tensor(shock_iterate(img, coherence), params));
}

}  // namespace hairflow
