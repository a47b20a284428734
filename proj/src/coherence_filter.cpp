#include "hairflow/coherence_filter.hpp"

#include <cmath>

namespace hairflow {

void CoherenceParams::validate() const {
  const auto odd3 = [](int k, const char* field) {
    if (k < 3 || k % 2 == 0) throw Error(ErrorCode::invalid_argument, field, "must be odd and >= 3");
  };
  odd3(k_delta, "k_delta");
  odd3(k_e, "k_e");
  odd3(k_m, "k_m");
  if (!(c_blend >= 0.0 && c_blend <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "c_blend", "must lie in [0, 1]");
  }
  if (iterations < 0) throw Error(ErrorCode::invalid_argument, "iterations", "must be >= 0");
}

DerivativeStack hessian(const IntensityImage& img, int k_delta) {
  DerivativeStack d;
  d.i_x = sobel(img, Axis::x, k_delta);
  d.i_y = sobel(img, Axis::y, k_delta);
  d.i_xx = sobel(d.i_x, Axis::x, k_delta);
  d.i_xy = sobel(d.i_x, Axis::y, k_delta);
  d.i_yy = sobel(d.i_y, Axis::y, k_delta);
  return d;
}

std::pair<double, double> dominant_eigenvector(double a, double b, double c) noexcept {
  if (b == 0.0) {
    // axis-aligned (or zero) tensor
    return a >= c ? std::pair{1.0, 0.0} : std::pair{0.0, 1.0};
  }
  const double phi = 0.5 * std::atan2(2.0 * b, a - c);  // in (-pi/2, pi/2]
  double ex = std::cos(phi), ey = std::sin(phi);
  if (ex < 0.0 || (ex == 0.0 && ey < 0.0)) {
    ex = -ex;
    ey = -ey;
  }
  return {ex, ey};
}

EigenField dominant_eigenvector(const IntensityImage& img, int k_e, int k_delta,
                                WindowKind window) {
  check_kernel_size(k_e, img.width(), img.height(), "k_e");
  const RealRaster ix = sobel(img, Axis::x, k_delta);
  const RealRaster iy = sobel(img, Axis::y, k_delta);
  RealRaster xx(img.width(), img.height()), xy(img.width(), img.height()),
      yy(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    xx[i] = ix[i] * ix[i];
    xy[i] = ix[i] * iy[i];
    yy[i] = iy[i] * iy[i];
  }
  const RealRaster a = window_mean(xx, k_e, window);
  const RealRaster b = window_mean(xy, k_e, window);
  const RealRaster c = window_mean(yy, k_e, window);
  EigenField e{RealRaster(img.width(), img.height()), RealRaster(img.width(), img.height())};
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto [ex, ey] = dominant_eigenvector(a[i], b[i], c[i]);
    e.e_x[i] = ex;
    e.e_y[i] = ey;
  }
  return e;
}

RealRaster directional_second_derivative(const EigenField& e, const DerivativeStack& d) {
  RealRaster out(e.e_x.width(), e.e_x.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ex = e.e_x[i], ey = e.e_y[i];
    out[i] = ex * ex * d.i_xx[i] + 2.0 * ex * ey * d.i_xy[i] + ey * ey * d.i_yy[i];
  }
  return out;
}

IntensityImage shock_step(const IntensityImage& img, const CoherenceParams& params) {
  const EigenField e = dominant_eigenvector(img, params.k_e, params.k_delta, params.tensor_window);
  const DerivativeStack d = hessian(img, params.k_delta);
  const RealRaster ivv = directional_second_derivative(e, d);
  const RealRaster dilated = window_extreme(img, params.k_m, true);
  const RealRaster eroded = window_extreme(img, params.k_m, false);
  const bool swap = params.convention == ConvexityConvention::weickert;
  const double rate = 1.0 - params.c_blend;

  IntensityImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    double shocked = img[i];
    if (ivv[i] > 0.0) {
      shocked = swap ? eroded[i] : dilated[i];
    } else if (ivv[i] < 0.0) {
      shocked = swap ? dilated[i] : eroded[i];
    }
    // I*c + I'*(1-c), arranged so that I' == I leaves the pixel bit-identical
    out[i] = img[i] + rate * (shocked - img[i]);
  }
  return out;
}

IntensityImage shock_iterate(const IntensityImage& img, const CoherenceParams& params) {
  params.validate();
  if (params.iterations > 0) {
    check_kernel_size(params.k_delta, img.width(), img.height(), "k_delta");
    check_kernel_size(params.k_e, img.width(), img.height(), "k_e");
    check_kernel_size(params.k_m, img.width(), img.height(), "k_m");
  }
  IntensityImage current = img;
  for (int t = 0; t < params.iterations; ++t) current = shock_step(current, params);
  return current;
}

}  // namespace hairflow
