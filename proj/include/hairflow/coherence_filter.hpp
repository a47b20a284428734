#pragma once

#include "hairflow/filters.hpp"
#include "hairflow/raster.hpp"

namespace hairflow {

/// Which morphological operation a positive second directional derivative
/// selects. as_written dilates (window max) where I_vv > 0; weickert
/// dilates where I_vv < 0.
enum class ConvexityConvention { as_written, weickert };

struct CoherenceParams {
  int k_delta = 7;   // Sobel size for second derivatives and the tensor gradient
  int k_e = 11;      // structure-tensor window
  int k_m = 3;       // dilation/erosion window
  double c_blend = 0.9;
  int iterations = 3;
  ConvexityConvention convention = ConvexityConvention::weickert;
  WindowKind tensor_window = WindowKind::box;

  void validate() const;
};

struct DerivativeStack {
  RealRaster i_x, i_y;
  RealRaster i_xx, i_xy, i_yy;
};

/// Unit dominant eigenvector of the windowed structure tensor per pixel,
/// sign-normalized so e_x > 0, or e_x == 0 and e_y > 0. Zero tensor -> (1, 0).
struct EigenField {
  RealRaster e_x, e_y;
};

/// Second derivatives by composing first-derivative Sobel filters:
/// i_xx = Sx(Sx I), i_yy = Sy(Sy I), i_xy = Sy(Sx I). The first-derivative
/// members are filled too.
DerivativeStack hessian(const IntensityImage& img, int k_delta);

/// Dominant eigenvector of the 2x2 symmetric matrix [a b; b c], normalized as
/// in EigenField.
std::pair<double, double> dominant_eigenvector(double a, double b, double c) noexcept;

EigenField dominant_eigenvector(const IntensityImage& img, int k_e, int k_delta,
                                WindowKind window = WindowKind::box);

/// e_x^2 i_xx + 2 e_x e_y i_xy + e_y^2 i_yy.
RealRaster directional_second_derivative(const EigenField& e, const DerivativeStack& d);

/// One shock-filter iteration.
IntensityImage shock_step(const IntensityImage& img, const CoherenceParams& params);

/// Coherence-enhancing shock filter: params.iterations repetitions of
/// shock_step. Each pixel of the morphological image takes its K_m window max
/// or min according to the sign of I_vv (itself when I_vv == 0) and the result
/// is blended as I + (1 - c_blend) (I' - I).
IntensityImage shock_iterate(const IntensityImage& img, const CoherenceParams& params = {});

}  // namespace hairflow
