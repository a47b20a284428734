#pragma once

#include <vector>

#include "hairflow/raster.hpp"

// Small separable image filters shared by the coherence and orientation
// stages. All use replicate (clamp-to-edge) border handling.

namespace hairflow {

enum class Axis { x, y };

enum class WindowKind { box, gaussian };

/// Binomial smoothing row of the given odd size ([1,2,1] for 3).
std::vector<double> sobel_smoothing_kernel(int size);
/// Antisymmetric derivative row of the given odd size ([-1,0,1] for 3,
/// [-1,-2,0,2,1] for 5).
std::vector<double> sobel_derivative_kernel(int size);

/// Correlation with the extended Sobel kernel of the given odd size. Throws
/// invalid_argument for even sizes, sizes below 3, or sizes larger than the
/// image.
template <typename Tag>
RealRaster sobel(const Raster<double, Tag>& img, Axis axis, int size);

/// Mean over a size x size window (box) or a normalized Gaussian window with
/// sigma = size / 6.
template <typename Tag>
RealRaster window_mean(const Raster<double, Tag>& img, int size,
                       WindowKind kind = WindowKind::box);

/// Max (or min) over a size x size window.
template <typename Tag>
RealRaster window_extreme(const Raster<double, Tag>& img, int size, bool take_max);

/// Validates an odd kernel size against an image.
void check_kernel_size(int size, std::uint32_t width, std::uint32_t height, const char* field);

}  // namespace hairflow
