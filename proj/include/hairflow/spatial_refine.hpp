#pragma once

#include <cstddef>

#include "hairflow/raster.hpp"

namespace hairflow {

enum class Connectivity { four = 4, eight = 8 };

struct RefineParams {
  Connectivity connectivity = Connectivity::eight;
  /// Depth band half-width in standard deviations around the median.
  double depth_sigma_mult = 2.0;
  /// Circular hue histogram: bin b covers [b*w - w/2, b*w + w/2) with
  /// w = 360/hue_bins, so pure red sits mid-bin rather than on the wrap.
  std::size_t hue_bins = 36;
  double hue_occupancy_min = 0.01;
  /// Share of achromatic mask pixels at which achromatic candidates are
  /// admitted on depth alone.
  double achromatic_share_min = 0.25;

  void validate() const;
};

struct DepthStats {
  double median_z = 0.0;
  double std_z = 0.0;  // population standard deviation
  std::size_t n = 0;
};

/// Keeps the connected component with the most pixels. Equal sizes resolve
/// to the component whose first pixel comes first in row-major order.
/// Throws empty_mask when nothing is set.
BinaryMask largest_component(const BinaryMask& mask,
                             Connectivity connectivity = Connectivity::eight);

/// Median and population standard deviation of z over masked pixels with
/// valid depth. Throws no_valid_depth when there are none.
DepthStats depth_stats(const BinaryMask& mask, const OrganizedCloud& cloud);

/// Single-pass re-admission of pixels near the hair's median depth whose hue
/// is well represented among the mask's pixels. Output is a superset of mask.
BinaryMask expand(const BinaryMask& mask, const OrganizedCloud& cloud, const RgbImage& rgb,
                  const RefineParams& params = {});

/// largest_component followed by expand.
BinaryMask refine(const BinaryMask& mask, const OrganizedCloud& cloud, const RgbImage& rgb,
                  const RefineParams& params = {});

/// Naive stand-in segmentation for when no mask is supplied: hue within
/// [hue_lo, hue_hi] (wrapping if hue_lo > hue_hi) or achromatic, and HSV
/// value <= val_hi.
BinaryMask segment_by_hsv(const RgbImage& rgb, double hue_lo, double hue_hi, double val_hi);

}  // namespace hairflow
