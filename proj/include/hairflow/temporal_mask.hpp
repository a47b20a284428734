#pragma once

#include <cstdint>
#include <optional>

#include "hairflow/raster.hpp"

namespace hairflow {

/// Exponential smoothing over a stream of soft segmentation masks:
/// the first frame is taken as-is, every later frame is blended in as
/// alpha * frame + (1 - alpha) * accum.
class TemporalMaskFilter {
 public:
  static constexpr double kDefaultAlpha = 0.9;

  explicit TemporalMaskFilter(double alpha = kDefaultAlpha);

  /// Throws dimension_mismatch if the frame does not match earlier frames and
  /// value_out_of_range if any value lies outside [0, 1].
  void update(const SoftMask& frame);

  double alpha() const noexcept { return alpha_; }
  std::uint64_t frames_seen() const noexcept { return t_; }
  /// Empty until the first update.
  const std::optional<SoftMask>& accum() const noexcept { return accum_; }

 private:
  double alpha_;
  std::uint64_t t_ = 0;
  std::optional<SoftMask> accum_;
};

/// bit = value >= threshold.
BinaryMask binarize(const SoftMask& mask, double threshold = 0.5);

}  // namespace hairflow
