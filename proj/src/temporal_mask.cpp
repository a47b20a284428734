#include "hairflow/temporal_mask.hpp"

#include <algorithm>

namespace hairflow {

TemporalMaskFilter::TemporalMaskFilter(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "alpha", "alpha must lie in (0, 1]");
  }
}

void TemporalMaskFilter::update(const SoftMask& frame) {
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!(frame[i] >= 0.0 && frame[i] <= 1.0)) {
      throw Error(ErrorCode::value_out_of_range, "frame", "mask value outside [0, 1]", i);
    }
  }
  if (!accum_) {
    accum_ = frame;
  } else {
    require_same_shape(*accum_, frame, "frame");
    SoftMask& acc = *accum_;
    const double keep = 1.0 - alpha_;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      // rounding can push a convex blend of 1.0s one ulp above 1
      acc[i] = std::min(1.0, alpha_ * frame[i] + keep * acc[i]);
    }
  }
  ++t_;
}

BinaryMask binarize(const SoftMask& mask, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "threshold", "threshold must lie in (0, 1)");
  }
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] >= threshold ? 1 : 0;
  return out;
}

}  // namespace hairflow
