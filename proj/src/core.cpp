#include <algorithm>
#include <cmath>

#include "hairflow/color.hpp"
#include "hairflow/error.hpp"
#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::malformed_header: return "malformed-header";
    case ErrorCode::truncated_payload: return "truncated-payload";
    case ErrorCode::dimension_overflow: return "dimension-overflow";
    case ErrorCode::value_out_of_range: return "value-out-of-range";
    case ErrorCode::malformed_json: return "malformed-json";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::empty_mask: return "empty-mask";
    case ErrorCode::no_valid_depth: return "no-valid-depth";
    case ErrorCode::start_outside_hair: return "start-outside-hair";
    case ErrorCode::empty_graph: return "empty-graph";
    case ErrorCode::empty_goal_set: return "empty-goal-set";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::degenerate_plane: return "degenerate-plane";
    case ErrorCode::too_few_3d_points: return "too-few-3d-points";
    case ErrorCode::degenerate_tangent: return "degenerate-tangent";
    case ErrorCode::zero_length_segment: return "zero-length-segment";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string field, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + " [" + field + "]: " + message),
      code_(code),
      field_(std::move(field)),
      index_(index) {}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::mask_exit: return "mask-exit";
    case Termination::image_exit: return "image-exit";
    case Termination::step_cap: return "step-cap";
    case Termination::goal_reached: return "goal-reached";
  }
  return "unknown";
}

OrganizedCloud::OrganizedCloud(std::uint32_t width, std::uint32_t height)
    : points_(width, height), valid_(width, height, 0) {}

void OrganizedCloud::set(std::uint32_t x, std::uint32_t y, const Point3& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
    throw Error(ErrorCode::value_out_of_range, "point", "cloud point must be finite");
  }
  if (!(p.z > 0.0)) {
    throw Error(ErrorCode::value_out_of_range, "z", "valid cloud point needs z > 0");
  }
  points_(x, y) = p;
  valid_(x, y) = 1;
}

void OrganizedCloud::invalidate(std::uint32_t x, std::uint32_t y) {
  points_(x, y) = Point3{};
  valid_(x, y) = 0;
}

bool operator==(const OrganizedCloud& a, const OrganizedCloud& b) {
  if (a.width() != b.width() || a.height() != b.height()) return false;
  if (a.valid_ != b.valid_) return false;
  for (std::size_t i = 0; i < a.valid_.size(); ++i) {
    if (a.valid_[i] && !(a.points_[i] == b.points_[i])) return false;
  }
  return true;
}

IntensityImage to_grayscale(const RgbImage& img) {
  IntensityImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb& p = img[i];
    out[i] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  }
  return out;
}

std::optional<double> hue_of(const Rgb& px) noexcept {
  const int r = px.r, g = px.g, b = px.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  if (mx == mn) return std::nullopt;
  const double d = mx - mn;
  double h;
  if (mx == r) {
    h = 60.0 * ((g - b) / d);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

double value_of(const Rgb& px) noexcept {
  return std::max({px.r, px.g, px.b}) / 255.0;
}

HueMap rgb_to_hue(const RgbImage& img) {
  HueMap out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = hue_of(img[i]);
  return out;
}

}  // namespace hairflow
