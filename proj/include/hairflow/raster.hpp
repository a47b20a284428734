#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hairflow/error.hpp"

namespace hairflow {

/// Row-major pixel grid. The Tag parameter keeps semantically different
/// rasters (an intensity image and a soft mask, say) from mixing silently.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(std::uint32_t width, std::uint32_t height, T fill = T{})
      : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(std::size_t{width} * height, fill);
  }

  Raster(std::uint32_t width, std::uint32_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != std::size_t{width} * height) {
      throw Error(ErrorCode::dimension_mismatch, "data",
                  "raster data length does not equal width*height");
    }
  }

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::uint32_t x, std::uint32_t y) { return data_[index(x, y)]; }
  const T& operator()(std::uint32_t x, std::uint32_t y) const {
    return data_[index(x, y)];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  /// Replicate-padded read: out-of-range coordinates clamp to the border.
  const T& at_clamped(long x, long y) const {
    x = x < 0 ? 0 : (x >= long(width_) ? long(width_) - 1 : x);
    y = y < 0 ? 0 : (y >= long(height_) ? long(height_) - 1 : y);
    return data_[std::size_t(y) * width_ + std::size_t(x)];
  }

  bool contains(long x, long y) const noexcept {
    return x >= 0 && y >= 0 && x < long(width_) && y < long(height_);
  }

  std::size_t index(std::uint32_t x, std::uint32_t y) const noexcept {
    return std::size_t{y} * width_ + x;
  }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  template <typename OtherT, typename OtherTag>
  bool same_shape(const Raster<OtherT, OtherTag>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static void check_dims(std::uint32_t width, std::uint32_t height) {
    if (width == 0) throw Error(ErrorCode::invalid_argument, "width", "width must be >= 1");
    if (height == 0) throw Error(ErrorCode::invalid_argument, "height", "height must be >= 1");
  }

  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<T> data_;
};

template <typename T1, typename Tag1, typename T2, typename Tag2>
void require_same_shape(const Raster<T1, Tag1>& a, const Raster<T2, Tag2>& b,
                        const char* field) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::dimension_mismatch, field, "raster dimensions differ");
  }
}

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Subpixel image coordinate; x rightward, y downward, origin top-left.
struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Nearest integer pixel of a subpixel coordinate (halves round up).
inline std::pair<long, long> nearest_pixel(const PixelPoint& p) {
  return {static_cast<long>(std::floor(p.x + 0.5)), static_cast<long>(std::floor(p.y + 0.5))};
}

struct IntensityTag;
struct RealTag;
struct Gray8Tag;
struct RgbTag;
struct SoftMaskTag;
struct BinaryMaskTag;
struct HueTag;
struct PointTag;
struct ValidTag;

/// Grayscale intensity, real-valued, nominal range [0, 255].
using IntensityImage = Raster<double, IntensityTag>;
/// Intermediate real-valued rasters (derivatives, tensor entries, angles).
using RealRaster = Raster<double, RealTag>;
/// Raw 8-bit PGM payload.
using Gray8Image = Raster<std::uint8_t, Gray8Tag>;
using RgbImage = Raster<Rgb, RgbTag>;
/// Per-pixel hair membership in [0, 1].
using SoftMask = Raster<double, SoftMaskTag>;
/// Per-pixel hair membership; nonzero = hair.
using BinaryMask = Raster<std::uint8_t, BinaryMaskTag>;

/// Depth-camera points in raster order. Invalid pixels carry no point.
class OrganizedCloud {
 public:
  OrganizedCloud() = default;
  OrganizedCloud(std::uint32_t width, std::uint32_t height);

  std::uint32_t width() const noexcept { return points_.width(); }
  std::uint32_t height() const noexcept { return points_.height(); }

  bool valid(std::uint32_t x, std::uint32_t y) const { return valid_(x, y) != 0; }
  bool valid(std::size_t i) const { return valid_[i] != 0; }
  const Point3& point(std::uint32_t x, std::uint32_t y) const { return points_(x, y); }
  const Point3& point(std::size_t i) const { return points_[i]; }

  /// Stores a point and marks it valid; throws unless finite with z > 0.
  void set(std::uint32_t x, std::uint32_t y, const Point3& p);
  void invalidate(std::uint32_t x, std::uint32_t y);

  template <typename T, typename Tag>
  bool same_shape(const Raster<T, Tag>& r) const noexcept {
    return points_.same_shape(r);
  }

  friend bool operator==(const OrganizedCloud& a, const OrganizedCloud& b);

 private:
  Raster<Point3, PointTag> points_;
  Raster<std::uint8_t, ValidTag> valid_;
};

template <typename T, typename Tag>
void require_same_shape(const OrganizedCloud& c, const Raster<T, Tag>& r, const char* field) {
  if (!c.same_shape(r)) {
    throw Error(ErrorCode::dimension_mismatch, field, "cloud and raster dimensions differ");
  }
}

}  // namespace hairflow
