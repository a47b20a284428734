#include "hairflow/filters.hpp"

#include <algorithm>
#include <cmath>

namespace hairflow {
namespace {

std::vector<double> binomial(int n) {
  std::vector<double> row{1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(row.size() + 1, 0.0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] += row[i];
      next[i + 1] += row[i];
    }
    row = std::move(next);
  }
  return row;
}

// Symmetric kernel along one axis.
template <typename Tag>
RealRaster correlate_symmetric(const Raster<double, Tag>& img, const std::vector<double>& k,
                               Axis axis) {
  const long r = long(k.size() / 2);
  const long w = img.width(), h = img.height();
  RealRaster out(img.width(), img.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = k[std::size_t(r)] * img(std::uint32_t(x), std::uint32_t(y));
      for (long j = 1; j <= r; ++j) {
        const double pair = axis == Axis::x ? img.at_clamped(x - j, y) + img.at_clamped(x + j, y)
                                            : img.at_clamped(x, y - j) + img.at_clamped(x, y + j);
        acc += k[std::size_t(r + j)] * pair;
      }
      out(std::uint32_t(x), std::uint32_t(y)) = acc;
    }
  }
  return out;
}

// Antisymmetric kernel (k[r+j] = -k[r-j]) along one axis. Evaluated as
// sum_j k[r+j] * (v[+j] - v[-j]) so locally constant data gives exactly 0.
RealRaster correlate_antisymmetric(const RealRaster& img, const std::vector<double>& k,
                                   Axis axis) {
  const long r = long(k.size() / 2);
  const long w = img.width(), h = img.height();
  RealRaster out(img.width(), img.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long j = 1; j <= r; ++j) {
        const double diff = axis == Axis::x ? img.at_clamped(x + j, y) - img.at_clamped(x - j, y)
                                            : img.at_clamped(x, y + j) - img.at_clamped(x, y - j);
        acc += k[std::size_t(r + j)] * diff;
      }
      out(std::uint32_t(x), std::uint32_t(y)) = acc;
    }
  }
  return out;
}

}  // namespace

void check_kernel_size(int size, std::uint32_t width, std::uint32_t height, const char* field) {
  if (size < 3 || size % 2 == 0) {
    throw Error(ErrorCode::invalid_argument, field, "kernel size must be odd and >= 3");
  }
  if (std::uint32_t(size) > std::min(width, height)) {
    throw Error(ErrorCode::invalid_argument, field, "kernel larger than the image");
  }
}

std::vector<double> sobel_smoothing_kernel(int size) { return binomial(size); }

std::vector<double> sobel_derivative_kernel(int size) {
  const std::vector<double> inner = binomial(size - 2);
  const double base[3] = {-1.0, 0.0, 1.0};
  std::vector<double> out(std::size_t(size), 0.0);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) out[i + j] += inner[i] * base[j];
  }
  return out;
}

template <typename Tag>
RealRaster sobel(const Raster<double, Tag>& img, Axis axis, int size) {
  check_kernel_size(size, img.width(), img.height(), "sobel_size");
  const Axis across = axis == Axis::x ? Axis::y : Axis::x;
  const RealRaster smoothed = correlate_symmetric(img, sobel_smoothing_kernel(size), across);
  return correlate_antisymmetric(smoothed, sobel_derivative_kernel(size), axis);
}

template <typename Tag>
RealRaster window_mean(const Raster<double, Tag>& img, int size, WindowKind kind) {
  check_kernel_size(size, img.width(), img.height(), "window_size");
  std::vector<double> k(std::size_t(size), 1.0);
  if (kind == WindowKind::gaussian) {
    const double sigma = size / 6.0;
    const long r = size / 2;
    for (long j = -r; j <= r; ++j) k[std::size_t(j + r)] = std::exp(-0.5 * (j * j) / (sigma * sigma));
  }
  double sum = 0.0;
  for (double v : k) sum += v;
  for (double& v : k) v /= sum;
  return correlate_symmetric(correlate_symmetric(img, k, Axis::x), k, Axis::y);
}

template <typename Tag>
RealRaster window_extreme(const Raster<double, Tag>& img, int size, bool take_max) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::invalid_argument, "k_m", "window size must be odd");
  }
  const long r = size / 2;
  const long w = img.width(), h = img.height();
  RealRaster out(img.width(), img.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double best = img(std::uint32_t(x), std::uint32_t(y));
      for (long dy = -r; dy <= r; ++dy) {
        for (long dx = -r; dx <= r; ++dx) {
          const double v = img.at_clamped(x + dx, y + dy);
          best = take_max ? std::max(best, v) : std::min(best, v);
        }
      }
      out(std::uint32_t(x), std::uint32_t(y)) = best;
    }
  }
  return out;
}

template RealRaster sobel(const IntensityImage&, Axis, int);
template RealRaster sobel(const RealRaster&, Axis, int);
template RealRaster window_mean(const IntensityImage&, int, WindowKind);
template RealRaster window_mean(const RealRaster&, int, WindowKind);
template RealRaster window_extreme(const IntensityImage&, int, bool);
template RealRaster window_extreme(const RealRaster&, int, bool);

}  // namespace hairflow
