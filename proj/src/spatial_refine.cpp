#include "hairflow/spatial_refine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hairflow/color.hpp"

namespace hairflow {
namespace {

std::size_t hue_bin(double hue_deg, std::size_t bins) {
  const double width = 360.0 / double(bins);
  const auto b = static_cast<std::size_t>(std::floor((hue_deg + 0.5 * width) / width));
  return b % bins;
}

}  // namespace

void RefineParams::validate() const {
  if (connectivity != Connectivity::four && connectivity != Connectivity::eight) {
    throw Error(ErrorCode::invalid_argument, "connectivity", "connectivity must be 4 or 8");
  }
  if (!(depth_sigma_mult > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "depth_sigma_mult", "must be > 0");
  }
  if (hue_bins < 1) throw Error(ErrorCode::invalid_argument, "hue_bins", "must be >= 1");
  if (!(hue_occupancy_min >= 0.0 && hue_occupancy_min <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "hue_occupancy_min", "must lie in [0, 1]");
  }
  if (!(achromatic_share_min >= 0.0 && achromatic_share_min <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "achromatic_share_min", "must lie in [0, 1]");
  }
}

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity) {
  const long w = mask.width(), h = mask.height();
  std::vector<std::int32_t> label(mask.size(), -1);
  std::vector<std::size_t> stack;
  std::int32_t best_label = -1;
  std::size_t best_size = 0;
  std::int32_t next_label = 0;
  const bool eight = connectivity == Connectivity::eight;

  // Row-major scan: components are discovered in order of their first pixel,
  // so a strict '>' keeps the earliest among equal sizes.
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask[seed] || label[seed] >= 0) continue;
    const std::int32_t current = next_label++;
    std::size_t size = 0;
    label[seed] = current;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++size;
      const long x = long(i % std::size_t(w)), y = long(i / std::size_t(w));
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!eight && dx != 0 && dy != 0) continue;
          const long nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = std::size_t(ny * w + nx);
          if (mask[j] && label[j] < 0) {
            label[j] = current;
            stack.push_back(j);
          }
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = current;
    }
  }
  if (best_label < 0) throw Error(ErrorCode::empty_mask, "mask", "mask has no set pixels");

  BinaryMask out(mask.width(), mask.height(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = label[i] == best_label ? 1 : 0;
  return out;
}

DepthStats depth_stats(const BinaryMask& mask, const OrganizedCloud& cloud) {
  require_same_shape(cloud, mask, "cloud");
  std::vector<double> z;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && cloud.valid(i)) z.push_back(cloud.point(i).z);
  }
  if (z.empty()) {
    throw Error(ErrorCode::no_valid_depth, "cloud", "no masked pixel has valid depth");
  }
  DepthStats s;
  s.n = z.size();

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= double(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  s.std_z = std::sqrt(ss / double(z.size()));

  const std::size_t mid = z.size() / 2;
  std::nth_element(z.begin(), z.begin() + std::ptrdiff_t(mid), z.end());
  const double upper = z[mid];
  if (z.size() % 2 == 1) {
    s.median_z = upper;
  } else {
    const double lower = *std::max_element(z.begin(), z.begin() + std::ptrdiff_t(mid));
    s.median_z = 0.5 * (lower + upper);
  }
  return s;
}

BinaryMask expand(const BinaryMask& mask, const OrganizedCloud& cloud, const RgbImage& rgb,
                  const RefineParams& params) {
  params.validate();
  require_same_shape(rgb, mask, "rgb");
  const DepthStats stats = depth_stats(mask, cloud);

  std::vector<std::size_t> hist(params.hue_bins, 0);
  std::size_t chromatic = 0, achromatic = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    if (const auto hue = hue_of(rgb[i])) {
      ++hist[hue_bin(*hue, params.hue_bins)];
      ++chromatic;
    } else {
      ++achromatic;
    }
  }
  const std::size_t total = chromatic + achromatic;
  const bool admit_achromatic =
      double(achromatic) >= params.achromatic_share_min * double(total);

  std::vector<bool> hue_ok(params.hue_bins, false);
  for (std::size_t b = 0; b < params.hue_bins; ++b) {
    hue_ok[b] = hist[b] > 0 &&
                double(hist[b]) >= params.hue_occupancy_min * double(chromatic);
  }

  const double band = params.depth_sigma_mult * stats.std_z;
  BinaryMask out = mask;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] || !cloud.valid(i)) continue;
    if (!(std::abs(cloud.point(i).z - stats.median_z) <= band)) continue;
    const auto hue = hue_of(rgb[i]);
    const bool hue_pass = hue ? hue_ok[hue_bin(*hue, params.hue_bins)] : admit_achromatic;
    if (hue_pass) out[i] = 1;
  }
  return out;
}

BinaryMask refine(const BinaryMask& mask, const OrganizedCloud& cloud, const RgbImage& rgb,
                  const RefineParams& params) {
  params.validate();
  return expand(largest_component(mask, params.connectivity), cloud, rgb, params);
}

BinaryMask segment_by_hsv(const RgbImage& rgb, double hue_lo, double hue_hi, double val_hi) {
  if (!(hue_lo >= 0.0 && hue_lo <= 360.0)) {
    throw Error(ErrorCode::invalid_argument, "hue_lo", "must lie in [0, 360]");
  }
  if (!(hue_hi >= 0.0 && hue_hi <= 360.0)) {
    throw Error(ErrorCode::invalid_argument, "hue_hi", "must lie in [0, 360]");
  }
  if (!(val_hi >= 0.0 && val_hi <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "val_hi", "must lie in [0, 1]");
  }
  BinaryMask out(rgb.width(), rgb.height(), 0);
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    if (value_of(rgb[i]) > val_hi) continue;
    const auto hue = hue_of(rgb[i]);
    bool in_range = true;
    if (hue) {
      in_range = hue_lo <= hue_hi ? (*hue >= hue_lo && *hue <= hue_hi)
                                  : (*hue >= hue_lo || *hue <= hue_hi);
    }
    out[i] = in_range ? 1 : 0;
  }
  return out;
}

}  // namespace hairflow
