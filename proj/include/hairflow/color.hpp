#pragma once

#include <optional>

#include "hairflow/raster.hpp"

namespace hairflow {

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b.
IntensityImage to_grayscale(const RgbImage& img);

/// HSV hue in degrees [0, 360); nullopt for achromatic pixels (max == min).
std::optional<double> hue_of(const Rgb& px) noexcept;

/// HSV value (max channel) scaled to [0, 1].
double value_of(const Rgb& px) noexcept;

using HueMap = Raster<std::optional<double>, HueTag>;

HueMap rgb_to_hue(const RgbImage& img);

}  // namespace hairflow
