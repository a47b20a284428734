#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hairflow/path_planner.hpp"
#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow::synth {

enum class SceneKind { stripes, waves, circular, parting };

std::string_view to_string(SceneKind kind) noexcept;
SceneKind scene_kind_from_string(std::string_view name);

struct SyntheticSpec {
  SceneKind kind = SceneKind::stripes;
  std::uint32_t size = 128;
  /// Flow direction of stripes, radians.
  double angle_rad = 0.0;
  /// Spacing between strands (intensity period across the flow).
  double period_px = 12.0;
  /// Wave displacement amplitude and wavelength along x (waves only).
  double amplitude_px = 8.0;
  double wavelength_px = 64.0;
  /// Centre of the circular field; image centre when unset.
  std::optional<PixelPoint> center;
  double contrast = 100.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Image, analytic ground-truth field, hair mask (whole frame) and a flat
/// cloud at z = 1 m with 1 mm pixels. Deterministic in the spec.
struct SyntheticScene {
  IntensityImage image;
  RgbImage rgb;  // grey copy of image, for RGB consumers
  OrientationField truth;
  BinaryMask mask;
  OrganizedCloud cloud;
};

SyntheticScene generate(const SyntheticSpec& spec);

/// Analytic line direction at a pixel, in [0, pi).
double truth_theta(const SyntheticSpec& spec, double x, double y);

/// `count` start points drawn from the upper part of the frame, away from
/// the borders, seeded by `seed`.
std::vector<PixelPoint> default_starts(const SyntheticSpec& spec, std::size_t count,
                                       std::uint64_t seed);

enum class Planner { field, mesh };
std::string_view to_string(Planner p) noexcept;

struct ComparisonRow {
  Planner planner;
  PixelPoint start;
  std::size_t points = 0;
  PathMetrics metrics;  // measured against the ground-truth field
  double dx = 0.0;      // end minus start
  double dy = 0.0;
};

struct CompareOptions {
  PathParams path{};
  double goal_fraction = 0.1;
};

/// Runs both planners from each start on the generated scene. The field
/// planner uses the full image pipeline (shock filter + structure tensor);
/// metrics use the analytic field.
std::vector<ComparisonRow> compare_planners(const SyntheticSpec& spec,
                                            const std::vector<PixelPoint>& starts,
                                            const CompareOptions& options = {});

/// Same, on an already generated scene.
std::vector<ComparisonRow> compare_planners(const SyntheticScene& scene,
                                            const std::vector<PixelPoint>& starts,
                                            const CompareOptions& options = {});

std::string to_csv(const std::vector<ComparisonRow>& rows);

}  // namespace hairflow::synth
