#include "hairflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hairflow/mesh_planner.hpp"
#include "hairflow/orientation_field.hpp"

namespace hairflow::synth {
namespace {

constexpr double kPi = std::numbers::pi;

PixelPoint centre_of(const SyntheticSpec& spec) {
  if (spec.center) return *spec.center;
  const double c = 0.5 * double(spec.size - 1);
  return {c, c};
}

// Intensity phase (in periods) whose level sets are the strands.
double stripe_phase(double flow_angle, double period, double x, double y) {
  const double nx = -std::sin(flow_angle), ny = std::cos(flow_angle);
  return (nx * x + ny * y) / period;
}

double phase_at(const SyntheticSpec& spec, double x, double y) {
  switch (spec.kind) {
    case SceneKind::stripes:
      return stripe_phase(spec.angle_rad, spec.period_px, x, y);
    case SceneKind::waves:
      return (y - spec.amplitude_px * std::sin(2.0 * kPi * x / spec.wavelength_px)) /
             spec.period_px;
    case SceneKind::circular: {
      const PixelPoint c = centre_of(spec);
      return std::hypot(x - c.x, y - c.y) / spec.period_px;
    }
    case SceneKind::parting: {
      const double angle = x < 0.5 * double(spec.size) ? 0.75 * kPi : 0.25 * kPi;
      return stripe_phase(angle, spec.period_px, x, y);
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(SceneKind kind) noexcept {
  switch (kind) {
    case SceneKind::stripes: return "stripes";
    case SceneKind::waves: return "waves";
    case SceneKind::circular: return "circular";
    case SceneKind::parting: return "parting";
  }
  return "unknown";
}

SceneKind scene_kind_from_string(std::string_view name) {
  for (auto k : {SceneKind::stripes, SceneKind::waves, SceneKind::circular, SceneKind::parting}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::invalid_argument, "kind", "unknown scene kind '" + std::string(name) + "'");
}

std::string_view to_string(Planner p) noexcept { return p == Planner::field ? "field" : "mesh"; }

void SyntheticSpec::validate() const {
  if (size < 32) throw Error(ErrorCode::invalid_argument, "size", "size must be >= 32");
  if (!(period_px > 0.0)) throw Error(ErrorCode::invalid_argument, "period_px", "must be > 0");
  if (kind == SceneKind::waves && !(wavelength_px > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "wavelength_px", "must be > 0");
  }
  if (!std::isfinite(angle_rad)) throw Error(ErrorCode::invalid_argument, "angle_rad", "must be finite");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::invalid_argument, "noise_sigma", "must be >= 0");
  if (!(contrast >= 0.0 && contrast <= 127.5)) {
    throw Error(ErrorCode::invalid_argument, "contrast", "must lie in [0, 127.5]");
  }
}

double truth_theta(const SyntheticSpec& spec, double x, double y) {
  switch (spec.kind) {
    case SceneKind::stripes:
      return wrap_pi(spec.angle_rad);
    case SceneKind::waves: {
      const double w = 2.0 * kPi / spec.wavelength_px;
      return wrap_pi(std::atan(spec.amplitude_px * w * std::cos(w * x)));
    }
    case SceneKind::circular: {
      const PixelPoint c = centre_of(spec);
      return wrap_pi(std::atan2(x - c.x, -(y - c.y)));
    }
    case SceneKind::parting:
      return x < 0.5 * double(spec.size) ? 0.75 * kPi : 0.25 * kPi;
  }
  return 0.0;
}

SyntheticScene generate(const SyntheticSpec& spec) {
  spec.validate();
  const std::uint32_t n = spec.size;
  SyntheticScene s{IntensityImage(n, n), RgbImage(n, n),
                   OrientationField{RealRaster(n, n), RealRaster(n, n, 1.0)},
                   BinaryMask(n, n, 1), OrganizedCloud(n, n)};
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);
  const PixelPoint c = centre_of(spec);
  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t x = 0; x < n; ++x) {
      double v = 127.5 + spec.contrast * std::sin(2.0 * kPi * phase_at(spec, x, y));
      if (spec.noise_sigma > 0.0) v += noise(rng);
      v = std::clamp(v, 0.0, 255.0);
      s.image(x, y) = v;
      const auto g = static_cast<std::uint8_t>(std::lround(v));
      s.rgb(x, y) = Rgb{g, g, g};
      s.truth.theta(x, y) = truth_theta(spec, x, y);
      if (spec.kind == SceneKind::circular && x == std::lround(c.x) && y == std::lround(c.y)) {
        s.truth.coherence(x, y) = 0.0;
      }
      s.cloud.set(x, y, Point3{(x - 0.5 * n) * 1e-3, (y - 0.5 * n) * 1e-3, 1.0});
    }
  }
  return s;
}

std::vector<PixelPoint> default_starts(const SyntheticSpec& spec, std::size_t count,
                                       std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const double margin = std::max(8.0, 0.1 * spec.size);
  std::uniform_real_distribution<double> ux(margin, spec.size - 1 - margin);
  std::uniform_real_distribution<double> uy(margin, 0.6 * spec.size);
  std::vector<PixelPoint> starts;
  starts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // whole-pixel starts keep field and mesh planners on the same pixel
    starts.push_back({std::round(ux(rng)), std::round(uy(rng))});
  }
  return starts;
}

std::vector<ComparisonRow> compare_planners(const SyntheticScene& scene,
                                            const std::vector<PixelPoint>& starts,
                                            const CompareOptions& options) {
  const OrientationField estimated = field_from_image(scene.image);
  std::vector<ComparisonRow> rows;
  for (const PixelPoint& start : starts) {
    for (Planner planner : {Planner::field, Planner::mesh}) {
      const PixelPath path = planner == Planner::field
                                 ? plan(estimated, scene.mask, start, options.path)
                                 : plan_mesh(scene.mask, scene.cloud, start, options.goal_fraction);
      ComparisonRow row;
      row.planner = planner;
      row.start = start;
      row.points = path.points.size();
      row.metrics = metrics(path, scene.truth);
      row.dx = path.points.back().x - path.points.front().x;
      row.dy = path.points.back().y - path.points.front().y;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ComparisonRow> compare_planners(const SyntheticSpec& spec,
                                            const std::vector<PixelPoint>& starts,
                                            const CompareOptions& options) {
  return compare_planners(generate(spec), starts, options);
}

std::string to_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "planner,start_x,start_y,points,length_px,mean_alignment,mean_turn_rad,dx,dy,"
         "terminated_by\n";
  for (const auto& r : rows) {
    out << to_string(r.planner) << ',' << r.start.x << ',' << r.start.y << ',' << r.points << ','
        << r.metrics.length_px << ',';
    if (r.metrics.mean_alignment) out << *r.metrics.mean_alignment;
    out << ',';
    if (r.metrics.mean_turn_rad) out << *r.metrics.mean_turn_rad;
    out << ',' << r.dx << ',' << r.dy << ',';
    if (r.metrics.terminated_by) out << hairflow::to_string(*r.metrics.terminated_by);
    out << '\n';
  }
  return out.str();
}

}  // namespace hairflow::synth
