#include "hairflow/path_planner.hpp"

#include <algorithm>
#include <cmath>

namespace hairflow {

void PathParams::validate() const {
  if (!(step_px > 0.0) || !std::isfinite(step_px)) {
    throw Error(ErrorCode::invalid_argument, "step_px", "step must be > 0");
  }
  if (max_steps < 1) throw Error(ErrorCode::invalid_argument, "max_steps", "must be >= 1");
  if (initial_heading) {
    const auto& h = *initial_heading;
    if (!std::isfinite(h[0]) || !std::isfinite(h[1]) || (h[0] == 0.0 && h[1] == 0.0)) {
      throw Error(ErrorCode::invalid_argument, "initial_heading", "heading must be a nonzero vector");
    }
  }
}

std::array<double, 2> step_direction(
    double theta, const std::optional<std::array<double, 2>>& previous) noexcept {
  std::array<double, 2> d{std::cos(theta), std::sin(theta)};
  bool flip;
  if (previous) {
    flip = d[0] * (*previous)[0] + d[1] * (*previous)[1] < 0.0;
  } else {
    flip = d[1] < 0.0 || (d[1] == 0.0 && d[0] < 0.0);
  }
  if (flip) d = {-d[0], -d[1]};
  return d;
}

PixelPath plan(const OrientationField& field, const BinaryMask& mask, const PixelPoint& start,
               const PathParams& params) {
  params.validate();
  require_same_shape(field.theta, mask, "mask");
  if (!std::isfinite(start.x) || !std::isfinite(start.y)) {
    throw Error(ErrorCode::invalid_argument, "start", "start must be finite");
  }
  const auto inside_hair = [&](const PixelPoint& p) {
    const auto [px, py] = nearest_pixel(p);
    return mask.contains(px, py) && mask(std::uint32_t(px), std::uint32_t(py)) != 0;
  };
  if (!inside_hair(start)) {
    throw Error(ErrorCode::start_outside_hair, "start", "start point is not on the hair mask");
  }

  PixelPath path;
  path.step_px = params.step_px;
  path.points.push_back(start);
  std::optional<std::array<double, 2>> previous = params.initial_heading;
  PixelPoint p = start;
  while (true) {
    if (path.points.size() - 1 >= params.max_steps) {
      path.terminated_by = Termination::step_cap;
      break;
    }
    const auto [px, py] = nearest_pixel(p);
    const double theta = field.theta(std::uint32_t(px), std::uint32_t(py));
    const auto d = step_direction(theta, previous);
    const PixelPoint next{p.x + params.step_px * d[0], p.y + params.step_px * d[1]};
    const auto [nx, ny] = nearest_pixel(next);
    if (!mask.contains(nx, ny)) {
      path.terminated_by = Termination::image_exit;
      break;
    }
    if (!mask(std::uint32_t(nx), std::uint32_t(ny))) {
      path.terminated_by = Termination::mask_exit;
      break;
    }
    path.points.push_back(next);
    previous = d;
    p = next;
  }
  return path;
}

namespace {

PathMetrics compute_metrics(const PixelPath& path, const OrientationField* field) {
  PathMetrics m;
  m.terminated_by = path.terminated_by;
  if (path.points.empty()) {
    throw Error(ErrorCode::invalid_argument, "path", "path has no points");
  }
  for (std::size_t i = 0; field && i < path.points.size(); ++i) {
    const auto [px, py] = nearest_pixel(path.points[i]);
    if (!field->theta.contains(px, py)) {
      throw Error(ErrorCode::value_out_of_range, "path", "path point outside the field", i);
    }
  }
  if (path.points.size() < 2) return m;

  double align_sum = 0.0, turn_sum = 0.0;
  std::size_t steps = 0, turns = 0;
  std::optional<std::array<double, 2>> prev_dir;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const PixelPoint& a = path.points[i];
    const PixelPoint& b = path.points[i + 1];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    m.length_px += len;
    if (len == 0.0) continue;
    const std::array<double, 2> dir{dx / len, dy / len};
    if (field) {
      const auto [mx, my] = nearest_pixel({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
      const double theta = field->theta(std::uint32_t(mx), std::uint32_t(my));
      align_sum += std::min(1.0, std::abs(dir[0] * std::cos(theta) + dir[1] * std::sin(theta)));
    }
    ++steps;
    if (prev_dir) {
      const double cross = (*prev_dir)[0] * dir[1] - (*prev_dir)[1] * dir[0];
      const double dot = (*prev_dir)[0] * dir[0] + (*prev_dir)[1] * dir[1];
      turn_sum += std::abs(std::atan2(cross, dot));
      ++turns;
    }
    prev_dir = dir;
  }
  if (field && steps > 0) m.mean_alignment = align_sum / double(steps);
  if (turns > 0) m.mean_turn_rad = turn_sum / double(turns);
  return m;
}

}  // namespace

PathMetrics metrics(const PixelPath& path, const OrientationField& field) {
  return compute_metrics(path, &field);
}

PathMetrics metrics(const PixelPath& path) { return compute_metrics(path, nullptr); }

}  // namespace hairflow
