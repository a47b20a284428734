#include "hairflow/trajectory.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hairflow {

void TrajectoryParams::validate() const {
  if (!(speed_mps > 0.0) || !std::isfinite(speed_mps)) {
    throw Error(ErrorCode::invalid_argument, "speed_mps", "speed must be > 0");
  }
  if (!(lookup_radius_px >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "lookup_radius_px", "radius must be >= 0");
  }
}

HairPlane fit_plane(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::degenerate_plane, "points", "need at least 3 points");
  }
  HairPlane plane;
  for (const auto& p : points) plane.centroid += p;
  plane.centroid /= double(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - plane.centroid;
    cov += d * d.transpose();
  }
  cov /= double(points.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  if (!(lambda(2) > 0.0) || lambda(1) <= 1e-12 * lambda(2)) {
    throw Error(ErrorCode::degenerate_plane, "points", "points are collinear or coincident");
  }
  Eigen::Vector3d n = eig.eigenvectors().col(0).normalized();
  if (std::abs(n.z()) < 1e-12) {
    throw Error(ErrorCode::degenerate_plane, "points", "plane is seen edge-on by the camera");
  }
  if (n.z() > 0.0) n = -n;
  plane.normal = n;
  return plane;
}

HairPlane fit_plane(const BinaryMask& mask, const OrganizedCloud& cloud) {
  require_same_shape(cloud, mask, "cloud");
  std::vector<Eigen::Vector3d> pts;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && cloud.valid(i)) {
      const Point3& p = cloud.point(i);
      pts.emplace_back(p.x, p.y, p.z);
    }
  }
  return fit_plane(pts);
}

std::vector<Eigen::Vector3d> path_xyz(const PixelPath& path, const OrganizedCloud& cloud,
                                      const TrajectoryParams& params) {
  params.validate();
  const long w = cloud.width(), h = cloud.height();
  const long r = long(std::floor(params.lookup_radius_px));
  const double r2 = params.lookup_radius_px * params.lookup_radius_px;
  std::vector<Eigen::Vector3d> out;
  out.reserve(path.points.size());
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const auto [px, py] = nearest_pixel(path.points[i]);
    if (px < 0 || py < 0 || px >= w || py >= h) {
      throw Error(ErrorCode::value_out_of_range, "path", "path point outside the cloud", i);
    }
    std::optional<std::size_t> hit;
    if (cloud.valid(std::uint32_t(px), std::uint32_t(py))) {
      hit = std::size_t(py * w + px);
    } else {
      long best_d2 = -1;
      for (long dy = -r; dy <= r; ++dy) {
        for (long dx = -r; dx <= r; ++dx) {
          const long qx = px + dx, qy = py + dy;
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          const long d2 = dx * dx + dy * dy;
          if (double(d2) > r2) continue;
          if (!cloud.valid(std::uint32_t(qx), std::uint32_t(qy))) continue;
          const std::size_t idx = std::size_t(qy * w + qx);
          // scan is row-major, so '<' keeps the smaller index on ties
          if (best_d2 < 0 || d2 < best_d2) {
            best_d2 = d2;
            hit = idx;
          }
        }
      }
    }
    if (hit) {
      const Point3& p = cloud.point(*hit);
      out.emplace_back(p.x, p.y, p.z);
    }
  }
  if (out.size() < 2) {
    throw Error(ErrorCode::too_few_3d_points, "path",
                "fewer than 2 path points have depth within the lookup radius");
  }
  return out;
}

std::vector<Eigen::Matrix3d> frames(const std::vector<Eigen::Vector3d>& xyz,
                                    const HairPlane& plane) {
  const std::size_t n = xyz.size();
  if (n < 2) throw Error(ErrorCode::too_few_3d_points, "xyz", "need at least 2 points");
  const Eigen::Vector3d hn = plane.normal.normalized();
  const Eigen::Vector3d z_axis = -hn;
  std::vector<Eigen::Matrix3d> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Vector3d v;
    if (t == 0) {
      v = xyz[0] - xyz[1];
    } else if (t == n - 1) {
      v = xyz[n - 2] - xyz[n - 1];
    } else {
      v = xyz[t - 1] - xyz[t + 1];
    }
    const Eigen::Vector3d projected = v - v.dot(hn) * hn;
    const double len = projected.norm();
    if (len < 1e-9) {
      throw Error(ErrorCode::degenerate_tangent, "xyz",
                  "path tangent is parallel to the plane normal", t);
    }
    const Eigen::Vector3d y_axis = projected / len;
    const Eigen::Vector3d x_axis = y_axis.cross(z_axis);
    Eigen::Matrix3d r;
    r.col(0) = x_axis;
    r.col(1) = y_axis;
    r.col(2) = z_axis;
    out.push_back(r);
  }
  return out;
}

std::vector<double> time_parameterize(const std::vector<Eigen::Vector3d>& xyz,
                                      const TrajectoryParams& params) {
  params.validate();
  if (xyz.size() < 2) throw Error(ErrorCode::too_few_3d_points, "xyz", "need at least 2 points");
  std::vector<double> times(xyz.size(), 0.0);
  double arc = 0.0;
  for (std::size_t i = 1; i < xyz.size(); ++i) {
    const double seg = (xyz[i] - xyz[i - 1]).norm();
    if (seg == 0.0) {
      throw Error(ErrorCode::zero_length_segment, "xyz", "consecutive points coincide", i);
    }
    arc += seg;
    times[i] = arc / params.speed_mps;
  }
  return times;
}

std::array<double, 4> to_quaternion(const Eigen::Matrix3d& rotation) {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  std::array<double, 4> wxyz{q.w(), q.x(), q.y(), q.z()};
  // q and -q are the same rotation; pick w >= 0, then the first nonzero
  // vector component positive when w == 0.
  bool negate = wxyz[0] < 0.0;
  if (wxyz[0] == 0.0) {
    for (int k = 1; k < 4; ++k) {
      if (wxyz[k] != 0.0) {
        negate = wxyz[k] < 0.0;
        break;
      }
    }
  }
  if (negate) {
    for (double& c : wxyz) c = -c;
  }
  return wxyz;
}

Eigen::Matrix3d from_quaternion(const std::array<double, 4>& wxyz) {
  return Eigen::Quaterniond(wxyz[0], wxyz[1], wxyz[2], wxyz[3]).normalized().toRotationMatrix();
}

PosePath generate(const PixelPath& path, const BinaryMask& mask, const OrganizedCloud& cloud,
                  const TrajectoryParams& params) {
  params.validate();
  const HairPlane plane = fit_plane(mask, cloud);
  const auto xyz = path_xyz(path, cloud, params);
  const auto rotations = frames(xyz, plane);
  const auto times = time_parameterize(xyz, params);

  PosePath out;
  out.poses.reserve(xyz.size());
  for (std::size_t i = 0; i < xyz.size(); ++i) {
    const Eigen::Vector3d p = params.extrinsic * xyz[i];
    const Eigen::Matrix3d r = params.extrinsic.linear() * rotations[i];
    Pose pose;
    pose.position = {p.x(), p.y(), p.z()};
    pose.orientation_quat = to_quaternion(r);
    pose.time_s = times[i];
    out.poses.push_back(pose);
  }
  return out;
}

}  // namespace hairflow
