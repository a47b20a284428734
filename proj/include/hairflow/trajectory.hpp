#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow {

/// Total-least-squares plane through the visible hair, normal facing the
/// camera (normal.z() < 0 in the camera frame).
struct HairPlane {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = -Eigen::Vector3d::UnitZ();
};

struct TrajectoryParams {
  double speed_mps = 0.03;
  double lookup_radius_px = 5.0;
  /// Camera-to-robot transform applied to every pose; identity by default.
  Eigen::Isometry3d extrinsic = Eigen::Isometry3d::Identity();

  void validate() const;
};

HairPlane fit_plane(const std::vector<Eigen::Vector3d>& points);
/// Plane through all masked pixels with valid depth.
HairPlane fit_plane(const BinaryMask& mask, const OrganizedCloud& cloud);

/// Cloud XYZ under each path point: nearest pixel, else the nearest valid
/// pixel within lookup_radius_px (ties to the smaller row-major index), else
/// the point is dropped. Throws too_few_3d_points below two survivors.
std::vector<Eigen::Vector3d> path_xyz(const PixelPath& path, const OrganizedCloud& cloud,
                                      const TrajectoryParams& params = {});

/// End-effector rotations, columns [x y z]: z = -normal; y is the path
/// tangent (p[t-1] - p[t+1], one-sided at the ends) projected onto the plane
/// and normalized; x = y cross z. Throws degenerate_tangent with the index
/// when the projected tangent vanishes.
std::vector<Eigen::Matrix3d> frames(const std::vector<Eigen::Vector3d>& xyz,
                                    const HairPlane& plane);

/// Constant Cartesian speed: t_i = arc length to i / speed. Throws
/// zero_length_segment on consecutive duplicates.
std::vector<double> time_parameterize(const std::vector<Eigen::Vector3d>& xyz,
                                      const TrajectoryParams& params = {});

/// Unit quaternion (w, x, y, z) with w >= 0.
std::array<double, 4> to_quaternion(const Eigen::Matrix3d& rotation);
Eigen::Matrix3d from_quaternion(const std::array<double, 4>& wxyz);

PosePath generate(const PixelPath& path, const BinaryMask& mask, const OrganizedCloud& cloud,
                  const TrajectoryParams& params = {});

}  // namespace hairflow
