#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "hairflow/coherence_filter.hpp"
#include "hairflow/io.hpp"
#include "hairflow/mesh_planner.hpp"
#include "hairflow/orientation_field.hpp"
#include "hairflow/path_planner.hpp"
#include "hairflow/spatial_refine.hpp"
#include "hairflow/synth.hpp"
#include "hairflow/temporal_mask.hpp"
#include "hairflow/trajectory.hpp"

namespace py = pybind11;
using namespace hairflow;

namespace {

using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

void require_ndim(const py::array& a, py::ssize_t ndim, const char* name) {
  if (a.ndim() != ndim) {
    throw Error(ErrorCode::dimension_mismatch, name,
                std::string(name) + " must have " + std::to_string(ndim) + " dimensions");
  }
}

template <typename R>
R raster_from(const py::array_t<typename R::value_type, py::array::c_style | py::array::forcecast>& a,
              const char* name) {
  require_ndim(a, 2, name);
  const auto* p = a.data();
  return R(std::uint32_t(a.shape(1)), std::uint32_t(a.shape(0)),
           std::vector<typename R::value_type>(p, p + a.size()));
}

template <typename R>
py::array_t<typename R::value_type> to_array(const R& r) {
  py::array_t<typename R::value_type> out({py::ssize_t(r.height()), py::ssize_t(r.width())});
  std::copy(r.data().begin(), r.data().end(), out.mutable_data());
  return out;
}

BinaryMask mask_from(const py::array& a) {
  const U8 m = U8::ensure(a);
  require_ndim(m, 2, "mask");
  BinaryMask out(std::uint32_t(m.shape(1)), std::uint32_t(m.shape(0)));
  for (py::ssize_t i = 0; i < m.size(); ++i) out[std::size_t(i)] = m.data()[i] != 0;
  return out;
}

py::array_t<bool> mask_to(const BinaryMask& m) {
  py::array_t<bool> out({py::ssize_t(m.height()), py::ssize_t(m.width())});
  for (std::size_t i = 0; i < m.size(); ++i) out.mutable_data()[i] = m[i] != 0;
  return out;
}

// (H, W, 3) float array, NaN rows mark invalid pixels.
OrganizedCloud cloud_from(const F64& a) {
  require_ndim(a, 3, "cloud");
  if (a.shape(2) != 3) throw Error(ErrorCode::dimension_mismatch, "cloud", "last axis must be 3");
  const std::uint32_t w = std::uint32_t(a.shape(1)), h = std::uint32_t(a.shape(0));
  OrganizedCloud c(w, h);
  const double* p = a.data();
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t x = 0; x < w; ++x, p += 3)
      if (!std::isnan(p[0]) && !std::isnan(p[1]) && !std::isnan(p[2])) c.set(x, y, {p[0], p[1], p[2]});
  return c;
}

F64 cloud_to(const OrganizedCloud& c) {
  F64 out({py::ssize_t(c.height()), py::ssize_t(c.width()), py::ssize_t(3)});
  double* p = out.mutable_data();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::uint32_t y = 0; y < c.height(); ++y)
    for (std::uint32_t x = 0; x < c.width(); ++x, p += 3) {
      const bool ok = c.valid(x, y);
      const Point3& q = c.point(x, y);
      p[0] = ok ? q.x : nan;
      p[1] = ok ? q.y : nan;
      p[2] = ok ? q.z : nan;
    }
  return out;
}

RgbImage rgb_from(const U8& a) {
  require_ndim(a, 3, "rgb");
  if (a.shape(2) != 3) throw Error(ErrorCode::dimension_mismatch, "rgb", "last axis must be 3");
  RgbImage img(std::uint32_t(a.shape(1)), std::uint32_t(a.shape(0)));
  const std::uint8_t* p = a.data();
  for (std::size_t i = 0; i < img.size(); ++i, p += 3) img[i] = {p[0], p[1], p[2]};
  return img;
}

F64 points_to(const PixelPath& path) {
  F64 out({py::ssize_t(path.points.size()), py::ssize_t(2)});
  double* p = out.mutable_data();
  for (const auto& q : path.points) {
    *p++ = q.x;
    *p++ = q.y;
  }
  return out;
}

PixelPath path_from(const F64& pts) {
  require_ndim(pts, 2, "path");
  if (pts.shape(1) != 2) throw Error(ErrorCode::dimension_mismatch, "path", "points must be (N, 2)");
  PixelPath path;
  for (py::ssize_t i = 0; i < pts.shape(0); ++i) path.points.push_back({pts.at(i, 0), pts.at(i, 1)});
  return path;
}

py::dict path_result(const PixelPath& path) {
  py::dict d;
  d["points"] = points_to(path);
  d["terminated_by"] = path.terminated_by ? py::object(py::str(std::string(to_string(*path.terminated_by))))
                                          : py::object(py::none());
  return d;
}

ConvexityConvention convention_from(const std::string& s) {
  if (s == "weickert") return ConvexityConvention::weickert;
  if (s == "as-written") return ConvexityConvention::as_written;
  throw Error(ErrorCode::invalid_argument, "convention", "expected 'weickert' or 'as-written'");
}

}  // namespace

PYBIND11_MODULE(_hairflow, m) {
  static py::exception<Error> error(m, "HairflowError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object args = py::make_tuple(std::string(to_string(e.code())), e.field(), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<TemporalMaskFilter>(m, "TemporalMaskFilter")
      .def(py::init<double>(), py::arg("alpha") = 0.9)
      .def("update", [](TemporalMaskFilter& f, const F64& frame) {
        f.update(raster_from<SoftMask>(frame, "frame"));
      })
      .def_property_readonly("accum", [](const TemporalMaskFilter& f) -> py::object {
        if (!f.accum()) return py::none();
        return to_array(*f.accum());
      })
      .def("binarize", [](const TemporalMaskFilter& f, double threshold) -> py::object {
        if (!f.accum()) return py::none();
        return mask_to(binarize(*f.accum(), threshold));
      }, py::arg("threshold") = 0.5);

  m.def("refine", [](const py::array& mask, const F64& cloud, const U8& rgb) {
    return mask_to(refine(mask_from(mask), cloud_from(cloud), rgb_from(rgb)));
  }, py::arg("mask"), py::arg("cloud"), py::arg("rgb"));

  m.def("shock_filter", [](const F64& img, int k_delta, int k_e, int k_m, double c_blend, int iterations,
                           const std::string& convention) {
    CoherenceParams p{k_delta, k_e, k_m, c_blend, iterations, convention_from(convention)};
    return to_array(shock_iterate(raster_from<IntensityImage>(img, "image"), p));
  }, py::arg("image"), py::arg("k_delta") = 7, py::arg("k_e") = 11, py::arg("k_m") = 3,
     py::arg("c_blend") = 0.9, py::arg("iterations") = 3, py::arg("convention") = "weickert");

  m.def("orientation_field", [](const F64& img, int k_delta, int k_E, bool with_coherence) {
    const IntensityImage in = raster_from<IntensityImage>(img, "image");
    const OrientationParams op{k_delta, k_E};
    const OrientationField f = with_coherence ? field_from_image(in, {}, op)
                                              : orientation(structure_tensor(in, op));
    return py::make_tuple(to_array(f.theta), to_array(f.coherence));
  }, py::arg("image"), py::arg("k_delta") = 3, py::arg("k_E") = 5, py::arg("coherence_filter") = true);

  m.def("plan", [](const F64& theta, const py::array& mask, std::pair<double, double> start, double step_px,
                   std::size_t max_steps) {
    const RealRaster t = raster_from<RealRaster>(theta, "theta");
    const OrientationField field{t, RealRaster(t.width(), t.height(), 1.0)};
    PathParams p;
    p.step_px = step_px;
    p.max_steps = max_steps;
    return path_result(plan(field, mask_from(mask), {start.first, start.second}, p));
  }, py::arg("theta"), py::arg("mask"), py::arg("start"), py::arg("step_px") = 6.0,
     py::arg("max_steps") = 1000);

  m.def("plan_mesh", [](const py::array& mask, const F64& cloud, std::pair<double, double> start,
                        double goal_frac, double edge_max_m) {
    return path_result(plan_mesh(mask_from(mask), cloud_from(cloud), {start.first, start.second},
                                 goal_frac, edge_max_m));
  }, py::arg("mask"), py::arg("cloud"), py::arg("start"), py::arg("goal_frac") = kDefaultGoalFraction,
     py::arg("edge_max_m") = kDefaultEdgeMaxM);

  m.def("trajectory", [](const F64& points, const py::array& mask, const F64& cloud, double speed_mps,
                         double lookup_radius_px) {
    TrajectoryParams p;
    p.speed_mps = speed_mps;
    p.lookup_radius_px = lookup_radius_px;
    const PosePath poses = generate(path_from(points), mask_from(mask), cloud_from(cloud), p);
    const py::ssize_t n = py::ssize_t(poses.poses.size());
    F64 pos({n, py::ssize_t(3)}), quat({n, py::ssize_t(4)}), t(n);
    for (py::ssize_t i = 0; i < n; ++i) {
      const Pose& q = poses.poses[std::size_t(i)];
      for (int k = 0; k < 3; ++k) pos.mutable_at(i, k) = q.position[k];
      for (int k = 0; k < 4; ++k) quat.mutable_at(i, k) = q.orientation_quat[k];
      t.mutable_at(i) = q.time_s;
    }
    py::dict d;
    d["position"] = pos;
    d["orientation_quat"] = quat;
    d["time_s"] = t;
    return d;
  }, py::arg("points"), py::arg("mask"), py::arg("cloud"), py::arg("speed_mps") = 0.03,
     py::arg("lookup_radius_px") = 5.0);

  m.def("synth", [](const std::string& kind, std::uint32_t size, double angle_rad, double period_px,
                    double noise_sigma, std::uint64_t seed) {
    synth::SyntheticSpec s;
    s.kind = synth::scene_kind_from_string(kind);
    s.size = size;
    s.angle_rad = angle_rad;
    s.period_px = period_px;
    s.noise_sigma = noise_sigma;
    s.seed = seed;
    const synth::SyntheticScene sc = synth::generate(s);
    py::dict d;
    d["image"] = to_array(sc.image);
    d["truth"] = to_array(sc.truth.theta);
    d["mask"] = mask_to(sc.mask);
    d["cloud"] = cloud_to(sc.cloud);
    return d;
  }, py::arg("kind") = "stripes", py::arg("size") = 128, py::arg("angle_rad") = 0.0,
     py::arg("period_px") = 12.0, py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);

  m.def("compare_planners_csv", [](const std::string& kind, std::uint32_t size, std::size_t starts,
                                   std::uint64_t seed) {
    synth::SyntheticSpec s;
    s.kind = synth::scene_kind_from_string(kind);
    s.size = size;
    return synth::to_csv(synth::compare_planners(s, synth::default_starts(s, starts, seed)));
  }, py::arg("kind"), py::arg("size") = 128, py::arg("starts") = 20, py::arg("seed") = 1);

  m.def("read_orf", [](const std::string& bytes) {
    const OrientationField f = io::orf_from_bytes(bytes);
    return py::make_tuple(to_array(f.theta), to_array(f.coherence));
  }, py::arg("data"));
}
