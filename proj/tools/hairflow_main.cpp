#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hairflow/color.hpp"
#include "hairflow/io.hpp"
#include "hairflow/mesh_planner.hpp"
#include "hairflow/orientation_field.hpp"
#include "hairflow/path_planner.hpp"
#include "hairflow/service.hpp"
#include "hairflow/spatial_refine.hpp"
#include "hairflow/synth.hpp"
#include "hairflow/temporal_mask.hpp"
#include "hairflow/trajectory.hpp"

// after Eigen: resolv.h (pulled in by httplib) defines _res
#include "httplib.h"

namespace fs = std::filesystem;
using namespace hairflow;

namespace {

PixelPoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "start", "expected x,y but got '" + text + "'");
  }
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_argument, "start", "expected x,y but got '" + text + "'");
  }
}

void draw_line(RgbImage& img, PixelPoint a, PixelPoint b, Rgb colour) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int n = std::max(1, int(std::ceil(len * 2)));
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    const double x = std::floor(a.x + t * (b.x - a.x) + 0.5);
    const double y = std::floor(a.y + t * (b.y - a.y) + 0.5);
    if (x >= 0 && y >= 0 && x < img.width() && y < img.height()) {
      img(std::uint32_t(x), std::uint32_t(y)) = colour;
    }
  }
}

RgbImage overlay(const OrientationField& field, const PixelPath& path) {
  const Gray8Image preview = io::orientation_preview(field);
  RgbImage out(preview.width(), preview.height());
  for (std::size_t i = 0; i < preview.size(); ++i) out[i] = Rgb{preview[i], preview[i], preview[i]};
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    draw_line(out, path.points[i - 1], path.points[i], Rgb{255, 0, 0});
  }
  if (!path.points.empty()) draw_line(out, path.points[0], path.points[0], Rgb{0, 255, 0});
  return out;
}

synth::SyntheticScene load_scene(const fs::path& dir) {
  IntensityImage image = io::intensity_from_gray(io::load_pgm(dir / "image.pgm"));
  RgbImage rgb(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto g = static_cast<std::uint8_t>(std::lround(std::clamp(image[i], 0.0, 255.0)));
    rgb[i] = Rgb{g, g, g};
  }
  return synth::SyntheticScene{std::move(image), std::move(rgb), io::load_orf(dir / "truth.orf"),
                               io::mask_from_gray(io::load_pgm(dir / "mask.pgm")),
                               io::load_ocd(dir / "cloud.ocd")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hairflow: hair orientation fields and combing trajectories"};
  app.require_subcommand(1);

  // mask-filter
  auto* mf = app.add_subcommand("mask-filter", "temporal smoothing of soft masks");
  double mf_alpha = TemporalMaskFilter::kDefaultAlpha, mf_threshold = 0.5;
  std::vector<std::string> mf_frames;
  std::string mf_out;
  mf->add_option("--alpha", mf_alpha);
  mf->add_option("--threshold", mf_threshold);
  mf->add_option("frames", mf_frames)->required()->check(CLI::ExistingFile);
  mf->add_option("-o,--output", mf_out)->required();

  // refine
  auto* rf = app.add_subcommand("refine", "largest component plus depth/hue expansion");
  std::string rf_mask, rf_cloud, rf_rgb, rf_out;
  rf->add_option("--mask", rf_mask)->required();
  rf->add_option("--cloud", rf_cloud)->required();
  rf->add_option("--rgb", rf_rgb)->required();
  rf->add_option("-o,--output", rf_out)->required();

  // coherence
  auto* co = app.add_subcommand("coherence", "coherence-enhancing shock filter");
  CoherenceParams co_params;
  std::string co_convention = "weickert", co_in, co_out;
  co->add_option("--kd", co_params.k_delta);
  co->add_option("--ke", co_params.k_e);
  co->add_option("--km", co_params.k_m);
  co->add_option("--blend", co_params.c_blend);
  co->add_option("--iters", co_params.iterations);
  co->add_option("--convention", co_convention)->check(CLI::IsMember({"as-written", "weickert"}));
  co->add_option("input", co_in)->required();
  co->add_option("-o,--output", co_out)->required();

  // orient
  auto* orc = app.add_subcommand("orient", "orientation field of a grayscale image");
  OrientationParams or_params;
  std::string or_in, or_out, or_preview;
  bool or_with_coherence = false;
  orc->add_option("--kd", or_params.k_delta);
  orc->add_option("--ke", or_params.k_E);
  orc->add_flag("--with-coherence", or_with_coherence, "run the shock filter first");
  orc->add_option("input", or_in)->required();
  orc->add_option("-o,--output", or_out)->required();
  orc->add_option("--preview", or_preview);

  // plan
  auto* pl = app.add_subcommand("plan", "field-following path from a start point");
  std::string pl_field, pl_mask, pl_start, pl_out, pl_overlay;
  PathParams pl_params;
  pl->add_option("--field", pl_field)->required();
  pl->add_option("--mask", pl_mask)->required();
  pl->add_option("--start", pl_start)->required();
  pl->add_option("--k", pl_params.step_px, "step length in pixels");
  pl->add_option("--max-steps", pl_params.max_steps);
  pl->add_option("-o,--output", pl_out)->required();
  pl->add_option("--overlay", pl_overlay);

  // plan-mesh
  auto* pm = app.add_subcommand("plan-mesh", "shortest downward path over the hair surface");
  std::string pm_mask, pm_cloud, pm_start, pm_out;
  double pm_goal = kDefaultGoalFraction, pm_edge = kDefaultEdgeMaxM;
  pm->add_option("--mask", pm_mask)->required();
  pm->add_option("--cloud", pm_cloud)->required();
  pm->add_option("--start", pm_start)->required();
  pm->add_option("--goal-frac", pm_goal);
  pm->add_option("--edge-max", pm_edge);
  pm->add_option("-o,--output", pm_out)->required();

  // traject
  auto* tr = app.add_subcommand("traject", "time-stamped end-effector poses for a path");
  std::string tr_path, tr_mask, tr_cloud, tr_out;
  TrajectoryParams tr_params;
  tr->add_option("--path", tr_path)->required();
  tr->add_option("--mask", tr_mask)->required();
  tr->add_option("--cloud", tr_cloud)->required();
  tr->add_option("--speed", tr_params.speed_mps);
  tr->add_option("--radius", tr_params.lookup_radius_px);
  tr->add_option("-o,--output", tr_out)->required();

  // synth
  auto* sy = app.add_subcommand("synth", "write a synthetic scene");
  synth::SyntheticSpec sy_spec;
  std::string sy_kind = "stripes", sy_out;
  double sy_angle_deg = 0.0;
  sy->add_option("--kind", sy_kind)->check(CLI::IsMember({"stripes", "waves", "circular", "parting"}));
  sy->add_option("--size", sy_spec.size);
  sy->add_option("--seed", sy_spec.seed);
  sy->add_option("--angle", sy_angle_deg, "stripe flow angle in degrees");
  sy->add_option("--period", sy_spec.period_px);
  sy->add_option("--noise", sy_spec.noise_sigma);
  sy->add_option("-o,--output", sy_out)->required();

  // eval
  auto* ev = app.add_subcommand("eval", "compare both planners on a scene directory");
  std::string ev_scene, ev_out;
  std::size_t ev_starts = 20;
  std::uint64_t ev_seed = 1;
  ev->add_option("--scene", ev_scene)->required()->check(CLI::ExistingDirectory);
  ev->add_option("--starts", ev_starts);
  ev->add_option("--seed", ev_seed);
  ev->add_option("-o,--output", ev_out)->required();

  // serve
  auto* sv = app.add_subcommand("serve", "HTTP session service");
  int sv_port = 8080;
  std::string sv_host = "0.0.0.0", sv_static;
  sv->add_option("--port", sv_port);
  sv->add_option("--host", sv_host);
  sv->add_option("--static", sv_static)->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mf) {
      TemporalMaskFilter filter(mf_alpha);
      for (const auto& f : mf_frames) filter.update(io::soft_mask_from_gray(io::load_pgm(f)));
      io::save_pgm(mf_out, io::mask_to_gray(binarize(*filter.accum(), mf_threshold)));
    } else if (*rf) {
      const BinaryMask refined = refine(io::mask_from_gray(io::load_pgm(rf_mask)),
                                        io::load_ocd(rf_cloud), io::load_ppm(rf_rgb));
      io::save_pgm(rf_out, io::mask_to_gray(refined));
    } else if (*co) {
      if (co_convention == "as-written") co_params.convention = ConvexityConvention::as_written;
      const IntensityImage out = shock_iterate(io::intensity_from_gray(io::load_pgm(co_in)), co_params);
      io::save_pgm(co_out, io::intensity_to_gray(out));
    } else if (*orc) {
      const IntensityImage img = io::intensity_from_gray(io::load_pgm(or_in));
      const OrientationField field = or_with_coherence ? field_from_image(img, CoherenceParams{}, or_params)
                                                       : orientation(structure_tensor(img, or_params));
      io::save_orf(or_out, field);
      if (!or_preview.empty()) io::save_pgm(or_preview, io::orientation_preview(field));
    } else if (*pl) {
      const OrientationField field = io::load_orf(pl_field);
      const PixelPath path = plan(field, io::mask_from_gray(io::load_pgm(pl_mask)),
                                  parse_point(pl_start), pl_params);
      io::save_json(pl_out, io::path_to_json(path));
      if (!pl_overlay.empty()) io::save_ppm(pl_overlay, overlay(field, path));
    } else if (*pm) {
      const PixelPath path = plan_mesh(io::mask_from_gray(io::load_pgm(pm_mask)), io::load_ocd(pm_cloud),
                                       parse_point(pm_start), pm_goal, pm_edge);
      io::save_json(pm_out, io::path_to_json(path));
    } else if (*tr) {
      const PosePath poses = generate(io::path_from_json(io::load_json(tr_path)),
                                      io::mask_from_gray(io::load_pgm(tr_mask)), io::load_ocd(tr_cloud),
                                      tr_params);
      io::save_json(tr_out, io::poses_to_json(poses));
    } else if (*sy) {
      sy_spec.kind = synth::scene_kind_from_string(sy_kind);
      sy_spec.angle_rad = sy_angle_deg * std::numbers::pi / 180.0;
      const synth::SyntheticScene scene = synth::generate(sy_spec);
      const fs::path dir = sy_out;
      fs::create_directories(dir);
      io::save_pgm(dir / "image.pgm", io::intensity_to_gray(scene.image));
      io::save_orf(dir / "truth.orf", scene.truth);
      io::save_pgm(dir / "mask.pgm", io::mask_to_gray(scene.mask));
      io::save_ocd(dir / "cloud.ocd", scene.cloud);
    } else if (*ev) {
      const synth::SyntheticScene scene = load_scene(ev_scene);
      synth::SyntheticSpec frame;
      frame.size = std::min(scene.image.width(), scene.image.height());
      const auto starts = synth::default_starts(frame, ev_starts, ev_seed);
      std::ofstream out(ev_out, std::ios::binary);
      out << synth::to_csv(synth::compare_planners(scene, starts));
      if (!out) throw Error(ErrorCode::io_failure, "output", "cannot write " + ev_out);
    } else if (*sv) {
      std::optional<fs::path> data_dir;
      if (const char* env = std::getenv("HAIRFLOW_DATA_DIR"); env && *env) data_dir = fs::path(env);
      service::Service svc(data_dir);
      httplib::Server server;
      service::mount(svc, server,
                     sv_static.empty() ? std::nullopt : std::optional<fs::path>(sv_static));
      std::cerr << "listening on " << sv_host << ':' << sv_port << '\n';
      if (!server.listen(sv_host, sv_port)) {
        std::cerr << "error: cannot listen on port " << sv_port << '\n';
        return 1;
      }
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
