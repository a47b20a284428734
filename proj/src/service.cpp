#include "hairflow/service.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "hairflow/color.hpp"
#include "hairflow/io.hpp"
#include "hairflow/mesh_planner.hpp"
#include "hairflow/orientation_field.hpp"
#include "hairflow/spatial_refine.hpp"
#include "hairflow/trajectory.hpp"

namespace hairflow::service {
namespace {

using nlohmann::json;

struct ApiException {
  ApiErrorCode code;
  std::string message;
};

[[noreturn]] void fail(ApiErrorCode code, std::string message) {
  throw ApiException{code, std::move(message)};
}

ApiErrorCode map_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::start_outside_hair: return ApiErrorCode::start_outside_hair;
    case ErrorCode::degenerate_plane: return ApiErrorCode::degenerate_plane;
    case ErrorCode::too_few_3d_points:
    case ErrorCode::no_valid_depth: return ApiErrorCode::too_few_3d_points;
    case ErrorCode::unreachable:
    case ErrorCode::empty_graph:
    case ErrorCode::empty_goal_set:
    case ErrorCode::empty_mask: return ApiErrorCode::no_path;
    case ErrorCode::degenerate_tangent:
    case ErrorCode::zero_length_segment: return ApiErrorCode::degenerate_trajectory;
    default: return ApiErrorCode::malformed_body;
  }
}

Response json_response(int status, const json& j) { return {status, "application/json", j.dump()}; }

Response error_response(ApiErrorCode code, const std::string& message) {
  const int status = http_status(code);
  return json_response(status, {{"status", status},
                                {"code", std::string(to_string(code))},
                                {"message", message}});
}

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  json j = io::parse_json(body);
  if (!j.is_object()) fail(ApiErrorCode::malformed_body, "request body must be a JSON object");
  return j;
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(ApiErrorCode::malformed_body, std::string(key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ApiErrorCode::malformed_body, std::string(key) + " must be finite");
  return d;
}

int int_or(const json& j, const char* key, int fallback) {
  const double d = number_or(j, key, fallback);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    fail(ApiErrorCode::malformed_body, std::string(key) + " must be an integer");
  }
  return int(d);
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) fail(ApiErrorCode::malformed_body, std::string("missing ") + key);
  return number_or(j, key, 0.0);
}

const json& object_or_empty(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key) || j.at(key).is_null()) return empty;
  if (!j.at(key).is_object()) fail(ApiErrorCode::malformed_body, std::string(key) + " must be an object");
  return j.at(key);
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream out;
  out << std::hex << rng() << rng();
  return out.str();
}

template <typename A, typename B>
void check_shape(const std::optional<A>& existing, const B& incoming, const char* what) {
  if (existing && (existing->width() != incoming.width() || existing->height() != incoming.height())) {
    fail(ApiErrorCode::malformed_body,
         std::string("dimensions differ from the session's ") + what);
  }
}

template <typename T>
void check_all_shapes(const Session& s, const T& incoming) {
  check_shape(s.rgb, incoming, "rgb");
  check_shape(s.cloud, incoming, "cloud");
  check_shape(s.mask, incoming, "mask");
}

StoredPath* find_path(Session& s, const std::string& pid) {
  for (auto& p : s.paths) {
    if (p.id == pid) return &p;
  }
  return nullptr;
}

json stored_path_json(const StoredPath& p) {
  return {{"path_id", p.id},
          {"planner", std::string(to_string(p.planner))},
          {"path", io::path_to_json(p.path)},
          {"metrics", metrics_to_json(p.metrics)}};
}

json summary_json(const Session& s) {
  json paths = json::array();
  for (const auto& p : s.paths) {
    paths.push_back({{"path_id", p.id},
                     {"planner", std::string(to_string(p.planner))},
                     {"points", p.path.points.size()},
                     {"metrics", metrics_to_json(p.metrics)},
                     {"has_trajectory", p.poses.has_value()}});
  }
  json j = {{"id", s.id},
            {"has_rgb", s.rgb.has_value()},
            {"has_cloud", s.cloud.has_value()},
            {"has_mask", s.mask.has_value()},
            {"field_id", s.field ? json(s.field_id) : json(nullptr)},
            {"paths", std::move(paths)},
            {"accepted", s.accepted ? json(*s.accepted) : json(nullptr)}};
  std::optional<std::pair<std::uint32_t, std::uint32_t>> dims;
  if (s.rgb) dims = {s.rgb->width(), s.rgb->height()};
  else if (s.mask) dims = {s.mask->width(), s.mask->height()};
  else if (s.cloud) dims = {s.cloud->width(), s.cloud->height()};
  j["width"] = dims ? json(dims->first) : json(nullptr);
  j["height"] = dims ? json(dims->second) : json(nullptr);
  return j;
}

PathMetrics metrics_from_json(const json& j) {
  PathMetrics m;
  m.length_px = j.value("length_px", 0.0);
  if (j.contains("mean_alignment") && j["mean_alignment"].is_number()) {
    m.mean_alignment = j["mean_alignment"].get<double>();
  }
  if (j.contains("mean_turn_rad") && j["mean_turn_rad"].is_number()) {
    m.mean_turn_rad = j["mean_turn_rad"].get<double>();
  }
  if (j.contains("terminated_by") && j["terminated_by"].is_string()) {
    const auto t = j["terminated_by"].get<std::string>();
    for (auto term : {Termination::mask_exit, Termination::image_exit, Termination::step_cap,
                      Termination::goal_reached}) {
      if (hairflow::to_string(term) == t) m.terminated_by = term;
    }
  }
  return m;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    i = end + 1;
  }
  return parts;
}

void require_method(std::string_view actual, std::string_view expected) {
  if (actual != expected) {
    fail(ApiErrorCode::method_not_allowed, "use " + std::string(expected));
  }
}

}  // namespace

std::string_view to_string(ApiErrorCode code) noexcept {
  switch (code) {
    case ApiErrorCode::unknown_session: return "unknown-session";
    case ApiErrorCode::unknown_path: return "unknown-path";
    case ApiErrorCode::unknown_route: return "unknown-route";
    case ApiErrorCode::method_not_allowed: return "method-not-allowed";
    case ApiErrorCode::missing_prerequisite: return "missing-prerequisite";
    case ApiErrorCode::start_outside_hair: return "start-outside-hair";
    case ApiErrorCode::degenerate_plane: return "degenerate-plane";
    case ApiErrorCode::too_few_3d_points: return "too-few-3d-points";
    case ApiErrorCode::no_path: return "no-path";
    case ApiErrorCode::degenerate_trajectory: return "degenerate-trajectory";
    case ApiErrorCode::malformed_body: return "malformed-body";
  }
  return "unknown";
}

int http_status(ApiErrorCode code) noexcept {
  switch (code) {
    case ApiErrorCode::unknown_session:
    case ApiErrorCode::unknown_path:
    case ApiErrorCode::unknown_route: return 404;
    case ApiErrorCode::method_not_allowed: return 405;
    case ApiErrorCode::missing_prerequisite: return 409;
    case ApiErrorCode::start_outside_hair:
    case ApiErrorCode::degenerate_plane:
    case ApiErrorCode::too_few_3d_points:
    case ApiErrorCode::no_path:
    case ApiErrorCode::degenerate_trajectory: return 422;
    case ApiErrorCode::malformed_body: return 400;
  }
  return 500;
}

json metrics_to_json(const PathMetrics& m) {
  return {{"length_px", m.length_px},
          {"mean_alignment", m.mean_alignment ? json(*m.mean_alignment) : json(nullptr)},
          {"mean_turn_rad", m.mean_turn_rad ? json(*m.mean_turn_rad) : json(nullptr)},
          {"terminated_by",
           m.terminated_by ? json(std::string(hairflow::to_string(*m.terminated_by)))
                           : json(nullptr)}};
}

Service::Service(std::optional<std::filesystem::path> data_dir) : data_dir_(std::move(data_dir)) {
  if (data_dir_) {
    std::filesystem::create_directories(*data_dir_);
    load_all();
  }
}

std::size_t Service::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::create_session() {
  auto s = std::make_shared<Session>();
  s->id = new_session_id();
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_[s->id] = s;
  }
  persist(*s);
  return json_response(201, {{"id", s->id}});
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    if (parts.empty() || parts[0] != "sessions") fail(ApiErrorCode::unknown_route, "no such route");
    if (parts.size() == 1) {
      require_method(method, "POST");
      return create_session();
    }
    const auto session = find(parts[1]);
    if (!session) fail(ApiErrorCode::unknown_session, "no session '" + parts[1] + "'");
    std::lock_guard lock(session->mutex);
    return dispatch(*session, method, parts, body);
  } catch (const ApiException& e) {
    return error_response(e.code, e.message);
  } catch (const Error& e) {
    return error_response(map_error(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(ApiErrorCode::malformed_body, e.what());
  }
}

Response Service::dispatch(Session& s, std::string_view method,
                           const std::vector<std::string>& parts, std::string_view body) {
  if (parts.size() == 2) {
    require_method(method, "GET");
    return json_response(200, summary_json(s));
  }
  const std::string& what = parts[2];

  if (parts.size() == 3 && (what == "rgb" || what == "cloud" || what == "mask")) {
    require_method(method, "PUT");
    if (what == "rgb") {
      RgbImage img = io::ppm_from_bytes(body);
      check_all_shapes(s, img);
      s.rgb = std::move(img);
      s.field.reset();
      s.field_id.clear();
    } else if (what == "cloud") {
      OrganizedCloud cloud = io::ocd_from_bytes(body);
      check_all_shapes(s, cloud);
      s.cloud = std::move(cloud);
    } else {
      BinaryMask mask = io::mask_from_gray(io::pgm_from_bytes(body));
      check_all_shapes(s, mask);
      s.mask = std::move(mask);
    }
    persist(s);
    return {204, "application/json", ""};
  }

  if (parts.size() == 3 && what == "segment-fallback") {
    require_method(method, "POST");
    const json req = parse_body(body);
    if (!s.rgb) fail(ApiErrorCode::missing_prerequisite, "upload rgb first");
    BinaryMask mask = segment_by_hsv(*s.rgb, number_or(req, "hue_lo", 0.0),
                                     number_or(req, "hue_hi", 360.0), number_or(req, "val_hi", 0.5));
    std::size_t hair = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) hair += mask[i] ? 1 : 0;
    const json summary = {{"width", mask.width()}, {"height", mask.height()}, {"hair_pixels", hair}};
    s.mask = std::move(mask);
    persist(s);
    return json_response(200, summary);
  }

  if (parts.size() == 3 && what == "orient") {
    require_method(method, "POST");
    const json req = parse_body(body);
    const json& cj = object_or_empty(req, "coherence");
    const json& oj = object_or_empty(req, "orientation");
    CoherenceParams cp;
    cp.k_delta = int_or(cj, "k_delta", cp.k_delta);
    cp.k_e = int_or(cj, "k_e", cp.k_e);
    cp.k_m = int_or(cj, "k_m", cp.k_m);
    cp.c_blend = number_or(cj, "c_blend", cp.c_blend);
    cp.iterations = int_or(cj, "iterations", cp.iterations);
    if (cj.contains("convention")) {
      const auto c = cj.at("convention").get<std::string>();
      if (c == "as-written") cp.convention = ConvexityConvention::as_written;
      else if (c != "weickert") fail(ApiErrorCode::malformed_body, "unknown convention");
    }
    OrientationParams op;
    op.k_delta = int_or(oj, "k_delta", op.k_delta);
    op.k_E = int_or(oj, "k_E", op.k_E);
    if (!s.rgb) fail(ApiErrorCode::missing_prerequisite, "upload rgb before computing a field");
    s.field = field_from_image(to_grayscale(*s.rgb), cp, op);
    s.field_id = "field-" + std::to_string(s.next_field++);
    persist(s);
    return json_response(200, {{"field_id", s.field_id},
                               {"width", s.field->width()},
                               {"height", s.field->height()}});
  }

  if (parts.size() == 3 && what == "field") {
    require_method(method, "GET");
    if (!s.field) fail(ApiErrorCode::missing_prerequisite, "no field computed yet");
    return {200, "application/octet-stream", io::to_bytes(*s.field)};
  }

  if (what == "paths" && parts.size() == 3) {
    require_method(method, "POST");
    const json req = parse_body(body);
    const PixelPoint start{required_number(req, "x"), required_number(req, "y")};
    const std::string planner_name = req.value("planner", std::string("field"));
    StoredPath stored;
    if (planner_name == "field") {
      PathParams pp;
      pp.step_px = number_or(req, "step_px", pp.step_px);
      pp.max_steps = std::size_t(int_or(req, "max_steps", int(pp.max_steps)));
      if (req.contains("initial_heading") && !req.at("initial_heading").is_null()) {
        const auto& h = req.at("initial_heading");
        if (!h.is_array() || h.size() != 2 || !h[0].is_number() || !h[1].is_number()) {
          fail(ApiErrorCode::malformed_body, "initial_heading must be [x, y]");
        }
        pp.initial_heading = std::array<double, 2>{h[0].get<double>(), h[1].get<double>()};
      }
      if (!s.mask || !s.field) {
        fail(ApiErrorCode::missing_prerequisite, "field planning needs a mask and a field");
      }
      stored.planner = synth::Planner::field;
      stored.path = plan(*s.field, *s.mask, start, pp);
    } else if (planner_name == "mesh") {
      const double goal_frac = number_or(req, "goal_frac", kDefaultGoalFraction);
      const double edge_max = number_or(req, "edge_max_m", kDefaultEdgeMaxM);
      if (!s.mask || !s.cloud) {
        fail(ApiErrorCode::missing_prerequisite, "mesh planning needs a mask and a cloud");
      }
      stored.planner = synth::Planner::mesh;
      stored.path = plan_mesh(*s.mask, *s.cloud, start, goal_frac, edge_max);
    } else {
      fail(ApiErrorCode::malformed_body, "planner must be 'field' or 'mesh'");
    }
    stored.metrics = s.field ? metrics(stored.path, *s.field) : metrics(stored.path);
    stored.id = "p" + std::to_string(s.next_path++);
    s.paths.push_back(std::move(stored));
    persist(s);
    return json_response(200, stored_path_json(s.paths.back()));
  }

  if (what == "paths" && parts.size() >= 4) {
    StoredPath* p = find_path(s, parts[3]);
    if (!p) fail(ApiErrorCode::unknown_path, "no path '" + parts[3] + "'");
    if (parts.size() == 4) {
      require_method(method, "GET");
      json j = stored_path_json(*p);
      j["poses"] = p->poses ? io::poses_to_json(*p->poses) : json(nullptr);
      return json_response(200, j);
    }
    if (parts.size() == 5 && parts[4] == "trajectory") {
      require_method(method, "POST");
      const json req = parse_body(body);
      TrajectoryParams tp;
      tp.speed_mps = number_or(req, "speed_mps", tp.speed_mps);
      tp.lookup_radius_px = number_or(req, "lookup_radius_px", tp.lookup_radius_px);
      if (!s.mask || !s.cloud) {
        fail(ApiErrorCode::missing_prerequisite, "trajectories need a mask and a cloud");
      }
      p->poses = generate(p->path, *s.mask, *s.cloud, tp);
      persist(s);
      return json_response(200, io::poses_to_json(*p->poses));
    }
    if (parts.size() == 5 && parts[4] == "accept") {
      require_method(method, "POST");
      if (s.accepted != p->id) {
        s.accepted = p->id;
        persist(s);
      }
      return json_response(200, {{"accepted", p->id}});
    }
  }
  fail(ApiErrorCode::unknown_route, "no such route");
}

void Service::persist(const Session& s) const {
  if (!data_dir_) return;
  namespace fs = std::filesystem;
  const fs::path dir = *data_dir_ / s.id;
  fs::create_directories(dir);
  if (s.rgb) io::save_ppm(dir / "rgb.ppm", *s.rgb);
  if (s.cloud) io::save_ocd(dir / "cloud.ocd", *s.cloud);
  if (s.mask) io::save_pgm(dir / "mask.pgm", io::mask_to_gray(*s.mask));
  if (s.field) io::save_orf(dir / "field.orf", *s.field);
  else fs::remove(dir / "field.orf");
  json paths = json::array();
  for (const auto& p : s.paths) {
    json j = stored_path_json(p);
    j["poses"] = p.poses ? io::poses_to_json(*p.poses) : json(nullptr);
    paths.push_back(std::move(j));
  }
  const json meta = {{"id", s.id},
                     {"field_id", s.field_id},
                     {"accepted", s.accepted ? json(*s.accepted) : json(nullptr)},
                     {"next_path", s.next_path},
                     {"next_field", s.next_field},
                     {"paths", std::move(paths)}};
  io::save_json(dir / "session.json", meta);
}

void Service::load_all() {
  namespace fs = std::filesystem;
  for (const auto& entry : fs::directory_iterator(*data_dir_)) {
    const fs::path dir = entry.path();
    if (!entry.is_directory() || !fs::exists(dir / "session.json")) continue;
    auto s = std::make_shared<Session>();
    const json meta = io::load_json(dir / "session.json");
    s->id = meta.at("id").get<std::string>();
    if (fs::exists(dir / "rgb.ppm")) s->rgb = io::load_ppm(dir / "rgb.ppm");
    if (fs::exists(dir / "cloud.ocd")) s->cloud = io::load_ocd(dir / "cloud.ocd");
    if (fs::exists(dir / "mask.pgm")) s->mask = io::mask_from_gray(io::load_pgm(dir / "mask.pgm"));
    if (fs::exists(dir / "field.orf")) {
      s->field = io::load_orf(dir / "field.orf");
      s->field_id = meta.value("field_id", std::string("field-loaded"));
    }
    if (meta.contains("accepted") && meta["accepted"].is_string()) {
      s->accepted = meta["accepted"].get<std::string>();
    }
    s->next_path = meta.value("next_path", std::uint64_t{1});
    s->next_field = meta.value("next_field", std::uint64_t{1});
    for (const auto& pj : meta.value("paths", json::array())) {
      StoredPath p;
      p.id = pj.at("path_id").get<std::string>();
      p.planner = pj.at("planner").get<std::string>() == "mesh" ? synth::Planner::mesh
                                                                : synth::Planner::field;
      p.path = io::path_from_json(pj.at("path"));
      p.metrics = metrics_from_json(pj.at("metrics"));
      p.path.terminated_by = p.metrics.terminated_by;
      if (pj.contains("poses") && !pj["poses"].is_null()) p.poses = io::poses_from_json(pj["poses"]);
      s->paths.push_back(std::move(p));
    }
    sessions_[s->id] = s;
  }
}

}  // namespace hairflow::service
