#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hairflow/path_planner.hpp"
#include "hairflow/synth.hpp"
#include "hairflow/types.hpp"

namespace httplib {
class Server;
}

// HTTP/JSON session service for the interactive loop: upload a scene,
// compute the orientation field, plan from a clicked start, preview the
// trajectory, accept or re-plan.
//
//   POST /sessions                                  -> 201 {"id"}
//   PUT  /sessions/{id}/rgb|cloud|mask              -> 204  (P6 / OCD1 / P5 body)
//   POST /sessions/{id}/segment-fallback            -> 200 mask summary
//   POST /sessions/{id}/orient                      -> 200 {"field_id"}
//   GET  /sessions/{id}/field                       -> 200 ORF1 bytes
//   POST /sessions/{id}/paths                       -> 200 {"path_id","path","metrics"}
//   GET  /sessions/{id}/paths/{pid}                 -> 200 stored path
//   POST /sessions/{id}/paths/{pid}/trajectory      -> 200 pose JSON
//   POST /sessions/{id}/paths/{pid}/accept          -> 200 {"accepted"}
//   GET  /sessions/{id}                             -> 200 session summary

namespace hairflow::service {

/// Closed set of API error codes.
enum class ApiErrorCode {
  unknown_session,       // 404
  unknown_path,          // 404
  unknown_route,         // 404
  method_not_allowed,    // 405
  missing_prerequisite,  // 409
  start_outside_hair,    // 422
  degenerate_plane,      // 422
  too_few_3d_points,     // 422
  no_path,               // 422: unreachable goal / empty graph or goal set
  degenerate_trajectory, // 422: degenerate tangent / zero-length segment
  malformed_body,        // 400
};

std::string_view to_string(ApiErrorCode code) noexcept;
int http_status(ApiErrorCode code) noexcept;

struct ApiError {
  int status = 500;
  ApiErrorCode code = ApiErrorCode::malformed_body;
  std::string message;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

nlohmann::json metrics_to_json(const PathMetrics& m);

struct StoredPath {
  std::string id;
  synth::Planner planner = synth::Planner::field;
  PixelPath path;
  PathMetrics metrics;
  std::optional<PosePath> poses;
};

struct Session {
  std::string id;
  std::optional<RgbImage> rgb;
  std::optional<OrganizedCloud> cloud;
  std::optional<BinaryMask> mask;
  std::optional<OrientationField> field;
  std::string field_id;
  std::vector<StoredPath> paths;  // in creation order
  std::optional<std::string> accepted;
  std::uint64_t next_path = 1;
  std::uint64_t next_field = 1;
  std::mutex mutex;  // serializes operations on this session
};

class Service {
 public:
  /// With a data directory, every mutation is mirrored to
  /// <dir>/<session-id>/ in the standard file formats and existing sessions
  /// are loaded at construction.
  explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt);

  /// Transport-independent entry point; the HTTP binding forwards here.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  std::size_t session_count() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  Response create_session();
  Response dispatch(Session& s, std::string_view method, const std::vector<std::string>& parts,
                    std::string_view body);
  void persist(const Session& s) const;
  void load_all();

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Registers every route on an httplib server (plus optional static files).
void mount(Service& service, httplib::Server& server,
           const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace hairflow::service
