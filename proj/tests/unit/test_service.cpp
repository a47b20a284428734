#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "hairflow/color.hpp"
#include "hairflow/io.hpp"
#include "hairflow/mesh_planner.hpp"
#include "hairflow/orientation_field.hpp"
#include "hairflow/service.hpp"
#include "hairflow/synth.hpp"
#include "hairflow/trajectory.hpp"

using namespace hairflow;
using namespace hairflow::service;
using nlohmann::json;

namespace {

struct Fixture {
  synth::SyntheticScene scene;
  std::string rgb, cloud, mask;
  Fixture() {
    synth::SyntheticSpec s;
    s.kind = synth::SceneKind::waves;
    s.size = 64;
    scene = synth::generate(s);
    rgb = io::to_bytes(scene.rgb);
    cloud = io::to_bytes(scene.cloud);
    mask = io::to_bytes(io::mask_to_gray(scene.mask));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::string new_session(Service& svc) {
  const Response r = svc.handle("POST", "/sessions", "");
  EXPECT_EQ(r.status, 201);
  return json::parse(r.body).at("id").get<std::string>();
}

void upload_all(Service& svc, const std::string& id) {
  EXPECT_EQ(svc.handle("PUT", "/sessions/" + id + "/rgb", fixture().rgb).status, 204);
  EXPECT_EQ(svc.handle("PUT", "/sessions/" + id + "/cloud", fixture().cloud).status, 204);
  EXPECT_EQ(svc.handle("PUT", "/sessions/" + id + "/mask", fixture().mask).status, 204);
}

std::string error_code(const Response& r) { return json::parse(r.body).at("code"); }

std::filesystem::path temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() /
           (std::string(name) + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Service, ErrorCodeTable) {
  EXPECT_EQ(to_string(ApiErrorCode::unknown_session), "unknown-session");
  EXPECT_EQ(to_string(ApiErrorCode::missing_prerequisite), "missing-prerequisite");
  EXPECT_EQ(http_status(ApiErrorCode::unknown_path), 404);
  EXPECT_EQ(http_status(ApiErrorCode::missing_prerequisite), 409);
  EXPECT_EQ(http_status(ApiErrorCode::too_few_3d_points), 422);
  EXPECT_EQ(http_status(ApiErrorCode::malformed_body), 400);
}

TEST(Service, HappyPathMatchesLibrary) {
  Service svc;
  const std::string id = new_session(svc);
  upload_all(svc, id);
  const Response orient = svc.handle("POST", "/sessions/" + id + "/orient", "{}");
  ASSERT_EQ(orient.status, 200) << orient.body;
  EXPECT_EQ(json::parse(orient.body).at("field_id"), "field-1");

  const OrientationField field = field_from_image(to_grayscale(fixture().scene.rgb));
  const Response f = svc.handle("GET", "/sessions/" + id + "/field", "");
  EXPECT_EQ(f.body, io::to_bytes(field));

  const Response planned = svc.handle("POST", "/sessions/" + id + "/paths",
                                      R"({"x": 20, "y": 10, "planner": "field"})");
  ASSERT_EQ(planned.status, 200) << planned.body;
  const json pj = json::parse(planned.body);
  const std::string pid = pj.at("path_id");
  const PixelPath direct = plan(field, fixture().scene.mask, {20, 10});
  EXPECT_EQ(io::path_from_json(pj.at("path")).points, direct.points);

  const Response traj =
      svc.handle("POST", "/sessions/" + id + "/paths/" + pid + "/trajectory", "{}");
  ASSERT_EQ(traj.status, 200) << traj.body;
  EXPECT_EQ(traj.body,
            io::poses_to_json(generate(direct, fixture().scene.mask, io::ocd_from_bytes(fixture().cloud))).dump());

  const Response acc = svc.handle("POST", "/sessions/" + id + "/paths/" + pid + "/accept", "");
  EXPECT_EQ(acc.status, 200);
  const std::string summary = svc.handle("GET", "/sessions/" + id, "").body;
  EXPECT_EQ(json::parse(summary).at("accepted"), pid);
  // idempotent
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/paths/" + pid + "/accept", "").body, acc.body);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + id, "").body, summary);
}

TEST(Service, MeshPlannerRoute) {
  Service svc;
  const std::string id = new_session(svc);
  upload_all(svc, id);
  const Response r = svc.handle("POST", "/sessions/" + id + "/paths",
                                R"({"x": 30, "y": 2, "planner": "mesh"})");
  ASSERT_EQ(r.status, 200) << r.body;
  const PixelPath direct = plan_mesh(fixture().scene.mask, io::ocd_from_bytes(fixture().cloud), {30, 2});
  EXPECT_EQ(io::path_from_json(json::parse(r.body).at("path")).points, direct.points);
}

TEST(Service, Errors) {
  Service svc;
  EXPECT_EQ(error_code(svc.handle("GET", "/sessions/nope", "")), "unknown-session");
  const std::string id = new_session(svc);
  const std::string base = "/sessions/" + id;
  Response r = svc.handle("POST", base + "/paths", R"({"x": 1, "y": 1})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(error_code(r), "missing-prerequisite");
  EXPECT_EQ(svc.handle("POST", base + "/orient", "{}").status, 409);
  EXPECT_EQ(svc.handle("GET", base + "/field", "").status, 409);
  EXPECT_EQ(error_code(svc.handle("GET", base + "/paths/p9", "")), "unknown-path");
  EXPECT_EQ(svc.handle("DELETE", base, "").status, 405);
  EXPECT_EQ(svc.handle("GET", base + "/bogus", "").status, 404);
  EXPECT_EQ(svc.handle("PUT", base + "/rgb", "P6 garbage").status, 400);

  upload_all(svc, id);
  svc.handle("POST", base + "/orient", "{}");
  EXPECT_EQ(svc.handle("POST", base + "/paths", "{not json").status, 400);
  EXPECT_EQ(svc.handle("POST", base + "/paths", R"({"x": "a", "y": 1})").status, 400);
  EXPECT_EQ(svc.handle("POST", base + "/paths", R"({"x": 1, "y": 1, "planner": "x"})").status, 400);
  EXPECT_EQ(svc.handle("POST", base + "/orient", R"({"coherence": {"k_delta": 4}})").status, 400);

  // background start
  BinaryMask half(64, 64);
  for (std::uint32_t y = 0; y < 64; ++y)
    for (std::uint32_t x = 32; x < 64; ++x) half(x, y) = 1;
  svc.handle("PUT", base + "/mask", io::to_bytes(io::mask_to_gray(half)));
  r = svc.handle("POST", base + "/paths", R"({"x": 3, "y": 3})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(error_code(r), "start-outside-hair");

  // wrong-size upload
  EXPECT_EQ(svc.handle("PUT", base + "/mask", io::to_bytes(io::mask_to_gray(BinaryMask(8, 8, 1)))).status,
            400);
}

TEST(Service, RgbUploadInvalidatesField) {
  Service svc;
  const std::string id = new_session(svc);
  upload_all(svc, id);
  svc.handle("POST", "/sessions/" + id + "/orient", "{}");
  EXPECT_EQ(svc.handle("GET", "/sessions/" + id + "/field", "").status, 200);
  svc.handle("PUT", "/sessions/" + id + "/rgb", fixture().rgb);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + id + "/field", "").status, 409);
  EXPECT_TRUE(json::parse(svc.handle("GET", "/sessions/" + id, "").body).at("field_id").is_null());
}

TEST(Service, SegmentFallback) {
  Service svc;
  const std::string id = new_session(svc);
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/segment-fallback", "{}").status, 409);
  RgbImage rgb(4, 2, Rgb{20, 20, 20});
  rgb(0, 0) = {250, 250, 250};
  svc.handle("PUT", "/sessions/" + id + "/rgb", io::to_bytes(rgb));
  const Response r = svc.handle("POST", "/sessions/" + id + "/segment-fallback", "{}");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(json::parse(r.body).at("hair_pixels"), 7);
  EXPECT_TRUE(json::parse(svc.handle("GET", "/sessions/" + id, "").body).at("has_mask"));
}

TEST(Service, SessionsAreIsolated) {
  Service svc;
  const std::string a = new_session(svc), b = new_session(svc);
  EXPECT_NE(a, b);
  upload_all(svc, a);
  const json sb = json::parse(svc.handle("GET", "/sessions/" + b, "").body);
  EXPECT_FALSE(sb.at("has_rgb"));
  EXPECT_EQ(svc.session_count(), 2u);
}

TEST(Service, PersistsAndReloads) {
  const auto dir = temp_dir("hairflow-service");
  std::string id, pid, summary;
  {
    Service svc(dir);
    id = new_session(svc);
    upload_all(svc, id);
    svc.handle("POST", "/sessions/" + id + "/orient", "{}");
    pid = json::parse(svc.handle("POST", "/sessions/" + id + "/paths", R"({"x": 20, "y": 10})").body)
              .at("path_id");
    svc.handle("POST", "/sessions/" + id + "/paths/" + pid + "/trajectory", "{}");
    svc.handle("POST", "/sessions/" + id + "/paths/" + pid + "/accept", "");
    summary = svc.handle("GET", "/sessions/" + id, "").body;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / id / "field.orf"));
  Service again(dir);
  EXPECT_EQ(again.session_count(), 1u);
  EXPECT_EQ(again.handle("GET", "/sessions/" + id, "").body, summary);
  const Response next = again.handle("POST", "/sessions/" + id + "/paths", R"({"x": 21, "y": 10})");
  EXPECT_NE(json::parse(next.body).at("path_id"), pid);
  std::filesystem::remove_all(dir);
}
