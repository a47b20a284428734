#include "hairflow/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hairflow::io {
namespace {

// ---------------------------------------------------------------------------
// PNM header parsing

void skip_space_and_comments(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      while (c != '\n' && c != std::char_traits<char>::eof()) c = in.get();
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      in.get();
    } else {
      return;
    }
  }
}

std::uint64_t read_header_uint(std::istream& in, const char* field) {
  skip_space_and_comments(in);
  std::uint64_t value = 0;
  int digits = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + std::uint64_t(in.get() - '0');
    if (++digits > 12) {
      throw Error(ErrorCode::dimension_overflow, field, "header value too large");
    }
  }
  if (digits == 0) {
    throw Error(ErrorCode::malformed_header, field, "expected an unsigned decimal integer");
  }
  return value;
}

struct PnmHeader {
  std::uint32_t width;
  std::uint32_t height;
};

std::uint32_t checked_dim(std::uint64_t v, const char* field) {
  if (v == 0) throw Error(ErrorCode::malformed_header, field, "dimension must be >= 1");
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::dimension_overflow, field, "dimension exceeds 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

void check_pixel_count(std::uint32_t w, std::uint32_t h) {
  if (std::uint64_t{w} * h > kMaxPixels) {
    throw Error(ErrorCode::dimension_overflow, "height",
                "width*height exceeds the supported pixel count");
  }
}

PnmHeader read_pnm_header(std::istream& in, const char* magic) {
  char m[2] = {0, 0};
  in.read(m, 2);
  if (in.gcount() != 2 || m[0] != magic[0] || m[1] != magic[1]) {
    throw Error(ErrorCode::malformed_header, "magic",
                std::string("expected '") + magic + "'");
  }
  const std::uint32_t w = checked_dim(read_header_uint(in, "width"), "width");
  const std::uint32_t h = checked_dim(read_header_uint(in, "height"), "height");
  const std::uint64_t maxval = read_header_uint(in, "maxval");
  if (maxval != 255) throw Error(ErrorCode::malformed_header, "maxval", "maxval must be 255");
  const int sep = in.get();
  if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r') {
    throw Error(ErrorCode::malformed_header, "maxval", "missing whitespace after maxval");
  }
  check_pixel_count(w, h);
  return {w, h};
}

// Reads exactly n bytes in bounded chunks, so a header that lies about its
// size fails on the short payload instead of on a huge allocation.
std::vector<unsigned char> read_bytes(std::istream& in, std::size_t n, const char* field) {
  constexpr std::size_t kChunk = std::size_t{1} << 20;
  std::vector<unsigned char> out;
  while (out.size() < n) {
    const std::size_t want = std::min(kChunk, n - out.size());
    const std::size_t old = out.size();
    out.resize(old + want);
    in.read(reinterpret_cast<char*>(out.data() + old), static_cast<std::streamsize>(want));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got != want) {
      throw Error(ErrorCode::truncated_payload, field,
                  "expected " + std::to_string(n) + " bytes, got " + std::to_string(old + got));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// little-endian scalars

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                     char((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32(const unsigned char* b) { return std::bit_cast<float>(get_u32(b)); }

PnmHeader read_binary_header(std::istream& in, const char* magic) {
  char m[4] = {};
  in.read(m, 4);
  if (in.gcount() != 4 || std::memcmp(m, magic, 4) != 0) {
    throw Error(ErrorCode::malformed_header, "magic", std::string("expected '") + magic + "'");
  }
  unsigned char dims[8];
  in.read(reinterpret_cast<char*>(dims), 8);
  if (in.gcount() < 4) throw Error(ErrorCode::truncated_payload, "width", "header ends early");
  if (in.gcount() < 8) throw Error(ErrorCode::truncated_payload, "height", "header ends early");
  const std::uint32_t w = get_u32(dims);
  const std::uint32_t h = get_u32(dims + 4);
  if (w == 0) throw Error(ErrorCode::malformed_header, "width", "dimension must be >= 1");
  if (h == 0) throw Error(ErrorCode::malformed_header, "height", "dimension must be >= 1");
  check_pixel_count(w, h);
  return {w, h};
}

std::vector<float> read_f32_block(std::istream& in, std::size_t count, const char* field) {
  const std::vector<unsigned char> raw = read_bytes(in, count * 4, field);
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = get_f32(raw.data() + 4 * i);
  return out;
}

// Largest float strictly below pi (float(pi) rounds up).
const float kThetaMax = std::nextafter(float(std::numbers::pi), 0.0f);

const nlohmann::json& require_key(const nlohmann::json& j, const char* key,
                                  const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::malformed_json, where + key, "missing key");
  }
  return j.at(key);
}

double require_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw Error(ErrorCode::malformed_json, field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::malformed_json, field, "expected a finite number");
  return v;
}

template <typename Writer, typename T>
std::string bytes_of(Writer w, const T& value) {
  std::ostringstream out(std::ios::binary);
  w(out, value);
  return std::move(out).str();
}

template <typename Reader>
auto from_bytes(Reader r, std::string_view bytes) {
  std::istringstream in(std::string(bytes), std::ios::binary);
  return r(in);
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, p.string(), "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, p.string(), "cannot open for writing");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Gray8Image read_pgm(std::istream& in) {
  const auto [w, h] = read_pnm_header(in, "P5");
  std::vector<unsigned char> data = read_bytes(in, std::size_t{w} * h, "payload");
  return Gray8Image(w, h, std::move(data));
}

void write_pgm(std::ostream& out, const Gray8Image& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()),
            static_cast<std::streamsize>(img.size()));
}

RgbImage read_ppm(std::istream& in) {
  const auto [w, h] = read_pnm_header(in, "P6");
  const std::vector<unsigned char> raw = read_bytes(in, std::size_t{w} * h * 3, "payload");
  RgbImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = Rgb{raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
  }
  return img;
}

void write_ppm(std::ostream& out, const RgbImage& img) {
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    raw[3 * i] = img[i].r;
    raw[3 * i + 1] = img[i].g;
    raw[3 * i + 2] = img[i].b;
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

OrientationField read_orf(std::istream& in) {
  const auto [w, h] = read_binary_header(in, "ORF1");
  const std::size_t n = std::size_t{w} * h;
  std::vector<float> theta = read_f32_block(in, n, "theta");
  std::vector<float> coherence = read_f32_block(in, n, "coherence");
  OrientationField f{RealRaster(w, h), RealRaster(w, h)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!(theta[i] >= 0.0f && double(theta[i]) < std::numbers::pi)) {
      throw Error(ErrorCode::value_out_of_range, "theta", "angle outside [0, pi)", i);
    }
    if (!(coherence[i] >= 0.0f && coherence[i] <= 1.0f)) {
      throw Error(ErrorCode::value_out_of_range, "coherence", "value outside [0, 1]", i);
    }
    f.theta[i] = theta[i];
    f.coherence[i] = coherence[i];
  }
  return f;
}

void write_orf(std::ostream& out, const OrientationField& field) {
  require_same_shape(field.theta, field.coherence, "coherence");
  out.write("ORF1", 4);
  put_u32(out, field.width());
  put_u32(out, field.height());
  for (double t : field.theta.data()) {
    float f = static_cast<float>(t);
    if (double(f) >= std::numbers::pi) f = kThetaMax;
    put_f32(out, f);
  }
  for (double c : field.coherence.data()) put_f32(out, static_cast<float>(c));
}

OrganizedCloud read_ocd(std::istream& in) {
  const auto [w, h] = read_binary_header(in, "OCD1");
  const std::size_t n = std::size_t{w} * h;
  std::vector<float> xyz = read_f32_block(in, n * 3, "points");
  OrganizedCloud cloud(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    const float x = xyz[3 * i], y = xyz[3 * i + 1], z = xyz[3 * i + 2];
    const int nans = int(std::isnan(x)) + int(std::isnan(y)) + int(std::isnan(z));
    if (nans == 3) continue;
    if (nans != 0 || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !(z > 0.0f)) {
      throw Error(ErrorCode::value_out_of_range, "points",
                  "point must be a NaN triple or finite with z > 0", i);
    }
    cloud.set(std::uint32_t(i % w), std::uint32_t(i / w), Point3{x, y, z});
  }
  return cloud;
}

void write_ocd(std::ostream& out, const OrganizedCloud& cloud) {
  out.write("OCD1", 4);
  put_u32(out, cloud.width());
  put_u32(out, cloud.height());
  const float nan = std::numeric_limits<float>::quiet_NaN();
  const std::size_t n = std::size_t{cloud.width()} * cloud.height();
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.valid(i)) {
      const Point3& p = cloud.point(i);
      put_f32(out, float(p.x));
      put_f32(out, float(p.y));
      put_f32(out, float(p.z));
    } else {
      put_f32(out, nan);
      put_f32(out, nan);
      put_f32(out, nan);
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json path_to_json(const PixelPath& path) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : path.points) points.push_back({{"x", p.x}, {"y", p.y}});
  return {{"step_px", path.step_px}, {"points", std::move(points)}};
}

PixelPath path_from_json(const nlohmann::json& j) {
  PixelPath path;
  path.step_px = require_number(require_key(j, "step_px", ""), "step_px");
  const auto& pts = require_key(j, "points", "");
  if (!pts.is_array()) throw Error(ErrorCode::malformed_json, "points", "expected an array");
  path.points.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "].";
    const double x = require_number(require_key(pts[i], "x", where), where + "x");
    const double y = require_number(require_key(pts[i], "y", where), where + "y");
    path.points.push_back({x, y});
  }
  return path;
}

nlohmann::json poses_to_json(const PosePath& poses) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : poses.poses) {
    arr.push_back({{"position", p.position},
                   {"orientation_quat", p.orientation_quat},
                   {"time_s", p.time_s}});
  }
  return {{"poses", std::move(arr)}};
}

PosePath poses_from_json(const nlohmann::json& j) {
  const auto& arr = require_key(j, "poses", "");
  if (!arr.is_array()) throw Error(ErrorCode::malformed_json, "poses", "expected an array");
  PosePath out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "poses[" + std::to_string(i) + "].";
    Pose p;
    const auto& pos = require_key(arr[i], "position", where);
    if (!pos.is_array() || pos.size() != 3) {
      throw Error(ErrorCode::malformed_json, where + "position", "expected 3 numbers");
    }
    for (int k = 0; k < 3; ++k) p.position[k] = require_number(pos[k], where + "position");
    const auto& q = require_key(arr[i], "orientation_quat", where);
    if (!q.is_array() || q.size() != 4) {
      throw Error(ErrorCode::malformed_json, where + "orientation_quat", "expected 4 numbers");
    }
    double norm2 = 0.0;
    for (int k = 0; k < 4; ++k) {
      p.orientation_quat[k] = require_number(q[k], where + "orientation_quat");
      norm2 += p.orientation_quat[k] * p.orientation_quat[k];
    }
    if (std::abs(norm2 - 1.0) > 1e-6) {
      throw Error(ErrorCode::value_out_of_range, where + "orientation_quat",
                  "quaternion is not unit length");
    }
    p.time_s = require_number(require_key(arr[i], "time_s", where), where + "time_s");
    out.poses.push_back(p);
  }
  return out;
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::malformed_json, "body", e.what());
  }
}

// ---------------------------------------------------------------------------

std::string to_bytes(const Gray8Image& img) { return bytes_of(write_pgm, img); }
std::string to_bytes(const RgbImage& img) { return bytes_of(write_ppm, img); }
std::string to_bytes(const OrientationField& f) { return bytes_of(write_orf, f); }
std::string to_bytes(const OrganizedCloud& c) { return bytes_of(write_ocd, c); }
Gray8Image pgm_from_bytes(std::string_view b) { return from_bytes(read_pgm, b); }
RgbImage ppm_from_bytes(std::string_view b) { return from_bytes(read_ppm, b); }
OrientationField orf_from_bytes(std::string_view b) { return from_bytes(read_orf, b); }
OrganizedCloud ocd_from_bytes(std::string_view b) { return from_bytes(read_ocd, b); }

BinaryMask mask_from_gray(const Gray8Image& img) {
  BinaryMask m(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) m[i] = img[i] >= 128 ? 1 : 0;
  return m;
}

Gray8Image mask_to_gray(const BinaryMask& mask) {
  Gray8Image g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] ? 255 : 0;
  return g;
}

SoftMask soft_mask_from_gray(const Gray8Image& img) {
  SoftMask m(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) m[i] = img[i] / 255.0;
  return m;
}

Gray8Image soft_mask_to_gray(const SoftMask& mask) {
  Gray8Image g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    g[i] = static_cast<std::uint8_t>(std::lround(std::clamp(mask[i], 0.0, 1.0) * 255.0));
  }
  return g;
}

IntensityImage intensity_from_gray(const Gray8Image& img) {
  IntensityImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i];
  return out;
}

Gray8Image intensity_to_gray(const IntensityImage& img) {
  Gray8Image g(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    g[i] = static_cast<std::uint8_t>(std::lround(std::clamp(img[i], 0.0, 255.0)));
  }
  return g;
}

Gray8Image orientation_preview(const OrientationField& field) {
  Gray8Image g(field.width(), field.height());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = field.theta[i] * 255.0 / std::numbers::pi;
    g[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return g;
}

Gray8Image load_pgm(const std::filesystem::path& p) {
  auto in = open_in(p);
  return read_pgm(in);
}
void save_pgm(const std::filesystem::path& p, const Gray8Image& img) {
  auto out = open_out(p);
  write_pgm(out, img);
}
RgbImage load_ppm(const std::filesystem::path& p) {
  auto in = open_in(p);
  return read_ppm(in);
}
void save_ppm(const std::filesystem::path& p, const RgbImage& img) {
  auto out = open_out(p);
  write_ppm(out, img);
}
OrientationField load_orf(const std::filesystem::path& p) {
  auto in = open_in(p);
  return read_orf(in);
}
void save_orf(const std::filesystem::path& p, const OrientationField& f) {
  auto out = open_out(p);
  write_orf(out, f);
}
OrganizedCloud load_ocd(const std::filesystem::path& p) {
  auto in = open_in(p);
  return read_ocd(in);
}
void save_ocd(const std::filesystem::path& p, const OrganizedCloud& c) {
  auto out = open_out(p);
  write_ocd(out, c);
}
nlohmann::json load_json(const std::filesystem::path& p) {
  auto in = open_in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}
void save_json(const std::filesystem::path& p, const nlohmann::json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

}  // namespace hairflow::io
