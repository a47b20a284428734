#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

// Binary and JSON formats:
//   P5  PGM, maxval 255, one byte per pixel
//   P6  PPM, maxval 255, three bytes per pixel
//   ORF1 "ORF1" u32le width u32le height, f32le theta[w*h], f32le coherence[w*h]
//   OCD1 "OCD1" u32le width u32le height, f32le (x,y,z)[w*h]; NaN triple = invalid
//   path JSON {"step_px", "points":[{"x","y"}]}
//   pose JSON {"poses":[{"position":[x,y,z],"orientation_quat":[w,x,y,z],"time_s"}]}
// Every reader reports problems as hairflow::Error with one of
// malformed_header, truncated_payload, dimension_overflow, value_out_of_range
// or malformed_json, and names the offending field.

namespace hairflow::io {

/// Largest accepted pixel count for any raster file.
inline constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

Gray8Image read_pgm(std::istream& in);
void write_pgm(std::ostream& out, const Gray8Image& img);

RgbImage read_ppm(std::istream& in);
void write_ppm(std::ostream& out, const RgbImage& img);

OrientationField read_orf(std::istream& in);
void write_orf(std::ostream& out, const OrientationField& field);

OrganizedCloud read_ocd(std::istream& in);
void write_ocd(std::ostream& out, const OrganizedCloud& cloud);

nlohmann::json path_to_json(const PixelPath& path);
PixelPath path_from_json(const nlohmann::json& j);

nlohmann::json poses_to_json(const PosePath& poses);
PosePath poses_from_json(const nlohmann::json& j);

/// Parses text as JSON, mapping syntax errors to malformed_json.
nlohmann::json parse_json(std::string_view text);

// Byte-string helpers (used by the service for request bodies).
std::string to_bytes(const Gray8Image& img);
std::string to_bytes(const RgbImage& img);
std::string to_bytes(const OrientationField& field);
std::string to_bytes(const OrganizedCloud& cloud);
Gray8Image pgm_from_bytes(std::string_view bytes);
RgbImage ppm_from_bytes(std::string_view bytes);
OrientationField orf_from_bytes(std::string_view bytes);
OrganizedCloud ocd_from_bytes(std::string_view bytes);

// Raster conversions at the 8-bit file boundary.
BinaryMask mask_from_gray(const Gray8Image& img);  // >= 128 is hair
Gray8Image mask_to_gray(const BinaryMask& mask);   // hair = 255
SoftMask soft_mask_from_gray(const Gray8Image& img);
Gray8Image soft_mask_to_gray(const SoftMask& mask);
IntensityImage intensity_from_gray(const Gray8Image& img);
/// Rounds to nearest and clamps to [0, 255].
Gray8Image intensity_to_gray(const IntensityImage& img);
/// Quantizes theta * 255 / pi for previews.
Gray8Image orientation_preview(const OrientationField& field);

// File helpers.
Gray8Image load_pgm(const std::filesystem::path& p);
void save_pgm(const std::filesystem::path& p, const Gray8Image& img);
RgbImage load_ppm(const std::filesystem::path& p);
void save_ppm(const std::filesystem::path& p, const RgbImage& img);
OrientationField load_orf(const std::filesystem::path& p);
void save_orf(const std::filesystem::path& p, const OrientationField& field);
OrganizedCloud load_ocd(const std::filesystem::path& p);
void save_ocd(const std::filesystem::path& p, const OrganizedCloud& cloud);
nlohmann::json load_json(const std::filesystem::path& p);
void save_json(const std::filesystem::path& p, const nlohmann::json& j);

}  // namespace hairflow::io
