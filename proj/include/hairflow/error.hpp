#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hairflow {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  // file formats
  malformed_header,
  truncated_payload,
  dimension_overflow,
  value_out_of_range,
  malformed_json,
  io_failure,
  // mask refinement
  empty_mask,
  no_valid_depth,
  // planners
  start_outside_hair,
  empty_graph,
  empty_goal_set,
  unreachable,
  // trajectory
  degenerate_plane,
  too_few_3d_points,
  degenerate_tangent,
  zero_length_segment,
};

/// Stable kebab-case name, used in CLI messages and API error bodies.
std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library. `field` names the
/// offending input (a header field, a parameter, a JSON key) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::string field_;
  std::optional<std::size_t> index_;
};

}  // namespace hairflow
