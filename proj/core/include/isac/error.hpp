#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isac {

enum class ErrorCode {
  bad_dimension,
  bad_constellation,
  bad_parameter,
  infeasible_illumination,
  zero_range,
  target_out_of_grid,
  degenerate_mainlobe,
  infeasible,
  max_iters,
  no_progress,
  power_iteration_no_converge,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; what() starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace isac
