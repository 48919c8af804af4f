#include "isac/error.hpp"

namespace isac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_dimension: return "bad_dimension";
    case ErrorCode::bad_constellation: return "bad_constellation";
    case ErrorCode::bad_parameter: return "bad_parameter";
    case ErrorCode::infeasible_illumination: return "infeasible_illumination";
    case ErrorCode::zero_range: return "zero_range";
    case ErrorCode::target_out_of_grid: return "target_out_of_grid";
    case ErrorCode::degenerate_mainlobe: return "degenerate_mainlobe";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::max_iters: return "max_iters";
    case ErrorCode::no_progress: return "no_progress";
    case ErrorCode::power_iteration_no_converge: return "power_iteration_no_converge";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace isac
