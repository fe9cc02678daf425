#include "gfdyn/error.hpp"

namespace gfdyn {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::memory_guard: return "memory-guard";
    case ErrorKind::precision_failure: return "precision-failure";
    case ErrorKind::radius_exceeded: return "radius-exceeded";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::ruelle_violated: return "ruelle-violated";
    case ErrorKind::divergent_series: return "divergent-series";
    case ErrorKind::nonfinite_state: return "nonfinite-state";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse_error: return 2;
    case ErrorKind::radius_exceeded: return 3;
    case ErrorKind::ruelle_violated: return 4;
    case ErrorKind::nonfinite_state: return 5;
    case ErrorKind::no_convergence: return 6;
    case ErrorKind::divergent_series: return 7;
    case ErrorKind::io_error: return 8;
    default: return 9;
  }
}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gfdyn
