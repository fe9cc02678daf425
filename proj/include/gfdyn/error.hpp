#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfdyn {

enum class ErrorKind {
  invalid_argument,
  grid_mismatch,
  index_out_of_range,
  memory_guard,
  precision_failure,
  radius_exceeded,
  no_convergence,
  ruelle_violated,
  divergent_series,
  nonfinite_state,
  parse_error,
  io_error,
};

/// Machine-readable name, e.g. "radius-exceeded".
std::string_view error_kind_name(ErrorKind kind) noexcept;

/// Process exit status used by the command-line tool for each error kind.
int exit_status(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace gfdyn
