#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace netmorph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter value. Carries the offending key and,
/// when parsed from text, the 1-based line number (0 when not applicable).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + key + ": " + what
                       : key + ": " + what),
        key_(std::move(key)),
        reason_(what),
        line_(line) {}

  const std::string& key() const noexcept { return key_; }
  /// The message without key and line.
  const std::string& reason() const noexcept { return reason_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::string reason_;
  std::size_t line_;
};

/// Fields or grids with incompatible sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace detail

/// Any failure of a numerical kernel.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The source term does not sum to zero, so the Neumann problem has no solution.
class SolvabilityError : public NumericalError {
 public:
  SolvabilityError(double source_sum, double tolerance)
      : NumericalError("pressure problem not solvable: source sum " +
                       detail::format_number(source_sum) + " exceeds tolerance " +
                       detail::format_number(tolerance)),
        source_sum_(source_sum) {}

  double source_sum() const noexcept { return source_sum_; }

 private:
  double source_sum_;
};

/// An iterative method stopped without meeting its tolerance, or a factorization broke down.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double residual)
      : NumericalError(what + " (iterations " + std::to_string(iterations) +
                       ", residual " + detail::format_number(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// File-system failure or malformed file content.
class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace netmorph
