#ifndef PGP_ERRORS_HPP_
#define PGP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pgp {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid configuration supplied by the caller.
struct ConfigError : Error {
  using Error::Error;
};

/// Problems with input data (missing files, bad columns, degenerate data).
struct DataError : Error {
  using Error::Error;
};

/// Non-recoverable numerical failure. Carries the last jitter value that was
/// attempted before giving up.
struct NumericalError : Error {
  explicit NumericalError(const std::string& msg, double jitter_attempted = 0.0)
      : Error(msg), jitter(jitter_attempted) {}
  double jitter;
};

}  // namespace pgp

#endif  // PGP_ERRORS_HPP_
