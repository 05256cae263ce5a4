#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ksg {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad parameters, shapes, configs).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written, or its content is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The computation itself failed (non-finite state, corrupted data detected mid-run).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace ksg
