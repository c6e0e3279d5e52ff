#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;
using Quad = std::array<double, 4>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Input outside the operation's domain (bad bin, empty interval, band overflow).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid configuration parameter.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Runtime guard (window, group speed, dt) refused the request.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
  std::size_t offset;
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlslab
