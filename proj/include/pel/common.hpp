#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pel {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// All branch cuts in this library are the principal one: Re sqrt(z) >= 0,
// arg in (-pi, pi].  std::sqrt / std::arg already implement this.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pel
