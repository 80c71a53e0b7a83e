#pragma once

#include <cmath>

#include "pel/common.hpp"

namespace pel {

// Sigma_theta = { z != 0 : |arg z| < theta }, optionally with its closure.
struct Sector {
  double theta;                  // half-opening angle, in (0, pi]
  bool includes_closure = true;

  bool contains(cplx z) const {
    if (z == cplx(0.0, 0.0)) return false;
    const double a = std::abs(std::arg(z));
    return includes_closure ? a <= theta + 1e-15 : a < theta;
  }
};

}  // namespace pel
