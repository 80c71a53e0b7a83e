#pragma once

#include <span>
#include <vector>

#include "pel/grid.hpp"

namespace pel {

// Fourier coefficients c_k with u(x) = sum_k c_k e^{i k.x}  (forward DFT
// divided by N^n).  FFTW with FFTW_ESTIMATE plans: deterministic results.
std::vector<cplx> spectrum(const GridField& f);

// Inverse of spectrum: synthesize the field from coefficients.
GridField synthesize(const TorusGrid& g, std::span<const cplx> coeffs);

}  // namespace pel
