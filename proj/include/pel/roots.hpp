#pragma once

#include <vector>

#include "pel/common.hpp"
#include "pel/symbols.hpp"

namespace pel {

struct RootCluster {
  cplx zeta;
  int multiplicity;
};

struct StableRootSet {
  std::vector<RootCluster> roots;       // Im zeta > 0 only
  int count_with_multiplicity = 0;      // sum of multiplicities
  int degree = 0;                       // degree of the frozen zeta-polynomial

  // Decaying exponentials are e^{i zeta x_n}; tau = -i zeta has Re tau > 0
  // and matches the e^{-tau x_n} normal-variable picture.
};

// All roots of c[0] + c[1] z + ... + c[d] z^d (companion-matrix eigenvalues).
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

// Roots grouped into multiplicity clusters; two roots are merged when their
// distance is below cluster_tol * max(1, |root|).
std::vector<RootCluster> cluster_roots(std::span<const cplx> raw,
                                       double cluster_tol);

// Stable (upper half-plane) roots of zeta -> lambda - A0(xi', zeta).
// Throws NumericError("marginal root ...") when a root sits on the real axis
// within cluster_tol, i.e. when parameter-ellipticity fails at this sample.
StableRootSet stable_roots(const DifferentialSymbol& A0,
                           std::span<const double> xi_prime, cplx lambda,
                           double cluster_tol = 1e-7);

}  // namespace pel
