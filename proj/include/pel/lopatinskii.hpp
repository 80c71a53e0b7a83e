#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "pel/common.hpp"
#include "pel/roots.hpp"
#include "pel/sector.hpp"
#include "pel/symbols.hpp"

namespace pel {

// Samples (xi, lambda) with |xi|^2 + |lambda|^{1/m} = 1 and lambda in the
// closed sector, including the endpoint families lambda = 0 and xi = 0.
struct QuasiSphereSampling {
  int m = 1;
  int n_xi = 64;        // directions on the unit sphere of R^dim
  int n_arg = 181;      // arguments of lambda spanning [-theta, theta]
  int n_radial = 65;    // values of |lambda|^{1/m} in [0, 1]
  std::vector<std::pair<std::vector<double>, cplx>> samples;

  // dim is the length of the xi-like variable: n for interior ellipticity
  // sweeps, n-1 for Lopatinskii sweeps.
  static QuasiSphereSampling build(int m, int dim, const Sector& sector,
                                   int n_xi = 64, int n_arg = 181,
                                   int n_radial = 65);
};

// Unit directions: dim 1 -> {+1, -1}; dim 2 -> equally spaced angles;
// dim 3 -> Fibonacci sphere.
std::vector<std::vector<double>> directions_on_sphere(int dim, int count);

struct EllipticityReport {
  double c_min = 0.0;
  std::vector<double> witness_xi;
  cplx witness_lambda;
  long samples_evaluated = 0;
  bool pass = false;
  double tolerance = 0.0;
};

struct DegenerateSample {
  std::vector<double> xi_prime;
  cplx lambda;
  std::string reason;
};

struct LopatinskiiReport {
  double det_min = 0.0;   // min over samples of the normalized |det|
  std::vector<double> witness_xi_prime;
  cplx witness_lambda;
  long samples_evaluated = 0;
  bool pass = false;
  double tolerance = 0.0;
  std::vector<DegenerateSample> degenerate_samples;
};

// min over samples of |lambda - A0(xi)| / (|lambda| + |xi|^{2m})
EllipticityReport check_parameter_ellipticity(const DifferentialSymbol& A0,
                                              const Sector& sector,
                                              const QuasiSphereSampling& sampling,
                                              double tol = 1e-6);

// M_{j,l} = (1/2pi i) oint B0_j(xi', zeta) zeta^l / a+(zeta) dzeta over a
// circle enclosing the stable roots, a+(zeta) = prod (zeta - zeta_k)^{mu_k}.
// Basis-independent and robust to multiple roots.
Eigen::MatrixXcd lopatinskii_matrix(const std::vector<BoundarySymbol>& B0,
                                    std::span<const double> xi_prime,
                                    const StableRootSet& stable);

cplx lopatinskii_determinant(const DifferentialSymbol& A0,
                             const std::vector<BoundarySymbol>& B0,
                             std::span<const double> xi_prime, cplx lambda,
                             double cluster_tol = 1e-7);

// det_min = min over samples of |det| / prod_j (|xi'| + |lambda|^{1/2m})^{m_j}
// * coeff_scale(B0_j)); samples whose stable root count differs from m are
// recorded as degenerate and fail the report.
LopatinskiiReport check_shapiro_lopatinskii(const DifferentialSymbol& A0,
                                            const std::vector<BoundarySymbol>& B0,
                                            const Sector& sector,
                                            const QuasiSphereSampling& sampling,
                                            double tol = 1e-6);

}  // namespace pel
