#pragma once

#include <vector>

#include "pel/grid.hpp"

namespace pel {

// Parameters of the mixed-smoothness parameter-dependent norm
// || <D,lambda>^s <D',lambda>^sigma u ||_{L^p}, where the primed axes are the
// first n-1 ones and m is the half-order entering |lambda|^{1/m}.
struct NormSpec {
  double s = 0.0;
  double sigma = 0.0;
  double p = 2.0;
  cplx lambda = 0.0;
  int m = 1;

  void validate() const;
  // <lambda> = (1 + |lambda|^{1/m})^{1/2}
  double lambda_weight() const;
};

// Inverse-FFT of <k,lambda>^s <k',lambda>^sigma u_hat(k); exact on
// band-limited fields.
GridField bessel_multiplier(const GridField& u, const NormSpec& spec);

// L^p rectangle rule (weight h^n) of |bessel_multiplier(u, spec)|;
// Parseval-exact for p = 2.
double mixed_norm(const GridField& u, const NormSpec& spec);

// Same norm through the kappa_lambda scaling definition: lambda = 0
// multiplier at rescaled wavenumbers k/<lambda> and prefactor
// <lambda>^{s+sigma-n/p}.  Realized on the Fourier side, so it must agree
// with mixed_norm for p = 2.
double scaled_norm(const GridField& u, const NormSpec& spec);

// (d/dx_n)^j u computed spectrally: coefficients scaled by (i k_n)^j.
GridField normal_derivative(const GridField& u, int j);

// (d/dx_n)^j u restricted to {x_n = 0}, computed spectrally.
BoundaryField trace(const GridField& u, int j);

// For p = 2 this is the exact H^s_{2,lambda} multiplier norm (B^s_22 = H^s_2);
// for p != 2 a sharp-cutoff dyadic-block l^p(L^p) sum on the rescaled
// wavenumbers (quadrature-grade).
double besov_norm(const BoundaryField& g, double s, double p, cplx lambda,
                  int m);

// mixed_norm(u, to) / mixed_norm(u, from); throws on u = 0.
double embedding_ratio(const GridField& u, const NormSpec& from_spec,
                       const NormSpec& to_spec);

struct InterpolationCheck {
  double c_eps;          // C(eps) = max_{t >= 1} (t^{s-s0} - eps t^{s1-s0})
  double max_violation;  // max over grid wavenumbers of lhs - rhs (<= 0 pass)
};

// Verifies <k,lambda>^s <= eps <k,lambda>^{s1} +
// C(eps) <lambda>^{s-s0} <k,lambda>^{s0} pointwise on the grid's wavenumber
// lattice (all terms carry the common <k',lambda>^sigma factor).
InterpolationCheck interpolation_inequality_check(double s0, double s,
                                                  double s1, double sigma,
                                                  double eps, cplx lambda,
                                                  int m, const TorusGrid& grid);

struct MultiplierFunction {
  GridField samples;
  int smoothness_budget = 1;  // declared r

  double sup_norm() const;
};

// Pointwise product a * u.
GridField apply_multiplication(const GridField& u, const MultiplierFunction& a);

// max over random band-limited probe fields of
// mixed_norm(a*u, spec) / mixed_norm(u, spec).
double estimate_multiplier_norm(const MultiplierFunction& a,
                                const NormSpec& spec, int probes,
                                std::uint64_t seed);

}  // namespace pel
