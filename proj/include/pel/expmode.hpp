#pragma once

#include <span>
#include <vector>

#include "pel/common.hpp"

namespace pel {

// One term a * x^l * e^{s x} of an exponential polynomial on x >= 0.
struct ExpTerm {
  cplx s;
  int l = 0;
  cplx a;
};

// Finite sum of x^l e^{s x} terms: the closed form of one tangential Fourier
// mode of a half-space field.  Terms with Re s < 0 decay and admit half-line
// integrals; purely imaginary exponents (whole-space Fourier modes restricted
// to x_n >= 0) are only integrable on finite strips.
//
// Terms are merged on the key (s rounded to 1e-9 absolute, l); the rounding
// collapses exponents that were produced by different arithmetic paths from
// the same root.
class ModeFunction {
 public:
  ModeFunction() = default;

  static ModeFunction exponential(cplx s, cplx amplitude);

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<ExpTerm>& terms() const { return terms_; }

  void add_term(cplx s, int l, cplx a);
  void add(const ModeFunction& other, cplx factor = 1.0);
  void scale(cplx factor);

  // Merge duplicate (s, l) keys, keeping the first-seen exponent and the
  // insertion order of keys; drop amplitudes with |a| <= drop_tol.
  void compress(double drop_tol = 1e-300);

  cplx eval(double x) const;
  cplx value0() const;

  ModeFunction derivative() const;

  // sum_q coeff[q] d^q/dx^q applied to this (coefficients of a polynomial in
  // the plain derivative).
  ModeFunction apply_dx_polynomial(std::span<const cplx> dx_coeffs) const;
  // sum_q coeff[q] D_n^q with D_n = -i d/dx (coefficients of a polynomial in
  // the Fourier variable xi_n, as produced by xi_n_polynomial()).
  ModeFunction apply_dn_polynomial(std::span<const cplx> xi_n_coeffs) const;
  // (sum_q coeff[q] D_n^q u)(0) without materializing the full result.
  cplx boundary_value(std::span<const cplx> xi_n_coeffs) const;

  double max_real_exponent() const;

  // integral_0^H x^p e^{w x} dx; power series for |w H| < 1/2, closed-form
  // recursion otherwise.
  static cplx strip_power_integral(cplx w, int p, double H);
  // integral_0^inf x^p e^{w x} dx = p! / (-w)^{p+1}; requires Re w < 0.
  static cplx halfline_power_integral(cplx w, int p);

  static cplx strip_inner(const ModeFunction& f, const ModeFunction& g, double H);
  static cplx halfline_inner(const ModeFunction& f, const ModeFunction& g);
  double strip_norm_sq(double H) const;
  double halfline_norm_sq() const;

 private:
  std::vector<ExpTerm> terms_;
};

// Coefficients of B(xi') viewed as a polynomial in xi_n, converted to the
// matching polynomial in d/dx via xi_n <-> -i d/dx.
std::vector<cplx> xi_n_to_dx(std::span<const cplx> xi_n_coeffs);

// Exact particular solution of P(d/dx) u = rhs for exponential-polynomial
// right-hand sides; dx_poly[q] multiplies the q-th derivative.  Exponents at
// which |P(s)| < resonance_tol * scale get the multiplicity-shifted ansatz
// x^r * (polynomial), with r the observed root multiplicity.
ModeFunction particular_solution(std::span<const cplx> dx_poly,
                                 const ModeFunction& rhs,
                                 double resonance_tol = 1e-6);

}  // namespace pel
