#pragma once

#include <compare>
#include <map>
#include <vector>

#include "pel/common.hpp"

namespace pel {

struct MultiIndex {
  std::vector<int> entries;

  int order() const {
    int s = 0;
    for (int e : entries) s += e;
    return s;
  }
  auto operator<=>(const MultiIndex&) const = default;
};

// Constant-coefficient polynomial symbol in D-convention (D = -i d/dx, so the
// operator D^alpha has symbol xi^alpha).  Doubles as a boundary symbol, where
// `order` is the boundary order m_j.
class DifferentialSymbol {
 public:
  DifferentialSymbol(int n, int order);

  int dim() const { return n_; }
  int order() const { return order_; }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }

  // accumulates; validates index length and |alpha| <= order
  void add_term(MultiIndex alpha, cplx coeff);

  cplx eval(std::span<const double> xi, bool principal_only = false) const;
  cplx eval_at(std::span<const cplx> xi, bool principal_only = false) const;

  // Coefficient vector (ascending in zeta) of the principal part frozen at
  // tangential frequency xi':  zeta -> lambda - A0(xi', zeta)  when
  // subtract_from_lambda, else  zeta -> B0(xi', zeta).
  std::vector<cplx> xi_n_polynomial(std::span<const double> xi_prime, cplx lambda,
                                    bool subtract_from_lambda) const;

  double coeff_scale() const;  // max |coefficient|

  // common builders (all D-convention)
  static DifferentialSymbol laplacian(int n);            // -|xi|^2
  static DifferentialSymbol neg_bilaplacian(int n);      // -|xi|^4   (A = -Lap^2)
  static DifferentialSymbol bilaplacian(int n);          // +|xi|^4   (non-elliptic control)
  static DifferentialSymbol gamma0(int n);               // trace, order 0
  static DifferentialSymbol dn(int n);                   // d/dx_n, symbol i xi_n
  static DifferentialSymbol dnu(int n);                  // outward normal on R^n_+: -d_n
  static DifferentialSymbol dnu_laplacian(int n);        // dnu Lap, symbol +i xi_n |xi|^2
  static DifferentialSymbol dn_laplacian(int n);         // d_n Lap, symbol -i xi_n |xi|^2

 private:
  int n_;
  int order_;
  std::map<MultiIndex, cplx> terms_;
};

using BoundarySymbol = DifferentialSymbol;

// <xi,lambda> = (1 + |xi|^2 + |lambda|^{1/m})^{1/2}, m = half-order of A
double anisotropic_weight(std::span<const double> xi, cplx lambda, int m);
double anisotropic_weight_sq(double abs_xi_sq, cplx lambda, int m);

// |xi| + |lambda|^{1/2m}; the quasi-homogeneous scale used to normalize
// Lopatinskii determinants and to build sphere sweeps
double quasi_norm(double abs_xi, cplx lambda, int two_m);

}  // namespace pel
