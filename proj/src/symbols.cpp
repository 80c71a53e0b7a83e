#include "pel/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace pel {

namespace {

MultiIndex unit(int n, int i, int k = 1) {
  MultiIndex a{std::vector<int>(n, 0)};
  a.entries[i] = k;
  return a;
}

}  // namespace

DifferentialSymbol::DifferentialSymbol(int n, int order) : n_(n), order_(order) {
  if (n < 1) throw ConfigError("symbol dimension must be >= 1");
  if (order < 0) throw ConfigError("symbol order must be >= 0");
}

void DifferentialSymbol::add_term(MultiIndex alpha, cplx coeff) {
  if (static_cast<int>(alpha.entries.size()) != n_)
    throw ConfigError("multi-index length does not match symbol dimension");
  for (int e : alpha.entries)
    if (e < 0) throw ConfigError("multi-index entries must be non-negative");
  if (alpha.order() > order_)
    throw ConfigError("term order exceeds declared symbol order");
  terms_[std::move(alpha)] += coeff;
}

cplx DifferentialSymbol::eval(std::span<const double> xi,
                              bool principal_only) const {
  if (static_cast<int>(xi.size()) != n_)
    throw ConfigError("frequency vector length does not match symbol dimension");
  cplx out = 0.0;
  for (const auto& [alpha, coeff] : terms_) {
    if (principal_only && alpha.order() != order_) continue;
    double mono = 1.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < alpha.entries[i]; ++k) mono *= xi[i];
    out += coeff * mono;
  }
  return out;
}

cplx DifferentialSymbol::eval_at(std::span<const cplx> xi,
                                 bool principal_only) const {
  if (static_cast<int>(xi.size()) != n_)
    throw ConfigError("frequency vector length does not match symbol dimension");
  cplx out = 0.0;
  for (const auto& [alpha, coeff] : terms_) {
    if (principal_only && alpha.order() != order_) continue;
    cplx mono = 1.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < alpha.entries[i]; ++k) mono *= xi[i];
    out += coeff * mono;
  }
  return out;
}

std::vector<cplx> DifferentialSymbol::xi_n_polynomial(
    std::span<const double> xi_prime, cplx lambda,
    bool subtract_from_lambda) const {
  if (static_cast<int>(xi_prime.size()) != n_ - 1)
    throw ConfigError("tangential frequency must have length n-1");
  std::vector<cplx> c(static_cast<size_t>(order_) + 1, cplx(0.0));
  for (const auto& [alpha, coeff] : terms_) {
    if (alpha.order() != order_) continue;  // principal part only
    double tang = 1.0;
    for (int i = 0; i + 1 < n_; ++i)
      for (int k = 0; k < alpha.entries[i]; ++k) tang *= xi_prime[i];
    c[alpha.entries[n_ - 1]] += coeff * tang;
  }
  if (subtract_from_lambda) {
    for (auto& v : c) v = -v;
    c[0] += lambda;
    if (std::abs(c[order_]) == 0.0)
      throw NumericError("not properly elliptic in xi_n: degenerate leading coefficient");
  }
  return c;
}

double DifferentialSymbol::coeff_scale() const {
  double s = 0.0;
  for (const auto& [alpha, coeff] : terms_) s = std::max(s, std::abs(coeff));
  return s;
}

DifferentialSymbol DifferentialSymbol::laplacian(int n) {
  DifferentialSymbol s(n, 2);
  for (int i = 0; i < n; ++i) s.add_term(unit(n, i, 2), -1.0);
  return s;
}

DifferentialSymbol DifferentialSymbol::neg_bilaplacian(int n) {
  DifferentialSymbol s(n, 4);
  for (int i = 0; i < n; ++i) s.add_term(unit(n, i, 4), -1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      MultiIndex a{std::vector<int>(n, 0)};
      a.entries[i] = 2;
      a.entries[j] = 2;
      s.add_term(std::move(a), -2.0);
    }
  return s;
}

DifferentialSymbol DifferentialSymbol::bilaplacian(int n) {
  DifferentialSymbol s = neg_bilaplacian(n);
  DifferentialSymbol flipped(n, 4);
  for (const auto& [alpha, coeff] : s.terms()) flipped.add_term(alpha, -coeff);
  return flipped;
}

DifferentialSymbol DifferentialSymbol::gamma0(int n) {
  DifferentialSymbol s(n, 0);
  s.add_term(MultiIndex{std::vector<int>(n, 0)}, 1.0);
  return s;
}

DifferentialSymbol DifferentialSymbol::dn(int n) {
  DifferentialSymbol s(n, 1);
  s.add_term(unit(n, n - 1), cplx(0.0, 1.0));
  return s;
}

DifferentialSymbol DifferentialSymbol::dnu(int n) {
  DifferentialSymbol s(n, 1);
  s.add_term(unit(n, n - 1), cplx(0.0, -1.0));
  return s;
}

namespace {

// d/dx_n applied to the Laplacian: symbol sign * i xi_n |xi|^2
DifferentialSymbol dn_lap_signed(int n, double sign) {
  DifferentialSymbol s(n, 3);
  const cplx c(0.0, sign);
  for (int i = 0; i + 1 < n; ++i) {
    MultiIndex a{std::vector<int>(n, 0)};
    a.entries[i] = 2;
    a.entries[n - 1] = 1;
    s.add_term(std::move(a), c);
  }
  s.add_term(unit(n, n - 1, 3), c);
  return s;
}

}  // namespace

DifferentialSymbol DifferentialSymbol::dnu_laplacian(int n) {
  // outward normal on {x_n > 0} is -d/dx_n, so the symbol is +i xi_n |xi|^2
  return dn_lap_signed(n, +1.0);
}

DifferentialSymbol DifferentialSymbol::dn_laplacian(int n) {
  return dn_lap_signed(n, -1.0);
}

double anisotropic_weight_sq(double abs_xi_sq, cplx lambda, int m) {
  return 1.0 + abs_xi_sq + std::pow(std::abs(lambda), 1.0 / m);
}

double anisotropic_weight(std::span<const double> xi, cplx lambda, int m) {
  double q = 0.0;
  for (double x : xi) q += x * x;
  return std::sqrt(anisotropic_weight_sq(q, lambda, m));
}

double quasi_norm(double abs_xi, cplx lambda, int two_m) {
  return abs_xi + std::pow(std::abs(lambda), 1.0 / two_m);
}

}  // namespace pel
