#include "pel/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pel/fft.hpp"
#include "pel/splitmix64.hpp"

namespace pel {

namespace {

// Row-major odometer over the index lattice; f(flat, idx).
template <typename F>
void for_each_mode(const TorusGrid& g, F&& f) {
  std::vector<int> idx(g.n, 0);
  const std::size_t total = g.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(flat, idx);
    for (int d = g.n - 1; d >= 0; --d) {
      if (++idx[d] < g.N) break;
      idx[d] = 0;
    }
  }
}

// |k|^2 over all axes and over the first n-1 axes
void wavenumber_sq(const TorusGrid& g, const std::vector<int>& idx,
                   double& full, double& prime) {
  full = 0.0;
  prime = 0.0;
  for (int d = 0; d < g.n; ++d) {
    const double k = g.wavenumber(idx[d]);
    full += k * k;
    if (d + 1 < g.n) prime += k * k;
  }
}

double lp_norm(const GridField& f, double p) {
  const double w = std::pow(f.grid.spacing(), f.grid.n);
  double acc = 0.0;
  for (const cplx& v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(w * acc, 1.0 / p);
}

}  // namespace

void NormSpec::validate() const {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ConfigError("integrability p must lie in (1, infinity)");
  if (m < 1) throw ConfigError("weight order m must be >= 1");
  if (!std::isfinite(s) || !std::isfinite(sigma))
    throw ConfigError("smoothness orders must be finite");
}

double NormSpec::lambda_weight() const {
  return std::sqrt(1.0 + std::pow(std::abs(lambda), 1.0 / m));
}

GridField bessel_multiplier(const GridField& u, const NormSpec& spec) {
  spec.validate();
  const double lam = std::pow(std::abs(spec.lambda), 1.0 / spec.m);
  std::vector<cplx> coeffs = spectrum(u);
  for_each_mode(u.grid, [&](std::size_t flat, const std::vector<int>& idx) {
    double full, prime;
    wavenumber_sq(u.grid, idx, full, prime);
    const double wf = std::pow(1.0 + full + lam, 0.5 * spec.s);
    const double wp = std::pow(1.0 + prime + lam, 0.5 * spec.sigma);
    coeffs[flat] *= wf * wp;
  });
  return synthesize(u.grid, coeffs);
}

double mixed_norm(const GridField& u, const NormSpec& spec) {
  return lp_norm(bessel_multiplier(u, spec), spec.p);
}

double scaled_norm(const GridField& u, const NormSpec& spec) {
  spec.validate();
  const double lw = spec.lambda_weight();
  std::vector<cplx> coeffs = spectrum(u);
  for_each_mode(u.grid, [&](std::size_t flat, const std::vector<int>& idx) {
    double full, prime;
    wavenumber_sq(u.grid, idx, full, prime);
    const double wf = std::pow(1.0 + full / (lw * lw), 0.5 * spec.s);
    const double wp = std::pow(1.0 + prime / (lw * lw), 0.5 * spec.sigma);
    coeffs[flat] *= wf * wp;
  });
  // kappa_lambda^{-1} dilates the box to <lambda>L, so the L^p quadrature
  // cell is (<lambda> h)^n; the prefactor then cancels the n/p power exactly.
  const double pref =
      std::pow(lw, spec.s + spec.sigma - u.grid.n / spec.p);
  const double cell_scale = std::pow(lw, u.grid.n / spec.p);
  return pref * cell_scale * lp_norm(synthesize(u.grid, coeffs), spec.p);
}

GridField normal_derivative(const GridField& u, int j) {
  if (j < 0) throw ConfigError("derivative order must be >= 0");
  if (j == 0) return u;
  std::vector<cplx> coeffs = spectrum(u);
  for_each_mode(u.grid, [&](std::size_t flat, const std::vector<int>& idx) {
    const cplx ikn(0.0, u.grid.wavenumber(idx[u.grid.n - 1]));
    cplx f = 1.0;
    for (int q = 0; q < j; ++q) f *= ikn;
    coeffs[flat] *= f;
  });
  return synthesize(u.grid, coeffs);
}

BoundaryField trace(const GridField& u, int j) {
  if (u.grid.n < 2) throw ConfigError("trace requires an interior field");
  const TorusGrid bg(u.grid.n - 1, u.grid.N, u.grid.L);
  const std::vector<cplx> coeffs = spectrum(u);
  std::vector<cplx> bcoeffs(bg.size(), cplx(0.0));
  const int N = u.grid.N;
  // last axis is contiguous, so each boundary mode owns one length-N run
  for (std::size_t b = 0; b < bg.size(); ++b) {
    cplx acc = 0.0;
    for (int i = 0; i < N; ++i) {
      const cplx ikn(0.0, u.grid.wavenumber(i));
      cplx f = 1.0;
      for (int q = 0; q < j; ++q) f *= ikn;
      acc += f * coeffs[b * N + i];
    }
    bcoeffs[b] = acc;
  }
  return synthesize(bg, bcoeffs);
}

double besov_norm(const BoundaryField& g, double s, double p, cplx lambda,
                  int m) {
  NormSpec spec{s, 0.0, p, lambda, m};
  spec.validate();
  if (p == 2.0) return mixed_norm(g, spec);

  // sharp-cutoff dyadic blocks on the kappa_lambda-rescaled wavenumbers
  const double lw = spec.lambda_weight();
  const std::vector<cplx> coeffs = spectrum(g);
  std::vector<int> block(coeffs.size(), 0);
  int jmax = 0;
  for_each_mode(g.grid, [&](std::size_t flat, const std::vector<int>& idx) {
    double full, prime;
    wavenumber_sq(g.grid, idx, full, prime);
    const double w = std::sqrt(1.0 + full / (lw * lw));
    block[flat] = static_cast<int>(std::floor(std::log2(w)));
    jmax = std::max(jmax, block[flat]);
  });

  const double cell = std::pow(lw * g.grid.spacing(), g.grid.n);
  double acc = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    std::vector<cplx> masked(coeffs.size(), cplx(0.0));
    bool any = false;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (block[i] == j && coeffs[i] != cplx(0.0)) {
        masked[i] = coeffs[i];
        any = true;
      }
    if (!any) continue;
    const GridField piece = synthesize(g.grid, masked);
    double lp = 0.0;
    for (const cplx& v : piece.values) lp += std::pow(std::abs(v), p);
    acc += std::pow(2.0, j * s * p) * cell * lp;
  }
  return std::pow(lw, s - g.grid.n / p) * std::pow(acc, 1.0 / p);
}

double embedding_ratio(const GridField& u, const NormSpec& from_spec,
                       const NormSpec& to_spec) {
  const double denom = mixed_norm(u, from_spec);
  if (denom == 0.0)
    throw NumericError("embedding ratio undefined for the zero field");
  return mixed_norm(u, to_spec) / denom;
}

InterpolationCheck interpolation_inequality_check(double s0, double s,
                                                  double s1, double sigma,
                                                  double eps, cplx lambda,
                                                  int m, const TorusGrid& grid) {
  if (!(s0 < s && s < s1))
    throw ConfigError("interpolation orders must satisfy s0 < s < s1");
  if (!(eps > 0.0)) throw ConfigError("interpolation eps must be positive");

  const double a = s - s0;
  const double b = s1 - s0;
  const double tstar = std::pow(a / (eps * b), 1.0 / (b - a));
  const double c_eps = tstar >= 1.0
                           ? std::pow(tstar, a) - eps * std::pow(tstar, b)
                           : std::max(0.0, 1.0 - eps);

  const double lam = std::pow(std::abs(lambda), 1.0 / m);
  const double lw = std::sqrt(1.0 + lam);
  double worst = -std::numeric_limits<double>::infinity();
  for_each_mode(grid, [&](std::size_t, const std::vector<int>& idx) {
    double full, prime;
    wavenumber_sq(grid, idx, full, prime);
    const double wk = std::sqrt(1.0 + full + lam);
    const double wp = std::pow(1.0 + prime + lam, 0.5 * sigma);
    const double lhs = std::pow(wk, s) * wp;
    const double rhs = eps * std::pow(wk, s1) * wp +
                       c_eps * std::pow(lw, a) * std::pow(wk, s0) * wp;
    worst = std::max(worst, lhs - rhs);
  });
  return {c_eps, worst};
}

double MultiplierFunction::sup_norm() const {
  double s = 0.0;
  for (const cplx& v : samples.values) s = std::max(s, std::abs(v));
  return s;
}

GridField apply_multiplication(const GridField& u,
                               const MultiplierFunction& a) {
  if (!(a.samples.grid == u.grid))
    throw ConfigError("multiplier and field live on different grids");
  GridField out = u;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= a.samples.values[i];
  return out;
}

double estimate_multiplier_norm(const MultiplierFunction& a,
                                const NormSpec& spec, int probes,
                                std::uint64_t seed) {
  if (probes < 1) throw ConfigError("need at least one probe field");
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const GridField u =
        GridField::random_bandlimited(a.samples.grid, seed + i);
    const double den = mixed_norm(u, spec);
    if (den == 0.0) continue;
    worst = std::max(worst, mixed_norm(apply_multiplication(u, a), spec) / den);
  }
  return worst;
}

}  // namespace pel
