#include "pel/lopatinskii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pel {

namespace {

cplx eval_poly(std::span<const cplx> c, cplx z) {
  cplx v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

double abs_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::vector<std::vector<double>> directions_on_sphere(int dim, int count) {
  std::vector<std::vector<double>> dirs;
  if (dim == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
  } else if (dim == 2) {
    dirs.reserve(count);
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * kPi * k / count;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  } else if (dim == 3) {
    dirs.reserve(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
  } else {
    throw ConfigError("directions_on_sphere supports dim 1..3");
  }
  return dirs;
}

QuasiSphereSampling QuasiSphereSampling::build(int m, int dim,
                                               const Sector& sector, int n_xi,
                                               int n_arg, int n_radial) {
  if (m < 1 || dim < 1 || n_xi < 1 || n_arg < 2 || n_radial < 2)
    throw ConfigError("invalid quasi-sphere sampling parameters");
  const auto dirs = directions_on_sphere(dim, n_xi);

  QuasiSphereSampling s;
  s.m = m;
  s.n_xi = static_cast<int>(dirs.size());
  s.n_arg = n_arg;
  s.n_radial = n_radial;

  for (int i = 0; i < n_radial; ++i) {
    const double t = static_cast<double>(i) / (n_radial - 1);  // |lambda|^{1/m}
    const double xi_len = std::sqrt(1.0 - t);
    const double lam_abs = std::pow(t, m);
    if (i == 0) {
      // endpoint family lambda = 0, |xi| = 1
      for (const auto& d : dirs) s.samples.emplace_back(d, cplx(0.0));
      continue;
    }
    for (int a = 0; a < n_arg; ++a) {
      const double arg =
          -sector.theta + 2.0 * sector.theta * a / (n_arg - 1);
      const cplx lam = std::polar(lam_abs, arg);
      if (i == n_radial - 1) {
        // endpoint family xi = 0, |lambda| = 1
        s.samples.emplace_back(std::vector<double>(dim, 0.0), lam);
      } else {
        for (const auto& d : dirs) {
          std::vector<double> xi(dim);
          for (int k = 0; k < dim; ++k) xi[k] = xi_len * d[k];
          s.samples.emplace_back(std::move(xi), lam);
        }
      }
    }
  }
  return s;
}

EllipticityReport check_parameter_ellipticity(const DifferentialSymbol& A0,
                                              const Sector& sector,
                                              const QuasiSphereSampling& sampling,
                                              double tol) {
  if (sampling.samples.empty()) throw ConfigError("empty quasi-sphere sampling");
  const int m = A0.order() / 2;
  if (2 * m != A0.order())
    throw ConfigError("interior symbol must have even order");

  EllipticityReport rep;
  rep.tolerance = tol;
  rep.c_min = std::numeric_limits<double>::infinity();
  for (const auto& [xi, lam] : sampling.samples) {
    const double q = abs_sq(xi);
    const double norm = q + std::pow(std::abs(lam), 1.0 / m);
    if (std::abs(norm - 1.0) > 1e-12)
      throw ConfigError("sample violates quasi-sphere normalization");
    if (lam != cplx(0.0) && std::abs(std::arg(lam)) > sector.theta + 1e-12)
      throw ConfigError("sample lambda outside the closed sector");
    const cplx a0 = A0.eval(xi, /*principal_only=*/true);
    const double denom = std::abs(lam) + std::pow(q, m);
    const double ratio = std::abs(lam - a0) / denom;
    ++rep.samples_evaluated;
    if (ratio < rep.c_min) {
      rep.c_min = ratio;
      rep.witness_xi = xi;
      rep.witness_lambda = lam;
    }
  }
  rep.pass = rep.c_min > tol;
  return rep;
}

Eigen::MatrixXcd lopatinskii_matrix(const std::vector<BoundarySymbol>& B0,
                                    std::span<const double> xi_prime,
                                    const StableRootSet& stable) {
  const int m = static_cast<int>(B0.size());
  if (stable.roots.empty())
    throw NumericError("no stable roots: cannot form Lopatinskii matrix");

  double rmax = 0.0;
  for (const auto& rc : stable.roots) rmax = std::max(rmax, std::abs(rc.zeta));
  const double radius = 1.5 * rmax;

  std::vector<std::vector<cplx>> bpoly;
  bpoly.reserve(m);
  for (const auto& b : B0)
    bpoly.push_back(b.xi_n_polynomial(xi_prime, 0.0, false));

  constexpr int kNodes = 256;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  for (int q = 0; q < kNodes; ++q) {
    const double th = 2.0 * kPi * q / kNodes;
    const cplx unit = std::polar(1.0, th);
    const cplx zeta = radius * unit;
    cplx aplus = 1.0;
    for (const auto& rc : stable.roots)
      for (int k = 0; k < rc.multiplicity; ++k) aplus *= (zeta - rc.zeta);
    // trapezoid on the circle: (1/2pi i) * f * i R e^{i th} * (2pi/N)
    const cplx wgt = radius * unit / (static_cast<double>(kNodes) * aplus);
    cplx zpow = 1.0;
    for (int l = 0; l < m; ++l) {
      for (int j = 0; j < m; ++j)
        M(j, l) += eval_poly(bpoly[j], zeta) * zpow * wgt;
      zpow *= zeta;
    }
  }
  return M;
}

cplx lopatinskii_determinant(const DifferentialSymbol& A0,
                             const std::vector<BoundarySymbol>& B0,
                             std::span<const double> xi_prime, cplx lambda,
                             double cluster_tol) {
  const StableRootSet stable = stable_roots(A0, xi_prime, lambda, cluster_tol);
  if (stable.count_with_multiplicity != static_cast<int>(B0.size()))
    throw NumericError("stable root count does not match boundary conditions");
  return lopatinskii_matrix(B0, xi_prime, stable).determinant();
}

LopatinskiiReport check_shapiro_lopatinskii(const DifferentialSymbol& A0,
                                            const std::vector<BoundarySymbol>& B0,
                                            const Sector& sector,
                                            const QuasiSphereSampling& sampling,
                                            double tol) {
  (void)sector;  // samples already carry the sector restriction
  if (sampling.samples.empty()) throw ConfigError("empty quasi-sphere sampling");
  const int m = A0.order() / 2;
  if (static_cast<int>(B0.size()) != m)
    throw ConfigError("need exactly m boundary conditions");

  std::vector<double> scales;
  scales.reserve(B0.size());
  for (const auto& b : B0) scales.push_back(b.coeff_scale());

  LopatinskiiReport rep;
  rep.tolerance = tol;
  rep.det_min = std::numeric_limits<double>::infinity();
  for (const auto& [xp, lam] : sampling.samples) {
    ++rep.samples_evaluated;
    StableRootSet stable;
    try {
      stable = stable_roots(A0, xp, lam);
    } catch (const NumericError& e) {
      rep.degenerate_samples.push_back({xp, lam, e.what()});
      continue;
    }
    if (stable.count_with_multiplicity != m) {
      rep.degenerate_samples.push_back(
          {xp, lam, "stable root count differs from m"});
      continue;
    }
    const cplx det = lopatinskii_matrix(B0, xp, stable).determinant();
    const double w = quasi_norm(std::sqrt(abs_sq(xp)), lam, 2 * m);
    double norm = 1.0;
    for (size_t j = 0; j < B0.size(); ++j)
      norm *= std::pow(w, B0[j].order()) * scales[j];
    const double val = std::abs(det) / norm;
    if (val < rep.det_min) {
      rep.det_min = val;
      rep.witness_xi_prime = xp;
      rep.witness_lambda = lam;
    }
  }
  rep.pass = rep.det_min > tol && rep.degenerate_samples.empty();
  return rep;
}

}  // namespace pel
