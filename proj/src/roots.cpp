#include "pel/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pel {
namespace {

// p(z) and p'(z) by Horner
cplx horner(std::span<const cplx> coeffs, cplx z, cplx* deriv) {
  cplx p = 0.0, d = 0.0;
  for (int q = static_cast<int>(coeffs.size()) - 1; q >= 0; --q) {
    d = d * z + p;
    p = p * z + coeffs[q];
  }
  if (deriv) *deriv = d;
  return p;
}

// Newton steps on simple roots knock the companion-matrix backward error
// (~eps * |coeffs|) down to the evaluation floor; only accepted while |p|
// decreases, and never applied to clustered (multiple) roots.
void polish_simple_roots(std::span<const cplx> coeffs,
                         std::vector<RootCluster>& clusters) {
  for (RootCluster& rc : clusters) {
    if (rc.multiplicity != 1) continue;
    cplx z = rc.zeta, dp;
    cplx p = horner(coeffs, z, &dp);
    for (int it = 0; it < 3; ++it) {
      if (!(std::abs(dp) > 0.0)) break;
      const cplx znew = z - p / dp;
      cplx dnew;
      const cplx pnew = horner(coeffs, znew, &dnew);
      if (std::abs(pnew) < std::abs(p)) {
        z = znew;
        p = pnew;
        dp = dnew;
      } else {
        break;
      }
    }
    rc.zeta = z;
  }
}

}  // namespace

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && std::abs(coeffs[d]) == 0.0) --d;
  if (d <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -coeffs[i] / coeffs[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericError("companion-matrix eigensolve failed");
  std::vector<cplx> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

std::vector<RootCluster> cluster_roots(std::span<const cplx> raw,
                                       double cluster_tol) {
  std::vector<RootCluster> clusters;
  std::vector<cplx> sums;  // running sums so centers stay means
  for (cplx z : raw) {
    bool merged = false;
    for (size_t c = 0; c < clusters.size(); ++c) {
      const double scale = std::max(1.0, std::abs(clusters[c].zeta));
      if (std::abs(z - clusters[c].zeta) < cluster_tol * scale) {
        sums[c] += z;
        clusters[c].multiplicity += 1;
        clusters[c].zeta = sums[c] / static_cast<double>(clusters[c].multiplicity);
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back({z, 1});
      sums.push_back(z);
    }
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const RootCluster& a, const RootCluster& b) {
              if (a.zeta.real() != b.zeta.real())
                return a.zeta.real() < b.zeta.real();
              return a.zeta.imag() < b.zeta.imag();
            });
  return clusters;
}

StableRootSet stable_roots(const DifferentialSymbol& A0,
                           std::span<const double> xi_prime, cplx lambda,
                           double cluster_tol) {
  double xn = 0.0;
  for (double x : xi_prime) xn += x * x;
  if (xn == 0.0 && lambda == cplx(0.0, 0.0))
    throw ConfigError("stable_roots requires (xi', lambda) != 0");

  const std::vector<cplx> poly =
      A0.xi_n_polynomial(xi_prime, lambda, /*subtract_from_lambda=*/true);
  const std::vector<cplx> raw = polynomial_roots(poly);

  StableRootSet out;
  out.degree = static_cast<int>(raw.size());
  std::vector<RootCluster> clusters = cluster_roots(raw, cluster_tol);
  polish_simple_roots(poly, clusters);
  for (const RootCluster& rc : clusters) {
    const double scale = std::max(1.0, std::abs(rc.zeta));
    if (std::abs(rc.zeta.imag()) < cluster_tol * scale)
      throw NumericError(
          "marginal root: zeta on the real axis, parameter-ellipticity fails "
          "at this sample");
    if (rc.zeta.imag() > 0.0) {
      out.roots.push_back(rc);
      out.count_with_multiplicity += rc.multiplicity;
    }
  }
  return out;
}

}  // namespace pel
