#include "pel/halfspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include "pel/fft.hpp"
#include "pel/splitmix64.hpp"

namespace pel {
namespace {

std::string mode_label(std::span<const double> xi_prime) {
  std::string s = "(";
  char buf[40];
  for (std::size_t i = 0; i < xi_prime.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", xi_prime[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

// boundary-measure factor L^{n-1} turning per-mode sums into L^2 integrals
double boundary_cell(const TorusGrid& grid) {
  double c = 1.0;
  for (int d = 0; d < grid.n; ++d) c *= grid.L;
  return c;
}

std::vector<ModeFunction> stable_basis(const StableRootSet& roots) {
  std::vector<ModeFunction> basis;
  basis.reserve(std::size_t(roots.count_with_multiplicity));
  for (const RootCluster& rc : roots.roots) {
    for (int l = 0; l < rc.multiplicity; ++l) {
      ModeFunction b;
      b.add_term(cplx(0.0, 1.0) * rc.zeta, l, 1.0);
      basis.push_back(std::move(b));
    }
  }
  return basis;
}

struct BoundarySolve {
  StableRootSet roots;
  std::vector<cplx> coefficients;
  double condition = 0.0;
};

// Solve the m x m system B0_j(xi', D_n) u(0) = data_j over the decaying basis
// x_n^l e^{i zeta_k x_n}.  data_scale is a global magnitude reference for the
// degenerate xi' = 0, lambda = 0 mode, which carries no decaying solutions.
BoundarySolve solve_mode_system(const ModelProblem& problem,
                                std::span<const double> xi_prime, cplx lambda,
                                std::span<const cplx> data, double data_scale,
                                const char* what) {
  const int m = problem.half_order();
  double k2 = 0.0;
  for (double x : xi_prime) k2 += x * x;
  const double w = quasi_norm(std::sqrt(k2), lambda, 2 * m);
  if (w == 0.0) {
    for (cplx d : data) {
      if (std::abs(d) > 1e-12 * std::max(data_scale, 1e-300)) {
        throw NumericError(std::string(what) +
                           ": boundary mode k' = 0 admits no decaying solution at "
                           "lambda = 0, but its data is nonzero");
      }
    }
    return {};
  }

  BoundarySolve out;
  out.roots = stable_roots(problem.interior, xi_prime, lambda);
  if (out.roots.count_with_multiplicity != m) {
    throw NumericError(std::string(what) + ": expected " + std::to_string(m) +
                       " decaying roots at mode " + mode_label(xi_prime) + ", found " +
                       std::to_string(out.roots.count_with_multiplicity));
  }
  const std::vector<ModeFunction> basis = stable_basis(out.roots);

  Eigen::MatrixXcd M(m, m);
  for (int j = 0; j < m; ++j) {
    const std::vector<cplx> bpoly =
        problem.boundary[j].xi_n_polynomial(xi_prime, 0.0, false);
    for (int col = 0; col < m; ++col) M(j, col) = basis[col].boundary_value(bpoly);
  }

  double det_scale = 1.0;
  for (int j = 0; j < m; ++j) {
    det_scale *= std::pow(w, problem.boundary[j].order()) *
                 std::max(problem.boundary[j].coeff_scale(), 1e-300);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  if (std::abs(lu.determinant()) < 1e-12 * det_scale) {
    throw NumericError(std::string(what) + ": boundary system is singular at mode " +
                       mode_label(xi_prime) + " (Lopatinskii condition fails there)");
  }

  Eigen::MatrixXcd R = M;
  for (int j = 0; j < m; ++j) {
    const double rmax = R.row(j).cwiseAbs().maxCoeff();
    if (rmax > 0.0) R.row(j) /= rmax;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R);
  const auto& sv = svd.singularValues();
  out.condition = sv(sv.size() - 1) > 0.0
                      ? sv(0) / sv(sv.size() - 1)
                      : std::numeric_limits<double>::infinity();

  Eigen::VectorXcd rhs(m);
  for (int j = 0; j < m; ++j) rhs(j) = data[j];
  const Eigen::VectorXcd sol = lu.solve(rhs);
  out.coefficients.assign(sol.data(), sol.data() + m);
  return out;
}

void require_admissible_lambda(const ModelProblem& problem, cplx lambda,
                               const char* what) {
  if (lambda != cplx(0.0, 0.0) && !problem.sector.contains(lambda)) {
    throw ConfigError(std::string(what) + ": lambda is outside the spectral sector");
  }
}

void require_boundary_data(const ModelProblem& problem,
                           std::span<const BoundaryField> g, const char* what) {
  if (int(g.size()) != problem.half_order()) {
    throw ConfigError(std::string(what) + ": expected " +
                      std::to_string(problem.half_order()) +
                      " boundary data fields, got " + std::to_string(g.size()));
  }
  for (const BoundaryField& gj : g) {
    if (!(gj.grid == problem.boundary_grid)) {
      throw ConfigError(std::string(what) + ": boundary data grid mismatch");
    }
  }
}

double spectra_scale(const std::vector<std::vector<cplx>>& ghat) {
  double s = 0.0;
  for (const auto& row : ghat)
    for (cplx c : row) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

HalfSpaceField HalfSpaceField::zero(const TorusGrid& grid, std::vector<double> xn,
                                    bool spectral) {
  HalfSpaceField f{grid, std::move(xn), spectral, {}};
  f.values.assign(grid.size() * f.xn_samples.size(), cplx(0.0, 0.0));
  f.validate();
  return f;
}

void HalfSpaceField::validate() const {
  if (xn_samples.empty() || xn_samples.front() != 0.0) {
    throw ConfigError("half-space field needs x_n samples starting at 0");
  }
  for (std::size_t i = 1; i < xn_samples.size(); ++i) {
    if (!(xn_samples[i] > xn_samples[i - 1])) {
      throw ConfigError("half-space x_n samples must be strictly increasing");
    }
  }
  if (values.size() != boundary_grid.size() * xn_samples.size()) {
    throw ConfigError("half-space field has " + std::to_string(values.size()) +
                      " values, expected " +
                      std::to_string(boundary_grid.size() * xn_samples.size()));
  }
}

HalfSpaceField to_spectral(const HalfSpaceField& f) {
  f.validate();
  if (f.spectral) return f;
  HalfSpaceField out = f;
  out.spectral = true;
  const std::size_t B = f.boundary_grid.size();
  GridField layer = GridField::zero(f.boundary_grid);
  for (int j = 0; j < f.xn_count(); ++j) {
    for (std::size_t b = 0; b < B; ++b) layer.values[b] = f.at(int(b), j);
    const std::vector<cplx> coeffs = spectrum(layer);
    for (std::size_t b = 0; b < B; ++b) out.at(int(b), j) = coeffs[b];
  }
  return out;
}

HalfSpaceField to_physical(const HalfSpaceField& f) {
  f.validate();
  if (!f.spectral) return f;
  HalfSpaceField out = f;
  out.spectral = false;
  const std::size_t B = f.boundary_grid.size();
  std::vector<cplx> coeffs(B);
  for (int j = 0; j < f.xn_count(); ++j) {
    for (std::size_t b = 0; b < B; ++b) coeffs[b] = f.at(int(b), j);
    const GridField layer = synthesize(f.boundary_grid, coeffs);
    for (std::size_t b = 0; b < B; ++b) out.at(int(b), j) = layer.values[b];
  }
  return out;
}

ModeFunction ModeSolution::kernel() const {
  ModeFunction u;
  std::size_t col = 0;
  for (const RootCluster& rc : roots.roots) {
    for (int l = 0; l < rc.multiplicity; ++l) {
      u.add_term(cplx(0.0, 1.0) * rc.zeta, l, coefficients[col++]);
    }
  }
  u.compress();
  return u;
}

HalfSpaceField ModeField::sample(std::span<const double> xn_samples,
                                 bool physical) const {
  if (modes.size() != boundary_grid.size()) {
    throw ConfigError("mode field does not cover the boundary grid");
  }
  HalfSpaceField out = HalfSpaceField::zero(
      boundary_grid, {xn_samples.begin(), xn_samples.end()}, /*spectral=*/true);
  for (std::size_t b = 0; b < modes.size(); ++b) {
    for (int j = 0; j < out.xn_count(); ++j) {
      out.at(int(b), j) = modes[b].eval(out.xn_samples[j]);
    }
  }
  return physical ? to_physical(out) : out;
}

ModeField PoissonSolution::field() const {
  ModeField out{boundary_grid, {}};
  out.modes.reserve(modes.size());
  for (const ModeSolution& s : modes) out.modes.push_back(s.kernel());
  return out;
}

PoissonSolution solve_poisson(const ModelProblem& problem, cplx lambda,
                              std::span<const BoundaryField> g) {
  require_admissible_lambda(problem, lambda, "solve_poisson");
  require_boundary_data(problem, g, "solve_poisson");
  const int m = problem.half_order();

  std::vector<std::vector<cplx>> ghat(m);
  for (int j = 0; j < m; ++j) ghat[j] = spectrum(g[j]);
  const double data_scale = spectra_scale(ghat);

  PoissonSolution out{problem.boundary_grid, {}, 0.0};
  const std::size_t B = problem.boundary_grid.size();
  out.modes.reserve(B);
  std::vector<cplx> data(m);
  for (std::size_t b = 0; b < B; ++b) {
    const std::vector<double> xi = problem.mode_wavenumbers(int(b));
    for (int j = 0; j < m; ++j) data[j] = ghat[j][b];
    BoundarySolve s =
        solve_mode_system(problem, xi, lambda, data, data_scale, "solve_poisson");
    out.max_normalized_condition = std::max(out.max_normalized_condition, s.condition);
    out.modes.push_back(ModeSolution{xi, std::move(s.roots), std::move(s.coefficients)});
  }
  return out;
}

std::vector<ModeFunction> reflected_modes(const TorusGrid& boundary_grid,
                                          const HalfSpaceField& f) {
  f.validate();
  if (!(f.boundary_grid == boundary_grid)) {
    throw ConfigError("half-space data grid does not match the problem");
  }
  const std::vector<double> want = uniform_xn_samples(boundary_grid);
  if (f.xn_samples.size() != want.size()) {
    throw ConfigError("half-space data needs the uniform x_n profile with " +
                      std::to_string(want.size()) + " layers");
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (std::abs(f.xn_samples[i] - want[i]) > 1e-12) {
      throw ConfigError("half-space data needs the uniform x_n profile j * (L/N)");
    }
  }

  const HalfSpaceField fs = to_spectral(f);
  const int N = boundary_grid.N;
  const int J = N / 2 + 1;
  const TorusGrid line(1, N, boundary_grid.L);
  GridField profile = GridField::zero(line);
  std::vector<ModeFunction> modes(boundary_grid.size());
  for (std::size_t b = 0; b < modes.size(); ++b) {
    // even reflection through x_n = L/2 makes the torus coefficients of a
    // field that restricts to f on [0, L/2]
    for (int jn = 0; jn < N; ++jn) {
      profile.values[jn] = fs.at(int(b), jn < J ? jn : N - jn);
    }
    const std::vector<cplx> ck = spectrum(profile);
    for (int jn = 0; jn < N; ++jn) {
      modes[b].add_term(cplx(0.0, 1.0) * line.wavenumber(jn), 0, ck[jn]);
    }
    modes[b].compress();
  }
  return modes;
}

std::vector<ModeFunction> reflected_modes(const ModelProblem& problem,
                                          const HalfSpaceField& f) {
  return reflected_modes(problem.boundary_grid, f);
}

ModeField solve_full(const ModelProblem& problem, cplx lambda,
                     const HalfSpaceField& f, std::span<const BoundaryField> g) {
  require_admissible_lambda(problem, lambda, "solve_full");
  require_boundary_data(problem, g, "solve_full");
  const int m = problem.half_order();
  const int n = problem.dim();

  const std::vector<ModeFunction> fmodes = reflected_modes(problem, f);
  double f_scale = 0.0;
  for (const ModeFunction& mf : fmodes)
    for (const ExpTerm& t : mf.terms()) f_scale = std::max(f_scale, std::abs(t.a));

  std::vector<std::vector<cplx>> ghat(m);
  for (int j = 0; j < m; ++j) ghat[j] = spectrum(g[j]);
  const double data_scale = std::max(spectra_scale(ghat), f_scale);

  const double a_scale = std::max(problem.interior.coeff_scale(), 1e-300);
  ModeField out{problem.boundary_grid, {}};
  const std::size_t B = problem.boundary_grid.size();
  out.modes.reserve(B);
  std::vector<cplx> data(m);
  std::vector<double> xi_full(std::size_t(n), 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    const std::vector<double> xi = problem.mode_wavenumbers(int(b));
    std::copy(xi.begin(), xi.end(), xi_full.begin());
    double k2 = 0.0;
    for (double x : xi) k2 += x * x;

    // particular part: divide each reflected-torus coefficient by the
    // whole-space symbol lambda - A0(k', k_n)
    ModeFunction up;
    for (const ExpTerm& t : fmodes[b].terms()) {
      const double kn = t.s.imag();
      xi_full.back() = kn;
      const cplx den = lambda - problem.interior.eval(xi_full);
      const double scale =
          std::abs(lambda) + a_scale * std::pow(k2 + kn * kn, m);
      if (std::abs(den) <= 1e-12 * std::max(scale, 1e-300)) {
        if (std::abs(t.a) <= 1e-12 * std::max(f_scale, 1e-300)) continue;
        throw NumericError(
            "solve_full: interior symbol vanishes at reflected frequency k_n = " +
            std::to_string(kn) + ", mode " + mode_label(xi));
      }
      up.add_term(t.s, t.l, t.a / den);
    }
    up.compress();

    // boundary correction absorbs the traces of the particular part
    for (int j = 0; j < m; ++j) {
      const std::vector<cplx> bpoly =
          problem.boundary[j].xi_n_polynomial(xi, 0.0, false);
      data[j] = ghat[j][b] - up.boundary_value(bpoly);
    }
    BoundarySolve s =
        solve_mode_system(problem, xi, lambda, data, data_scale, "solve_full");
    ModeFunction mode = std::move(up);
    std::size_t col = 0;
    for (const RootCluster& rc : s.roots.roots) {
      for (int l = 0; l < rc.multiplicity; ++l) {
        mode.add_term(cplx(0.0, 1.0) * rc.zeta, l, s.coefficients[col++]);
      }
    }
    mode.compress();
    out.modes.push_back(std::move(mode));
  }
  return out;
}

ResidualReport residual_check(const ModelProblem& problem, cplx lambda,
                              const ModeField& u, const HalfSpaceField* f,
                              std::span<const BoundaryField> g) {
  require_boundary_data(problem, g, "residual_check");
  if (!(u.boundary_grid == problem.boundary_grid) ||
      u.modes.size() != problem.boundary_grid.size()) {
    throw ConfigError("residual_check: solution does not cover the boundary grid");
  }
  const int m = problem.half_order();
  const double H = problem.boundary_grid.L / 2.0;
  const double cell = boundary_cell(problem.boundary_grid);

  std::vector<ModeFunction> fmodes;
  if (f) fmodes = reflected_modes(problem, *f);
  std::vector<std::vector<cplx>> ghat(m);
  for (int j = 0; j < m; ++j) ghat[j] = spectrum(g[j]);

  double rin2 = 0.0, nf2 = 0.0;
  std::vector<double> rb2(m, 0.0), ng2(m, 0.0);
  const std::size_t B = problem.boundary_grid.size();
  for (std::size_t b = 0; b < B; ++b) {
    const std::vector<double> xi = problem.mode_wavenumbers(int(b));
    const std::vector<cplx> apoly =
        problem.interior.xi_n_polynomial(xi, lambda, /*subtract_from_lambda=*/true);
    ModeFunction r = u.modes[b].apply_dn_polynomial(apoly);
    if (f) r.add(fmodes[b], -1.0);
    r.compress();
    rin2 += r.strip_norm_sq(H);
    if (f) nf2 += fmodes[b].strip_norm_sq(H);
    for (int j = 0; j < m; ++j) {
      const std::vector<cplx> bpoly =
          problem.boundary[j].xi_n_polynomial(xi, 0.0, false);
      const cplx res = u.modes[b].boundary_value(bpoly) - ghat[j][b];
      rb2[j] += std::norm(res);
      ng2[j] += std::norm(ghat[j][b]);
    }
  }

  ResidualReport rep;
  rep.strip_height = H;
  rep.interior_abs = std::sqrt(cell * rin2);
  double ndata2 = nf2;
  for (int j = 0; j < m; ++j) ndata2 += ng2[j];
  rep.data_norm = std::sqrt(cell * ndata2);
  const double dn = std::max(rep.data_norm, 1e-300);
  rep.interior_rel = rep.interior_abs / dn;
  rep.boundary_abs.resize(m);
  rep.boundary_rel.resize(m);
  for (int j = 0; j < m; ++j) {
    rep.boundary_abs[j] = std::sqrt(cell * rb2[j]);
    rep.boundary_rel[j] = rep.boundary_abs[j] / dn;
  }
  return rep;
}

ResidualReport residual_check_sampled(const ModelProblem& problem, cplx lambda,
                                      const HalfSpaceField& u,
                                      const HalfSpaceField* f,
                                      std::span<const BoundaryField> g) {
  require_boundary_data(problem, g, "residual_check_sampled");
  u.validate();
  if (!(u.boundary_grid == problem.boundary_grid)) {
    throw ConfigError("residual_check_sampled: field grid mismatch");
  }
  const int m = problem.half_order();
  if (2 * m > 4) {
    throw ConfigError("residual_check_sampled supports operators up to order 4");
  }
  const int J = u.xn_count();
  if (J < 8) {
    throw ConfigError("residual_check_sampled needs at least 8 x_n layers");
  }
  const double h = u.xn_samples[1] - u.xn_samples[0];
  for (int j = 1; j < J; ++j) {
    if (std::abs(u.xn_samples[j] - j * h) > 1e-12 * std::max(1.0, j * h)) {
      throw ConfigError("residual_check_sampled needs uniform x_n samples");
    }
  }

  const HalfSpaceField us = to_spectral(u);
  HalfSpaceField fsp;
  if (f) {
    f->validate();
    if (!(f->boundary_grid == problem.boundary_grid) ||
        f->xn_samples.size() != u.xn_samples.size()) {
      throw ConfigError("residual_check_sampled: data profile mismatch");
    }
    fsp = to_spectral(*f);
  }
  std::vector<std::vector<cplx>> ghat(m);
  for (int j = 0; j < m; ++j) ghat[j] = spectrum(g[j]);

  // fourth-order central stencils on offsets -3..3 (first to fourth derivative)
  static const double kCentral[5][7] = {
      {0, 0, 0, 1, 0, 0, 0},
      {0, 1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12, 0},
      {0, -1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12, 0},
      {1.0 / 8, -1, 13.0 / 8, 0, -13.0 / 8, 1, -1.0 / 8},
      {-1.0 / 6, 2, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2, -1.0 / 6}};
  // third-order one-sided stencils at x_n = 0
  static const double kSided1[6] = {-11.0 / 6, 3, -1.5, 1.0 / 3, 0, 0};
  static const double kSided2[6] = {35.0 / 12, -26.0 / 3, 19.0 / 2, -14.0 / 3,
                                    11.0 / 12, 0};
  static const double kSided3[6] = {-17.0 / 4, 71.0 / 4, -59.0 / 2, 49.0 / 2,
                                    -41.0 / 4, 7.0 / 4};

  const double cell = boundary_cell(problem.boundary_grid);
  const std::size_t B = problem.boundary_grid.size();
  double rin2 = 0.0, nf2 = 0.0;
  std::vector<double> rb2(m, 0.0), ng2(m, 0.0);
  const cplx mi(0.0, -1.0);  // D_n = -i d/dx

  for (std::size_t b = 0; b < B; ++b) {
    const std::vector<double> xi = problem.mode_wavenumbers(int(b));
    const std::vector<cplx> apoly =
        problem.interior.xi_n_polynomial(xi, lambda, /*subtract_from_lambda=*/true);
    // interior rows on the stencil-covered range
    for (int jn = 3; jn + 3 < J; ++jn) {
      cplx val = 0.0;
      cplx iq = 1.0;
      for (std::size_t q = 0; q < apoly.size(); ++q) {
        if (q > 0) iq *= mi;
        if (apoly[q] == cplx(0.0, 0.0)) continue;
        cplx d = 0.0;
        for (int o = -3; o <= 3; ++o) d += kCentral[q][o + 3] * us.at(int(b), jn + o);
        val += apoly[q] * iq * d / std::pow(h, double(q));
      }
      if (f) val -= fsp.at(int(b), jn);
      rin2 += std::norm(val) * h;
    }
    if (f) {
      for (int jn = 0; jn < J; ++jn) {
        const double wq = (jn == 0 || jn == J - 1) ? 0.5 : 1.0;
        nf2 += wq * std::norm(fsp.at(int(b), jn)) * h;
      }
    }
    // boundary rows from one-sided derivatives at x_n = 0
    cplx d0[4] = {us.at(int(b), 0), 0.0, 0.0, 0.0};
    for (int o = 0; o < 6; ++o) {
      const cplx v = us.at(int(b), o);
      d0[1] += kSided1[o] * v;
      d0[2] += kSided2[o] * v;
      d0[3] += kSided3[o] * v;
    }
    d0[1] /= h;
    d0[2] /= h * h;
    d0[3] /= h * h * h;
    for (int j = 0; j < m; ++j) {
      const std::vector<cplx> bpoly =
          problem.boundary[j].xi_n_polynomial(xi, 0.0, false);
      cplx val = 0.0;
      cplx iq = 1.0;
      for (std::size_t q = 0; q < bpoly.size() && q < 4; ++q) {
        if (q > 0) iq *= mi;
        val += bpoly[q] * iq * d0[q];
      }
      val -= ghat[j][b];
      rb2[j] += std::norm(val);
      ng2[j] += std::norm(ghat[j][b]);
    }
  }

  ResidualReport rep;
  rep.strip_height = u.xn_samples.back();
  rep.interior_abs = std::sqrt(cell * rin2);
  double ndata2 = nf2;
  for (int j = 0; j < m; ++j) ndata2 += ng2[j];
  rep.data_norm = std::sqrt(cell * ndata2);
  const double dn = std::max(rep.data_norm, 1e-300);
  rep.interior_rel = rep.interior_abs / dn;
  rep.boundary_abs.resize(m);
  rep.boundary_rel.resize(m);
  for (int j = 0; j < m; ++j) {
    rep.boundary_abs[j] = std::sqrt(cell * rb2[j]);
    rep.boundary_rel[j] = rep.boundary_abs[j] / dn;
  }
  return rep;
}

double strip_sobolev_norm_sq(const ModeFunction& u, double k2, cplx lambda,
                             int m, int s, double H) {
  if (s < 0) throw ConfigError("strip Sobolev norm needs s >= 0");
  if (m < 1) throw ConfigError("strip Sobolev norm needs m >= 1");
  const double w2 = 1.0 + k2 + std::pow(std::abs(lambda), 1.0 / m);
  double tot = 0.0;
  ModeFunction dj = u;
  double binom = 1.0;
  for (int j = 0; j <= s; ++j) {
    tot += binom * std::pow(w2, double(s - j)) * dj.strip_norm_sq(H);
    if (j < s) {
      dj = dj.derivative();
      binom = binom * double(s - j) / double(j + 1);
    }
  }
  return tot;
}

AprioriTable apriori_sweep(const ModelProblem& problem, const NormSpec& spec,
                           std::span<const double> rays,
                           std::span<const double> magnitudes,
                           const HalfSpaceField& f,
                           std::span<const BoundaryField> g) {
  const int m = problem.half_order();
  spec.validate();
  if (spec.p != 2.0) {
    throw ConfigError("apriori_sweep supports p = 2 only");
  }
  if (spec.m != m) {
    throw ConfigError("apriori_sweep: norm half-order must match the operator");
  }
  if (spec.sigma > 0.0) {
    throw ConfigError("apriori_sweep needs sigma <= 0");
  }
  const auto near_int = [](double x) {
    return std::abs(x - std::round(x)) <= 1e-9;
  };
  if (!near_int(spec.s) || !near_int(spec.sigma)) {
    throw ConfigError("apriori_sweep needs integer s and sigma");
  }
  const int s = int(std::lround(spec.s));
  const int sigma = int(std::lround(spec.sigma));
  if (s - 2 * m < 0) {
    throw ConfigError("apriori_sweep needs s >= 2m");
  }
  int order_max = 0;
  for (const BoundarySymbol& bj : problem.boundary)
    order_max = std::max(order_max, bj.order());
  if (!(spec.s + spec.sigma > order_max + 0.5)) {
    throw ConfigError("apriori_sweep needs s + sigma > max boundary order + 1/2");
  }
  require_boundary_data(problem, g, "apriori_sweep");
  if (rays.empty() || magnitudes.empty()) {
    throw ConfigError("apriori_sweep needs at least one ray and one magnitude");
  }
  for (double mag : magnitudes) {
    if (!(mag > 0.0)) throw ConfigError("apriori_sweep magnitudes must be positive");
  }

  const std::vector<ModeFunction> fmodes = reflected_modes(problem, f);
  std::vector<std::vector<cplx>> ghat(m);
  for (int j = 0; j < m; ++j) ghat[j] = spectrum(g[j]);

  const double H = problem.boundary_grid.L / 2.0;
  const double cell = boundary_cell(problem.boundary_grid);
  const std::size_t B = problem.boundary_grid.size();

  AprioriTable table;
  table.rows.reserve(rays.size() * magnitudes.size());
  for (double arg : rays) {
    for (double mag : magnitudes) {
      const cplx lam = std::polar(mag, arg);
      const ModeField u = solve_full(problem, lam, f, g);

      double nu2 = 0.0, nfd2 = 0.0;
      std::vector<double> ngj2(m, 0.0);
      for (std::size_t b = 0; b < B; ++b) {
        const std::vector<double> xi = problem.mode_wavenumbers(int(b));
        double k2 = 0.0;
        for (double x : xi) k2 += x * x;
        const double w2 = 1.0 + k2 + std::pow(std::abs(lam), 1.0 / m);
        const double wsig = std::pow(w2, double(sigma));
        nu2 += wsig * strip_sobolev_norm_sq(u.modes[b], k2, lam, m, s, H);
        nfd2 += wsig * strip_sobolev_norm_sq(fmodes[b], k2, lam, m, s - 2 * m, H);
        for (int j = 0; j < m; ++j) {
          const double tr = spec.s + spec.sigma - problem.boundary[j].order() - 0.5;
          ngj2[j] += std::pow(w2, tr) * std::norm(ghat[j][b]);
        }
      }
      double denom = std::sqrt(cell * nfd2);
      for (int j = 0; j < m; ++j) denom += std::sqrt(cell * ngj2[j]);
      const double ratio = std::sqrt(cell * nu2) / std::max(denom, 1e-300);
      const double irel =
          residual_check(problem, lam, u, &f, g).interior_rel;
      table.rows.push_back(AprioriRow{arg, mag, ratio, irel});
    }
  }
  table.max_ratio = 0.0;
  table.min_ratio = std::numeric_limits<double>::infinity();
  for (const AprioriRow& r : table.rows) {
    table.max_ratio = std::max(table.max_ratio, r.ratio);
    table.min_ratio = std::min(table.min_ratio, r.ratio);
  }
  table.spread = table.min_ratio > 0.0
                     ? table.max_ratio / table.min_ratio
                     : std::numeric_limits<double>::infinity();
  return table;
}

AprioriTable apriori_sweep(const ModelProblem& problem, const NormSpec& spec,
                           std::span<const double> rays,
                           std::span<const double> magnitudes,
                           std::uint64_t seed) {
  const HalfSpaceField f = random_halfspace_data(
      problem.boundary_grid, uniform_xn_samples(problem.boundary_grid), seed);
  std::vector<BoundaryField> g;
  g.reserve(std::size_t(problem.half_order()));
  for (int j = 0; j < problem.half_order(); ++j) {
    g.push_back(random_boundary_data(problem.boundary_grid, seed + 1 + std::uint64_t(j)));
  }
  return apriori_sweep(problem, spec, rays, magnitudes, f, g);
}

BoundaryField random_boundary_data(const TorusGrid& grid, std::uint64_t seed) {
  GridField out = GridField::zero(grid);
  SplitMix64 rng(seed);
  for (cplx& v : out.values) v = rng.next_unit_complex();
  return out;
}

HalfSpaceField random_halfspace_data(const TorusGrid& grid,
                                     std::span<const double> xn_samples,
                                     std::uint64_t seed) {
  HalfSpaceField out = HalfSpaceField::zero(
      grid, {xn_samples.begin(), xn_samples.end()}, /*spectral=*/false);
  SplitMix64 rng(seed);
  for (cplx& v : out.values) v = rng.next_unit_complex();
  return out;
}

}  // namespace pel
