#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "pel/fft.hpp"
#include "pel/halfspace.hpp"
#include "pel/model_problem.hpp"
#include "pel/splitmix64.hpp"

using pel::BoundaryField;
using pel::cplx;
using pel::GridField;
using pel::HalfSpaceField;
using pel::kPi;
using pel::ModeField;
using pel::ModelProblem;
using pel::PoissonSolution;
using pel::TorusGrid;

namespace {

const TorusGrid kLine{1, 64, 2.0 * kPi};

// tau_{1,2} = sqrt(k^2 +- i sqrt(lambda)), principal branches
std::pair<cplx, cplx> tau_pair(double k2, cplx lam) {
  const cplx sq = std::sqrt(lam);
  return {std::sqrt(cplx(k2) + cplx(0.0, 1.0) * sq),
          std::sqrt(cplx(k2) - cplx(0.0, 1.0) * sq)};
}

// 2x2 boundary solve of the (gamma0, dnu Lap) pair on e^{-tau1 x}, e^{-tau2 x}
std::pair<cplx, cplx> biharmonic_coeffs(double k2, cplx lam, cplx g0, cplx g3) {
  const auto [t1, t2] = tau_pair(k2, lam);
  const cplx sq = std::sqrt(lam);
  const cplx a11 = cplx(0.0, 1.0) * sq * t1;
  const cplx a12 = -cplx(0.0, 1.0) * sq * t2;
  const cplx det = a12 - a11;
  return {(g0 * a12 - g3) / det, (g3 - g0 * a11) / det};
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (cplx c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("half-space field round-trips between physical and spectral") {
  const auto xn = pel::uniform_xn_samples(kLine);
  const HalfSpaceField f = pel::random_halfspace_data(kLine, xn, 77);
  const HalfSpaceField back = pel::to_physical(pel::to_spectral(f));
  double err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(f.values[i] - back.values[i]));
  }
  CHECK(err <= 1e-12);
}

TEST_CASE("random half-space data fills x_n layers contiguously") {
  const std::vector<double> xn = {0.0, 0.5, 1.0};
  const HalfSpaceField f = pel::random_halfspace_data(kLine, xn, 12345);
  pel::SplitMix64 rng(12345);
  CHECK(f.at(0, 0) == rng.next_unit_complex());
  CHECK(f.at(0, 1) == rng.next_unit_complex());
  CHECK(f.at(0, 2) == rng.next_unit_complex());
  CHECK(f.at(1, 0) == rng.next_unit_complex());
}

TEST_CASE("reflected modes reproduce an even x_n profile exactly") {
  const auto xn = pel::uniform_xn_samples(kLine);
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  HalfSpaceField f = HalfSpaceField::zero(kLine, xn, /*spectral=*/true);
  const double kappa = 3.0;
  const cplx amp(0.7, -0.4);
  for (int j = 0; j < f.xn_count(); ++j) {
    f.at(5, j) = amp * std::cos(kappa * xn[j]);
  }
  const auto modes = pel::reflected_modes(problem, f);
  // the chosen mode evaluates back to the profile, all others stay near zero
  for (int j = 0; j < f.xn_count(); ++j) {
    CHECK(std::abs(modes[5].eval(xn[j]) - f.at(5, j)) <= 1e-12);
  }
  cplx plus = 0.0, minus = 0.0;
  for (const pel::ExpTerm& t : modes[5].terms()) {
    if (std::abs(t.s - cplx(0.0, kappa)) < 1e-9) plus = t.a;
    if (std::abs(t.s + cplx(0.0, kappa)) < 1e-9) minus = t.a;
  }
  CHECK(std::abs(plus - amp * 0.5) <= 1e-12);
  CHECK(std::abs(minus - amp * 0.5) <= 1e-12);
  for (std::size_t b = 0; b < modes.size(); ++b) {
    if (b == 5) continue;
    CHECK(std::abs(modes[b].eval(0.3)) <= 1e-12);
  }
}

TEST_CASE("heat boundary solve matches the closed-form decaying exponential") {
  const ModelProblem problem = pel::heat_dynbc_problem(kLine);
  const cplx lam = std::polar(10.0, 0.3 * kPi);
  const BoundaryField g = pel::random_boundary_data(kLine, 21);
  const PoissonSolution sol = pel::solve_poisson(problem, lam, {&g, 1});
  const std::vector<cplx> ghat = pel::spectrum(g);
  double err = 0.0;
  for (int b = 0; b < kLine.N; ++b) {
    const double k = kLine.wavenumber(b);
    const cplx tau = std::sqrt(lam + k * k);
    const pel::ModeFunction u = sol.modes[b].kernel();
    for (double x : {0.0, 0.21, 1.3}) {
      err = std::max(err, std::abs(u.eval(x) - ghat[b] * std::exp(-tau * x)));
    }
  }
  CHECK(err <= 1e-12 * max_abs(ghat));
  CHECK(sol.max_normalized_condition < 10.0);
}

TEST_CASE("clamped-pair boundary solve matches the 2x2 closed form") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const cplx lam = std::polar(10.0, 0.3 * kPi);
  const BoundaryField g0 = pel::random_boundary_data(kLine, 31);
  const BoundaryField g3 = pel::random_boundary_data(kLine, 32);
  const std::vector<BoundaryField> g = {g0, g3};
  const PoissonSolution sol = pel::solve_poisson(problem, lam, g);
  const std::vector<cplx> g0hat = pel::spectrum(g0);
  const std::vector<cplx> g3hat = pel::spectrum(g3);
  double err = 0.0;
  for (int b = 0; b < kLine.N; ++b) {
    const double k = kLine.wavenumber(b);
    const auto [t1, t2] = tau_pair(k * k, lam);
    const auto [c1, c2] = biharmonic_coeffs(k * k, lam, g0hat[b], g3hat[b]);
    const pel::ModeFunction u = sol.modes[b].kernel();
    for (double x : {0.0, 0.4, 1.7}) {
      const cplx want = c1 * std::exp(-t1 * x) + c2 * std::exp(-t2 * x);
      err = std::max(err, std::abs(u.eval(x) - want));
    }
  }
  CHECK(err <= 1e-10 * std::max(max_abs(g0hat), max_abs(g3hat)));
}

TEST_CASE("zero boundary data produces the zero solution") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const BoundaryField z0 = GridField::zero(kLine);
  const std::vector<BoundaryField> g = {z0, z0};
  const PoissonSolution sol = pel::solve_poisson(problem, cplx(2.0, 1.0), g);
  for (const pel::ModeSolution& msol : sol.modes) {
    for (cplx c : msol.coefficients) CHECK(std::abs(c) <= 1e-14);
  }
}

TEST_CASE("mode solutions satisfy the interior equation exactly") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const cplx lam = std::polar(50.0, -0.55 * kPi);
  const BoundaryField g0 = pel::random_boundary_data(kLine, 41);
  const BoundaryField g3 = pel::random_boundary_data(kLine, 42);
  const std::vector<BoundaryField> g = {g0, g3};
  const PoissonSolution sol = pel::solve_poisson(problem, lam, g);
  const double H = kLine.L / 2.0;
  for (int b = 0; b < kLine.N; ++b) {
    const pel::ModeFunction u = sol.modes[b].kernel();
    if (u.empty()) continue;
    const auto apoly =
        problem.interior.xi_n_polynomial(sol.modes[b].xi_prime, lam, true);
    const pel::ModeFunction r = u.apply_dn_polynomial(apoly);
    const double k = kLine.wavenumber(b);
    // normalize by the symbol size at this mode: cancellation noise scales
    // with |lambda| + <k>^{2m}
    const double scale =
        (std::abs(lam) + std::pow(1.0 + k * k, 2.0)) * std::sqrt(u.strip_norm_sq(H));
    CHECK(std::sqrt(r.strip_norm_sq(H)) <= 1e-12 * scale);
  }
}

TEST_CASE("manufactured interior data is solved to closed form") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const auto xn = pel::uniform_xn_samples(kLine);
  const cplx lam = std::polar(10.0, 0.3 * kPi);
  const int b0 = 2;  // tangential mode k = 2
  const double k = kLine.wavenumber(b0);
  const double kappa = 3.0;
  const cplx amp_f(1.3, 0.2), amp0(0.4, -1.1), amp3(-0.8, 0.5);

  HalfSpaceField f = HalfSpaceField::zero(kLine, xn, /*spectral=*/true);
  for (int j = 0; j < f.xn_count(); ++j) {
    f.at(b0, j) = amp_f * std::cos(kappa * xn[j]);
  }
  GridField g0 = GridField::single_mode(kLine, {b0});
  GridField g3 = g0;
  for (cplx& v : g0.values) v *= amp0;
  for (cplx& v : g3.values) v *= amp3;
  const std::vector<BoundaryField> g = {g0, g3};

  const ModeField u = pel::solve_full(problem, lam, f, g);

  // expected: cos part over the interior symbol plus the 2x2-corrected tails
  const double k2 = k * k;
  const cplx den = lam + std::pow(k2 + kappa * kappa, 2.0);
  const cplx tr0 = amp_f / den;  // cos traces: value 1, dnu Lap value 0
  const auto [t1, t2] = tau_pair(k2, lam);
  const auto [c1, c2] = biharmonic_coeffs(k2, lam, amp0 - tr0, amp3);
  double err = 0.0;
  for (double x : {0.0, 0.3, 1.1, 2.7}) {
    const cplx want = amp_f * std::cos(kappa * x) / den + c1 * std::exp(-t1 * x) +
                      c2 * std::exp(-t2 * x);
    err = std::max(err, std::abs(u.modes[b0].eval(x) - want));
  }
  CHECK(err <= 1e-12);
  for (int b = 0; b < kLine.N; ++b) {
    if (b == b0) continue;
    CHECK(std::abs(u.modes[b].eval(0.4)) <= 1e-10);
  }

  const pel::ResidualReport rep = pel::residual_check(problem, lam, u, &f, g);
  CHECK(rep.interior_rel <= 1e-12);
  CHECK(rep.boundary_rel[0] <= 1e-12);
  CHECK(rep.boundary_rel[1] <= 1e-12);
}

TEST_CASE("full solve with zero interior data reduces to the boundary solve") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const auto xn = pel::uniform_xn_samples(kLine);
  const cplx lam = std::polar(30.0, 0.5 * kPi);
  const HalfSpaceField f = HalfSpaceField::zero(kLine, xn);
  const BoundaryField g0 = pel::random_boundary_data(kLine, 51);
  const BoundaryField g3 = pel::random_boundary_data(kLine, 52);
  const std::vector<BoundaryField> g = {g0, g3};
  const ModeField full = pel::solve_full(problem, lam, f, g);
  const ModeField pois = pel::solve_poisson(problem, lam, g).field();
  double err = 0.0, scale = 0.0;
  for (int b = 0; b < kLine.N; ++b) {
    for (double x : {0.0, 0.5, 2.0}) {
      err = std::max(err, std::abs(full.modes[b].eval(x) - pois.modes[b].eval(x)));
      scale = std::max(scale, std::abs(pois.modes[b].eval(x)));
    }
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("random data round-trips through the solver with tiny residuals") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const auto xn = pel::uniform_xn_samples(kLine);
  const HalfSpaceField f = pel::random_halfspace_data(kLine, xn, 3);
  const std::vector<BoundaryField> g = {pel::random_boundary_data(kLine, 4),
                                        pel::random_boundary_data(kLine, 5)};
  for (const cplx lam : {std::polar(1.0, 0.0), std::polar(100.0, 0.3 * kPi),
                         std::polar(1e4, -0.55 * kPi)}) {
    const ModeField u = pel::solve_full(problem, lam, f, g);
    const pel::ResidualReport rep = pel::residual_check(problem, lam, u, &f, g);
    CHECK(rep.interior_rel <= 1e-8);
    CHECK(rep.boundary_rel[0] <= 1e-8);
    CHECK(rep.boundary_rel[1] <= 1e-8);
  }
}

TEST_CASE("boundary solve agrees with an independent finite-difference solver") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const struct {
    int k;
    cplx lam;
  } cases[] = {{0, cplx(1.0, 0.0)},
               {1, cplx(1.0, 0.0)},
               {3, std::polar(10.0, 0.3 * kPi)},
               {5, std::polar(100.0, -0.55 * kPi)},
               {2, std::polar(1.0, 0.55 * kPi)}};
  for (const auto& c : cases) {
    CAPTURE(c.k);
    const double k2 = double(c.k) * c.k;
    const cplx g0(0.9, -0.3), g3(-0.4, 1.2);

    // analytic mode solution through the solver
    GridField gf0 = GridField::single_mode(kLine, {c.k});
    GridField gf3 = gf0;
    for (cplx& v : gf0.values) v *= g0;
    for (cplx& v : gf3.values) v *= g3;
    const std::vector<BoundaryField> g = {gf0, gf3};
    const PoissonSolution sol = pel::solve_poisson(problem, c.lam, g);
    const int b = c.k >= 0 ? c.k : kLine.N + c.k;
    const pel::ModeFunction u = sol.modes[b].kernel();

    // banded finite-difference discretization of the same two-point problem
    const auto [t1, t2] = tau_pair(k2, c.lam);
    const double re_min = std::min(t1.real(), t2.real());
    const int M = 4096;
    const double X = 14.0 / re_min;
    const double h = X / M;
    using Trip = Eigen::Triplet<cplx>;
    std::vector<Trip> trip;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(M + 1);
    trip.emplace_back(0, 0, 1.0);
    rhs(0) = g0;
    {
      // row two: -u''' + k^2 u' at x = 0, one-sided second-order stencils
      const double c3[5] = {-2.5, 9.0, -12.0, 7.0, -1.5};
      const double c1[3] = {-1.5, 2.0, -0.5};
      for (int t = 0; t < 5; ++t) trip.emplace_back(1, t, -c3[t] / (h * h * h));
      for (int t = 0; t < 3; ++t) trip.emplace_back(1, t, cplx(k2 * c1[t] / h));
      rhs(1) = g3;
    }
    const double d4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    const double d2[3] = {1.0, -2.0, 1.0};
    for (int i = 2; i + 2 <= M; ++i) {
      for (int t = 0; t < 5; ++t) {
        trip.emplace_back(i, i - 2 + t, cplx(d4[t] / (h * h * h * h)));
      }
      for (int t = 0; t < 3; ++t) {
        trip.emplace_back(i, i - 1 + t, cplx(-2.0 * k2 * d2[t] / (h * h)));
      }
      trip.emplace_back(i, i, c.lam + k2 * k2);
    }
    trip.emplace_back(M - 1, M - 1, 1.0);
    trip.emplace_back(M, M, 1.0);
    Eigen::SparseMatrix<cplx> A(M + 1, M + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(A);
    REQUIRE(lu.info() == Eigen::Success);
    const Eigen::VectorXcd ufd = lu.solve(rhs);

    double err = 0.0, scale = 0.0;
    for (int i = 0; i <= M / 2; i += 64) {
      const cplx exact = u.eval(i * h);
      err = std::max(err, std::abs(ufd(i) - exact));
      scale = std::max(scale, std::abs(exact));
    }
    CHECK(err <= 1e-4 * scale);
  }
}

TEST_CASE("residuals grow linearly under coefficient perturbations") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const cplx lam = std::polar(10.0, 0.3 * kPi);
  const std::vector<BoundaryField> g = {pel::random_boundary_data(kLine, 61),
                                        pel::random_boundary_data(kLine, 62)};
  const ModeField u0 = pel::solve_poisson(problem, lam, g).field();
  auto perturbed = [&](double eps) {
    ModeField u = u0;
    pel::ModeFunction bump;
    bump.add_term(cplx(-1.0, 0.5), 0, cplx(eps, 0.0));
    u.modes[7].add(bump);
    return pel::residual_check(problem, lam, u, nullptr, g);
  };
  const pel::ResidualReport base = pel::residual_check(problem, lam, u0, nullptr, g);
  CHECK(base.interior_rel <= 1e-9);
  const double r1 = perturbed(1e-4).interior_rel;
  const double r2 = perturbed(2e-4).interior_rel;
  CHECK(r1 > 1e-8);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("sampled residuals stay small on a smooth solved field") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const cplx lam = std::polar(5.0, 0.3 * kPi);
  GridField g0 = GridField::single_mode(kLine, {2});
  GridField g3 = g0;
  for (cplx& v : g0.values) v *= cplx(1.0, -0.5);
  for (cplx& v : g3.values) v *= cplx(0.3, 0.8);
  const std::vector<BoundaryField> g = {g0, g3};
  const ModeField u = pel::solve_poisson(problem, lam, g).field();
  const auto xn = pel::uniform_xn_samples(kLine);
  const HalfSpaceField us = u.sample(xn, /*physical=*/true);
  const pel::ResidualReport rep =
      pel::residual_check_sampled(problem, lam, us, nullptr, g);
  // measured 8.9e-5 interior and 4.1e-2 on the third-derivative row (N = 64)
  CHECK(rep.interior_rel <= 5e-4);
  CHECK(rep.boundary_rel[0] <= 1e-10);  // trace is exact on the samples
  CHECK(rep.boundary_rel[1] <= 6e-2);   // third derivative, one-sided stencil
  // exact residual of the same solution is at roundoff
  const pel::ResidualReport exact = pel::residual_check(problem, lam, u, nullptr, g);
  CHECK(exact.interior_rel <= 1e-12);
}

TEST_CASE("a-priori sweep matches a single-mode closed form for the heat row") {
  const ModelProblem problem = pel::heat_dynbc_problem(kLine);
  const auto xn = pel::uniform_xn_samples(kLine);
  const HalfSpaceField f = HalfSpaceField::zero(kLine, xn);
  GridField g = GridField::single_mode(kLine, {1});
  for (cplx& v : g.values) v *= cplx(0.6, -1.4);
  const std::vector<BoundaryField> gs = {g};

  pel::NormSpec spec;
  spec.s = 2.0;
  spec.sigma = 0.0;
  spec.p = 2.0;
  spec.m = 1;
  const std::vector<double> rays = {0.3 * kPi};
  const std::vector<double> mags = {7.0};
  const pel::AprioriTable table =
      pel::apriori_sweep(problem, spec, rays, mags, f, gs);
  REQUIRE(table.rows.size() == 1);

  // closed form: u = ghat e^{-tau x}, tau = sqrt(lambda + k^2)
  const cplx lam = std::polar(7.0, 0.3 * kPi);
  const cplx ghat(0.6, -1.4);
  const double k2 = 1.0;
  const cplx tau = std::sqrt(lam + k2);
  const double H = kLine.L / 2.0;
  const double w2 = 1.0 + k2 + std::abs(lam);
  const double decay =
      (1.0 - std::exp(-2.0 * tau.real() * H)) / (2.0 * tau.real());
  double nu2 = 0.0;
  for (int j = 0; j <= 2; ++j) {
    const double binom = j == 1 ? 2.0 : 1.0;
    nu2 += binom * std::pow(w2, 2 - j) * std::norm(ghat) *
           std::pow(std::abs(tau), 2.0 * j) * decay;
  }
  const double want =
      std::sqrt(kLine.L * nu2) /
      std::sqrt(kLine.L * std::pow(w2, 1.5) * std::norm(ghat));
  CHECK(table.rows[0].ratio == doctest::Approx(want).epsilon(1e-9));
  CHECK(table.rows[0].interior_residual <= 1e-10);
}

TEST_CASE("solver rejects bad inputs and degenerate problems") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const BoundaryField g0 = pel::random_boundary_data(kLine, 71);

  // wrong number of boundary rows
  CHECK_THROWS_AS(pel::solve_poisson(problem, cplx(1.0, 0.0), {&g0, 1}),
                  pel::ConfigError);

  // lambda outside the sector
  const std::vector<BoundaryField> g = {g0, pel::random_boundary_data(kLine, 72)};
  CHECK_THROWS_AS(pel::solve_poisson(problem, std::polar(1.0, 0.9 * kPi), g),
                  pel::ConfigError);

  // rank-deficient boundary pair fails with a singular mode system
  const ModelProblem degenerate = pel::degenerate_pair_problem(kLine);
  CHECK_THROWS_AS(pel::solve_poisson(degenerate, cplx(1.0, 0.0), g),
                  pel::NumericError);

  // lambda = 0 strands the k' = 0 mode unless its data vanishes
  const ModelProblem heat = pel::heat_dynbc_problem(kLine);
  GridField dc = GridField::single_mode(kLine, {0});
  CHECK_THROWS_AS(pel::solve_poisson(heat, cplx(0.0, 0.0), {&dc, 1}),
                  pel::NumericError);
  GridField ac = GridField::single_mode(kLine, {3});
  const PoissonSolution ok = pel::solve_poisson(heat, cplx(0.0, 0.0), {&ac, 1});
  CHECK(ok.modes[3].coefficients.size() == 1);

  // interior data must come on the uniform reflected profile
  const std::vector<double> bad_xn = {0.0, 0.1, 0.3};
  const HalfSpaceField f = pel::random_halfspace_data(kLine, bad_xn, 73);
  CHECK_THROWS_AS(pel::solve_full(problem, cplx(1.0, 0.0), f, g),
                  pel::ConfigError);
}

TEST_CASE("mode systems stay well conditioned across the sweep range") {
  const ModelProblem problem = pel::biharmonic_dynbc_problem(kLine);
  const std::vector<BoundaryField> g = {pel::random_boundary_data(kLine, 81),
                                        pel::random_boundary_data(kLine, 82)};
  double worst = 0.0;
  for (const cplx lam : {std::polar(1.0, 0.0), std::polar(100.0, 0.55 * kPi),
                         std::polar(1e4, -0.3 * kPi)}) {
    const PoissonSolution sol = pel::solve_poisson(problem, lam, g);
    worst = std::max(worst, sol.max_normalized_condition);
  }
  // measured 2.4142 (= 1 + sqrt(2)) across the sweep; regression ceiling
  CHECK(worst < 5.0);
}
