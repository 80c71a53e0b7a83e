#include "pel/model_problem.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pel/lopatinskii.hpp"

namespace pel {

std::vector<double> ModelProblem::mode_wavenumbers(int flat_index) const {
  std::vector<double> xi(boundary_grid.n);
  int rem = flat_index;
  for (int d = boundary_grid.n - 1; d >= 0; --d) {
    xi[d] = boundary_grid.wavenumber(rem % boundary_grid.N);
    rem /= boundary_grid.N;
  }
  return xi;
}

ModelProblem make_model_problem(DifferentialSymbol interior,
                                std::vector<BoundarySymbol> boundary,
                                Sector sector, TorusGrid boundary_grid,
                                std::vector<double> xn_samples, SlCheck check) {
  if (interior.order() < 2 || interior.order() % 2 != 0) {
    throw ConfigError("interior operator must have positive even order");
  }
  const int m = interior.order() / 2;
  if (int(boundary.size()) != m) {
    throw ConfigError("need exactly order/2 boundary operators, got " +
                      std::to_string(boundary.size()));
  }
  for (const BoundarySymbol& b : boundary) {
    if (b.dim() != interior.dim()) {
      throw ConfigError("boundary operator dimension mismatch");
    }
    if (b.order() > 2 * m - 1) {
      throw ConfigError("boundary operator order must be below the interior order");
    }
  }
  if (boundary_grid.n != interior.dim() - 1) {
    throw ConfigError("boundary grid must have one axis fewer than the interior symbol");
  }
  if (xn_samples.empty() || xn_samples.front() != 0.0) {
    throw ConfigError("xn_samples must start at 0");
  }
  for (std::size_t i = 1; i < xn_samples.size(); ++i) {
    if (xn_samples[i] <= xn_samples[i - 1]) {
      throw ConfigError("xn_samples must be strictly increasing");
    }
  }
  if (check == SlCheck::kCoarse) {
    const auto sampling = QuasiSphereSampling::build(m, boundary_grid.n, sector,
                                                     /*n_xi=*/8, /*n_arg=*/41,
                                                     /*n_radial=*/17);
    const LopatinskiiReport rep =
        check_shapiro_lopatinskii(interior, boundary, sector, sampling);
    if (!rep.pass) {
      throw ConfigError("Shapiro-Lopatinskii check failed at construction "
                        "(normalized det_min = " + std::to_string(rep.det_min) + ")");
    }
  }
  return ModelProblem{std::move(interior), std::move(boundary), sector,
                      boundary_grid, std::move(xn_samples)};
}

std::vector<double> uniform_xn_samples(const TorusGrid& boundary_grid) {
  const double h = boundary_grid.spacing();
  std::vector<double> xn(boundary_grid.N / 2 + 1);
  for (std::size_t j = 0; j < xn.size(); ++j) xn[j] = double(j) * h;
  return xn;
}

ModelProblem biharmonic_dynbc_problem(const TorusGrid& boundary_grid, SlCheck check) {
  const int n = boundary_grid.n + 1;
  return make_model_problem(
      DifferentialSymbol::neg_bilaplacian(n),
      {BoundarySymbol::gamma0(n), BoundarySymbol::dnu_laplacian(n)},
      Sector{0.75 * kPi}, boundary_grid, uniform_xn_samples(boundary_grid), check);
}

ModelProblem heat_dynbc_problem(const TorusGrid& boundary_grid, SlCheck check) {
  const int n = boundary_grid.n + 1;
  return make_model_problem(
      DifferentialSymbol::laplacian(n), {BoundarySymbol::gamma0(n)},
      Sector{0.75 * kPi}, boundary_grid, uniform_xn_samples(boundary_grid), check);
}

ModelProblem degenerate_pair_problem(const TorusGrid& boundary_grid) {
  const int n = boundary_grid.n + 1;
  return make_model_problem(
      DifferentialSymbol::neg_bilaplacian(n),
      {BoundarySymbol::gamma0(n), BoundarySymbol::gamma0(n)}, Sector{0.75 * kPi},
      boundary_grid, uniform_xn_samples(boundary_grid), SlCheck::kWaive);
}

}  // namespace pel
