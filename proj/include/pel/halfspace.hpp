#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pel/common.hpp"
#include "pel/expmode.hpp"
#include "pel/model_problem.hpp"
#include "pel/norms.hpp"
#include "pel/roots.hpp"

namespace pel {

// Sampled half-space field on boundary_grid x xn_samples; the x_n index is
// contiguous.  The x' axes hold either physical samples or k'-coefficients,
// switched by `spectral`.
struct HalfSpaceField {
  TorusGrid boundary_grid{1, 2, 2.0 * kPi};
  std::vector<double> xn_samples;
  bool spectral = false;
  std::vector<cplx> values;

  static HalfSpaceField zero(const TorusGrid& grid, std::vector<double> xn,
                             bool spectral = false);
  int xn_count() const { return int(xn_samples.size()); }
  cplx at(int boundary_index, int xn_index) const {
    return values[std::size_t(boundary_index) * xn_samples.size() + xn_index];
  }
  cplx& at(int boundary_index, int xn_index) {
    return values[std::size_t(boundary_index) * xn_samples.size() + xn_index];
  }
  void validate() const;
};

// FFT across the x' axes, one boundary layer per x_n sample.
HalfSpaceField to_spectral(const HalfSpaceField& f);
HalfSpaceField to_physical(const HalfSpaceField& f);

// Decaying solution of the interior ODE at one boundary mode: coefficients on
// the basis x_n^l e^{i zeta_k x_n}, ordered root cluster by cluster and by
// increasing power within a cluster.
struct ModeSolution {
  std::vector<double> xi_prime;
  StableRootSet roots;
  std::vector<cplx> coefficients;
  ModeFunction kernel() const;
};

// Analytic-in-x_n representation of a solved field: one exponential
// polynomial per boundary mode.
struct ModeField {
  TorusGrid boundary_grid{1, 2, 2.0 * kPi};
  std::vector<ModeFunction> modes;
  HalfSpaceField sample(std::span<const double> xn_samples, bool physical) const;
};

struct PoissonSolution {
  TorusGrid boundary_grid{1, 2, 2.0 * kPi};
  std::vector<ModeSolution> modes;
  // largest condition number of the row-normalized m x m boundary systems
  double max_normalized_condition = 0.0;
  ModeField field() const;
};

// Boundary-data-only solve: (lambda - A0)u = 0, B0_j u = g_j per mode.
// Throws NumericError naming the witness mode when a mode system has
// |det| < 1e-12 x its quasi-homogeneous normalization.
PoissonSolution solve_poisson(const ModelProblem& problem, cplx lambda,
                              std::span<const BoundaryField> g);

// Full solve: even reflection of f to the x_n torus, whole-space inverse
// multiplier for the particular part, then a Poisson correction of the
// boundary data.  f may be physical or spectral in x'; its x_n profile must
// be the uniform reflected-torus one.
ModeField solve_full(const ModelProblem& problem, cplx lambda,
                     const HalfSpaceField& f, std::span<const BoundaryField> g);

struct ResidualReport {
  double interior_abs = 0.0;
  double interior_rel = 0.0;
  std::vector<double> boundary_abs;
  std::vector<double> boundary_rel;
  double data_norm = 0.0;
  double strip_height = 0.0;
};

// Exact per-mode residuals of an analytic solution: interior row in strip-L2,
// boundary rows in boundary-L2, relative values against the data norm.
ResidualReport residual_check(const ModelProblem& problem, cplx lambda,
                              const ModeField& u, const HalfSpaceField* f,
                              std::span<const BoundaryField> g);
// Residuals of a sampled field: spectral in x', fourth-order finite
// differences in x_n (uniform profile required); diagnostic accuracy only.
ResidualReport residual_check_sampled(const ModelProblem& problem, cplx lambda,
                                      const HalfSpaceField& u,
                                      const HalfSpaceField* f,
                                      std::span<const BoundaryField> g);

struct AprioriRow {
  double arg_lambda = 0.0;
  double abs_lambda = 0.0;
  double ratio = 0.0;
  double interior_residual = 0.0;
};

struct AprioriTable {
  std::vector<AprioriRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;
};

// Ratio ||u||_{H^{s+sigma},lambda,strip} / (||f||_{H^{s-2m}} + sum of Besov
// norms of the g_j) for each lambda = mag * e^{i arg} on the given rays.
// Requires p = 2, sigma <= 0, s > max m_j + 1/p, and integer s+sigma, s-2m.
AprioriTable apriori_sweep(const ModelProblem& problem, const NormSpec& spec,
                           std::span<const double> rays,
                           std::span<const double> magnitudes,
                           const HalfSpaceField& f,
                           std::span<const BoundaryField> g);
// Seeded variant: f from `seed`, g_j from `seed + 1 + j` (SplitMix64 streams).
AprioriTable apriori_sweep(const ModelProblem& problem, const NormSpec& spec,
                           std::span<const double> rays,
                           std::span<const double> magnitudes,
                           std::uint64_t seed);

// Deterministic data streams: unit-complex SplitMix64 draws at each grid
// point, row-major with x_n contiguous.
BoundaryField random_boundary_data(const TorusGrid& grid, std::uint64_t seed);
HalfSpaceField random_halfspace_data(const TorusGrid& grid,
                                     std::span<const double> xn_samples,
                                     std::uint64_t seed);

// Exact strip Sobolev norm of an exponential mode via the binomial split
// <k,lambda>^{2s} = sum_j C(s,j) <k',lambda>^{2(s-j)} k_n^{2j}.
double strip_sobolev_norm_sq(const ModeFunction& u, double k2, cplx lambda,
                             int m, int s, double H);

// Reflected-torus Fourier modes of f: one ModeFunction (purely oscillatory
// exponents i k_n) per boundary mode.
std::vector<ModeFunction> reflected_modes(const TorusGrid& boundary_grid,
                                          const HalfSpaceField& f);
std::vector<ModeFunction> reflected_modes(const ModelProblem& problem,
                                          const HalfSpaceField& f);

}  // namespace pel
