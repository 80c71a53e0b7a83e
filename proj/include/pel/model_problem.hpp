#pragma once

#include <vector>

#include "pel/common.hpp"
#include "pel/grid.hpp"
#include "pel/sector.hpp"
#include "pel/symbols.hpp"

namespace pel {

// Constant-coefficient half-space boundary value problem
//
//   (lambda - A0(D)) u = f   on x_n > 0,
//   B0_j(D) u = g_j          at x_n = 0,  j = 1..m,
//
// posed per tangential Fourier mode of a periodic boundary grid; the x_n
// axis is treated analytically through the exponential basis.
struct ModelProblem {
  DifferentialSymbol interior;           // A0, principal, order 2m
  std::vector<BoundarySymbol> boundary;  // m rows, orders <= 2m - 1
  Sector sector;
  TorusGrid boundary_grid;               // the n-1 tangential axes
  std::vector<double> xn_samples;        // ascending, xn_samples[0] == 0

  int dim() const { return interior.dim(); }
  int half_order() const { return interior.order() / 2; }
  // tangential wavenumber vector of a flat boundary-grid index
  std::vector<double> mode_wavenumbers(int flat_index) const;
};

enum class SlCheck {
  kWaive,   // caller vouches for the Shapiro-Lopatinskii condition
  kCoarse,  // verify on a coarse quasi-sphere sweep at construction
};

ModelProblem make_model_problem(DifferentialSymbol interior,
                                std::vector<BoundarySymbol> boundary,
                                Sector sector, TorusGrid boundary_grid,
                                std::vector<double> xn_samples,
                                SlCheck check = SlCheck::kCoarse);

// x_n profile matching the reflected torus: j * (L/N) for j = 0..N/2.
std::vector<double> uniform_xn_samples(const TorusGrid& boundary_grid);

// (lambda + Lap^2)u = f with trace and outward normal-derivative-of-Laplacian
// rows (gamma0, dnu Lap), sector angle 3pi/4.
ModelProblem biharmonic_dynbc_problem(const TorusGrid& boundary_grid,
                                      SlCheck check = SlCheck::kWaive);
// (lambda - Lap)u = f with the trace row (gamma0), sector angle 3pi/4.
ModelProblem heat_dynbc_problem(const TorusGrid& boundary_grid,
                                SlCheck check = SlCheck::kWaive);
// biharmonic with the rank-deficient pair (gamma0, gamma0); never passes the
// Lopatinskii sweep, kept for negative testing.
ModelProblem degenerate_pair_problem(const TorusGrid& boundary_grid);

}  // namespace pel
