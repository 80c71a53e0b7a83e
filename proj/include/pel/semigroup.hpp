#pragma once

#include <vector>

#include "pel/ch.hpp"
#include "pel/common.hpp"
#include "pel/grid.hpp"

namespace pel {

// One quadrature node mu on the shifted sector boundary lambda0 + r e^{+-i phi}
// with its Dunford weight dr e^{+-i phi}/(2 pi i); the down ray is traversed
// toward the vertex, so its weights carry the minus sign.
struct ContourNode {
  cplx mu;
  cplx weight;
};

struct SemigroupOptions {
  int budget = 520;   // requested Gauss-Legendre points per ray (>= 260)
  double phi = 0.0;   // contour ray angle; 0 picks (pi/2 + theta)/2
  bool heat = false;  // evolve the second-order system instead
};

struct SemigroupContour {
  std::vector<ContourNode> nodes;  // down ray first, then up ray
  double radius = 0.0;             // truncation R(t)
  double half_period = 0.0;        // oscillation half-period pi/(t sin phi)/d
  double tail_bound = 0.0;         // |e^{t mu}| at the truncated endpoints
  int density = 1;                 // dyadic density divisor d = ceil(budget/520)
  int nodes_per_ray = 0;
};

// Composite 8-point Gauss-Legendre panels on both rays of the truncated
// contour: panel widths halve dyadically from the corner down to 1/d, sit at
// the oscillation half-period W = pi/(t sin phi)/d near the corner, and stay
// uniform of width W out to R = (27.631 + t)/(t |cos phi|) - chosen so the
// dropped tail factor |e^{t mu}| is below 1e-12 x e^{t lambda0}.  A budget
// under 260 points per ray cannot resolve the e^{t mu} oscillation and is
// rejected.
SemigroupContour semigroup_contour(double t, const CHSectorConfig& cfg = {},
                                   const SemigroupOptions& opts = {});

// e^{t (A - lambda0)} state by the Dunford integral
//   (1/2 pi i) Int_Gamma e^{t mu} R(mu + lambda0) state d mu
// with R the coupled resolvent (ch_resolvent_modes, or the heat variant);
// every node satisfies mu + lambda0 in the open theta-sector, bounded away
// from zero.  Iterated applications hit resolvent arguments whose tau-roots
// already appear as state exponents; those modes go through the resonant
// x^l-lifted particular solve.
CHModeState semigroup_apply(const CHSectorConfig& cfg, double t,
                            const CHModeState& state,
                            const SemigroupOptions& opts = {},
                            SemigroupContour* contour_out = nullptr);

// R(lambda_star) applied to (f = 0, g = unit coefficient at mode_index): a
// domain-of-the-generator probe whose u1 is a pure pair of decaying
// exponentials.
CHModeState domain_probe(const CHSectorConfig& cfg, const TorusGrid& grid,
                         int mode_index, cplx lambda_star = cplx(2.0, 0.0),
                         bool heat = false);

// Product half-line L2 norms summed over boundary modes, no boundary measure
// factor (it cancels in every ratio and defect threshold used with these).
// NumericError if u1 carries non-decaying terms.
double state_norm(const CHModeState& state);
double state_distance(const CHModeState& a, const CHModeState& b);

}  // namespace pel
