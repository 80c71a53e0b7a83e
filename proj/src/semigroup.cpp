#include "pel/semigroup.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pel/expmode.hpp"
#include "pel/halfspace.hpp"

namespace pel {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]
constexpr double kGlNode[8] = {
    -0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
    -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
    0.79666647741362674,  0.96028985649753623};
constexpr double kGlWeight[8] = {
    0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
    0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

// Compress an accumulator mode once it drags this many raw terms around.
constexpr std::size_t kCompressAt = 8192;

}  // namespace

SemigroupContour semigroup_contour(double t, const CHSectorConfig& cfg,
                                   const SemigroupOptions& opts) {
  cfg.validate();
  if (!(t > 0.0)) {
    throw ConfigError("semigroup_contour: t must be positive");
  }
  const double phi =
      opts.phi == 0.0 ? 0.5 * (kPi / 2.0 + cfg.theta) : opts.phi;
  if (!(phi > kPi / 2.0 && phi < cfg.theta)) {
    throw ConfigError(
        "semigroup_contour: ray angle must lie strictly between pi/2 and "
        "theta");
  }
  if (opts.budget < 260) {
    throw ConfigError(
        "semigroup_contour: node budget below the 260-per-ray resolution "
        "floor");
  }

  SemigroupContour ct;
  ct.density = (opts.budget + 519) / 520;
  const double d = double(ct.density);
  ct.radius = (27.631 + t) / (t * std::abs(std::cos(phi)));
  ct.half_period = kPi / (t * std::sin(phi)) / d;
  ct.tail_bound = std::exp(t * (cfg.lambda0 + ct.radius * std::cos(phi)));

  // Panel edges in the radial variable: dyadic refinement from the corner up
  // to min(W, R), then uniform width-W panels out to R.
  std::vector<double> down(1, std::min(ct.half_period, ct.radius));
  while (down.back() > 1.0 / d) down.push_back(0.5 * down.back());
  std::vector<double> edges(1, 0.0);
  edges.insert(edges.end(), down.rbegin(), down.rend());
  if (ct.radius > ct.half_period) {
    const int uniform =
        int(std::ceil((ct.radius - ct.half_period) / ct.half_period));
    for (int i = 1; i <= uniform; ++i) {
      edges.push_back(ct.half_period + (ct.radius - ct.half_period) *
                                           double(i) / double(uniform));
    }
  }

  std::vector<double> r;
  std::vector<double> dr;
  r.reserve(8 * (edges.size() - 1));
  dr.reserve(8 * (edges.size() - 1));
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (int q = 0; q < 8; ++q) {
      r.push_back(mid + half * kGlNode[q]);
      dr.push_back(half * kGlWeight[q]);
    }
  }
  ct.nodes_per_ray = int(r.size());

  const cplx up_dir = std::polar(1.0, phi);
  const cplx dn_dir = std::conj(up_dir);
  const cplx two_pi_i(0.0, 2.0 * kPi);
  const cplx w_dn = -dn_dir / two_pi_i;
  const cplx w_up = up_dir / two_pi_i;
  ct.nodes.reserve(2 * r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    ct.nodes.push_back(ContourNode{cfg.lambda0 + r[i] * dn_dir, dr[i] * w_dn});
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    ct.nodes.push_back(ContourNode{cfg.lambda0 + r[i] * up_dir, dr[i] * w_up});
  }
  return ct;
}

CHModeState semigroup_apply(const CHSectorConfig& cfg, double t,
                            const CHModeState& state,
                            const SemigroupOptions& opts,
                            SemigroupContour* contour_out) {
  SemigroupContour contour = semigroup_contour(t, cfg, opts);
  const std::size_t nb = state.u1.boundary_grid.size();
  if (state.u1.modes.size() != nb || state.u2.size() != nb) {
    throw ConfigError(
        "semigroup_apply: state mode count does not match its boundary grid");
  }

  CHModeState acc;
  acc.u1.boundary_grid = state.u1.boundary_grid;
  acc.u1.modes.assign(nb, ModeFunction{});
  acc.u2.assign(nb, cplx(0.0, 0.0));

  for (const ContourNode& node : contour.nodes) {
    const cplx wt = node.weight * std::exp(t * node.mu);
    const cplx lam = node.mu + cfg.lambda0;
    const CHModeState rs =
        opts.heat ? heat_resolvent_modes(cfg, lam, state.u1, state.u2)
                  : ch_resolvent_modes(cfg, lam, state.u1, state.u2);
    for (std::size_t b = 0; b < nb; ++b) {
      acc.u1.modes[b].add(rs.u1.modes[b], wt);
      if (acc.u1.modes[b].size() > kCompressAt) acc.u1.modes[b].compress();
      acc.u2[b] += wt * rs.u2[b];
    }
  }
  for (std::size_t b = 0; b < nb; ++b) acc.u1.modes[b].compress();
  if (contour_out != nullptr) *contour_out = std::move(contour);
  return acc;
}

CHModeState domain_probe(const CHSectorConfig& cfg, const TorusGrid& grid,
                         int mode_index, cplx lambda_star, bool heat) {
  const std::size_t nb = grid.size();
  if (mode_index < 0 || std::size_t(mode_index) >= nb) {
    throw ConfigError("domain_probe: boundary mode index out of range");
  }
  ModeField f;
  f.boundary_grid = grid;
  f.modes.assign(nb, ModeFunction{});
  std::vector<cplx> g(nb, cplx(0.0, 0.0));
  g[std::size_t(mode_index)] = 1.0;
  return heat ? heat_resolvent_modes(cfg, lambda_star, f, g)
              : ch_resolvent_modes(cfg, lambda_star, f, g);
}

double state_norm(const CHModeState& state) {
  double total = 0.0;
  for (std::size_t b = 0; b < state.u2.size(); ++b) {
    total += state.u1.modes[b].halfline_norm_sq() + std::norm(state.u2[b]);
  }
  return std::sqrt(std::max(total, 0.0));
}

double state_distance(const CHModeState& a, const CHModeState& b) {
  if (!(a.u1.boundary_grid == b.u1.boundary_grid) ||
      a.u1.modes.size() != b.u1.modes.size() || a.u2.size() != b.u2.size()) {
    throw ConfigError("state_distance: states live on different grids");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.u2.size(); ++i) {
    ModeFunction diff = a.u1.modes[i];
    diff.add(b.u1.modes[i], cplx(-1.0, 0.0));
    diff.compress();
    total += diff.halfline_norm_sq() + std::norm(a.u2[i] - b.u2[i]);
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace pel
