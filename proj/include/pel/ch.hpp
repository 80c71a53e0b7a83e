#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pel/common.hpp"
#include "pel/grid.hpp"
#include "pel/halfspace.hpp"
#include "pel/sector.hpp"

namespace pel {

// Coupled fourth-order half-space system with a dynamic boundary condition,
// reduced per tangential Fourier mode k' (z = |k'|):
//
//   (lambda + Lap^2) u1 = f          on x_n > 0,
//   dnu u1 + (lambda - Lap') u2 = g  at x_n = 0,
//   dnu Lap u1 = 0                   at x_n = 0,
//   gamma0 u1 - u2 = 0,
//
// solved through the boundary symbols
//
//   tau_{1,2}(z, lambda) = sqrt(z^2 +- i sqrt(lambda))        (principal roots)
//   S(z, lambda) = (tau1+tau2) / ((tau1+tau2)(lambda+z^2) + 2 tau1 tau2)
//   m(z, lambda) = (lambda + z^2) S(z, lambda)
//
// for lambda in the closed theta-sector and z in the closed eps-sector.  The
// heat variant replaces the interior row by (lambda - Lap)u1 = f, the dynamic
// row by dnu u1 + lambda u2 = g, drops the dnu Lap row, and uses
// m_heat = lambda / (lambda + sqrt(lambda + z^2)).

struct CHSectorConfig {
  double theta = 0.6 * kPi;  // resolvent sector half-angle, in (pi/2, pi)
  double eps = 0.05 * kPi;   // z-sector half-angle, in (0, (pi - theta)/4)
  double lambda0 = 1.0;      // semigroup shift and decay-sweep floor

  void validate() const;  // ConfigError on out-of-range fields
  Sector lambda_sector() const { return Sector{theta}; }
  Sector z_sector() const { return Sector{eps}; }
};

struct TauPair {
  cplx tau1;
  cplx tau2;
};

// Symbol evaluations; z = 0 and lambda = 0 are admitted as sector closures.
// ch_S / ch_m / heat_m throw NumericError if the denominator falls below
// 1e-14 x its term-magnitude scale (cannot happen inside the sectors).
TauPair ch_tau(cplx z, cplx lambda, const CHSectorConfig& cfg = {});
cplx ch_S(cplx z, cplx lambda, const CHSectorConfig& cfg = {});
cplx ch_m(cplx z, cplx lambda, const CHSectorConfig& cfg = {});
cplx heat_tau(cplx z, cplx lambda, const CHSectorConfig& cfg = {});
cplx heat_m(cplx z, cplx lambda, const CHSectorConfig& cfg = {});

// Least-squares slope of log|S(rho z, rho^4 lambda)| against log rho on a
// geometric rho-grid; S is not quasi-homogeneous, so this is an empirical
// scaling exponent, not an exact degree.
double S_loglog_slope(cplx z, cplx lambda, double rho_lo, double rho_hi,
                      int count, const CHSectorConfig& cfg = {});

// numpy-style inclusive grids
std::vector<double> linear_grid(double lo, double hi, int count);
std::vector<double> log_spaced(double exp_lo, double exp_hi, int count);

// ---------------------------------------------------------------------------
// quasi-sphere sweeps |z| + |lambda|^{1/4} = 1

struct SymbolSample {
  cplx z;
  cplx lambda;
  cplx tau1;  // heat records sqrt(lambda + z^2) here, tau2 = 0
  cplx tau2;
  double arg_value = 0.0;  // arg(tau1 tau2 / (tau1 + tau2))
  double abs_m = 0.0;
};

struct SweepExtremum {
  double value = 0.0;
  SymbolSample at;
};

// n_arg_lambda arguments of lambda x n_radial values of |lambda|^{1/4}
// x n_arg_z arguments of z, all inclusive linear grids
struct SymbolSweepOptions {
  int n_arg_lambda = 181;
  int n_radial = 65;
  int n_arg_z = 64;
  bool record_samples = false;  // keep every SymbolSample in the report
};

// coarse sphere x geometric rho in [10^lo, 10^hi]; m dilates (z, lambda) ->
// (rho z, rho^4 lambda), the heat symbol dilates parabolically (rho z, rho^2 lambda)
struct RadialSweepOptions {
  SymbolSweepOptions sphere{91, 33, 9, false};
  int n_rho = 61;
  double exp_rho_lo = -3.0;
  double exp_rho_hi = 3.0;
};

// Regression floors/ceilings fixed from a 10x-density pre-run at
// theta = 0.6 pi, eps = 0.05 pi.
struct SymbolBounds {
  double tau_floor = 0.25;            // min |tau_j| on the sphere
  double tau_sum_floor = 0.80;        // min |tau1 + tau2|
  double tau_sum_ceil = 2.0 + 1e-9;   // max |tau1 + tau2|
  double re_ratio_floor = 0.30;       // min Re tau_j / |tau_j|
  double m_sphere_ceil = 0.56;        // sup |m| on the sphere
  double m_radial_ceil = 1.05;        // sup |m| under the quartic dilation
  double denom_radial_floor = 0.94;   // min |1 + 2 t1 t2/((lam+z^2)(t1+t2))|
  double m_heat_ceil = 1.18;          // sup |m_heat| under the parabolic dilation
  double heat_denom_floor = 0.49;     // min |lam + w| / (|lam| + |w|)
};

struct SymbolSweepReport {
  long long samples_checked = 0;

  // root bounds (sphere)
  SweepExtremum min_abs_tau;
  SweepExtremum min_abs_sum;
  SweepExtremum max_abs_sum;
  SweepExtremum min_re_ratio;
  SweepExtremum min_re_sum;

  // arg-sector membership of tau1 tau2 / (tau1 + tau2) (sphere)
  long long arg_violations = 0;
  std::vector<SymbolSample> violations;  // first 32 offenders

  // multiplier bounds
  SweepExtremum sup_m;        // sphere
  SweepExtremum min_denom;    // sphere
  SweepExtremum sup_m_radial;
  SweepExtremum min_denom_radial;
  SweepExtremum sup_m_heat;
  SweepExtremum min_heat_denom;

  double sphere_defect = 0.0;  // max ||z| + |lambda|^{1/4} - 1| over samples
  bool pass = false;
  std::vector<SymbolSample> samples;  // filled when record_samples
};

// min/max of |tau_j|, |tau1+tau2|, Re tau_j/|tau_j| over the sphere; pass
// iff all root floors/ceilings hold and Re(tau1+tau2) > 0 everywhere
SymbolSweepReport verify_root_bounds(const CHSectorConfig& cfg,
                                     const SymbolSweepOptions& opts = {},
                                     const SymbolBounds& bounds = {});
// sector membership of arg(tau1 tau2/(tau1+tau2)) with 1e-9 slack:
// (-eps, (theta+pi)/4) for arg lambda > pi/2, mirrored for arg lambda < -pi/2,
// (-3pi/8, 3pi/8) otherwise; pass iff no violations
SymbolSweepReport verify_arg_sectors(const CHSectorConfig& cfg,
                                     const SymbolSweepOptions& opts = {},
                                     const SymbolBounds& bounds = {});
// sup|m| and the denominator margin on the sphere plus the radial extension
// (m is not scale-invariant, so the sphere alone does not bound it); the heat
// multiplier is swept on the parabolic dilation; pass iff all five ceilings
// and floors hold
SymbolSweepReport verify_m_bounded(const CHSectorConfig& cfg,
                                   const SymbolSweepOptions& opts = {},
                                   const RadialSweepOptions& radial = {},
                                   const SymbolBounds& bounds = {});
// heat-only variant of verify_m_bounded (radial sweep only)
SymbolSweepReport verify_heat_bounded(const CHSectorConfig& cfg,
                                      const RadialSweepOptions& radial = {},
                                      const SymbolBounds& bounds = {});

// ---------------------------------------------------------------------------
// coupled resolvent

// Analytic-in-x_n state: one exponential polynomial per boundary mode for u1
// plus the spectral coefficients of u2 (flat boundary-mode index).
struct CHModeState {
  ModeField u1;
  std::vector<cplx> u2;

  // max_b |u1_b(0) - u2_b| relative to the largest trace/u2 magnitude
  double compatibility_defect() const;
};

// Sampled pair on the grid (u1 over boundary x x_n samples, u2 on the boundary).
struct CHState {
  HalfSpaceField u1;
  BoundaryField u2;
};

CHState sample_state(const CHModeState& state, std::span<const double> xn_samples,
                     bool physical = true);

struct CHResolventDiagnostics {
  std::vector<cplx> g_prime;        // per boundary mode
  double worst_row2_abs = 0.0;      // dynamic-row defect, absolute
  double worst_row2_rel = 0.0;      // ... relative to the row's term scale
  double worst_oneshot_gap = 0.0;   // two-path c1 mismatch, relative
  double min_correction_margin = 1.0;  // |det| of the 2x2 trace system / scale
};

// Per-mode solve on reflected interior modes f (empty ModeField::modes means
// f = 0) and spectral boundary data g_hat.  Three steps per mode: particular
// interior solve with zeroed gamma0 / dnu Lap traces, u2 = S(|k'|, lambda) g'
// with g' = g_hat - dnu u1^0, then the coupled tail with coefficients
// c1 = tau2 u2/(tau1+tau2), c2 = tau1 u2/(tau1+tau2).
CHModeState ch_resolvent_modes(const CHSectorConfig& cfg, cplx lambda,
                               const ModeField& f, std::span<const cplx> g_hat,
                               CHResolventDiagnostics* diag = nullptr);
// Heat variant: u2 = (g_hat - dnu u_p + tau gamma0 u_p) / (lambda + tau).
CHModeState heat_resolvent_modes(const CHSectorConfig& cfg, cplx lambda,
                                 const ModeField& f, std::span<const cplx> g_hat,
                                 CHResolventDiagnostics* diag = nullptr);

// Sampled-data wrapper: even reflection of f, FFT of g, per-mode solve,
// physical samples back on f's x_n profile.
CHState solve_resolvent(const HalfSpaceField& f, const BoundaryField& g,
                        cplx lambda, const CHSectorConfig& cfg,
                        bool heat = false);

struct CHResidualReport {
  double interior_rel = 0.0;  // (lambda + Lap^2)u1 - f, strip L2
  double dynamic_rel = 0.0;   // dnu u1 + (lambda - Lap')u2 - g
  double neumann_rel = 0.0;   // dnu Lap u1 (zero row; absent in the heat system)
  double compat_rel = 0.0;    // gamma0 u1 - u2
  double data_norm = 0.0;
  double strip_height = 0.0;
};

// Exact residuals of all rows of the coupled system, relative to the data
// norm sqrt(||f||^2_strip + ||g||^2).
CHResidualReport ch_residual_check(const CHSectorConfig& cfg, cplx lambda,
                                   const CHModeState& state, const ModeField& f,
                                   std::span<const cplx> g_hat,
                                   bool heat = false);

// ---------------------------------------------------------------------------
// resolvent-decay sweep

struct DecayRow {
  double arg_lambda = 0.0;
  double abs_lambda = 0.0;
  double ratio_full = 0.0;  // |lambda| ||(u1,u2)|| / ||(f,g)||
  double ratio_u2 = 0.0;    // |lambda| ||u2|| / ||g'||
};

struct DecayCeilings {
  double full_ceil = 0.65;    // max ratio_full
  double spread_ceil = 50.0;  // max/min of ratio_full
  double u2_ceil = 1.16;      // max ratio_u2 over both magnitude ranges
  double row2_tol = 1e-8;     // relative dynamic-row defect
};

struct DecaySweepReport {
  std::vector<DecayRow> rows;     // magnitudes >= lambda0: both ratios
  std::vector<DecayRow> u2_rows;  // extended magnitudes: ratio_u2 only
  double data_norm = 0.0;
  double max_ratio_full = 0.0;
  double min_ratio_full = 0.0;
  double spread = 0.0;
  double max_ratio_u2 = 0.0;
  double worst_row2 = 0.0;  // relative
  bool pass = false;
};

// X-norm surrogate: strip L2 of u1 (height L/2) x boundary L2 of u2.  The
// ratio_u2 column needs no lower magnitude bound, so it gets its own
// (typically wider) magnitude list.
DecaySweepReport resolvent_decay_sweep(const CHSectorConfig& cfg,
                                       const TorusGrid& grid,
                                       std::span<const double> rays,
                                       std::span<const double> magnitudes,
                                       std::span<const double> u2_magnitudes,
                                       const HalfSpaceField& f,
                                       const BoundaryField& g,
                                       const DecayCeilings& ceilings = {});
// Seeded variant: f from `seed`, g from `seed + 1`.
DecaySweepReport resolvent_decay_sweep(const CHSectorConfig& cfg,
                                       const TorusGrid& grid,
                                       std::span<const double> rays,
                                       std::span<const double> magnitudes,
                                       std::span<const double> u2_magnitudes,
                                       std::uint64_t seed,
                                       const DecayCeilings& ceilings = {});

// rays {0, +-(theta + pi/2)/2} used by the default sweeps
std::vector<double> default_sweep_rays(const CHSectorConfig& cfg);

// ---------------------------------------------------------------------------
// domain regularity

struct DomainRegularityReport {
  double u2_h2_ratio = 0.0;   // ||u2||_{H^2} / ||(f,g)||
  double u1_h25_ratio = 0.0;  // geometric-mean H^2/H^3 strip surrogate ratio
  double h4_weighted_norm = 0.0;  // lambda-weighted (s, sigma) = (4, -4) marker
  double max_symbol_defect = 0.0;          // identity form, always valid
  double max_symbol_defect_literal = 0.0;  // (1 + |lam|/|lam+k^2|)|m| form
  bool literal_bound_applicable = false;   // Re lambda >= 1/2
  double data_norm = 0.0;
  bool pass = false;
};

// Per-mode bound <k'>^2 |S| <= (1 + |1-lambda|/|lambda+k'^2|) |m| (exact
// identity), the literal (1 + |lambda|/...) variant where it applies, and the
// finiteness of the H^2 / H^{2.5}-surrogate / weighted-H^4 output norms.
DomainRegularityReport check_domain_regularity(const CHSectorConfig& cfg,
                                               cplx lambda,
                                               const HalfSpaceField& f,
                                               const BoundaryField& g);

}  // namespace pel
