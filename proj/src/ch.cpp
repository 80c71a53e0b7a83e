#include "pel/ch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pel/expmode.hpp"
#include "pel/fft.hpp"
#include "pel/model_problem.hpp"

namespace pel {
namespace {

constexpr double kTiny = 1e-300;
constexpr cplx kI{0.0, 1.0};

std::string cplx_label(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.6g, %.6g)", v.real(), v.imag());
  return buf;
}

std::vector<double> boundary_wavenumbers(const TorusGrid& grid, int flat) {
  std::vector<double> k(std::size_t(grid.n), 0.0);
  int rem = flat;
  for (int d = grid.n - 1; d >= 0; --d) {
    k[std::size_t(d)] = grid.wavenumber(rem % grid.N);
    rem /= grid.N;
  }
  return k;
}

double boundary_k2(const TorusGrid& grid, int flat) {
  double k2 = 0.0;
  for (double k : boundary_wavenumbers(grid, flat)) k2 += k * k;
  return k2;
}

std::string mode_label(const TorusGrid& grid, int flat) {
  std::string s = "k'=(";
  const std::vector<double> k = boundary_wavenumbers(grid, flat);
  for (std::size_t d = 0; d < k.size(); ++d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%g", d ? ", " : "", k[d]);
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

void require_in_sectors(cplx z, cplx lambda, const CHSectorConfig& cfg,
                        const char* what) {
  cfg.validate();
  if (!(z == cplx(0.0, 0.0) || cfg.z_sector().contains(z))) {
    throw ConfigError(std::string(what) + ": z outside the closed eps-sector at z=" +
                      cplx_label(z));
  }
  if (!(lambda == cplx(0.0, 0.0) || cfg.lambda_sector().contains(lambda))) {
    throw ConfigError(std::string(what) +
                      ": lambda outside the closed theta-sector at lambda=" +
                      cplx_label(lambda));
  }
}

void require_lambda(cplx lambda, const CHSectorConfig& cfg, const char* what) {
  cfg.validate();
  if (!cfg.lambda_sector().contains(lambda)) {
    throw ConfigError(std::string(what) +
                      ": lambda outside the closed theta-sector at lambda=" +
                      cplx_label(lambda));
  }
}

void set_min(SweepExtremum& e, double v, cplx z, cplx lam, cplx t1, cplx t2,
             double argv, double absm) {
  if (v < e.value) e = SweepExtremum{v, SymbolSample{z, lam, t1, t2, argv, absm}};
}

void set_max(SweepExtremum& e, double v, cplx z, cplx lam, cplx t1, cplx t2,
             double argv, double absm) {
  if (v > e.value) e = SweepExtremum{v, SymbolSample{z, lam, t1, t2, argv, absm}};
}

// one pass over the quasi-sphere |z| + |lambda|^{1/4} = 1; fills the sphere
// fields of the report
void scan_sphere(const CHSectorConfig& cfg, const SymbolSweepOptions& opts,
                 SymbolSweepReport& rep) {
  cfg.validate();
  if (opts.n_arg_lambda < 2 || opts.n_radial < 2 || opts.n_arg_z < 2) {
    throw ConfigError("symbol sweep: every sphere axis needs at least two samples");
  }
  const std::vector<double> bs = linear_grid(-cfg.theta, cfg.theta, opts.n_arg_lambda);
  const std::vector<double> rs = linear_grid(0.0, 1.0, opts.n_radial);
  const std::vector<double> as = linear_grid(-cfg.eps, cfg.eps, opts.n_arg_z);
  std::vector<cplx> eib(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) eib[i] = std::polar(1.0, bs[i]);

  const double inf = std::numeric_limits<double>::infinity();
  rep.min_abs_tau.value = inf;
  rep.min_abs_sum.value = inf;
  rep.max_abs_sum.value = 0.0;
  rep.min_re_ratio.value = inf;
  rep.min_re_sum.value = inf;
  rep.sup_m.value = 0.0;
  rep.min_denom.value = inf;

  const double slack = 1e-9;
  const double half_pi = kPi / 2.0;
  const double wide = (cfg.theta + kPi) / 4.0;
  if (opts.record_samples) {
    rep.samples.reserve(std::size_t(opts.n_arg_lambda) * opts.n_radial * opts.n_arg_z);
  }

  for (double aa : as) {
    const cplx eia = std::polar(1.0, aa);
    for (double rr : rs) {
      const cplx z = (1.0 - rr) * eia;
      const cplx z2 = z * z;
      const double r4 = (rr * rr) * (rr * rr);
      rep.sphere_defect = std::max(
          rep.sphere_defect, std::abs((1.0 - rr) + std::pow(r4, 0.25) - 1.0));
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const cplx lam = r4 * eib[i];
        const cplx isq = kI * std::sqrt(lam);
        const cplx t1 = std::sqrt(z2 + isq);
        const cplx t2 = std::sqrt(z2 - isq);
        const cplx tsum = t1 + t2;
        const cplx q = t1 * t2 / tsum;
        const double argq = std::arg(q);
        const cplx den = 1.0 + 2.0 * q / (lam + z2);
        const cplx m = 1.0 / den;
        const double absm = std::abs(m);

        for (const cplx& t : {t1, t2}) {
          const double at = std::abs(t);
          set_min(rep.min_abs_tau, at, z, lam, t1, t2, argq, absm);
          set_min(rep.min_re_ratio, t.real() / std::max(at, kTiny), z, lam, t1,
                  t2, argq, absm);
        }
        const double asum = std::abs(tsum);
        set_min(rep.min_abs_sum, asum, z, lam, t1, t2, argq, absm);
        set_max(rep.max_abs_sum, asum, z, lam, t1, t2, argq, absm);
        set_min(rep.min_re_sum, tsum.real(), z, lam, t1, t2, argq, absm);

        const double argl = std::abs(lam) == 0.0 ? 0.0 : std::arg(lam);
        double lo = -3.0 * kPi / 8.0;
        double hi = 3.0 * kPi / 8.0;
        if (argl > half_pi + slack) {
          lo = -cfg.eps;
          hi = wide;
        } else if (argl < -half_pi - slack) {
          lo = -wide;
          hi = cfg.eps;
        }
        if (argq > hi + slack || argq < lo - slack) {
          ++rep.arg_violations;
          if (rep.violations.size() < 32) {
            rep.violations.push_back(SymbolSample{z, lam, t1, t2, argq, absm});
          }
        }

        set_max(rep.sup_m, absm, z, lam, t1, t2, argq, absm);
        set_min(rep.min_denom, std::abs(den), z, lam, t1, t2, argq, absm);
        ++rep.samples_checked;
        if (opts.record_samples) {
          rep.samples.push_back(SymbolSample{z, lam, t1, t2, argq, absm});
        }
      }
    }
  }
}

// coarse sphere x geometric radii; m under the quartic dilation, the heat
// multiplier under the parabolic one
void scan_radial(const CHSectorConfig& cfg, const RadialSweepOptions& opts,
                 SymbolSweepReport& rep) {
  cfg.validate();
  const SymbolSweepOptions& s = opts.sphere;
  if (s.n_arg_lambda < 2 || s.n_radial < 2 || s.n_arg_z < 2 || opts.n_rho < 2) {
    throw ConfigError("symbol sweep: every radial axis needs at least two samples");
  }
  const std::vector<double> bs = linear_grid(-cfg.theta, cfg.theta, s.n_arg_lambda);
  const std::vector<double> rs = linear_grid(0.0, 1.0, s.n_radial);
  const std::vector<double> as = linear_grid(-cfg.eps, cfg.eps, s.n_arg_z);
  const std::vector<double> rhos = log_spaced(opts.exp_rho_lo, opts.exp_rho_hi, opts.n_rho);
  std::vector<cplx> eib(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) eib[i] = std::polar(1.0, bs[i]);

  const double inf = std::numeric_limits<double>::infinity();
  rep.sup_m_radial.value = 0.0;
  rep.min_denom_radial.value = inf;
  rep.sup_m_heat.value = 0.0;
  rep.min_heat_denom.value = inf;

  for (double aa : as) {
    const cplx eia = std::polar(1.0, aa);
    for (double rr : rs) {
      const cplx z0 = (1.0 - rr) * eia;
      const double r4 = (rr * rr) * (rr * rr);
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const cplx lam0 = r4 * eib[i];
        for (double p : rhos) {
          const cplx z = p * z0;
          const cplx z2 = z * z;
          const double p2 = p * p;
          const cplx lam = (p2 * p2) * lam0;
          const cplx isq = kI * std::sqrt(lam);
          const cplx t1 = std::sqrt(z2 + isq);
          const cplx t2 = std::sqrt(z2 - isq);
          const cplx den = 1.0 + 2.0 * t1 * t2 / ((lam + z2) * (t1 + t2));
          if (std::isfinite(den.real()) && std::isfinite(den.imag()) &&
              std::abs(lam) > 0.0) {
            const double ad = std::abs(den);
            set_max(rep.sup_m_radial, 1.0 / ad, z, lam, t1, t2, 0.0, 1.0 / ad);
            set_min(rep.min_denom_radial, ad, z, lam, t1, t2, 0.0, 1.0 / ad);
          }
          const cplx lam_h = p2 * lam0;
          if (std::abs(lam_h) > 0.0) {
            const cplx w = std::sqrt(lam_h + z2);
            const double amh = std::abs(lam_h / (lam_h + w));
            const double marg =
                std::abs(lam_h + w) / (std::abs(lam_h) + std::abs(w));
            set_max(rep.sup_m_heat, amh, z, lam_h, w, 0.0, 0.0, amh);
            set_min(rep.min_heat_denom, marg, z, lam_h, w, 0.0, 0.0, amh);
          }
          ++rep.samples_checked;
        }
      }
    }
  }
}

struct CHModeOut {
  ModeFunction u1;
  cplx u2 = 0.0;
  cplx g_prime = 0.0;
  double row2_abs = 0.0;
  double row2_rel = 0.0;
  double oneshot_gap = 0.0;
  double margin = 1.0;
};

cplx trace_dnu(const ModeFunction& u) { return -u.derivative().value0(); }

cplx trace_dnu_lap(const ModeFunction& u, double k2) {
  const std::array<cplx, 3> lap = {cplx(-k2, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)};
  return -u.apply_dx_polynomial(lap).derivative().value0();
}

void finish_row2(CHModeOut& out, cplx dyn_mult, cplx ghat) {
  const cplx dnu_u1 = trace_dnu(out.u1);
  const cplx row2 = dnu_u1 + dyn_mult * out.u2 - ghat;
  out.row2_abs = std::abs(row2);
  const double scale = std::max(
      {std::abs(ghat), std::abs(dyn_mult * out.u2), std::abs(dnu_u1)});
  out.row2_rel = out.row2_abs / std::max(scale, kTiny);
}

CHModeOut solve_ch_mode(const CHSectorConfig& cfg, cplx lambda, double k2,
                        const ModeFunction* fmode, cplx ghat,
                        const TorusGrid& grid, int flat) {
  const TauPair t = ch_tau(std::sqrt(k2), lambda, cfg);
  const cplx t1 = t.tau1;
  const cplx t2 = t.tau2;
  CHModeOut out;

  // particular interior solve and its boundary traces
  cplx g0 = 0.0;
  cplx g3 = 0.0;
  cplx dnu_p = 0.0;
  if (fmode != nullptr && !fmode->empty()) {
    const std::array<cplx, 5> pc = {lambda + k2 * k2, 0.0, -2.0 * k2, 0.0, 1.0};
    ModeFunction up = particular_solution(pc, *fmode);
    g0 = up.value0();
    dnu_p = trace_dnu(up);
    g3 = trace_dnu_lap(up, k2);
    out.u1.add(up);
  }

  // zero the gamma0 and dnu Lap traces: coefficients of e^{-tau_j x_n} solve
  //   c01 + c02 = -g0,   i sqrt(lambda) (tau1 c01 - tau2 c02) = -g3
  const cplx sq = std::sqrt(lambda);
  const cplx det = -kI * sq * (t1 + t2);
  const double det_scale = std::abs(sq) * (std::abs(t1) + std::abs(t2));
  out.margin = std::abs(det) / std::max(det_scale, kTiny);
  if (!(out.margin > 1e-12)) {
    throw NumericError("ch resolvent: singular trace correction at mode " +
                       mode_label(grid, flat) + ", lambda=" + cplx_label(lambda));
  }
  const cplx c01 = (kI * sq * t2 * g0 + g3) / det;
  const cplx c02 = (kI * sq * t1 * g0 - g3) / det;
  out.u1.add_term(-t1, 0, c01);
  out.u1.add_term(-t2, 0, c02);

  // u2 = S(|k'|, lambda) g' and the coupled tail
  const cplx dnu_corr = t1 * c01 + t2 * c02;
  out.g_prime = ghat - (dnu_p + dnu_corr);
  const cplx tsum = t1 + t2;
  const cplx den = tsum * (lambda + k2) + 2.0 * t1 * t2;
  const double den_scale = std::abs(tsum) * (std::abs(lambda) + k2) +
                           2.0 * std::abs(t1) * std::abs(t2);
  if (std::abs(den) <= 1e-14 * std::max(den_scale, kTiny)) {
    throw NumericError("ch resolvent: boundary-symbol denominator vanished at mode " +
                       mode_label(grid, flat) + ", lambda=" + cplx_label(lambda));
  }
  out.u2 = tsum / den * out.g_prime;
  const cplx c1 = t2 * out.u2 / tsum;
  const cplx c2 = t1 * out.u2 / tsum;
  const cplx c1_direct = t2 * out.g_prime / den;
  out.oneshot_gap = std::abs(c1 - c1_direct) / std::max(std::abs(c1), kTiny);
  out.u1.add_term(-t1, 0, c1);
  out.u1.add_term(-t2, 0, c2);
  out.u1.compress();

  finish_row2(out, lambda + k2, ghat);
  return out;
}

CHModeOut solve_heat_mode(const CHSectorConfig& cfg, cplx lambda, double k2,
                          const ModeFunction* fmode, cplx ghat,
                          const TorusGrid& grid, int flat) {
  const cplx tau = heat_tau(std::sqrt(k2), lambda, cfg);
  CHModeOut out;

  cplx g0 = 0.0;
  cplx dnu_p = 0.0;
  if (fmode != nullptr && !fmode->empty()) {
    const std::array<cplx, 3> pc = {lambda + k2, 0.0, -1.0};
    ModeFunction up = particular_solution(pc, *fmode);
    g0 = up.value0();
    dnu_p = trace_dnu(up);
    out.u1.add(up);
  }

  // u1^0 = u_p - g0 e^{-tau x_n} has zero trace; g' = g - dnu u1^0
  out.g_prime = ghat - dnu_p + tau * g0;
  const cplx den = lambda + tau;
  const double den_scale = std::abs(lambda) + std::abs(tau);
  out.margin = std::abs(den) / std::max(den_scale, kTiny);
  if (std::abs(den) <= 1e-14 * std::max(den_scale, kTiny)) {
    throw NumericError("heat resolvent: denominator lambda + tau vanished at mode " +
                       mode_label(grid, flat) + ", lambda=" + cplx_label(lambda));
  }
  out.u2 = out.g_prime / den;
  out.u1.add_term(-tau, 0, out.u2 - g0);
  out.u1.compress();

  finish_row2(out, lambda, ghat);
  return out;
}

template <typename ModeSolver>
CHModeState run_resolvent(const CHSectorConfig& cfg, cplx lambda,
                          const ModeField& f, std::span<const cplx> g_hat,
                          CHResolventDiagnostics* diag, const char* what,
                          ModeSolver&& solve_mode) {
  require_lambda(lambda, cfg, what);
  const TorusGrid grid = f.boundary_grid;
  const std::size_t B = grid.size();
  if (!f.modes.empty() && f.modes.size() != B) {
    throw ConfigError(std::string(what) +
                      ": interior mode count does not match the boundary grid");
  }
  if (g_hat.size() != B) {
    throw ConfigError(std::string(what) +
                      ": boundary data size does not match the boundary grid");
  }

  CHModeState state{ModeField{grid, {}}, {}};
  state.u1.modes.reserve(B);
  state.u2.reserve(B);
  if (diag != nullptr) {
    *diag = CHResolventDiagnostics{};
    diag->g_prime.reserve(B);
  }
  for (std::size_t b = 0; b < B; ++b) {
    const double k2 = boundary_k2(grid, int(b));
    const ModeFunction* fm = f.modes.empty() ? nullptr : &f.modes[b];
    CHModeOut mo = solve_mode(cfg, lambda, k2, fm, g_hat[b], grid, int(b));
    state.u1.modes.push_back(std::move(mo.u1));
    state.u2.push_back(mo.u2);
    if (diag != nullptr) {
      diag->g_prime.push_back(mo.g_prime);
      diag->worst_row2_abs = std::max(diag->worst_row2_abs, mo.row2_abs);
      diag->worst_row2_rel = std::max(diag->worst_row2_rel, mo.row2_rel);
      diag->worst_oneshot_gap = std::max(diag->worst_oneshot_gap, mo.oneshot_gap);
      diag->min_correction_margin = std::min(diag->min_correction_margin, mo.margin);
    }
  }
  return state;
}

}  // namespace

void CHSectorConfig::validate() const {
  if (!(theta > kPi / 2.0 && theta < kPi)) {
    throw ConfigError("CHSectorConfig: theta must lie in (pi/2, pi)");
  }
  if (!(eps > 0.0 && eps < (kPi - theta) / 4.0)) {
    throw ConfigError("CHSectorConfig: eps must lie strictly in (0, (pi - theta)/4)");
  }
  if (!(lambda0 > 0.0)) {
    throw ConfigError("CHSectorConfig: lambda0 must be positive");
  }
}

TauPair ch_tau(cplx z, cplx lambda, const CHSectorConfig& cfg) {
  require_in_sectors(z, lambda, cfg, "ch_tau");
  const cplx isq = kI * std::sqrt(lambda);
  const cplx z2 = z * z;
  return TauPair{std::sqrt(z2 + isq), std::sqrt(z2 - isq)};
}

cplx ch_S(cplx z, cplx lambda, const CHSectorConfig& cfg) {
  const TauPair t = ch_tau(z, lambda, cfg);
  const cplx tsum = t.tau1 + t.tau2;
  const cplx den = tsum * (lambda + z * z) + 2.0 * t.tau1 * t.tau2;
  const double scale = std::abs(tsum) * (std::abs(lambda) + std::norm(z)) +
                       2.0 * std::abs(t.tau1) * std::abs(t.tau2);
  if (std::abs(den) <= 1e-14 * std::max(scale, kTiny)) {
    throw NumericError("ch_S: boundary-symbol denominator vanished at z=" +
                       cplx_label(z) + ", lambda=" + cplx_label(lambda));
  }
  return tsum / den;
}

cplx ch_m(cplx z, cplx lambda, const CHSectorConfig& cfg) {
  return (lambda + z * z) * ch_S(z, lambda, cfg);
}

cplx heat_tau(cplx z, cplx lambda, const CHSectorConfig& cfg) {
  require_in_sectors(z, lambda, cfg, "heat_tau");
  return std::sqrt(lambda + z * z);
}

cplx heat_m(cplx z, cplx lambda, const CHSectorConfig& cfg) {
  const cplx tau = heat_tau(z, lambda, cfg);
  const cplx den = lambda + tau;
  if (std::abs(den) <= 1e-14 * std::max(std::abs(lambda) + std::abs(tau), kTiny)) {
    throw NumericError("heat_m: denominator lambda + tau vanished at z=" +
                       cplx_label(z) + ", lambda=" + cplx_label(lambda));
  }
  return lambda / den;
}

double S_loglog_slope(cplx z, cplx lambda, double rho_lo, double rho_hi,
                      int count, const CHSectorConfig& cfg) {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo) || count < 2) {
    throw ConfigError("S_loglog_slope: needs 0 < rho_lo < rho_hi and >= 2 points");
  }
  const double xlo = std::log(rho_lo);
  const double xhi = std::log(rho_hi);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = xlo + (xhi - xlo) * double(i) / (count - 1);
    const double rho = std::exp(x);
    const double r4 = (rho * rho) * (rho * rho);
    const double y = std::log(std::abs(ch_S(rho * z, r4 * lambda, cfg)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = count;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw ConfigError("linear_grid: needs at least one point");
  std::vector<double> v(std::size_t(count), 0.0);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) v[std::size_t(i)] = lo + step * i;
  v[std::size_t(count) - 1] = hi;
  return v;
}

std::vector<double> log_spaced(double exp_lo, double exp_hi, int count) {
  std::vector<double> v = linear_grid(exp_lo, exp_hi, count);
  for (double& x : v) x = std::pow(10.0, x);
  return v;
}

SymbolSweepReport verify_root_bounds(const CHSectorConfig& cfg,
                                     const SymbolSweepOptions& opts,
                                     const SymbolBounds& bounds) {
  SymbolSweepReport rep;
  scan_sphere(cfg, opts, rep);
  rep.pass = rep.min_abs_tau.value >= bounds.tau_floor &&
             rep.min_abs_sum.value >= bounds.tau_sum_floor &&
             rep.max_abs_sum.value <= bounds.tau_sum_ceil &&
             rep.min_re_ratio.value >= bounds.re_ratio_floor &&
             rep.min_re_sum.value > 0.0;
  return rep;
}

SymbolSweepReport verify_arg_sectors(const CHSectorConfig& cfg,
                                     const SymbolSweepOptions& opts,
                                     const SymbolBounds&) {
  SymbolSweepReport rep;
  scan_sphere(cfg, opts, rep);
  rep.pass = rep.arg_violations == 0;
  return rep;
}

SymbolSweepReport verify_m_bounded(const CHSectorConfig& cfg,
                                   const SymbolSweepOptions& opts,
                                   const RadialSweepOptions& radial,
                                   const SymbolBounds& bounds) {
  SymbolSweepReport rep;
  scan_sphere(cfg, opts, rep);
  scan_radial(cfg, radial, rep);
  rep.pass = std::isfinite(rep.sup_m.value) &&
             rep.sup_m.value <= bounds.m_sphere_ceil &&
             rep.sup_m_radial.value <= bounds.m_radial_ceil &&
             rep.min_denom_radial.value >= bounds.denom_radial_floor &&
             rep.sup_m_heat.value <= bounds.m_heat_ceil &&
             rep.min_heat_denom.value >= bounds.heat_denom_floor;
  return rep;
}

SymbolSweepReport verify_heat_bounded(const CHSectorConfig& cfg,
                                      const RadialSweepOptions& radial,
                                      const SymbolBounds& bounds) {
  SymbolSweepReport rep;
  scan_radial(cfg, radial, rep);
  rep.pass = std::isfinite(rep.sup_m_heat.value) &&
             rep.sup_m_heat.value <= bounds.m_heat_ceil &&
             rep.min_heat_denom.value >= bounds.heat_denom_floor;
  return rep;
}

double CHModeState::compatibility_defect() const {
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t b = 0; b < u2.size(); ++b) {
    const cplx tr = u1.modes[b].value0();
    scale = std::max({scale, std::abs(tr), std::abs(u2[b])});
    worst = std::max(worst, std::abs(tr - u2[b]));
  }
  return worst / std::max(scale, kTiny);
}

CHState sample_state(const CHModeState& state, std::span<const double> xn_samples,
                     bool physical) {
  const TorusGrid grid = state.u1.boundary_grid;
  CHState out{state.u1.sample(xn_samples, physical),
              BoundaryField{grid, std::vector<cplx>(state.u2.begin(), state.u2.end())}};
  if (physical) out.u2 = synthesize(grid, state.u2);
  return out;
}

CHModeState ch_resolvent_modes(const CHSectorConfig& cfg, cplx lambda,
                               const ModeField& f, std::span<const cplx> g_hat,
                               CHResolventDiagnostics* diag) {
  return run_resolvent(cfg, lambda, f, g_hat, diag, "ch_resolvent_modes",
                       [](const CHSectorConfig& c, cplx lam, double k2,
                          const ModeFunction* fm, cplx gh, const TorusGrid& g,
                          int flat) {
                         return solve_ch_mode(c, lam, k2, fm, gh, g, flat);
                       });
}

CHModeState heat_resolvent_modes(const CHSectorConfig& cfg, cplx lambda,
                                 const ModeField& f, std::span<const cplx> g_hat,
                                 CHResolventDiagnostics* diag) {
  return run_resolvent(cfg, lambda, f, g_hat, diag, "heat_resolvent_modes",
                       [](const CHSectorConfig& c, cplx lam, double k2,
                          const ModeFunction* fm, cplx gh, const TorusGrid& g,
                          int flat) {
                         return solve_heat_mode(c, lam, k2, fm, gh, g, flat);
                       });
}

CHState solve_resolvent(const HalfSpaceField& f, const BoundaryField& g,
                        cplx lambda, const CHSectorConfig& cfg, bool heat) {
  if (!(g.grid == f.boundary_grid)) {
    throw ConfigError("solve_resolvent: boundary data grid does not match f");
  }
  const ModeField fm{f.boundary_grid, reflected_modes(f.boundary_grid, f)};
  const std::vector<cplx> ghat = spectrum(g);
  const CHModeState state = heat
      ? heat_resolvent_modes(cfg, lambda, fm, ghat, nullptr)
      : ch_resolvent_modes(cfg, lambda, fm, ghat, nullptr);
  return sample_state(state, f.xn_samples, true);
}

CHResidualReport ch_residual_check(const CHSectorConfig& cfg, cplx lambda,
                                   const CHModeState& state, const ModeField& f,
                                   std::span<const cplx> g_hat, bool heat) {
  require_lambda(lambda, cfg, "ch_residual_check");
  const TorusGrid grid = state.u1.boundary_grid;
  const std::size_t B = grid.size();
  if (state.u1.modes.size() != B || state.u2.size() != B || g_hat.size() != B ||
      (!f.modes.empty() && (f.modes.size() != B || !(f.boundary_grid == grid)))) {
    throw ConfigError("ch_residual_check: state/data sizes do not match the grid");
  }

  CHResidualReport rep;
  rep.strip_height = grid.L / 2.0;
  const double cell = boundary_cell(grid);
  double ri2 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, nf2 = 0.0, ng2 = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    const double k2 = boundary_k2(grid, int(b));
    ModeFunction r = heat
        ? state.u1.modes[b].apply_dx_polynomial(
              std::array<cplx, 3>{lambda + k2, 0.0, -1.0})
        : state.u1.modes[b].apply_dx_polynomial(
              std::array<cplx, 5>{lambda + k2 * k2, 0.0, -2.0 * k2, 0.0, 1.0});
    if (!f.modes.empty()) {
      r.add(f.modes[b], -1.0);
      nf2 += f.modes[b].strip_norm_sq(rep.strip_height);
    }
    r.compress();
    ri2 += r.strip_norm_sq(rep.strip_height);

    const cplx dyn_mult = heat ? lambda : lambda + k2;
    r2 += std::norm(trace_dnu(state.u1.modes[b]) + dyn_mult * state.u2[b] -
                    g_hat[b]);
    if (!heat) r3 += std::norm(trace_dnu_lap(state.u1.modes[b], k2));
    r4 += std::norm(state.u1.modes[b].value0() - state.u2[b]);
    ng2 += std::norm(g_hat[b]);
  }
  rep.data_norm = std::sqrt(cell * (nf2 + ng2));
  const double dn = std::max(rep.data_norm, kTiny);
  rep.interior_rel = std::sqrt(cell * ri2) / dn;
  rep.dynamic_rel = std::sqrt(cell * r2) / dn;
  rep.neumann_rel = std::sqrt(cell * r3) / dn;
  rep.compat_rel = std::sqrt(cell * r4) / dn;
  return rep;
}

DecaySweepReport resolvent_decay_sweep(const CHSectorConfig& cfg,
                                       const TorusGrid& grid,
                                       std::span<const double> rays,
                                       std::span<const double> magnitudes,
                                       std::span<const double> u2_magnitudes,
                                       const HalfSpaceField& f,
                                       const BoundaryField& g,
                                       const DecayCeilings& ceilings) {
  cfg.validate();
  if (rays.empty() || magnitudes.empty()) {
    throw ConfigError("resolvent_decay_sweep: needs at least one ray and one magnitude");
  }
  for (double r : rays) {
    if (!(std::abs(r) <= cfg.theta + 1e-15)) {
      throw ConfigError("resolvent_decay_sweep: ray outside the theta-sector");
    }
  }
  for (double m : magnitudes) {
    if (!(m > 0.0)) throw ConfigError("resolvent_decay_sweep: magnitudes must be positive");
  }
  for (double m : u2_magnitudes) {
    if (!(m > 0.0)) throw ConfigError("resolvent_decay_sweep: magnitudes must be positive");
  }

  const ModeField fm{grid, reflected_modes(grid, f)};
  const std::vector<cplx> ghat = spectrum(g);
  const double H = grid.L / 2.0;
  const double cell = boundary_cell(grid);

  DecaySweepReport rep;
  double nf2 = 0.0;
  for (const ModeFunction& mf : fm.modes) nf2 += mf.strip_norm_sq(H);
  double ng2 = 0.0;
  for (const cplx& c : ghat) ng2 += std::norm(c);
  rep.data_norm = std::sqrt(cell * (nf2 + ng2));
  if (!(rep.data_norm > 0.0)) {
    throw ConfigError("resolvent_decay_sweep: data norm is zero");
  }

  rep.min_ratio_full = std::numeric_limits<double>::infinity();
  rep.rows.reserve(rays.size() * magnitudes.size());
  for (double ray : rays) {
    for (double mag : magnitudes) {
      const cplx lam = std::polar(mag, ray);
      CHResolventDiagnostics diag;
      const CHModeState st = ch_resolvent_modes(cfg, lam, fm, ghat, &diag);
      double nu1 = 0.0, nu2 = 0.0, ngp2 = 0.0;
      for (std::size_t b = 0; b < st.u2.size(); ++b) {
        nu1 += st.u1.modes[b].strip_norm_sq(H);
        nu2 += std::norm(st.u2[b]);
        ngp2 += std::norm(diag.g_prime[b]);
      }
      const double full = mag * std::sqrt(cell * (nu1 + nu2)) / rep.data_norm;
      const double u2r = ngp2 > 0.0 ? mag * std::sqrt(nu2 / ngp2) : 0.0;
      rep.rows.push_back(DecayRow{ray, mag, full, u2r});
      rep.max_ratio_full = std::max(rep.max_ratio_full, full);
      rep.min_ratio_full = std::min(rep.min_ratio_full, full);
      rep.max_ratio_u2 = std::max(rep.max_ratio_u2, u2r);
      rep.worst_row2 = std::max(rep.worst_row2, diag.worst_row2_rel);
    }
  }
  rep.u2_rows.reserve(rays.size() * u2_magnitudes.size());
  for (double ray : rays) {
    for (double mag : u2_magnitudes) {
      const cplx lam = std::polar(mag, ray);
      CHResolventDiagnostics diag;
      const CHModeState st = ch_resolvent_modes(cfg, lam, fm, ghat, &diag);
      double nu2 = 0.0, ngp2 = 0.0;
      for (std::size_t b = 0; b < st.u2.size(); ++b) {
        nu2 += std::norm(st.u2[b]);
        ngp2 += std::norm(diag.g_prime[b]);
      }
      const double u2r = ngp2 > 0.0 ? mag * std::sqrt(nu2 / ngp2) : 0.0;
      rep.u2_rows.push_back(DecayRow{ray, mag, 0.0, u2r});
      rep.max_ratio_u2 = std::max(rep.max_ratio_u2, u2r);
      rep.worst_row2 = std::max(rep.worst_row2, diag.worst_row2_rel);
    }
  }
  rep.spread = rep.min_ratio_full > 0.0
      ? rep.max_ratio_full / rep.min_ratio_full
      : std::numeric_limits<double>::infinity();
  rep.pass = rep.max_ratio_full <= ceilings.full_ceil &&
             rep.spread <= ceilings.spread_ceil &&
             rep.max_ratio_u2 <= ceilings.u2_ceil &&
             rep.worst_row2 <= ceilings.row2_tol;
  return rep;
}

DecaySweepReport resolvent_decay_sweep(const CHSectorConfig& cfg,
                                       const TorusGrid& grid,
                                       std::span<const double> rays,
                                       std::span<const double> magnitudes,
                                       std::span<const double> u2_magnitudes,
                                       std::uint64_t seed,
                                       const DecayCeilings& ceilings) {
  const HalfSpaceField f =
      random_halfspace_data(grid, uniform_xn_samples(grid), seed);
  const BoundaryField g = random_boundary_data(grid, seed + 1);
  return resolvent_decay_sweep(cfg, grid, rays, magnitudes, u2_magnitudes, f, g,
                               ceilings);
}

std::vector<double> default_sweep_rays(const CHSectorConfig& cfg) {
  cfg.validate();
  const double side = (cfg.theta + kPi / 2.0) / 2.0;
  return {0.0, side, -side};
}

DomainRegularityReport check_domain_regularity(const CHSectorConfig& cfg,
                                               cplx lambda,
                                               const HalfSpaceField& f,
                                               const BoundaryField& g) {
  if (!(g.grid == f.boundary_grid)) {
    throw ConfigError("check_domain_regularity: boundary data grid does not match f");
  }
  const TorusGrid grid = f.boundary_grid;
  const ModeField fm{grid, reflected_modes(grid, f)};
  const std::vector<cplx> ghat = spectrum(g);
  const CHModeState st = ch_resolvent_modes(cfg, lambda, fm, ghat, nullptr);

  const double H = grid.L / 2.0;
  const double cell = boundary_cell(grid);
  DomainRegularityReport rep;
  rep.literal_bound_applicable = lambda.real() >= 0.5;

  double nf2 = 0.0, ng2 = 0.0;
  for (const ModeFunction& mf : fm.modes) nf2 += mf.strip_norm_sq(H);
  for (const cplx& c : ghat) ng2 += std::norm(c);
  rep.data_norm = std::sqrt(cell * (nf2 + ng2));

  double u2h2 = 0.0, u1h2 = 0.0, u1h3 = 0.0, u1h4w = 0.0;
  double defect_id = -std::numeric_limits<double>::infinity();
  double defect_lit = -std::numeric_limits<double>::infinity();
  const std::size_t B = grid.size();
  for (std::size_t b = 0; b < B; ++b) {
    const double k2 = boundary_k2(grid, int(b));
    const cplx S = ch_S(std::sqrt(k2), lambda, cfg);
    const cplx m = ch_m(std::sqrt(k2), lambda, cfg);
    const double lhs = (1.0 + k2) * std::abs(S);
    const double alk = std::abs(lambda + k2);
    const double rhs_id = (1.0 + std::abs(1.0 - lambda) / alk) * std::abs(m);
    const double rhs_lit = (1.0 + std::abs(lambda) / alk) * std::abs(m);
    defect_id = std::max(defect_id, (lhs - rhs_id) / std::max(rhs_id, kTiny));
    defect_lit = std::max(defect_lit, (lhs - rhs_lit) / std::max(rhs_lit, kTiny));

    u2h2 += (1.0 + k2) * (1.0 + k2) * std::norm(st.u2[b]);
    u1h2 += strip_sobolev_norm_sq(st.u1.modes[b], k2, 0.0, 2, 2, H);
    u1h3 += strip_sobolev_norm_sq(st.u1.modes[b], k2, 0.0, 2, 3, H);
    const double w2 = 1.0 + k2 + std::sqrt(std::abs(lambda));
    u1h4w += strip_sobolev_norm_sq(st.u1.modes[b], k2, lambda, 2, 4, H) /
             ((w2 * w2) * (w2 * w2));
  }
  rep.max_symbol_defect = defect_id;
  rep.max_symbol_defect_literal = defect_lit;
  rep.h4_weighted_norm = std::sqrt(cell * u1h4w);
  if (rep.data_norm > 0.0) {
    rep.u2_h2_ratio = std::sqrt(cell * u2h2) / rep.data_norm;
    const double n2 = std::sqrt(cell * u1h2);
    const double n3 = std::sqrt(cell * u1h3);
    rep.u1_h25_ratio = std::sqrt(n2 * n3) / rep.data_norm;
  }
  rep.pass = std::isfinite(rep.u2_h2_ratio) && std::isfinite(rep.u1_h25_ratio) &&
             std::isfinite(rep.h4_weighted_norm) &&
             rep.max_symbol_defect <= 1e-12 &&
             (!rep.literal_bound_applicable ||
              rep.max_symbol_defect_literal <= 1e-12);
  return rep;
}

}  // namespace pel
