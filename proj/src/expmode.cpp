#include "pel/expmode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>

namespace pel {
namespace {

struct ExpKey {
  long long re = 0;
  long long im = 0;
  int l = 0;
  bool operator==(const ExpKey&) const = default;
};

struct ExpKeyHash {
  std::size_t operator()(const ExpKey& k) const {
    std::size_t h = std::hash<long long>()(k.re);
    h ^= std::hash<long long>()(k.im) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(k.l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

ExpKey make_key(cplx s, int l) {
  if (std::abs(s.real()) > 1e9 || std::abs(s.imag()) > 1e9) {
    throw NumericError("mode exponent out of representable merge range");
  }
  return ExpKey{std::llround(s.real() * 1e9), std::llround(s.imag() * 1e9), l};
}

double factorial(int p) {
  static const double table[] = {
      1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0,
      3628800.0, 39916800.0, 479001600.0, 6227020800.0, 87178291200.0,
      1307674368000.0, 20922789888000.0, 355687428096000.0,
      6402373705728000.0, 121645100408832000.0, 2432902008176640000.0};
  if (p < 0 || p > 20) throw NumericError("factorial argument outside closed-form table");
  return table[p];
}

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

ModeFunction ModeFunction::exponential(cplx s, cplx amplitude) {
  ModeFunction f;
  f.add_term(s, 0, amplitude);
  return f;
}

void ModeFunction::add_term(cplx s, int l, cplx a) {
  if (l < 0) throw ConfigError("negative polynomial power in mode term");
  terms_.push_back(ExpTerm{s, l, a});
}

void ModeFunction::add(const ModeFunction& other, cplx factor) {
  terms_.reserve(terms_.size() + other.terms_.size());
  for (const ExpTerm& t : other.terms_) terms_.push_back(ExpTerm{t.s, t.l, factor * t.a});
}

void ModeFunction::scale(cplx factor) {
  for (ExpTerm& t : terms_) t.a *= factor;
}

void ModeFunction::compress(double drop_tol) {
  std::vector<ExpTerm> merged;
  merged.reserve(terms_.size());
  std::unordered_map<ExpKey, std::size_t, ExpKeyHash> index;
  index.reserve(terms_.size());
  for (const ExpTerm& t : terms_) {
    auto [it, inserted] = index.try_emplace(make_key(t.s, t.l), merged.size());
    if (inserted) {
      merged.push_back(t);
    } else {
      merged[it->second].a += t.a;
    }
  }
  std::erase_if(merged, [drop_tol](const ExpTerm& t) { return std::abs(t.a) <= drop_tol; });
  terms_ = std::move(merged);
}

cplx ModeFunction::eval(double x) const {
  cplx tot = 0.0;
  for (const ExpTerm& t : terms_) {
    double xl = 1.0;
    for (int q = 0; q < t.l; ++q) xl *= x;
    tot += t.a * xl * std::exp(t.s * x);
  }
  return tot;
}

cplx ModeFunction::value0() const {
  cplx tot = 0.0;
  for (const ExpTerm& t : terms_) {
    if (t.l == 0) tot += t.a;
  }
  return tot;
}

ModeFunction ModeFunction::derivative() const {
  ModeFunction out;
  out.terms_.reserve(2 * terms_.size());
  for (const ExpTerm& t : terms_) {
    out.terms_.push_back(ExpTerm{t.s, t.l, t.a * t.s});
    if (t.l > 0) out.terms_.push_back(ExpTerm{t.s, t.l - 1, t.a * double(t.l)});
  }
  return out;
}

ModeFunction ModeFunction::apply_dx_polynomial(std::span<const cplx> dx_coeffs) const {
  ModeFunction out;
  ModeFunction der = *this;
  for (std::size_t q = 0; q < dx_coeffs.size(); ++q) {
    if (q > 0) der = der.derivative();
    if (dx_coeffs[q] != 0.0) out.add(der, dx_coeffs[q]);
  }
  out.compress();
  return out;
}

ModeFunction ModeFunction::apply_dn_polynomial(std::span<const cplx> xi_n_coeffs) const {
  return apply_dx_polynomial(xi_n_to_dx(xi_n_coeffs));
}

cplx ModeFunction::boundary_value(std::span<const cplx> xi_n_coeffs) const {
  const std::vector<cplx> dx = xi_n_to_dx(xi_n_coeffs);
  cplx tot = 0.0;
  ModeFunction der = *this;
  for (std::size_t q = 0; q < dx.size(); ++q) {
    if (q > 0) der = der.derivative();
    if (dx[q] != 0.0) tot += dx[q] * der.value0();
  }
  return tot;
}

double ModeFunction::max_real_exponent() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const ExpTerm& t : terms_) m = std::max(m, t.s.real());
  return m;
}

cplx ModeFunction::strip_power_integral(cplx w, int p, double H) {
  if (p < 0 || H < 0.0) throw ConfigError("strip integral needs p >= 0 and H >= 0");
  const cplx wh = w * H;
  if (std::abs(wh) < 0.5) {
    // integral = H^{p+1} sum_k (wH)^k / (k! (p+k+1))
    cplx acc = 0.0;
    cplx t = 1.0;
    for (int k = 0; k < 24; ++k) {
      acc += t / double(p + k + 1);
      t *= wh / double(k + 1);
    }
    return std::pow(H, p + 1) * acc;
  }
  const cplx ewh = std::exp(wh);
  cplx I = (ewh - 1.0) / w;
  double hq = 1.0;
  for (int q = 1; q <= p; ++q) {
    hq *= H;
    I = (hq * ewh - double(q) * I) / w;
  }
  return I;
}

cplx ModeFunction::halfline_power_integral(cplx w, int p) {
  if (!(w.real() < 0.0)) {
    throw NumericError("half-line integral of a non-decaying mode term");
  }
  const cplx mw = -w;
  cplx pw = mw;
  for (int q = 0; q < p; ++q) pw *= mw;
  return factorial(p) / pw;
}

cplx ModeFunction::strip_inner(const ModeFunction& f, const ModeFunction& g, double H) {
  cplx acc = 0.0;
  for (const ExpTerm& ta : f.terms_) {
    for (const ExpTerm& tb : g.terms_) {
      acc += ta.a * std::conj(tb.a) *
             strip_power_integral(ta.s + std::conj(tb.s), ta.l + tb.l, H);
    }
  }
  return acc;
}

cplx ModeFunction::halfline_inner(const ModeFunction& f, const ModeFunction& g) {
  cplx acc = 0.0;
  for (const ExpTerm& ta : f.terms_) {
    for (const ExpTerm& tb : g.terms_) {
      acc += ta.a * std::conj(tb.a) *
             halfline_power_integral(ta.s + std::conj(tb.s), ta.l + tb.l);
    }
  }
  return acc;
}

double ModeFunction::strip_norm_sq(double H) const {
  return std::max(0.0, strip_inner(*this, *this, H).real());
}

double ModeFunction::halfline_norm_sq() const {
  return std::max(0.0, halfline_inner(*this, *this).real());
}

std::vector<cplx> xi_n_to_dx(std::span<const cplx> xi_n_coeffs) {
  std::vector<cplx> dx(xi_n_coeffs.begin(), xi_n_coeffs.end());
  cplx ip = 1.0;
  for (std::size_t q = 0; q < dx.size(); ++q) {
    dx[q] *= ip;
    ip *= cplx(0.0, -1.0);
  }
  return dx;
}

ModeFunction particular_solution(std::span<const cplx> dx_poly,
                                 const ModeFunction& rhs,
                                 double resonance_tol) {
  if (dx_poly.empty()) throw ConfigError("empty ODE polynomial");
  const int deg = int(dx_poly.size()) - 1;

  auto pderiv = [&](int q, cplx s) {
    cplx tot = 0.0;
    for (int j = q; j <= deg; ++j) {
      cplx sp = 1.0;
      for (int r = 0; r < j - q; ++r) sp *= s;
      tot += dx_poly[j] * (factorial(j) / factorial(j - q)) * sp;
    }
    return tot;
  };
  auto poly_scale = [&](cplx s) {
    const double m = std::max(1.0, std::abs(s));
    double tot = 1.0;
    double mp = 1.0;
    for (int j = 0; j <= deg; ++j) {
      tot += std::abs(dx_poly[j]) * mp;
      mp *= m;
    }
    return tot;
  };

  ModeFunction out;
  // exponents needing the polynomial ansatz, grouped by exponent key
  struct Group {
    cplx s;
    std::vector<cplx> bl;  // degree-indexed amplitudes
  };
  std::vector<Group> groups;
  std::unordered_map<ExpKey, std::size_t, ExpKeyHash> group_index;

  for (const ExpTerm& t : rhs.terms()) {
    const cplx P = pderiv(0, t.s);
    if (t.l == 0 && std::abs(P) >= resonance_tol * poly_scale(t.s)) {
      out.add_term(t.s, 0, t.a / P);
      continue;
    }
    auto [it, inserted] = group_index.try_emplace(make_key(t.s, 0), groups.size());
    if (inserted) groups.push_back(Group{t.s, {}});
    Group& g = groups[it->second];
    if (int(g.bl.size()) <= t.l) g.bl.resize(t.l + 1, 0.0);
    g.bl[t.l] += t.a;
  }

  for (const Group& g : groups) {
    const cplx s = g.s;
    const double scale = poly_scale(s);
    int r = (std::abs(pderiv(0, s)) >= resonance_tol * scale) ? 0 : 1;
    while (r <= deg && std::abs(pderiv(r, s)) < 1e-8 * scale) ++r;
    if (r > deg) throw NumericError("fully degenerate exponent in particular solve");
    const int L = int(g.bl.size()) - 1;
    std::vector<cplx> c(L + r + 1, 0.0);
    for (int l = L; l >= 0; --l) {
      cplx acc = g.bl[l];
      for (int j = l + r + 1; j <= L + r; ++j) {
        acc -= binom(j, j - l) * pderiv(j - l, s) * c[j];
      }
      c[l + r] = acc / (binom(l + r, r) * pderiv(r, s));
    }
    for (int j = r; j <= L + r; ++j) {
      if (c[j] != 0.0) out.add_term(s, j, c[j]);
    }
  }
  out.compress();
  return out;
}

}  // namespace pel
