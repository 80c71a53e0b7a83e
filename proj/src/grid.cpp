#include "pel/grid.hpp"

#include <cmath>

#include "pel/fft.hpp"
#include "pel/splitmix64.hpp"

namespace pel {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

TorusGrid::TorusGrid(int n_, int N_, double L_) : n(n_), N(N_), L(L_) {
  if (n < 1 || n > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!power_of_two(N)) throw ConfigError("grid size must be a power of two");
  if (!(L > 0.0)) throw ConfigError("box length must be positive");
}

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(N);
  return s;
}

GridField GridField::zero(const TorusGrid& g) {
  return GridField{g, std::vector<cplx>(g.size(), cplx(0.0))};
}

GridField GridField::single_mode(const TorusGrid& g,
                                 const std::vector<int>& freq) {
  if (static_cast<int>(freq.size()) != g.n)
    throw ConfigError("mode frequency length does not match grid dimension");
  GridField f = zero(g);
  std::vector<int> idx(g.n, 0);
  const double h = g.spacing();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    double phase = 0.0;
    for (int d = 0; d < g.n; ++d)
      phase += (2.0 * kPi / g.L * freq[d]) * (idx[d] * h);
    f.values[flat] = std::polar(1.0, phase);
    for (int d = g.n - 1; d >= 0; --d) {
      if (++idx[d] < g.N) break;
      idx[d] = 0;
    }
  }
  return f;
}

GridField GridField::random_bandlimited(const TorusGrid& g,
                                        std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<cplx> coeffs(g.size(), cplx(0.0));
  std::vector<int> idx(g.n, 0);
  const int band = g.N / 4;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    bool in_band = true;
    for (int d = 0; d < g.n; ++d)
      if (std::abs(g.freq(idx[d])) > band) in_band = false;
    if (in_band) coeffs[flat] = rng.next_unit_complex();
    for (int d = g.n - 1; d >= 0; --d) {
      if (++idx[d] < g.N) break;
      idx[d] = 0;
    }
  }
  return synthesize(g, coeffs);
}

}  // namespace pel
