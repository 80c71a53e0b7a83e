#pragma once

#include <cstdint>
#include <vector>

#include "pel/common.hpp"

namespace pel {

// Periodic box [0, L)^n sampled on N points per axis (N a power of two).
// Arrays are row-major with the LAST axis contiguous; the last axis plays the
// role of the normal direction x_n where one is needed.
struct TorusGrid {
  int n;
  int N;
  double L;

  TorusGrid(int n_, int N_, double L_);

  std::size_t size() const;                 // N^n
  double spacing() const { return L / N; }  // h

  // FFT-ordered integer frequency of index i: 0..N/2-1, then -N/2..-1
  int freq(int i) const { return i < N / 2 ? i : i - N; }
  double wavenumber(int i) const { return 2.0 * kPi / L * freq(i); }

  bool operator==(const TorusGrid&) const = default;
};

struct GridField {
  TorusGrid grid;
  std::vector<cplx> values;  // size N^n, row-major, last axis contiguous

  static GridField zero(const TorusGrid& g);

  // e^{i k.x} for integer per-axis frequencies (scaled by 2pi/L internally)
  static GridField single_mode(const TorusGrid& g, const std::vector<int>& freq);

  // Band-limited random field: Fourier coefficients are unit-box complex
  // draws on the modes with per-axis |freq| <= N/4, zero elsewhere.  Draw
  // order is row-major over the full coefficient lattice, one draw per
  // in-band mode, so fields are reproducible across platforms.
  static GridField random_bandlimited(const TorusGrid& g, std::uint64_t seed);
};

// Boundary data lives on the (n-1)-dimensional section of the same box.
using BoundaryField = GridField;

}  // namespace pel
