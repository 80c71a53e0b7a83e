#include "pel/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace pel {

namespace {

std::vector<cplx> dft(const TorusGrid& g, std::span<const cplx> in, int sign) {
  if (in.size() != g.size())
    throw ConfigError("field length does not match grid size");
  std::vector<cplx> buf(in.begin(), in.end());
  int dims[3] = {g.N, g.N, g.N};
  fftw_complex* ptr = reinterpret_cast<fftw_complex*>(buf.data());
  // FFTW_ESTIMATE never benchmarks, so planning is deterministic and does
  // not clobber the buffer.
  fftw_plan plan = fftw_plan_dft(g.n, dims, ptr, ptr, sign, FFTW_ESTIMATE);
  if (!plan) throw NumericError("FFTW plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return buf;
}

}  // namespace

std::vector<cplx> spectrum(const GridField& f) {
  std::vector<cplx> out = dft(f.grid, f.values, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (cplx& v : out) v *= scale;
  return out;
}

GridField synthesize(const TorusGrid& g, std::span<const cplx> coeffs) {
  return GridField{g, dft(g, coeffs, FFTW_BACKWARD)};
}

}  // namespace pel
