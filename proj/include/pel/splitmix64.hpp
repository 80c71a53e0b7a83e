#pragma once

#include <cstdint>

#include "pel/common.hpp"

namespace pel {

// SplitMix64: tiny, splittable, exactly reproducible across languages.
// Data-generation convention used throughout the artifact: a field drawn
// with seed s fills its samples in row-major index order, each sample
// consuming two draws (re then im), both mapped to [-1, 1].
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 significant bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // re and im uniform in [-1, 1], re drawn first
  cplx next_unit_complex() {
    const double re = 2.0 * next_double() - 1.0;
    const double im = 2.0 * next_double() - 1.0;
    return {re, im};
  }

 private:
  std::uint64_t state_;
};

}  // namespace pel
