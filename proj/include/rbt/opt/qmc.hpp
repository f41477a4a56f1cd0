#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rbt/error.hpp"

namespace rbt::opt {

inline constexpr std::array<std::uint32_t, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

/// Van der Corput radical inverse of `i` in `base`.
inline double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Halton point `index` in [0,1)^d, optionally shifted modulo 1
/// (Cranley-Patterson rotation).
inline std::vector<double> halton(std::uint64_t index, std::size_t d, const std::vector<double>& shift = {}) {
  if (d > kPrimes.size()) throw Error(ErrorCode::InvalidDescriptor, "Halton sequence supports up to 16 dimensions");
  std::vector<double> p(d);
  for (std::size_t k = 0; k < d; ++k) {
    double v = radical_inverse(index, kPrimes[k]);
    if (!shift.empty()) v = v + shift[k] - std::floor(v + shift[k]);
    p[k] = v;
  }
  return p;
}

}  // namespace rbt::opt
