// Shared fixtures for the test suites: the reference parameter set, a
// fixed-seed generator and low-discrepancy sampling.
#pragma once

#include <cstdint>
#include <random>

#include "ricker/model.hpp"

namespace ricker::testing {

inline constexpr double kB0 = 4.0;
inline constexpr double kGamma = 1.5;
inline constexpr double kC = 0.9;
inline constexpr double kS = 0.1;

inline Coefficients reference_coefficients() { return Coefficients(kB0, kGamma, kC, kS); }
inline ModelParams reference(double r) { return ModelParams(r, reference_coefficients()); }

/// Every randomized test draws from this seed so failures reproduce exactly.
inline constexpr std::uint64_t kTestSeed = 20240917;

inline std::mt19937_64 make_rng(std::uint64_t salt = 0) { return std::mt19937_64(kTestSeed + salt); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random valid coefficients with c b0 > (1-s) gamma, so a positive fixed point exists for r > r_min.
inline Coefficients random_coexistence_coefficients(std::mt19937_64& rng) {
  for (;;) {
    const double b0 = uniform(rng, 0.2, 10.0);
    const double gamma = uniform(rng, 0.05, 4.0);
    const double c = uniform(rng, 0.05, 0.95);
    const double s = uniform(rng, 0.05, 0.95);
    if (c * b0 > (1.0 - s) * gamma * 1.01) return Coefficients(b0, gamma, c, s);
  }
}

/// i-th element of the van der Corput sequence in `base` (Halton component).
inline double halton(std::uint64_t i, std::uint64_t base) {
  double f = 1.0;
  double out = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    out += f * static_cast<double>(i % base);
    i /= base;
  }
  return out;
}

}  // namespace ricker::testing
