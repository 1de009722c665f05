// Discrete Kolmogorov predator-prey map with Ricker prey growth:
//
//   x' = x e^{r - x} / (1 + c y)
//   y' = s y + (b0 x / (1 + gamma x)) (c y / (1 + c y))
//
// The model core: parameters, state, map evaluation, Jacobian, the absorbing
// box and deterministic orbit iteration.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricker/linalg.hpp"

namespace ricker {

/// Raised for non-finite or out-of-domain arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Interaction coefficients: every model parameter except the prey growth
/// exponent r. Construction enforces b0 > 0, gamma > 0, 0 < c < 1, 0 < s < 1.
class Coefficients {
 public:
  Coefficients(double b0, double gamma, double c, double s);

  double b0() const { return b0_; }
  double gamma() const { return gamma_; }
  double c() const { return c_; }
  double s() const { return s_; }

  /// c*b0 - (1-s)*gamma; a positive fixed point can exist only when this is positive.
  double conversion_margin() const { return c_ * b0_ - (1.0 - s_) * gamma_; }

  friend bool operator==(const Coefficients&, const Coefficients&) = default;

 private:
  double b0_;
  double gamma_;
  double c_;
  double s_;
};

/// The five parameters (r, b0, gamma, c, s). r may take any finite value.
class ModelParams {
 public:
  ModelParams(double r, const Coefficients& k);

  static ModelParams make(double r, double b0, double gamma, double c, double s) {
    return ModelParams(r, Coefficients(b0, gamma, c, s));
  }

  double r() const { return r_; }
  double b0() const { return k_.b0(); }
  double gamma() const { return k_.gamma(); }
  double c() const { return k_.c(); }
  double s() const { return k_.s(); }
  const Coefficients& coefficients() const { return k_; }

  ModelParams with_r(double r) const { return ModelParams(r, k_); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double r_;
  Coefficients k_;
};

/// Prey/predator densities.
struct State {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

inline double distance_inf(State a, State b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// The rectangle [0, K1] x [0, K2] that every orbit enters and never leaves.
struct AbsorbingBox {
  double K1 = 0.0;
  double K2 = 0.0;

  bool contains(State p, double slack = 0.0) const {
    return p.x >= -slack && p.y >= -slack && p.x <= K1 + slack && p.y <= K2 + slack;
  }
};

struct Orbit {
  std::vector<State> samples;
  std::size_t transient_discarded = 0;
  ModelParams params;
};

/// Orbit iteration produced a non-finite state.
class IterationError : public std::runtime_error {
 public:
  IterationError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}

  /// Number of map applications completed before the failure.
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// One application of the map. Throws DomainError for non-finite or negative
/// input and for a non-finite image.
State step(const ModelParams& params, State state);

/// Analytic Jacobian of the map at `state`.
Mat2 jacobian(const ModelParams& params, State state);

AbsorbingBox absorbing_box(const ModelParams& params);

/// Applies the map transient + n times from `start` and keeps the images
/// produced by the last n applications.
Orbit iterate(const ModelParams& params, State start, std::size_t n, std::size_t transient = 0);

}  // namespace ricker
