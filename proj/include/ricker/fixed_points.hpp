// Fixed points of the map and their stability.
//
// The positive fixed point is parameterised by r through the increasing branch
// x* = zeta(r), whose inverse is explicit:
//
//   zeta^{-1}(x) = ln(c b0 x / ((1-s)(1+gamma x))) + x,
//   y* = psi(r)  = b0 x* / ((1-s)(1+gamma x*)) - 1/c.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ricker/model.hpp"

namespace ricker {

/// The existence inequalities for a positive fixed point fail.
class NoPositiveFixedPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PositiveFixedPoint {
  double x_star = 0.0;
  double y_star = 0.0;
  /// Largest absolute residual of the two fixed-point equations.
  double residual = 0.0;
  /// Solve interval (x_hat, r).
  std::pair<double, double> bracket{0.0, 0.0};

  State state() const { return {x_star, y_star}; }
};

enum class Stability { stable, unstable, flip_boundary };

std::string to_string(Stability s);

struct StabilityReport {
  double trace = 0.0;
  double det = 0.0;
  double jury_a = 0.0;  ///< 1 + det + tr
  double jury_b = 0.0;  ///< 1 + det - tr
  double jury_c = 0.0;  ///< 1 - det
  Stability classification = Stability::unstable;
  /// An eigenvalue lies on the unit circle (within 1e-10).
  bool non_hyperbolic = false;
  /// Global attraction is guaranteed by a closed-form criterion.
  bool globally_stable = false;
  std::array<std::complex<double>, 2> eigenvalues{};
};

/// Jury quantities and classification of a 2x2 linearisation. Jury values
/// within 1e-10 of zero are reported as flip_boundary.
StabilityReport jury_report(const Mat2& J);

/// Smallest r admitting a positive fixed point, (1-s)/(c b0 - (1-s) gamma);
/// absent when c b0 <= (1-s) gamma. Equal to x_hat, the zero of the predator nullcline.
std::optional<double> existence_threshold(const Coefficients& k);

double zeta_inverse(const Coefficients& k, double x);

/// Predator density on the positive branch as a function of x*.
double predator_from_prey(const Coefficients& k, double x_star);

/// Bisection for zeta^{-1}(x) = r on (x_hat, r), then Newton polishing inside
/// the bracket. Throws NoPositiveFixedPoint naming the violated inequality.
PositiveFixedPoint solve_positive(const ModelParams& params, double tol = 1e-12);

/// Origin: eigenvalues e^r and s. Stable iff r < 0; r = 0 is non-hyperbolic.
StabilityReport classify_trivial(const ModelParams& params);

/// (r, 0): stable iff 0 < r < 2 and s + c b0 r / (1 + gamma r) < 1; globally
/// stable when additionally r <= 1. Throws std::invalid_argument for r <= 0.
StabilityReport classify_predator_free(const ModelParams& params);

StabilityReport classify_positive(const ModelParams& params, const PositiveFixedPoint& p);

/// 2 + ln(2 c b0 / ((1-s)(1+2 gamma))).
double local_criterion_threshold(const Coefficients& k);

/// Closed-form sufficient condition for local stability of p*.
bool sufficient_local_criterion(const ModelParams& params);

/// gamma zeta^2 + 2 zeta - (1 - s + c b0 r)/(c b0 - (1-s) gamma); the global
/// criterion requires this to be positive together with r <= 1.
double global_inequality_margin(const ModelParams& params);

bool global_stability_criterion(const ModelParams& params);

/// Closed-form lower bound on r from the corollary of the global criterion.
double corollary_bound(const Coefficients& k, double r);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = true;
  bool hi_open = false;

  bool contains(double v) const {
    return (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
  }
};

/// Sub-interval of (r_min, 1] on which r > corollary_bound(r), located by a
/// 1024-point grid and bisection on sign changes. The rightmost such segment
/// is returned; absent when r_min >= 1 or the bound never holds.
std::optional<Interval> corollary_sufficient_window(const Coefficients& k);

}  // namespace ricker
