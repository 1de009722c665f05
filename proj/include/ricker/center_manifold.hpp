// Period-doubling (flip) analysis at the positive fixed point.
//
// r is promoted to a state variable and the fixed point branch is shifted to
// the origin:
//
//   G~1(x, r, y) = G1(x + zeta(r + r*), r + r*, y + psi(r + r*)) - zeta(r + r*)
//   G~2(x, r, y) = G2(x + zeta(r + r*), r + r*, y + psi(r + r*)) - psi(r + r*)
//
// The eigenbasis transform (x, r, y) = T (u, mu, v) diagonalises the
// linearisation to diag(-1, 1, -det J); reducing onto the centre manifold
// v = a1 u^2 + a2 u mu + ... gives the one-dimensional normal form
// H(u, mu) = (-1 + d1 mu) u + d2 u^2 + d3 u^3 + ..., classified by sigma1 and sigma2.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ricker/fixed_points.hpp"
#include "ricker/model.hpp"

namespace ricker {

/// No sign change of the flip function inside the requested bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The eigenbasis transform is singular (eta1 == eta2).
class DegenerateTransform : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 + tr J + det J at the positive fixed point for parameter r; its zeros
/// are the flip points.
double flip_function(const Coefficients& k, double r);

struct FlipPoint {
  double r_star = 0.0;
  double det_j = 0.0;
};

/// Default bracket [r_min + 1e-6, r_min + 50].
std::pair<double, double> default_flip_bracket(const Coefficients& k);

/// Bisection root of flip_function to |F| <= 1e-10. Requires
/// c b0 > (1-s)(gamma + 1/2).
FlipPoint find_flip_r(const Coefficients& k,
                      std::optional<std::pair<double, double>> bracket = std::nullopt);

/// All sign changes of flip_function on a uniform grid, each refined by bisection.
std::vector<double> scan_flip_roots(const Coefficients& k, double r_lo, double r_hi,
                                    std::size_t samples = 2000);

struct BranchSlopes {
  double dzeta = 0.0;  ///< zeta'(r)
  double dpsi = 0.0;   ///< psi'(r)
};

/// Implicit differentiation of the fixed point branch.
BranchSlopes zeta_psi_derivatives(const ModelParams& params, const PositiveFixedPoint& p);

using MonomialIndex = std::array<int, 3>;  // (l, m, n): powers of x, r, y

/// Normalised Taylor coefficients of G~1 (i) and G~2 (j) at the origin:
/// every (l, m, n) with l + m + n <= 3 and m <= 1.
struct PartialsTable {
  std::map<MonomialIndex, double> i;
  std::map<MonomialIndex, double> j;
  int order = 3;

  double i_at(int l, int m, int n) const { return i.at({l, m, n}); }
  double j_at(int l, int m, int n) const { return j.at({l, m, n}); }
};

PartialsTable gtilde_partials(const Coefficients& k, double r_star);

/// Direct evaluation of (G~1, G~2) at (x, r, y); solves for p*(r + r*).
std::array<double, 2> gtilde(const Coefficients& k, double r_star, double x, double r, double y);

struct EigenTransform {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double eta4 = 0.0;
  Mat3 T;
  Mat3 T_inv;
};

/// Transform built from the flip eigenvector (eta1, 1) and the stable one (eta2, 1).
EigenTransform eigen_transform(const Coefficients& k, const PositiveFixedPoint& p);

/// Jacobian of the extended system (x, r, y) -> (G~1, r, G~2) at the origin.
Mat3 extended_jacobian(const PartialsTable& table);

/// Conventions for sigma2 = 1/2 H_uu^2 + 1/3 H_uuu.
enum class Sigma2Convention {
  /// Derivatives of the reduced map, centre manifold consistent:
  /// 2 d2^2 + 2 (alpha300 + alpha101 a1).
  normal_form,
  /// Coefficient form d2^2/2 + d3/3 with d3 = alpha300 - alpha101 beta200 / (1 + det J).
  coefficient_form,
  /// d2^2/2 + (alpha300 - alpha101 beta200) / (3 (1 + det J)).
  printed_grouping,
  /// d2^2/2 + alpha300/3; reproduces the published benchmark value.
  leading_cubic,
};

std::string to_string(Sigma2Convention c);
std::optional<Sigma2Convention> parse_sigma2_convention(const std::string& name);

/// Convention used for FlipReport::sigma2 unless overridden.
inline constexpr Sigma2Convention kDefaultSigma2 = Sigma2Convention::leading_cubic;

enum class FlipClass { supercritical_right, supercritical_left, subcritical_right, subcritical_left };

std::string to_string(FlipClass c);

/// The four sign cases: stable/unstable 2-cycle on the side r > r* (right) or r < r* (left).
FlipClass classify_flip(double sigma1, double sigma2);

struct Sigma2Variants {
  double normal_form = 0.0;
  double coefficient_form = 0.0;
  double printed_grouping = 0.0;
  double leading_cubic = 0.0;

  double get(Sigma2Convention c) const;
};

struct FlipReport {
  double r_star = 0.0;
  double det_j = 0.0;
  double x_star = 0.0;
  double y_star = 0.0;
  std::array<double, 4> eta{};
  std::map<MonomialIndex, double> alphas;
  std::map<MonomialIndex, double> betas;
  /// d1 = alpha110, d2 = alpha200, d3 = alpha300 + alpha101 a1 (u^3 coefficient of H).
  std::array<double, 3> d{};
  /// Centre manifold coefficients of u^2 and u mu.
  double a1 = 0.0;
  double a2 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  Sigma2Convention sigma2_convention = kDefaultSigma2;
  Sigma2Variants sigma2_variants;
  FlipClass classification = FlipClass::supercritical_right;
  /// Every sigma2 convention has the sign of the normal-form value.
  bool sigma2_sign_consistent = true;
  PartialsTable partials;
};

/// Full coefficient chain at the first flip point in `bracket`.
FlipReport flip_coefficients(const Coefficients& k,
                             Sigma2Convention convention = kDefaultSigma2,
                             std::optional<std::pair<double, double>> bracket = std::nullopt);

/// Nonlinear parts (L1, L3) of the map in eigen coordinates at (u, mu, v).
std::array<double, 2> eigen_nonlinear_terms(const Coefficients& k, const FlipReport& flip,
                                            double u, double mu, double v);

/// Residual of the invariance equation h(-u + L1(u, mu, h), mu) = -det J h + L3(u, mu, h)
/// for h = a1 u^2 + a2 u mu.
double center_manifold_residual(const Coefficients& k, const FlipReport& flip, double u, double mu);

struct FlipVerification {
  bool ok = false;
  /// Side of r* predicted to host the 2-cycle (+1 right, -1 left).
  int cycle_side = 1;
  std::optional<std::size_t> period_cycle_side;
  std::optional<std::size_t> period_other_side;
  /// Half the predator spread of the 2-cycle at delta and delta/4.
  double amplitude = 0.0;
  double amplitude_quarter = 0.0;
  /// amplitude / amplitude_quarter; square-root scaling gives 2.
  double amplitude_ratio = 0.0;
  /// |u| predicted by the normal form at delta: sqrt(|sigma1 delta / sigma2_normal_form|).
  double predicted_amplitude = 0.0;
  std::string diagnostics;
};

/// Simulates at r* +- delta: an attracting 2-cycle on the predicted side and
/// an attracting fixed point on the other; amplitude ratio between delta and
/// delta/4 must lie in [1, 4].
FlipVerification verify_flip_by_simulation(const Coefficients& k, const FlipReport& flip,
                                           double delta = 0.05, double tol = 1e-6);

}  // namespace ricker
