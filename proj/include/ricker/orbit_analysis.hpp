// Long-run orbit diagnostics: minimal period detection with Newton refinement,
// the largest Lyapunov exponent, period-doubling thresholds and r-sweeps.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricker/model.hpp"

namespace ricker {

/// Default initial condition for all attractor diagnostics.
inline constexpr State kDefaultStart{1.0, 1.0};

struct PeriodOptions {
  std::size_t transient = 10000;
  std::size_t cap = 64;
  /// Recurrence tolerance in the max norm.
  double tol = 1e-6;
  double newton_tol = 1e-11;
  std::size_t newton_max_iter = 50;
};

struct PeriodResult {
  /// Minimal period; absent when no period <= cap recurs.
  std::optional<std::size_t> period;
  State representative;
  /// ||G^p(q) - q||_inf at the representative.
  double residual = 0.0;
  /// Newton refinement reached newton_tol.
  bool refined = false;
  /// Spectral radius of the cycle's Jacobian product.
  double spectral_radius = 0.0;
  /// The p cycle points starting at the representative.
  std::vector<State> cycle;
};

/// Iterates past the transient, finds the smallest p <= cap whose recurrence
/// ||z_{k+p} - z_k|| < tol holds over 4p consecutive checks, refines the cycle
/// point by damped Newton on G^p(q) = q and rejects proper divisors.
PeriodResult detect_period(const ModelParams& params, State start = kDefaultStart,
                           const PeriodOptions& opts = {});

/// Product DG(z_{p-1}) ... DG(z_0) along p steps from q.
Mat2 cycle_jacobian(const ModelParams& params, State q, std::size_t p);

/// G^p(q).
State iterate_map(const ModelParams& params, State q, std::size_t p);

struct LyapunovEstimate {
  double lambda1 = 0.0;  ///< natural-log units per iterate
  std::size_t n = 0;
  std::size_t transient = 0;
  /// The orbit collapsed onto the origin; lambda1 is then the linearisation there.
  bool degenerate = false;
};

/// Time average of ln ||J_k v_k|| with the tangent vector renormalised every
/// step. Requires n >= 10^4.
LyapunovEstimate lyapunov1(const ModelParams& params, State start = kDefaultStart,
                           std::size_t n = 1000000, std::size_t transient = 10000);

/// The period predicate changed direction inside a threshold bracket.
class NonMonotoneBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdOptions {
  PeriodOptions period{100000, 64, 1e-6, 1e-11, 50};
  State start = kDefaultStart;
  /// Bracket width at which bisection stops.
  double r_tol = 1e-5;
  /// Evenly spaced probes used to check the predicate is monotone.
  std::size_t probes = 9;
};

/// Bisection on r for the predicate "detected period differs from
/// from_period". Requires from_period at r_lo and 2*from_period at r_hi.
double find_doubling_threshold(const Coefficients& k, double r_lo, double r_hi,
                               std::size_t from_period, const ThresholdOptions& opts = {});

struct ChaosOptions {
  PeriodOptions period{100000, 64, 1e-6, 1e-11, 50};
  State start = kDefaultStart;
  std::size_t lyapunov_n = 200000;
  std::size_t lyapunov_transient = 100000;
  /// lambda1 must exceed this for a row to count as chaotic.
  double lambda_min = 0.01;
  double r_tol = 1e-5;
};

/// A point is chaotic when no period <= cap is detected and lambda1 > lambda_min.
bool is_chaotic(const ModelParams& params, const ChaosOptions& opts = {});

/// Bisection between a non-chaotic r_lo and a chaotic r_hi.
double find_chaos_onset(const Coefficients& k, double r_lo, double r_hi,
                        const ChaosOptions& opts = {});

struct CascadeStep {
  std::size_t from_period = 0;  ///< 0 marks the chaos onset row
  double threshold = 0.0;
};

/// Scans [r_from, r_to] on a grid of spacing `grid_step`, bisects every cell
/// where the period doubles (up to max_period) and finally the chaos onset.
std::vector<CascadeStep> cascade_thresholds(const Coefficients& k, double r_from, double r_to,
                                            double grid_step, std::size_t max_period = 16,
                                            const ChaosOptions& opts = {});

enum class AttractorKind { fixed_point, periodic, chaotic, ambiguous };

std::string to_string(AttractorKind kind);

struct SweepOptions {
  std::size_t transient = 10000;
  State start = kDefaultStart;
  bool with_period = true;
  bool with_lyapunov = false;
  std::size_t lyapunov_n = 100000;
  PeriodOptions period{};
  std::size_t threads = 1;
};

struct SweepRow {
  double r = 0.0;
  std::vector<State> attractor_samples;
  std::optional<std::size_t> period;
  std::optional<double> lambda1;
  AttractorKind kind = AttractorKind::ambiguous;
  /// Empty unless this row failed.
  std::string error;
};

/// Uniform r grid with `steps` points; each row keeps the last M states after
/// burn-in. Rows are independent and returned in r order; failures are
/// recorded in the row.
std::vector<SweepRow> sweep(const Coefficients& k, double r_from, double r_to, std::size_t steps,
                            std::size_t M, const SweepOptions& opts = {});

}  // namespace ricker
