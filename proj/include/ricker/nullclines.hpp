// Geometric global-stability machinery built from the nullclines.
//
//   S(x) = (e^{r-x} - 1)/c                       prey nullcline, decreasing
//   V(x) = ((c b0/(1-s)) x/(1+gamma x) - 1)/c    predator nullcline, increasing
//   U(x) = chord through (r, 0) and (x*, y*) on [0, r], S beyond r
//
// R(W, y) = V(W^{-1}(V(W^{-1}(y)))) for W in {S, U}. The nested rectangles
// D_k shrink onto p* when the global criterion holds.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ricker/fixed_points.hpp"
#include "ricker/model.hpp"

namespace ricker {

enum class Branch { S, U };

/// A nullcline composition left its domain. `stage` is 1-based within the
/// composition; `level` is the rectangle level (0 outside rectangle_iteration).
class CompositionError : public DomainError {
 public:
  CompositionError(const std::string& what, int stage, std::size_t level = 0)
      : DomainError(what), stage_(stage), level_(level) {}

  int stage() const { return stage_; }
  std::size_t level() const { return level_; }

 private:
  int stage_;
  std::size_t level_;
};

class NullclineSet {
 public:
  /// Solves for p*; throws NoPositiveFixedPoint when it does not exist.
  explicit NullclineSet(const ModelParams& params);
  NullclineSet(const ModelParams& params, const PositiveFixedPoint& p);

  const ModelParams& params() const { return params_; }
  double x_hat() const { return x_hat_; }
  double x_star() const { return x_star_; }
  double y_star() const { return y_star_; }

  double S(double x) const;
  /// r - ln(1 + c y); requires y > -1/c.
  double S_inv(double y) const;
  double V(double x) const;
  /// Requires y below the horizontal asymptote of V.
  double V_inv(double y) const;
  double U(double x) const;
  double U_inv(double y) const;

  double eval(Branch w, double x) const { return w == Branch::S ? S(x) : U(x); }
  double eval_inv(Branch w, double y) const { return w == Branch::S ? S_inv(y) : U_inv(y); }

  /// Four-fold composition V o W^{-1} o V o W^{-1}. Domain failures raise
  /// CompositionError with the failing stage.
  double R(Branch w, double y) const;

  /// Left end y_* of the working interval of R(U, .), clamped at 0.
  double y_lower() const;

 private:
  ModelParams params_;
  double x_hat_;
  double x_star_;
  double y_star_;
  double chord_slope_;  // U'(x) on [0, r]
};

struct RectangleLevel {
  double am = 0.0;  ///< lower prey bound
  double aM = 0.0;  ///< upper prey bound
  double bm = 0.0;  ///< lower predator bound
  double bM = 0.0;  ///< upper predator bound

  double gap() const { return std::max(aM - am, bM - bm); }
  bool contains(State p, double slack = 0.0) const {
    return p.x >= am - slack && p.x <= aM + slack && p.y >= bm - slack && p.y <= bM + slack;
  }
};

struct RectangleSequence {
  std::vector<RectangleLevel> levels;
  bool converged = false;
  double final_gap = 0.0;
};

/// Builds D_0, D_1, ... until the gap drops below `tol` or `max_levels`
/// levels exist. Runs regardless of whether the global criterion holds.
RectangleSequence rectangle_iteration(const NullclineSet& ncs, std::size_t max_levels = 10000,
                                      double tol = 1e-10);

}  // namespace ricker
