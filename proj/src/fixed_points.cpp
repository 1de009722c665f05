#include "ricker/fixed_points.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ricker {

namespace {

constexpr double kBoundaryTol = 1e-10;
constexpr int kMaxBisection = 200;

Stability classify_jury(double a, double b, double c) {
  if (std::abs(a) <= kBoundaryTol || std::abs(b) <= kBoundaryTol || std::abs(c) <= kBoundaryTol)
    return Stability::flip_boundary;
  return (a > 0.0 && b > 0.0 && c > 0.0) ? Stability::stable : Stability::unstable;
}

}  // namespace

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::flip_boundary: return "flip_boundary";
  }
  return "unknown";
}

StabilityReport jury_report(const Mat2& J) {
  StabilityReport rep;
  rep.trace = trace(J);
  rep.det = det(J);
  rep.jury_a = 1.0 + rep.det + rep.trace;
  rep.jury_b = 1.0 + rep.det - rep.trace;
  rep.jury_c = 1.0 - rep.det;
  rep.classification = classify_jury(rep.jury_a, rep.jury_b, rep.jury_c);
  rep.non_hyperbolic = rep.classification == Stability::flip_boundary;
  rep.eigenvalues = eigenvalues(J);
  return rep;
}

std::optional<double> existence_threshold(const Coefficients& k) {
  const double margin = k.conversion_margin();
  if (!(margin > 0.0)) return std::nullopt;
  return (1.0 - k.s()) / margin;
}

double zeta_inverse(const Coefficients& k, double x) {
  return std::log(k.c() * k.b0() * x / ((1.0 - k.s()) * (1.0 + k.gamma() * x))) + x;
}

double predator_from_prey(const Coefficients& k, double x_star) {
  return k.b0() * x_star / ((1.0 - k.s()) * (1.0 + k.gamma() * x_star)) - 1.0 / k.c();
}

PositiveFixedPoint solve_positive(const ModelParams& params, double tol) {
  const Coefficients& k = params.coefficients();
  const auto r_min = existence_threshold(k);
  if (!r_min) {
    std::ostringstream msg;
    msg << "no positive fixed point: c*b0 > (1-s)*gamma violated (c*b0 = " << k.c() * k.b0()
        << ", (1-s)*gamma = " << (1.0 - k.s()) * k.gamma() << ")";
    throw NoPositiveFixedPoint(msg.str());
  }
  const double r = params.r();
  if (!(r > *r_min)) {
    std::ostringstream msg;
    msg << "no positive fixed point: r > (1-s)/(c*b0-(1-s)*gamma) = " << *r_min
        << " violated (r = " << r << ")";
    throw NoPositiveFixedPoint(msg.str());
  }

  // zeta^{-1}(x_hat) = x_hat < r and zeta^{-1}(r) > r, so the bracket holds a sign change.
  const double x_hat = *r_min;
  auto f = [&](double x) { return zeta_inverse(k, x) - r; };
  double lo = x_hat;
  double hi = r;
  for (int it = 0; it < kMaxBisection && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double slope = 1.0 / x - k.gamma() / (1.0 + k.gamma() * x) + 1.0;
    const double next = x - f(x) / slope;
    if (!(next > x_hat && next < r)) break;
    x = next;
  }

  PositiveFixedPoint p;
  p.x_star = x;
  p.y_star = predator_from_prey(k, x);
  p.bracket = {x_hat, r};
  const double cy = k.c() * p.y_star;
  const double prey_eq = std::exp(r - x) / (1.0 + cy) - 1.0;
  const double pred_eq =
      k.s() + k.b0() * x / (1.0 + k.gamma() * x) * k.c() / (1.0 + cy) - 1.0;
  p.residual = std::max(std::abs(prey_eq), std::abs(pred_eq));
  return p;
}

StabilityReport classify_trivial(const ModelParams& params) {
  StabilityReport rep = jury_report(jacobian(params, {0.0, 0.0}));
  rep.eigenvalues = {std::complex<double>(params.s(), 0.0),
                     std::complex<double>(std::exp(params.r()), 0.0)};
  rep.non_hyperbolic = std::abs(std::exp(params.r()) - 1.0) <= kBoundaryTol;
  rep.classification = params.r() < 0.0 && !rep.non_hyperbolic ? Stability::stable
                                                                : Stability::unstable;
  rep.globally_stable = params.r() <= 0.0;
  return rep;
}

StabilityReport classify_predator_free(const ModelParams& params) {
  const double r = params.r();
  if (!(r > 0.0))
    throw std::invalid_argument("predator-free fixed point (r, 0) requires r > 0");
  StabilityReport rep = jury_report(jacobian(params, {r, 0.0}));
  const double growth = params.s() + params.c() * params.b0() * r / (1.0 + params.gamma() * r);
  rep.eigenvalues = {std::complex<double>(1.0 - r, 0.0), std::complex<double>(growth, 0.0)};
  rep.non_hyperbolic = std::abs(std::abs(1.0 - r) - 1.0) <= kBoundaryTol ||
                       std::abs(growth - 1.0) <= kBoundaryTol;
  if (rep.non_hyperbolic)
    rep.classification = Stability::flip_boundary;
  else
    rep.classification = (r < 2.0 && growth < 1.0) ? Stability::stable : Stability::unstable;
  rep.globally_stable = r <= 1.0 && growth < 1.0;
  return rep;
}

StabilityReport classify_positive(const ModelParams& params, const PositiveFixedPoint& p) {
  const Coefficients& k = params.coefficients();
  const double x = p.x_star;
  const double y = p.y_star;
  const double s = k.s();
  const double cy1 = 1.0 + k.c() * y;
  // Closed form of the Jacobian on the positive branch.
  Mat2 J;
  J(0, 0) = 1.0 - x;
  J(0, 1) = -k.c() * x / cy1;
  J(1, 0) = (1.0 - s) * y / (x * (1.0 + k.gamma() * x));
  J(1, 1) = s + (1.0 - s) / cy1;
  StabilityReport rep = jury_report(J);
  rep.globally_stable = rep.classification == Stability::stable && global_stability_criterion(params);
  return rep;
}

double local_criterion_threshold(const Coefficients& k) {
  return 2.0 + std::log(2.0 * k.c() * k.b0() / ((1.0 - k.s()) * (1.0 + 2.0 * k.gamma())));
}

bool sufficient_local_criterion(const ModelParams& params) {
  return params.r() <= local_criterion_threshold(params.coefficients());
}

double global_inequality_margin(const ModelParams& params) {
  const Coefficients& k = params.coefficients();
  const double z = solve_positive(params).x_star;
  const double rhs = (1.0 - k.s() + k.c() * k.b0() * params.r()) / k.conversion_margin();
  return k.gamma() * z * z + 2.0 * z - rhs;
}

bool global_stability_criterion(const ModelParams& params) {
  const double margin = global_inequality_margin(params);
  return params.r() <= 1.0 && margin > 0.0;
}

double corollary_bound(const Coefficients& k, double r) {
  const double cb0 = k.c() * k.b0();
  const double m = k.conversion_margin();
  const double g = k.gamma();
  const double root = std::sqrt(m / (cb0 * (1.0 + g * r)));
  const double log_term = std::log((1.0 - root) * cb0 / (g * (1.0 - k.s())));
  const double poly_term = (std::sqrt(g * (1.0 - k.s() + cb0 * r) / m + 1.0) - 1.0) / g;
  return log_term + poly_term;
}

std::optional<Interval> corollary_sufficient_window(const Coefficients& k) {
  const auto r_min = existence_threshold(k);
  if (!r_min || *r_min >= 1.0) return std::nullopt;

  auto holds = [&](double r) { return r - corollary_bound(k, r); };
  constexpr int kGrid = 1024;
  const double lo = *r_min;
  const double hi = 1.0;
  std::vector<double> grid(kGrid + 1);
  std::vector<double> vals(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    // The left endpoint itself is excluded from the window.
    grid[i] = (i == 0) ? lo + 1e-12 * std::max(1.0, lo) : lo + (hi - lo) * i / kGrid;
    vals[i] = holds(grid[i]);
  }

  auto refine = [&](double a, double b) {
    double fa = holds(a);
    for (int it = 0; it < kMaxBisection && b - a > 1e-14; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = holds(mid);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  // Walk leftwards from the rightmost positive sample to the segment's start.
  int end = kGrid;
  while (end >= 0 && !(vals[end] > 0.0)) --end;
  if (end < 0) return std::nullopt;
  int start = end;
  while (start > 0 && vals[start - 1] > 0.0) --start;

  Interval w;
  w.lo = (start == 0) ? lo : refine(grid[start - 1], grid[start]);
  w.lo_open = true;
  if (end == kGrid) {
    w.hi = hi;
    w.hi_open = false;
  } else {
    w.hi = refine(grid[end], grid[end + 1]);
    w.hi_open = true;
  }
  return w;
}

}  // namespace ricker
