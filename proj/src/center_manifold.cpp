#include "ricker/center_manifold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ricker/orbit_analysis.hpp"
#include "ricker/taylor_jet.hpp"

namespace ricker {

namespace {

constexpr double kFlipTol = 1e-10;

double bisect_flip(const Coefficients& k, double lo, double hi) {
  double f_lo = flip_function(k, lo);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f_mid = flip_function(k, mid);
    if (std::abs(f_mid) <= kFlipTol && hi - lo < 1e-12) break;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
  }
  return mid;
}

// Contractions of a partials map along eigen directions (a, 1) in the (x, y) plane.
double quadratic_along(const std::map<MonomialIndex, double>& g, double a) {
  return a * a * g.at({2, 0, 0}) + a * g.at({1, 0, 1}) + g.at({0, 0, 2});
}

double cubic_along(const std::map<MonomialIndex, double>& g, double a) {
  return a * a * a * g.at({3, 0, 0}) + a * a * g.at({2, 0, 1}) + a * g.at({1, 0, 2}) +
         g.at({0, 0, 3});
}

double mixed_along(const std::map<MonomialIndex, double>& g, double a, double b) {
  return 2.0 * a * b * g.at({2, 0, 0}) + (a + b) * g.at({1, 0, 1}) + 2.0 * g.at({0, 0, 2});
}

double parameter_along(const std::map<MonomialIndex, double>& g, double a) {
  return a * g.at({1, 1, 0}) + g.at({0, 1, 1});
}

}  // namespace

double flip_function(const Coefficients& k, double r) {
  const ModelParams params(r, k);
  return classify_positive(params, solve_positive(params)).jury_a;
}

std::pair<double, double> default_flip_bracket(const Coefficients& k) {
  const auto r_min = existence_threshold(k);
  if (!r_min) throw NoPositiveFixedPoint("no positive fixed point: c*b0 > (1-s)*gamma violated");
  return {*r_min + 1e-6, *r_min + 50.0};
}

FlipPoint find_flip_r(const Coefficients& k, std::optional<std::pair<double, double>> bracket) {
  if (!(k.c() * k.b0() > (1.0 - k.s()) * (k.gamma() + 0.5)))
    throw std::invalid_argument(
        "flip point requires c*b0 > (1-s)*(gamma + 1/2) for the eigenvalue -1 to be reached");
  const auto [lo, hi] = bracket ? *bracket : default_flip_bracket(k);
  const auto roots = scan_flip_roots(k, lo, hi, 2000);
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "1 + tr J + det J has no sign change in [" << lo << ", " << hi << "]";
    throw BracketError(msg.str());
  }
  FlipPoint fp;
  fp.r_star = roots.front();
  const ModelParams params(fp.r_star, k);
  fp.det_j = classify_positive(params, solve_positive(params)).det;
  return fp;
}

std::vector<double> scan_flip_roots(const Coefficients& k, double r_lo, double r_hi,
                                    std::size_t samples) {
  if (!(r_lo < r_hi) || samples < 1)
    throw std::invalid_argument("flip scan needs r_lo < r_hi and at least one sample");
  std::vector<double> roots;
  double prev_r = r_lo;
  double prev_f = flip_function(k, prev_r);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = (i == samples)
                         ? r_hi
                         : r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double f = flip_function(k, r);
    if (prev_f == 0.0) {
      roots.push_back(prev_r);
    } else if ((f > 0.0) != (prev_f > 0.0) && f != 0.0) {
      roots.push_back(bisect_flip(k, prev_r, r));
    }
    prev_r = r;
    prev_f = f;
  }
  if (prev_f == 0.0) roots.push_back(prev_r);
  return roots;
}

BranchSlopes zeta_psi_derivatives(const ModelParams& params, const PositiveFixedPoint& p) {
  const double x = p.x_star;
  const double g = params.gamma();
  const double h = 1.0 + g * x;
  BranchSlopes out;
  out.dzeta = 1.0 / (1.0 / x - g / h + 1.0);
  out.dpsi = params.b0() * out.dzeta / ((1.0 - params.s()) * h * h);
  return out;
}

PartialsTable gtilde_partials(const Coefficients& k, double r_star) {
  const ModelParams params(r_star, k);
  const PositiveFixedPoint p = solve_positive(params);
  const BranchSlopes slopes = zeta_psi_derivatives(params, p);

  const Jet xv = Jet::variable(0, 0.0);
  const Jet rv = Jet::variable(1, 0.0);
  const Jet yv = Jet::variable(2, 0.0);

  // The branch enters only through its first r-derivative at m <= 1.
  const Jet zeta = p.x_star + slopes.dzeta * rv;
  const Jet psi = p.y_star + slopes.dpsi * rv;
  const Jet X = xv + zeta;
  const Jet Y = yv + psi;
  const Jet R = r_star + rv;

  const Jet inv_pred = reciprocal(1.0 + k.c() * Y);
  const Jet G1 = X * exp(R - X) * inv_pred - zeta;
  const Jet G2 = k.s() * Y + k.b0() * X * reciprocal(1.0 + k.gamma() * X) * (k.c() * Y) * inv_pred - psi;

  PartialsTable table;
  for (int l = 0; l <= Jet::kOrder; ++l)
    for (int m = 0; m <= Jet::kMaxR; ++m)
      for (int n = 0; l + m + n <= Jet::kOrder; ++n) {
        table.i[{l, m, n}] = G1.coeff(l, m, n);
        table.j[{l, m, n}] = G2.coeff(l, m, n);
      }
  return table;
}

std::array<double, 2> gtilde(const Coefficients& k, double r_star, double x, double r, double y) {
  const ModelParams params(r + r_star, k);
  const PositiveFixedPoint p = solve_positive(params);
  const State img = step(params, {x + p.x_star, y + p.y_star});
  return {img.x - p.x_star, img.y - p.y_star};
}

EigenTransform eigen_transform(const Coefficients& k, const PositiveFixedPoint& p) {
  const double x = p.x_star;
  const double y = p.y_star;
  EigenTransform et;
  et.eta1 = k.c() * x / ((2.0 - x) * (1.0 + k.c() * y));
  et.eta2 = x * (1.0 + k.gamma() * x) * (2.0 - x) / ((1.0 - k.s()) * y);
  if (et.eta1 == et.eta2 || !std::isfinite(et.eta1) || !std::isfinite(et.eta2))
    throw DegenerateTransform("eigenbasis transform is singular (eta1 == eta2)");
  et.eta3 = 1.0 / (et.eta2 - et.eta1);
  et.eta4 = et.eta2 / (et.eta2 - et.eta1);

  et.T(0, 0) = et.eta1;
  et.T(0, 2) = et.eta2;
  et.T(1, 1) = 1.0;
  et.T(2, 0) = 1.0;
  et.T(2, 2) = 1.0;

  et.T_inv(0, 0) = -et.eta3;
  et.T_inv(0, 2) = et.eta4;
  et.T_inv(1, 1) = 1.0;
  et.T_inv(2, 0) = et.eta3;
  et.T_inv(2, 2) = 1.0 - et.eta4;
  return et;
}

Mat3 extended_jacobian(const PartialsTable& t) {
  Mat3 J;
  J(0, 0) = t.i_at(1, 0, 0);
  J(0, 1) = t.i_at(0, 1, 0);
  J(0, 2) = t.i_at(0, 0, 1);
  J(1, 1) = 1.0;
  J(2, 0) = t.j_at(1, 0, 0);
  J(2, 1) = t.j_at(0, 1, 0);
  J(2, 2) = t.j_at(0, 0, 1);
  return J;
}

std::string to_string(Sigma2Convention c) {
  switch (c) {
    case Sigma2Convention::normal_form: return "normal_form";
    case Sigma2Convention::coefficient_form: return "coefficient_form";
    case Sigma2Convention::printed_grouping: return "printed_grouping";
    case Sigma2Convention::leading_cubic: return "leading_cubic";
  }
  return "unknown";
}

std::optional<Sigma2Convention> parse_sigma2_convention(const std::string& name) {
  for (auto c : {Sigma2Convention::normal_form, Sigma2Convention::coefficient_form,
                 Sigma2Convention::printed_grouping, Sigma2Convention::leading_cubic})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string to_string(FlipClass c) {
  switch (c) {
    case FlipClass::supercritical_right: return "supercritical_right";
    case FlipClass::supercritical_left: return "supercritical_left";
    case FlipClass::subcritical_right: return "subcritical_right";
    case FlipClass::subcritical_left: return "subcritical_left";
  }
  return "unknown";
}

FlipClass classify_flip(double sigma1, double sigma2) {
  if (sigma2 > 0.0)
    return sigma1 < 0.0 ? FlipClass::supercritical_right : FlipClass::supercritical_left;
  return sigma1 > 0.0 ? FlipClass::subcritical_right : FlipClass::subcritical_left;
}

double Sigma2Variants::get(Sigma2Convention c) const {
  switch (c) {
    case Sigma2Convention::normal_form: return normal_form;
    case Sigma2Convention::coefficient_form: return coefficient_form;
    case Sigma2Convention::printed_grouping: return printed_grouping;
    case Sigma2Convention::leading_cubic: return leading_cubic;
  }
  return normal_form;
}

FlipReport flip_coefficients(const Coefficients& k, Sigma2Convention convention,
                             std::optional<std::pair<double, double>> bracket) {
  const FlipPoint fp = find_flip_r(k, bracket);
  const ModelParams params(fp.r_star, k);
  const PositiveFixedPoint p = solve_positive(params);
  const EigenTransform et = eigen_transform(k, p);

  FlipReport rep;
  rep.r_star = fp.r_star;
  rep.det_j = fp.det_j;
  rep.x_star = p.x_star;
  rep.y_star = p.y_star;
  rep.eta = {et.eta1, et.eta2, et.eta3, et.eta4};
  rep.partials = gtilde_partials(k, fp.r_star);

  const auto& i = rep.partials.i;
  const auto& j = rep.partials.j;
  const double e1 = et.eta1;
  const double e2 = et.eta2;
  const double e3 = et.eta3;
  const double e4 = et.eta4;

  const double a200 = e4 * quadratic_along(j, e1) - e3 * quadratic_along(i, e1);
  const double a110 = e4 * parameter_along(j, e1) - e3 * parameter_along(i, e1);
  const double a101 = e4 * mixed_along(j, e1, e2) - e3 * mixed_along(i, e1, e2);
  const double a300 = e4 * cubic_along(j, e1) - e3 * cubic_along(i, e1);
  const double b200 = e3 * quadratic_along(i, e1) + (1.0 - e4) * quadratic_along(j, e1);
  const double b110 = e3 * parameter_along(i, e1) + (1.0 - e4) * parameter_along(j, e1);

  rep.alphas = {{{2, 0, 0}, a200}, {{1, 1, 0}, a110}, {{1, 0, 1}, a101}, {{3, 0, 0}, a300}};
  rep.betas = {{{2, 0, 0}, b200}, {{1, 1, 0}, b110}};

  const double det_j = fp.det_j;
  // v = a1 u^2 + a2 u mu solves the invariance equation with eigenvalue -det J.
  rep.a1 = b200 / (1.0 + det_j);
  rep.a2 = -b110 / (1.0 - det_j);

  rep.d = {a110, a200, a300 + a101 * rep.a1};
  rep.sigma1 = 2.0 * rep.d[0];

  Sigma2Variants& v = rep.sigma2_variants;
  const double d2 = rep.d[1];
  v.normal_form = 2.0 * d2 * d2 + 2.0 * rep.d[2];
  v.coefficient_form = 0.5 * d2 * d2 + (a300 - a101 * b200 / (1.0 + det_j)) / 3.0;
  v.printed_grouping = 0.5 * d2 * d2 + (a300 - a101 * b200) / (3.0 * (1.0 + det_j));
  v.leading_cubic = 0.5 * d2 * d2 + a300 / 3.0;

  rep.sigma2_convention = convention;
  rep.sigma2 = v.get(convention);
  rep.classification = classify_flip(rep.sigma1, rep.sigma2);
  const bool positive = v.normal_form > 0.0;
  rep.sigma2_sign_consistent = (v.coefficient_form > 0.0) == positive &&
                               (v.printed_grouping > 0.0) == positive &&
                               (v.leading_cubic > 0.0) == positive;
  return rep;
}

std::array<double, 2> eigen_nonlinear_terms(const Coefficients& k, const FlipReport& flip,
                                            double u, double mu, double v) {
  const double e1 = flip.eta[0];
  const double e2 = flip.eta[1];
  const double e3 = flip.eta[2];
  const double e4 = flip.eta[3];
  const auto g = gtilde(k, flip.r_star, e1 * u + e2 * v, mu, u + v);
  const double L1 = u - e3 * g[0] + e4 * g[1];
  const double L3 = flip.det_j * v + e3 * g[0] + (1.0 - e4) * g[1];
  return {L1, L3};
}

double center_manifold_residual(const Coefficients& k, const FlipReport& flip, double u,
                                double mu) {
  auto h = [&](double uu) { return flip.a1 * uu * uu + flip.a2 * uu * mu; };
  const double v = h(u);
  const auto L = eigen_nonlinear_terms(k, flip, u, mu, v);
  const double u_next = -u + L[0];
  return h(u_next) - (-flip.det_j * v + L[1]);
}

FlipVerification verify_flip_by_simulation(const Coefficients& k, const FlipReport& flip,
                                           double delta, double tol) {
  FlipVerification out;
  const bool right = flip.classification == FlipClass::supercritical_right ||
                     flip.classification == FlipClass::subcritical_right;
  const bool supercritical = flip.classification == FlipClass::supercritical_right ||
                             flip.classification == FlipClass::supercritical_left;
  out.cycle_side = right ? 1 : -1;

  PeriodOptions po;
  po.transient = 200000;
  po.tol = tol;
  po.cap = 8;

  auto run = [&](double offset) {
    return detect_period(ModelParams(flip.r_star + offset, k), kDefaultStart, po);
  };
  auto half_spread = [](const PeriodResult& pr) {
    if (!pr.period || *pr.period != 2) return 0.0;
    return 0.5 * std::abs(pr.cycle[0].y - pr.cycle[1].y);
  };

  const PeriodResult cycle_side = run(out.cycle_side * delta);
  const PeriodResult other_side = run(-out.cycle_side * delta);
  out.period_cycle_side = cycle_side.period;
  out.period_other_side = other_side.period;
  out.predicted_amplitude =
      std::sqrt(std::abs(flip.sigma1 * delta / flip.sigma2_variants.normal_form));

  std::ostringstream diag;
  auto fmt = [](std::optional<std::size_t> p) {
    return p ? std::to_string(*p) : std::string("none");
  };
  diag << "period " << fmt(cycle_side.period) << " at r* " << (right ? "+" : "-") << " delta, "
       << fmt(other_side.period) << " on the other side";

  if (supercritical) {
    const PeriodResult quarter = run(out.cycle_side * delta / 4.0);
    out.amplitude = half_spread(cycle_side);
    out.amplitude_quarter = half_spread(quarter);
    out.amplitude_ratio =
        out.amplitude_quarter > 0.0 ? out.amplitude / out.amplitude_quarter : 0.0;
    diag << "; amplitude " << out.amplitude << " (normal form " << out.predicted_amplitude
         << "), ratio delta : delta/4 = " << out.amplitude_ratio;
    out.ok = cycle_side.period == 2u && other_side.period == 1u && quarter.period == 2u &&
             out.amplitude_ratio >= 1.0 && out.amplitude_ratio <= 4.0;
  } else {
    // The unstable 2-cycle coexists with the still-stable fixed point.
    out.ok = cycle_side.period == 1u && other_side.period != 1u;
  }
  out.diagnostics = diag.str();
  return out;
}

}  // namespace ricker
