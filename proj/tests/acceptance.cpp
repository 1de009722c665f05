// End-to-end acceptance checks on the reference parameter set. Prints one
// PASS/FAIL line per criterion and exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ricker/center_manifold.hpp"
#include "ricker/fixed_points.hpp"
#include "ricker/nullclines.hpp"
#include "ricker/orbit_analysis.hpp"
#include "test_support.hpp"

namespace {

using namespace ricker;
using ricker::testing::reference;
using ricker::testing::reference_coefficients;

class Check {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    std::ostringstream os;
    os.precision(7);
    os << what << "=" << got << " (want " << want << " +- " << tol << ")";
    expect(std::abs(got - want) <= tol, os.str());
  }
  void expect(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    if (!details_.empty()) details_ += "; ";
    details_ += ok ? detail : "!" + detail;
  }
  bool ok() const { return ok_; }
  const std::string& details() const { return details_; }

 private:
  bool ok_ = true;
  std::string details_;
};

using Clock = std::chrono::steady_clock;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion1(Check& c) {
  const auto t0 = Clock::now();
  const PositiveFixedPoint fp = solve_positive(reference(1.0));
  const double ms = seconds_since(t0) * 1e3;
  c.near("x*", fp.x_star, 0.6930, 1e-3);
  c.near("y*", fp.y_star, 0.3991, 1e-3);
  c.expect(ms < 1.0, "runtime " + std::to_string(ms) + " ms");
}

void criterion2(Check& c) {
  const auto r_min = existence_threshold(reference_coefficients());
  c.expect(r_min.has_value(), "threshold exists");
  if (r_min) c.near("r_min", *r_min, 0.4, 1e-14);
}

void criterion3(Check& c) {
  const auto w = corollary_sufficient_window(reference_coefficients());
  c.expect(w.has_value(), "window exists");
  if (!w) return;
  c.near("window lower end", w->lo, 0.8184, 1e-3);
  c.near("window upper end", w->hi, 1.0, 0.0);
  const NullclineSet n(reference(1.0));
  const RectangleSequence seq = rectangle_iteration(n);
  c.expect(seq.converged, "rectangles converged in " + std::to_string(seq.levels.size()) + " levels");
  const RectangleLevel& last = seq.levels.back();
  c.near("limit x", 0.5 * (last.am + last.aM), 0.6930, 1e-3);
  c.near("limit y", 0.5 * (last.bm + last.bM), 0.3991, 1e-3);
  bool nested = true;
  for (std::size_t k = 1; k < seq.levels.size(); ++k) {
    const RectangleLevel& a = seq.levels[k - 1];
    const RectangleLevel& b = seq.levels[k];
    nested = nested && b.am >= a.am && b.bm >= a.bm && b.aM <= a.aM && b.bM <= a.bM;
  }
  c.expect(nested, "monotone nesting");
}

void criterion4(Check& c, const FlipReport& f) {
  c.near("r*", f.r_star, 2.7732, 1e-3);
  c.near("-det J", -f.det_j, 0.4746, 1e-3);
}

void criterion5(Check& c, const FlipReport& f) {
  c.near("sigma1", f.sigma1, -1.9363, 0.02);
  c.near("sigma2", f.sigma2, 9.7182, 0.1);
  c.expect(f.classification == FlipClass::supercritical_right,
           "classification " + to_string(f.classification));
}

void criterion6(Check& c, const FlipReport& f) {
  const auto t0 = Clock::now();
  const auto steps = cascade_thresholds(reference_coefficients(), f.r_star - 0.05, f.r_star + 0.6, 1e-3, 16);
  const double secs = seconds_since(t0);
  const std::vector<std::pair<std::size_t, double>> want = {{2, 3.1247}, {4, 3.2555}, {8, 3.2770}, {0, 3.2836}};
  for (const auto& [from, value] : want) {
    const std::string name = from ? std::to_string(from) + "->" + std::to_string(2 * from) : "chaos onset";
    bool found = false;
    for (const auto& s : steps) {
      if (s.from_period != from) continue;
      c.near(name, s.threshold, value, 2e-3);
      found = true;
    }
    c.expect(found, name + " located");
  }
  c.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s");
}

void criterion7(Check& c) {
  PeriodOptions po;
  po.transient = 100000;
  const std::vector<std::pair<double, std::size_t>> cases = {{3.00, 2},     {3.20, 4},     {3.27, 8},
                                                             {3.28, 16},    {3.29564, 14}, {3.33142, 10},
                                                             {3.38593, 12}, {3.43853, 9}};
  for (const auto& [r, p] : cases) {
    const PeriodResult res = detect_period(reference(r), kDefaultStart, po);
    std::ostringstream os;
    os << "r=" << r << " period " << (res.period ? std::to_string(*res.period) : "none") << " (want " << p << ")";
    c.expect(res.period == std::optional<std::size_t>(p), os.str());
  }
}

void criterion8(Check& c) {
  const std::vector<std::pair<double, double>> cases = {{3.30, 0.1352}, {3.32, 0.1604}, {3.34, 0.1578},
                                                        {3.38, 0.2150}, {3.42, 0.2712}, {3.46, 0.5063}};
  for (const auto& [r, lambda] : cases) {
    std::ostringstream name;
    name << "lambda1(" << r << ")";
    c.near(name.str(), lyapunov1(reference(r), kDefaultStart, 1000000, 10000).lambda1, lambda, 0.03);
  }
}

// Order-2 symmetric product stencil for the Taylor coefficient of x^l r^m y^n.
double stencil(const std::function<double(double, double, double)>& f, int l, int m, int n, double h) {
  auto binom = [](int a, int b) {
    double out = 1;
    for (int i = 1; i <= b; ++i) out = out * (a - b + i) / i;
    return out;
  };
  auto fact = [](int a) {
    double out = 1;
    for (int i = 2; i <= a; ++i) out *= i;
    return out;
  };
  double sum = 0;
  for (int a = 0; a <= l; ++a)
    for (int b = 0; b <= m; ++b)
      for (int d = 0; d <= n; ++d) {
        const double w = binom(l, a) * binom(m, b) * binom(n, d) * (((l - a) + (m - b) + (n - d)) % 2 ? -1 : 1);
        sum += w * f((a - l / 2.0) * h, (b - m / 2.0) * h, (d - n / 2.0) * h);
      }
  return sum / std::pow(h, l + m + n) / (fact(l) * fact(m) * fact(n));
}

double richardson(const std::function<double(double, double, double)>& f, int l, int m, int n) {
  const double h = 2e-2;
  return (4.0 * stencil(f, l, m, n, h / 2) - stencil(f, l, m, n, h)) / 3.0;
}

void criterion9(Check& c, const FlipReport& f) {
  auto rng = ricker::testing::make_rng(9);

  // Jacobian against central differences on a 1000-point grid.
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto k = ricker::testing::random_coexistence_coefficients(rng);
    const ModelParams p(ricker::testing::uniform(rng, 0.1, 3.5), k);
    const State z{ricker::testing::uniform(rng, 0.01, 3.0), ricker::testing::uniform(rng, 0.01, 3.0)};
    const Mat2 J = jacobian(p, z);
    for (int col = 0; col < 2; ++col) {
      const double h = 1e-5 * (col ? std::max(1.0, z.y) : std::max(1.0, z.x));
      State lo = z, hi = z;
      (col ? lo.y : lo.x) -= h;
      (col ? hi.y : hi.x) += h;
      const State a = step(p, lo), b = step(p, hi);
      const double fd[2] = {(b.x - a.x) / (2 * h), (b.y - a.y) / (2 * h)};
      for (int row = 0; row < 2; ++row)
        worst = std::max(worst, std::abs(J(row, col) - fd[row]) / std::max(1.0, std::abs(fd[row])));
    }
  }
  c.expect(worst <= 1e-6, "jacobian fd rel " + sci(worst));

  // Shifted-system partials against Richardson-extrapolated differences.
  const auto k = reference_coefficients();
  double worst_partial = 0;
  int partials = 0;
  for (int comp = 0; comp < 2; ++comp) {
    const auto g = [&](double x, double r, double y) { return gtilde(k, f.r_star, x, r, y)[comp]; };
    for (const auto& [idx, value] : comp ? f.partials.j : f.partials.i) {
      if (idx[0] + idx[1] + idx[2] == 0) continue;
      const double want = richardson(g, idx[0], idx[1], idx[2]);
      worst_partial = std::max(worst_partial, std::abs(value - want) / std::max(std::abs(want), 1e-2));
      ++partials;
    }
  }
  c.expect(worst_partial <= 1e-5,
           std::to_string(partials) + " partials rel " + sci(worst_partial));

  // Absorbing box: 10^4 starts inside stay inside.
  int escapes = 0;
  for (int i = 1; i <= 10000; ++i) {
    const auto kk = ricker::testing::random_coexistence_coefficients(rng);
    const ModelParams p(ricker::testing::uniform(rng, 0.1, 4.0), kk);
    const AbsorbingBox box = absorbing_box(p);
    const State z{box.K1 * ricker::testing::halton(i, 2), box.K2 * ricker::testing::halton(i, 3)};
    if (!box.contains(step(p, z), 1e-12)) ++escapes;
  }
  c.expect(escapes == 0, "box escapes " + std::to_string(escapes));

  // Jury conditions and the absence of an escaping complex pair.
  int jury_bad = 0, complex_bad = 0, complex_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto kk = ricker::testing::random_coexistence_coefficients(rng);
    const ModelParams p(*existence_threshold(kk) + ricker::testing::uniform(rng, 1e-3, 5.0), kk);
    const PositiveFixedPoint fp = solve_positive(p);
    const StabilityReport rep = classify_positive(p, fp);
    if (!(rep.jury_b > 0 && rep.jury_c > 0)) ++jury_bad;
    const Mat2 J = jacobian(p, fp.state());
    if (eigenvalues(J)[0].imag() != 0.0) {
      ++complex_seen;
      if (std::abs(det(J)) >= 1.0) ++complex_bad;
    }
  }
  c.expect(jury_bad == 0, "jury b,c violations " + std::to_string(jury_bad));
  c.expect(complex_bad == 0, "complex pairs outside unit circle " + std::to_string(complex_bad) + "/" +
                                 std::to_string(complex_seen));

  // R(U, y) > y below y* wherever the global criterion holds.
  int r_bad = 0;
  for (double r : {0.82, 0.86, 0.9, 0.95, 1.0}) {
    if (!global_stability_criterion(reference(r))) continue;
    const NullclineSet n(reference(r));
    for (int j = 0; j < 1000; ++j) {
      const double y = n.y_star() * j / 1000.0;
      if (!(n.R(Branch::U, y) > y)) ++r_bad;
    }
  }
  c.expect(r_bad == 0, "R(U,y)<=y points " + std::to_string(r_bad));

  // Minimality and stability of every cycle on a grid.
  PeriodOptions po;
  po.transient = 100000;
  int cycle_bad = 0, cycles = 0;
  for (int j = 0; j <= 40; ++j) {
    const auto p = reference(2.5 + 0.025 * j);
    const PeriodResult res = detect_period(p, kDefaultStart, po);
    if (!res.period) continue;
    ++cycles;
    bool ok = res.refined && res.spectral_radius < 1.0 &&
              distance_inf(iterate_map(p, res.representative, *res.period), res.representative) <= 1e-10;
    for (std::size_t d = 1; d < *res.period; ++d)
      if (*res.period % d == 0) ok = ok && distance_inf(iterate_map(p, res.representative, d), res.representative) > po.tol;
    if (!ok) ++cycle_bad;
  }
  c.expect(cycle_bad == 0, "inconsistent cycles " + std::to_string(cycle_bad) + "/" + std::to_string(cycles));

  // Eigen-coordinate similarity.
  const EigenTransform et = eigen_transform(k, solve_positive(reference(f.r_star)));
  Mat3 target;
  target(0, 0) = -1.0;
  target(1, 1) = 1.0;
  target(2, 2) = -f.det_j;
  const double sim = (et.T_inv * extended_jacobian(f.partials) * et.T - target).max_abs();
  c.expect(sim <= 1e-8, "similarity residual " + sci(sim));
}

}  // namespace

int main() {
  const FlipReport flip = flip_coefficients(reference_coefficients());
  struct Criterion {
    const char* title;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"positive fixed point at r=1", criterion1},
      {"existence threshold", criterion2},
      {"global stability window and rectangles", criterion3},
      {"flip point", [&](Check& c) { criterion4(c, flip); }},
      {"normal form coefficients", [&](Check& c) { criterion5(c, flip); }},
      {"cascade thresholds", [&](Check& c) { criterion6(c, flip); }},
      {"periodic attractors", criterion7},
      {"lyapunov exponents", criterion8},
      {"property checks", [&](Check& c) { criterion9(c, flip); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (!c.ok()) ++failed;
    std::printf("[%s] %zu %s: %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].title, c.details().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
