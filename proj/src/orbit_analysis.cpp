#include "ricker/orbit_analysis.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ricker {

namespace {

std::optional<State> newton_polish(const ModelParams& params, State q, std::size_t p,
                                   const PeriodOptions& opts, double& residual) {
  auto defect = [&](State z) {
    const State img = iterate_map(params, z, p);
    return State{img.x - z.x, img.y - z.y};
  };
  State F = defect(q);
  residual = std::max(std::abs(F.x), std::abs(F.y));
  for (std::size_t it = 0; it < opts.newton_max_iter; ++it) {
    if (residual <= opts.newton_tol) return q;
    Mat2 A = cycle_jacobian(params, q, p);
    A(0, 0) -= 1.0;
    A(1, 1) -= 1.0;
    const double d = det(A);
    if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
    const double dx = (-F.x * A(1, 1) + F.y * A(0, 1)) / d;
    const double dy = (-F.y * A(0, 0) + F.x * A(1, 0)) / d;

    bool accepted = false;
    double lambda = 1.0;
    for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
      const State trial{q.x + lambda * dx, q.y + lambda * dy};
      if (trial.x < 0.0 || trial.y < 0.0) continue;
      const State Ft = defect(trial);
      const double rt = std::max(std::abs(Ft.x), std::abs(Ft.y));
      if (rt < residual) {
        q = trial;
        F = Ft;
        residual = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (residual <= opts.newton_tol) return q;
  return std::nullopt;
}

}  // namespace

State iterate_map(const ModelParams& params, State q, std::size_t p) {
  for (std::size_t i = 0; i < p; ++i) q = step(params, q);
  return q;
}

Mat2 cycle_jacobian(const ModelParams& params, State q, std::size_t p) {
  Mat2 M = Mat2::identity();
  for (std::size_t i = 0; i < p; ++i) {
    M = jacobian(params, q) * M;
    q = step(params, q);
  }
  return M;
}

PeriodResult detect_period(const ModelParams& params, State start, const PeriodOptions& opts) {
  if (opts.cap < 1) throw std::invalid_argument("period cap must be at least 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("recurrence tolerance must be positive");

  State z = iterate_map(params, start, opts.transient);
  std::vector<State> buf(5 * opts.cap + 1);
  buf[0] = z;
  for (std::size_t i = 1; i < buf.size(); ++i) buf[i] = step(params, buf[i - 1]);

  PeriodResult res;
  for (std::size_t p = 1; p <= opts.cap && !res.period; ++p) {
    bool recurs = true;
    for (std::size_t k = 0; k < 4 * p && recurs; ++k)
      recurs = distance_inf(buf[k + p], buf[k]) < opts.tol;
    if (recurs) res.period = p;
  }
  if (!res.period) {
    res.representative = buf.back();
    return res;
  }

  std::size_t p = *res.period;
  double residual = 0.0;
  if (auto q = newton_polish(params, buf[0], p, opts, residual)) {
    res.representative = *q;
    res.refined = true;
    res.residual = residual;
  } else {
    res.representative = buf[0];
    res.residual = distance_inf(iterate_map(params, buf[0], p), buf[0]);
  }

  // Minimality on the refined point.
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    if (distance_inf(iterate_map(params, res.representative, d), res.representative) < opts.tol) {
      p = d;
      res.period = d;
      res.residual = distance_inf(iterate_map(params, res.representative, d), res.representative);
      break;
    }
  }

  res.cycle.reserve(p);
  State c = res.representative;
  for (std::size_t i = 0; i < p; ++i) {
    res.cycle.push_back(c);
    c = step(params, c);
  }
  res.spectral_radius = spectral_radius(cycle_jacobian(params, res.representative, p));
  return res;
}

LyapunovEstimate lyapunov1(const ModelParams& params, State start, std::size_t n,
                           std::size_t transient) {
  if (n < 10000) throw std::invalid_argument("lyapunov1 requires n >= 10^4");
  LyapunovEstimate est;
  est.n = n;
  est.transient = transient;

  State z = iterate_map(params, start, transient);
  double vx = 1.0;
  double vy = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat2 J = jacobian(params, z);
    const double wx = J(0, 0) * vx + J(0, 1) * vy;
    const double wy = J(1, 0) * vx + J(1, 1) * vy;
    const double norm = std::hypot(wx, wy);
    sum += std::log(norm);
    vx = wx / norm;
    vy = wy / norm;
    z = step(params, z);
    if (z.x == 0.0 && z.y == 0.0) est.degenerate = true;
  }
  est.lambda1 = sum / static_cast<double>(n);
  if (est.degenerate) est.lambda1 = std::max(params.r(), std::log(params.s()));
  return est;
}

double find_doubling_threshold(const Coefficients& k, double r_lo, double r_hi,
                               std::size_t from_period, const ThresholdOptions& opts) {
  if (!(r_lo < r_hi)) throw std::invalid_argument("threshold bracket must satisfy r_lo < r_hi");
  const std::size_t to_period = 2 * from_period;

  auto period_at = [&](double r) {
    return detect_period(ModelParams(r, k), opts.start, opts.period).period;
  };
  auto fmt = [](std::optional<std::size_t> p) {
    return p ? std::to_string(*p) : std::string("none");
  };

  const auto p_lo = period_at(r_lo);
  const auto p_hi = period_at(r_hi);
  if (p_lo != from_period || p_hi != to_period) {
    std::ostringstream msg;
    msg << "threshold bracket does not straddle " << from_period << " -> " << to_period
        << ": period " << fmt(p_lo) << " at r = " << r_lo << ", " << fmt(p_hi)
        << " at r = " << r_hi;
    throw std::invalid_argument(msg.str());
  }

  auto foreign = [&](std::optional<std::size_t> p) {
    return p && *p != from_period && *p != to_period && (*p % to_period) != 0;
  };

  // Sampled monotonicity: the predicate may switch from false to true only once.
  std::ostringstream trace;
  bool switched = false;
  bool conflict = false;
  for (std::size_t i = 1; i <= opts.probes; ++i) {
    const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / (opts.probes + 1);
    const auto p = period_at(r);
    trace << " r=" << r << ":" << fmt(p);
    const bool above = p != from_period;
    if (foreign(p) || (switched && !above)) conflict = true;
    switched = switched || above;
  }
  if (conflict)
    throw NonMonotoneBracket("period predicate not monotone across bracket:" + trace.str());

  double lo = r_lo;
  double hi = r_hi;
  while (hi - lo > opts.r_tol) {
    const double mid = 0.5 * (lo + hi);
    const auto p = period_at(mid);
    if (foreign(p)) {
      std::ostringstream msg;
      msg << "periodic window inside bracket: period " << *p << " at r = " << mid;
      throw NonMonotoneBracket(msg.str());
    }
    if (p != from_period)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_chaotic(const ModelParams& params, const ChaosOptions& opts) {
  const PeriodResult pr = detect_period(params, opts.start, opts.period);
  if (pr.period) return false;
  const auto est = lyapunov1(params, opts.start, opts.lyapunov_n, opts.lyapunov_transient);
  return est.lambda1 > opts.lambda_min;
}

double find_chaos_onset(const Coefficients& k, double r_lo, double r_hi, const ChaosOptions& opts) {
  if (!(r_lo < r_hi)) throw std::invalid_argument("chaos bracket must satisfy r_lo < r_hi");
  if (is_chaotic(ModelParams(r_lo, k), opts) || !is_chaotic(ModelParams(r_hi, k), opts)) {
    std::ostringstream msg;
    msg << "chaos bracket [" << r_lo << ", " << r_hi
        << "] must be non-chaotic at the left end and chaotic at the right end";
    throw std::invalid_argument(msg.str());
  }
  double lo = r_lo;
  double hi = r_hi;
  while (hi - lo > opts.r_tol) {
    const double mid = 0.5 * (lo + hi);
    if (is_chaotic(ModelParams(mid, k), opts))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<CascadeStep> cascade_thresholds(const Coefficients& k, double r_from, double r_to,
                                            double grid_step, std::size_t max_period,
                                            const ChaosOptions& opts) {
  if (!(grid_step > 0.0) || !(r_from < r_to))
    throw std::invalid_argument("cascade scan needs r_from < r_to and a positive grid step");
  ThresholdOptions topts;
  topts.period = opts.period;
  topts.start = opts.start;
  topts.r_tol = opts.r_tol;

  std::vector<CascadeStep> steps;
  const auto count = static_cast<std::size_t>(std::ceil((r_to - r_from) / grid_step));
  double prev_r = r_from;
  auto prev_p = detect_period(ModelParams(prev_r, k), opts.start, opts.period).period;
  for (std::size_t i = 1; i <= count; ++i) {
    const double r = std::min(r_to, r_from + grid_step * static_cast<double>(i));
    const auto p = detect_period(ModelParams(r, k), opts.start, opts.period).period;
    if (prev_p && p && *p == 2 * *prev_p && *p <= max_period) {
      steps.push_back({*prev_p, find_doubling_threshold(k, prev_r, r, *prev_p, topts)});
    } else if (!p && is_chaotic(ModelParams(r, k), opts)) {
      steps.push_back({0, find_chaos_onset(k, prev_r, r, opts)});
      break;
    }
    prev_r = r;
    prev_p = p;
  }
  return steps;
}

std::string to_string(AttractorKind kind) {
  switch (kind) {
    case AttractorKind::fixed_point: return "fixed_point";
    case AttractorKind::periodic: return "periodic";
    case AttractorKind::chaotic: return "chaotic";
    case AttractorKind::ambiguous: return "ambiguous";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const Coefficients& k, double r_from, double r_to, std::size_t steps,
                            std::size_t M, const SweepOptions& opts) {
  if (steps < 2) throw std::invalid_argument("sweep requires at least 2 steps");
  std::vector<SweepRow> rows(steps);

  auto compute = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.r = (i + 1 == steps) ? r_to
                             : r_from + (r_to - r_from) * static_cast<double>(i) /
                                            static_cast<double>(steps - 1);
    try {
      const ModelParams params(row.r, k);
      const Orbit orbit = iterate(params, opts.start, M, opts.transient);
      row.attractor_samples = orbit.samples;
      const State last = orbit.samples.empty() ? iterate_map(params, opts.start, opts.transient)
                                               : orbit.samples.back();
      if (opts.with_period) {
        PeriodOptions po = opts.period;
        po.transient = 0;
        row.period = detect_period(params, last, po).period;
      }
      if (opts.with_lyapunov) row.lambda1 = lyapunov1(params, last, opts.lyapunov_n, 0).lambda1;

      if (row.period)
        row.kind = *row.period == 1 ? AttractorKind::fixed_point : AttractorKind::periodic;
      else if (row.lambda1 && *row.lambda1 > 0.01)
        row.kind = AttractorKind::chaotic;
      else
        row.kind = AttractorKind::ambiguous;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(opts.threads, steps));
  if (workers == 1) {
    for (std::size_t i = 0; i < steps; ++i) compute(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < steps; i = next++) compute(i);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace ricker
