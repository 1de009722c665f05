#include "ricker/nullclines.hpp"

#include <cmath>
#include <sstream>

namespace ricker {

namespace {

std::string describe(const char* stage_name, double value) {
  std::ostringstream msg;
  msg << stage_name << " outside its domain at " << value;
  return msg.str();
}

}  // namespace

NullclineSet::NullclineSet(const ModelParams& params)
    : NullclineSet(params, solve_positive(params)) {}

NullclineSet::NullclineSet(const ModelParams& params, const PositiveFixedPoint& p)
    : params_(params),
      x_hat_(p.bracket.first),
      x_star_(p.x_star),
      y_star_(p.y_star),
      chord_slope_(-p.y_star / (params.r() - p.x_star)) {}

double NullclineSet::S(double x) const {
  if (!(x >= 0.0)) throw DomainError(describe("S", x));
  return (std::exp(params_.r() - x) - 1.0) / params_.c();
}

double NullclineSet::S_inv(double y) const {
  const double arg = 1.0 + params_.c() * y;
  if (!(arg > 0.0)) throw DomainError(describe("S^-1", y));
  return params_.r() - std::log(arg);
}

double NullclineSet::V(double x) const {
  if (!(x >= 0.0)) throw DomainError(describe("V", x));
  const double k = params_.c() * params_.b0() / (1.0 - params_.s());
  return (k * x / (1.0 + params_.gamma() * x) - 1.0) / params_.c();
}

double NullclineSet::V_inv(double y) const {
  const double s = params_.s();
  const double lift = 1.0 + params_.c() * y;
  const double denom = params_.c() * params_.b0() - params_.gamma() * (1.0 - s) * lift;
  if (!(denom > 0.0) || !(lift >= 0.0))
    throw DomainError(describe("V^-1 (beyond horizontal asymptote)", y));
  return (1.0 - s) * lift / denom;
}

double NullclineSet::U(double x) const {
  if (!(x >= 0.0)) throw DomainError(describe("U", x));
  if (x <= params_.r()) return chord_slope_ * (x - params_.r());
  return S(x);
}

double NullclineSet::U_inv(double y) const {
  if (y >= 0.0) {
    const double x = params_.r() + y / chord_slope_;
    if (x < 0.0) throw DomainError(describe("U^-1", y));
    return x;
  }
  return S_inv(y);
}

double NullclineSet::R(Branch w, double y) const {
  double v = y;
  int stage = 1;
  try {
    v = eval_inv(w, v);
    ++stage;
    v = V(v);
    ++stage;
    v = eval_inv(w, v);
    ++stage;
    v = V(v);
  } catch (const DomainError& e) {
    throw CompositionError(std::string("R stage ") + std::to_string(stage) + ": " + e.what(),
                           stage);
  }
  return v;
}

double NullclineSet::y_lower() const {
  const double u_hat = U(x_hat_);
  if (V(params_.r()) < u_hat) return 0.0;
  const double value = U(V_inv(u_hat));
  // A negative lower end means R(U, .) extends down to 0.
  return std::max(0.0, value);
}

RectangleSequence rectangle_iteration(const NullclineSet& ncs, std::size_t max_levels, double tol) {
  RectangleSequence seq;
  if (max_levels == 0) return seq;

  std::size_t level = 0;
  auto guarded = [&](auto&& fn, int stage) {
    try {
      return fn();
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "rectangle level " << level << ", stage " << stage << ": " << e.what();
      throw CompositionError(msg.str(), stage, level);
    }
  };

  const double r = ncs.params().r();
  RectangleLevel cur;
  cur.am = guarded([&] { return ncs.S_inv(ncs.V(ncs.S_inv(0.0))); }, 1);
  cur.aM = r;
  cur.bm = guarded([&] { return ncs.V(cur.am); }, 2);
  cur.bM = guarded([&] { return ncs.V(cur.aM); }, 3);
  seq.levels.push_back(cur);

  while (cur.gap() >= tol && seq.levels.size() < max_levels) {
    ++level;
    RectangleLevel next;
    next.am = guarded([&] { return ncs.S_inv(ncs.V(cur.aM)); }, 1);
    next.aM = guarded([&] { return ncs.S_inv(ncs.V(cur.am)); }, 2);
    next.bm = guarded([&] { return ncs.V(ncs.S_inv(cur.bM)); }, 3);
    next.bM = guarded([&] { return ncs.V(ncs.S_inv(cur.bm)); }, 4);
    cur = next;
    seq.levels.push_back(cur);
  }
  seq.final_gap = cur.gap();
  seq.converged = seq.final_gap < tol;
  return seq;
}

}  // namespace ricker
