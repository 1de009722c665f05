#include "ricker/model.hpp"

#include <cmath>
#include <sstream>

namespace ricker {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

void check_state(State p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("state is not finite");
  if (p.x < 0.0 || p.y < 0.0) throw DomainError("state has a negative coordinate");
}

}  // namespace

Coefficients::Coefficients(double b0, double gamma, double c, double s)
    : b0_(b0), gamma_(gamma), c_(c), s_(s) {
  require(std::isfinite(b0) && b0 > 0.0, "b0 must be positive");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
  require(c > 0.0 && c < 1.0, "c must lie in (0, 1)");
  require(s > 0.0 && s < 1.0, "s must lie in (0, 1)");
}

ModelParams::ModelParams(double r, const Coefficients& k) : r_(r), k_(k) {
  require(std::isfinite(r), "r must be finite");
}

State step(const ModelParams& p, State state) {
  check_state(state);
  const double x = state.x;
  const double y = state.y;
  // 1 - cy/(1+cy) written as 1/(1+cy).
  const double q = 1.0 / (1.0 + p.c() * y);
  const State next{x * std::exp(p.r() - x) * q,
                   p.s() * y + p.b0() * x / (1.0 + p.gamma() * x) * (p.c() * y * q)};
  if (!std::isfinite(next.x) || !std::isfinite(next.y))
    throw DomainError("map image is not finite");
  return next;
}

Mat2 jacobian(const ModelParams& p, State state) {
  check_state(state);
  const double x = state.x;
  const double y = state.y;
  const double c = p.c();
  const double q = 1.0 / (1.0 + c * y);
  const double e = std::exp(p.r() - x);
  const double h = 1.0 + p.gamma() * x;

  Mat2 J;
  J(0, 0) = (1.0 - x) * e * q;
  J(0, 1) = -x * e * c * q * q;
  J(1, 0) = p.b0() * c * y * q / (h * h);
  J(1, 1) = p.s() + p.b0() * x / h * c * q * q;
  return J;
}

AbsorbingBox absorbing_box(const ModelParams& p) {
  return {std::exp(p.r() - 1.0), p.b0() / (p.gamma() * (1.0 - p.s())) + 1.0};
}

Orbit iterate(const ModelParams& params, State start, std::size_t n, std::size_t transient) {
  Orbit orbit{{}, transient, params};
  orbit.samples.reserve(n);
  State current = start;
  const std::size_t total = transient + n;
  for (std::size_t k = 0; k < total; ++k) {
    try {
      current = step(params, current);
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "iteration failed at step " << k << ": " << e.what();
      throw IterationError(k, msg.str());
    }
    if (k >= transient) orbit.samples.push_back(current);
  }
  return orbit;
}

}  // namespace ricker
