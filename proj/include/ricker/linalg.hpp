// Small fixed-size matrices for planar maps and their three-dimensional
// parameter extension. Row-major, value types.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace ricker {

template <std::size_t N>
struct Matrix {
  std::array<std::array<double, N>, N> a{};

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m.a[i][i] = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i][j]; }

  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    Matrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t j = 0; j < N; ++j) out.a[i][j] += lhs.a[i][k] * rhs.a[k][j];
    return out;
  }

  friend Matrix operator-(const Matrix& lhs, const Matrix& rhs) {
    Matrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out.a[i][j] = lhs.a[i][j] - rhs.a[i][j];
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& row : a)
      for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }
};

using Mat2 = Matrix<2>;
using Mat3 = Matrix<3>;

inline double trace(const Mat2& m) { return m(0, 0) + m(1, 1); }
inline double det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Roots of lambda^2 - tr*lambda + det. Real pairs are ordered ascending.
inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
  const double tr = trace(m);
  const double dt = det(m);
  const double disc = tr * tr - 4.0 * dt;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // Stable quadratic formula; avoids cancellation for the small root.
    const double q = -0.5 * (-tr + std::copysign(sq, -tr));
    double l1 = q;
    double l2 = (q != 0.0) ? dt / q : 0.0;
    if (l1 > l2) std::swap(l1, l2);
    return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

inline double spectral_radius(const Mat2& m) {
  const auto ev = eigenvalues(m);
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

}  // namespace ricker
