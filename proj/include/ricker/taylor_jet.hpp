// Truncated multivariate Taylor polynomials in (x, r, y): total degree <= 3
// and degree <= 1 in r. Arithmetic on jets differentiates exactly, so the
// coefficient of x^l r^m y^n equals (1/(l! m! n!)) d^{l+m+n}f/dx^l dr^m dy^n.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ricker {

class Jet {
 public:
  static constexpr int kOrder = 3;
  static constexpr int kMaxR = 1;

  Jet() { c_.fill(0.0); }
  explicit Jet(double value) : Jet() { c_[0] = value; }

  /// value + t, where t is one of the three coordinates (0 = x, 1 = r, 2 = y).
  static Jet variable(int which, double value) {
    Jet j(value);
    const int l = which == 0 ? 1 : 0;
    const int m = which == 1 ? 1 : 0;
    const int n = which == 2 ? 1 : 0;
    j.c_[index(l, m, n)] = 1.0;
    return j;
  }

  static bool in_range(int l, int m, int n) {
    return l >= 0 && m >= 0 && n >= 0 && m <= kMaxR && l + m + n <= kOrder;
  }

  double coeff(int l, int m, int n) const { return in_range(l, m, n) ? c_[index(l, m, n)] : 0.0; }
  double value() const { return c_[0]; }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double a) {
    for (double& v : c_) v *= a;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator+(double b, Jet a) { return a + b; }
  friend Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend Jet operator-(double b, const Jet& a) {
    Jet out = a;
    out *= -1.0;
    out.c_[0] += b;
    return out;
  }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out;
    for (int l1 = 0; l1 <= kOrder; ++l1)
      for (int m1 = 0; m1 <= kMaxR; ++m1)
        for (int n1 = 0; l1 + m1 + n1 <= kOrder; ++n1) {
          const double av = a.c_[index(l1, m1, n1)];
          if (av == 0.0) continue;
          for (int l2 = 0; l1 + m1 + n1 + l2 <= kOrder; ++l2)
            for (int m2 = 0; m1 + m2 <= kMaxR; ++m2)
              for (int n2 = 0; l1 + m1 + n1 + l2 + m2 + n2 <= kOrder; ++n2)
                out.c_[index(l1 + l2, m1 + m2, n1 + n2)] += av * b.c_[index(l2, m2, n2)];
        }
    return out;
  }

  /// 1/(a0 + h) = (1/a0) sum_k (-h/a0)^k; h has no constant term so the sum is finite.
  friend Jet reciprocal(const Jet& a) {
    const double a0 = a.value();
    Jet h = a - a0;
    h *= -1.0 / a0;
    Jet term(1.0);
    Jet sum(1.0);
    for (int k = 1; k <= kOrder; ++k) {
      term = term * h;
      sum += term;
    }
    return sum * (1.0 / a0);
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet exp(const Jet& a) {
    const double a0 = a.value();
    const Jet h = a - a0;
    Jet term(1.0);
    Jet sum(1.0);
    for (int k = 1; k <= kOrder; ++k) {
      term = term * h;
      term *= 1.0 / k;
      sum += term;
    }
    return sum * std::exp(a0);
  }

 private:
  static constexpr std::size_t kSize = (kOrder + 1) * (kMaxR + 1) * (kOrder + 1);
  static constexpr std::size_t index(int l, int m, int n) {
    return static_cast<std::size_t>((l * (kMaxR + 1) + m) * (kOrder + 1) + n);
  }

  std::array<double, kSize> c_;
};

}  // namespace ricker
