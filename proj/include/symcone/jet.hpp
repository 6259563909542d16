#pragma once

// Multilinear truncated Taylor jets.
//
// Jet<K> is an element of R[e_1..e_K] / (e_1^2, ..., e_K^2). Evaluating a
// smooth f at x + sum_a e_a d_a yields, in the coefficient of the monomial
// prod_{a in S} e_a, the mixed directional derivative of f along {d_a : a in S}.
// Directions may repeat, so the top coefficient of a Jet<4> along (d, d, d, d)
// is the fourth derivative along d.

#include <array>
#include <cmath>
#include <cstdint>

#include "symcone/errors.hpp"

namespace symcone {

template <int K>
struct Jet {
  static_assert(K >= 0 && K <= 6, "Jet order out of range");
  static constexpr int kSize = 1 << K;
  std::array<double, kSize> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }  // NOLINT: implicit lift of constants

  static Jet variable(double value, int axis) {
    Jet out(value);
    out.c[1u << axis] = 1.0;
    return out;
  }

  double value() const { return c[0]; }
  /// Coefficient of the monomial whose variables are the set bits of mask.
  double coeff(unsigned mask) const { return c[mask]; }
  double top() const { return c[kSize - 1]; }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <int K>
Jet<K> operator+(Jet<K> a, const Jet<K>& b) {
  return a += b;
}
template <int K>
Jet<K> operator-(Jet<K> a, const Jet<K>& b) {
  return a -= b;
}
template <int K>
Jet<K> operator-(Jet<K> a) {
  for (auto& v : a.c) v = -v;
  return a;
}
template <int K>
Jet<K> operator*(Jet<K> a, double s) {
  return a *= s;
}
template <int K>
Jet<K> operator*(double s, Jet<K> a) {
  return a *= s;
}

// Subset convolution: (ab)[m] = sum over s subset of m of a[s] b[m \ s].
template <int K>
Jet<K> operator*(const Jet<K>& a, const Jet<K>& b) {
  Jet<K> out;
  for (unsigned m = 0; m < static_cast<unsigned>(Jet<K>::kSize); ++m) {
    double acc = 0.0;
    for (unsigned s = m;; s = (s - 1) & m) {
      acc += a.c[s] * b.c[m ^ s];
      if (s == 0) break;
    }
    out.c[m] = acc;
  }
  return out;
}

namespace detail {

// Applies a power series sum_j coef[j] n^j to the nilpotent part n = a - a0;
// n^(K+1) vanishes in Jet<K>.
template <int K, class Coef>
Jet<K> nilpotent_series(const Jet<K>& a, Coef coef) {
  Jet<K> n = a;
  n.c[0] = 0.0;
  Jet<K> out(coef(0));
  Jet<K> power(1.0);
  for (int j = 1; j <= K; ++j) {
    power = power * n;
    out += power * coef(j);
  }
  return out;
}

}  // namespace detail

template <int K>
Jet<K> reciprocal(const Jet<K>& a) {
  const double a0 = a.c[0];
  if (a0 == 0.0) throw ConditioningError("jet reciprocal of a zero value");
  return detail::nilpotent_series(a, [a0](int j) {
    return (j % 2 == 0 ? 1.0 : -1.0) / std::pow(a0, j + 1);
  });
}

template <int K>
Jet<K> operator/(const Jet<K>& a, const Jet<K>& b) {
  return a * reciprocal(b);
}

template <int K>
Jet<K> log(const Jet<K>& a) {
  const double a0 = a.c[0];
  if (!(a0 > 0.0)) throw ConditioningError("jet log of a non-positive value");
  return detail::nilpotent_series(a, [a0](int j) {
    if (j == 0) return std::log(a0);
    return (j % 2 == 1 ? 1.0 : -1.0) / (j * std::pow(a0, j));
  });
}

// Scalar-generic helpers shared by double and Jet code paths.
inline double jet_value(double x) { return x; }
inline bool is_zero(double x) { return x == 0.0; }
template <int K>
bool is_zero(const Jet<K>& x) {
  for (double v : x.c)
    if (v != 0.0) return false;
  return true;
}
template <int K>
double jet_value(const Jet<K>& x) {
  return x.c[0];
}

}  // namespace symcone
