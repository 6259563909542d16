#pragma once

// Real division algebras R, C, H, O built by Cayley-Dickson doubling.
//
// A scalar is stored as eight coefficients plus a dimension tag (1, 2, 4 or
// 8); coefficients past the dimension are kept at zero so every family shares
// one layout. The coefficient type is a template parameter so that the same
// arithmetic runs on doubles and on truncated Taylor jets.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "symcone/errors.hpp"

namespace symcone {

template <class T>
struct CDNumber {
  std::array<T, 8> c{};
  int dim = 1;

  CDNumber() { c.fill(T(0.0)); }
  explicit CDNumber(int d) : dim(d) {
    check_dim(d);
    c.fill(T(0.0));
  }

  static CDNumber real(int d, const T& value) {
    CDNumber out(d);
    out.c[0] = value;
    return out;
  }

  /// Basis unit e_k (e_0 is the multiplicative identity).
  static CDNumber unit(int d, int k) {
    CDNumber out(d);
    if (k < 0 || k >= d) throw DimensionError("CDNumber::unit: index out of range");
    out.c[k] = T(1.0);
    return out;
  }

  const T& operator[](int i) const { return c[i]; }
  T& operator[](int i) { return c[i]; }

  static void check_dim(int d) {
    if (d != 1 && d != 2 && d != 4 && d != 8)
      throw DimensionError("CDNumber: dimension must be 1, 2, 4 or 8, got " + std::to_string(d));
  }
};

namespace detail {

// Cayley-Dickson recursion on raw coefficient blocks of width D:
//   (x, y)(u, v) = (xu - conj(v) y, v x + y conj(u))
template <int D, class T>
struct CDKernel {
  static constexpr int H = D / 2;

  static void conj(const T* a, T* out) {
    out[0] = a[0];
    for (int i = 1; i < D; ++i) out[i] = -a[i];
  }

  static void mul(const T* a, const T* b, T* out) {
    const T* x = a;
    const T* y = a + H;
    const T* u = b;
    const T* v = b + H;
    T vbar[H], ubar[H], t1[H], t2[H];
    CDKernel<H, T>::conj(v, vbar);
    CDKernel<H, T>::conj(u, ubar);

    CDKernel<H, T>::mul(x, u, t1);
    CDKernel<H, T>::mul(vbar, y, t2);
    for (int i = 0; i < H; ++i) out[i] = t1[i] - t2[i];

    CDKernel<H, T>::mul(v, x, t1);
    CDKernel<H, T>::mul(y, ubar, t2);
    for (int i = 0; i < H; ++i) out[H + i] = t1[i] + t2[i];
  }
};

template <class T>
struct CDKernel<1, T> {
  static void conj(const T* a, T* out) { out[0] = a[0]; }
  static void mul(const T* a, const T* b, T* out) { out[0] = a[0] * b[0]; }
};

}  // namespace detail

template <class T>
CDNumber<T> cd_mul(const CDNumber<T>& a, const CDNumber<T>& b) {
  if (a.dim != b.dim)
    throw DimensionError("cd_mul: incompatible scalars of dimension " + std::to_string(a.dim) +
                         " and " + std::to_string(b.dim));
  CDNumber<T> out(a.dim);
  switch (a.dim) {
    case 1: detail::CDKernel<1, T>::mul(a.c.data(), b.c.data(), out.c.data()); break;
    case 2: detail::CDKernel<2, T>::mul(a.c.data(), b.c.data(), out.c.data()); break;
    case 4: detail::CDKernel<4, T>::mul(a.c.data(), b.c.data(), out.c.data()); break;
    case 8: detail::CDKernel<8, T>::mul(a.c.data(), b.c.data(), out.c.data()); break;
  }
  return out;
}

template <class T>
CDNumber<T> conj(const CDNumber<T>& a) {
  CDNumber<T> out(a.dim);
  out.c[0] = a.c[0];
  for (int i = 1; i < a.dim; ++i) out.c[i] = -a.c[i];
  return out;
}

template <class T>
T real_part(const CDNumber<T>& a) {
  return a.c[0];
}

template <class T>
T norm_sq(const CDNumber<T>& a) {
  T s = a.c[0] * a.c[0];
  for (int i = 1; i < a.dim; ++i) s = s + a.c[i] * a.c[i];
  return s;
}

template <class T>
CDNumber<T> operator*(const CDNumber<T>& a, const CDNumber<T>& b) {
  return cd_mul(a, b);
}

template <class T>
CDNumber<T> operator+(const CDNumber<T>& a, const CDNumber<T>& b) {
  if (a.dim != b.dim) throw DimensionError("CDNumber +: dimension mismatch");
  CDNumber<T> out(a.dim);
  for (int i = 0; i < a.dim; ++i) out.c[i] = a.c[i] + b.c[i];
  return out;
}

template <class T>
CDNumber<T> operator-(const CDNumber<T>& a, const CDNumber<T>& b) {
  if (a.dim != b.dim) throw DimensionError("CDNumber -: dimension mismatch");
  CDNumber<T> out(a.dim);
  for (int i = 0; i < a.dim; ++i) out.c[i] = a.c[i] - b.c[i];
  return out;
}

template <class T, class S>
CDNumber<T> scale(const CDNumber<T>& a, const S& s) {
  CDNumber<T> out(a.dim);
  for (int i = 0; i < a.dim; ++i) out.c[i] = a.c[i] * s;
  return out;
}

using DivisionScalar = CDNumber<double>;

}  // namespace symcone
