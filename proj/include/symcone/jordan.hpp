#pragma once

// Euclidean Jordan algebras: Sym(n,R), Herm(n,C), Herm(n,H), Herm(3,O), the
// spin factors R x R^{n-1}, and finite direct sums of these.
//
// Elements are coordinate vectors in a basis that is orthonormal for the
// trace form <x, y> = Re Tr(x o y). For the matrix families the basis is
//   E_ii                               (diagonal units),
//   (E_ij u + E_ji conj(u)) / sqrt(2)  (i < j, u a unit of the scalar algebra),
// ordered diagonal first, then pairs (i, j) row-major with the d units of the
// scalar algebra innermost. For the spin factor the basis is e_i / sqrt(2) in
// the natural (t, xbar) coordinates, because the trace form there is
// 2 (t s + xbar . ybar).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symcone/division_algebra.hpp"
#include "symcone/errors.hpp"
#include "symcone/jet.hpp"

namespace symcone {

enum class Family { SymR, HermC, HermH, Albert, Spin, DirectSum };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::SymR: return "SymR";
    case Family::HermC: return "HermC";
    case Family::HermH: return "HermH";
    case Family::Albert: return "Albert";
    case Family::Spin: return "Spin";
    case Family::DirectSum: return "DirectSum";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "SymR") return Family::SymR;
  if (s == "HermC") return Family::HermC;
  if (s == "HermH") return Family::HermH;
  if (s == "Albert") return Family::Albert;
  if (s == "Spin") return Family::Spin;
  throw ConfigError("unknown family '" + s + "'");
}

/// One irreducible summand.
struct SimpleAlgebra {
  Family family = Family::SymR;
  int n = 1;  // matrix size, or ambient dimension for Spin
  int N = 1;  // real dimension
  int r = 1;  // rank
  int d = 1;  // scalar dimension for matrix families, 0 for Spin

  bool is_matrix() const { return family != Family::Spin; }
  int num_pairs() const { return n * (n - 1) / 2; }
  int pair_index(int i, int j) const {
    // row-major index of (i, j), i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }
  std::string name() const {
    if (family == Family::Albert) return "Albert";
    return family_name(family) + "(" + std::to_string(n) + ")";
  }
  bool operator==(const SimpleAlgebra& o) const { return family == o.family && n == o.n; }
};

inline SimpleAlgebra make_simple(Family family, int n) {
  SimpleAlgebra s;
  s.family = family;
  s.n = n;
  switch (family) {
    case Family::SymR:
    case Family::HermC:
    case Family::HermH:
      if (n < 1) throw DimensionError("matrix family requires n >= 1");
      s.d = family == Family::SymR ? 1 : family == Family::HermC ? 2 : 4;
      s.N = n + s.d * n * (n - 1) / 2;
      s.r = n;
      break;
    case Family::Albert:
      if (n != 3)
        throw UnsupportedError("Albert algebra exists only for 3x3 octonionic matrices, got n = " +
                               std::to_string(n));
      s.d = 8;
      s.N = 27;
      s.r = 3;
      break;
    case Family::Spin:
      if (n < 2) throw DimensionError("spin factor requires n >= 2");
      s.d = 0;
      s.N = n;
      s.r = 2;
      break;
    case Family::DirectSum:
      throw DimensionError("use direct_sum() to build a DirectSum algebra");
  }
  return s;
}

class JordanAlgebra {
 public:
  JordanAlgebra() = default;

  static JordanAlgebra make(Family family, int n) {
    JordanAlgebra a;
    a.push(make_simple(family, n));
    return a;
  }

  static JordanAlgebra sum(const JordanAlgebra& a, const JordanAlgebra& b) {
    JordanAlgebra out = a;
    for (const auto& p : b.parts_) out.push(p);
    return out;
  }

  Family family() const { return parts_.size() == 1 ? parts_[0].family : Family::DirectSum; }
  /// Matrix size or Lorentz dimension of an irreducible algebra; 0 for sums.
  int n() const { return parts_.size() == 1 ? parts_[0].n : 0; }
  int dim() const { return dim_; }
  int rank() const { return rank_; }
  bool is_simple() const { return parts_.size() == 1; }
  const std::vector<SimpleAlgebra>& parts() const { return parts_; }
  int offset(std::size_t part) const { return offsets_[part]; }
  JordanAlgebra part_algebra(std::size_t i) const { return make(parts_[i].family, parts_[i].n); }

  std::string name() const {
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += "+";
      s += parts_[i].name();
    }
    return s;
  }

  bool operator==(const JordanAlgebra& o) const { return parts_ == o.parts_; }

 private:
  void push(const SimpleAlgebra& s) {
    offsets_.push_back(dim_);
    parts_.push_back(s);
    dim_ += s.N;
    rank_ += s.r;
  }

  std::vector<SimpleAlgebra> parts_;
  std::vector<int> offsets_;
  int dim_ = 0;
  int rank_ = 0;
};

inline JordanAlgebra make_algebra(Family family, int n) { return JordanAlgebra::make(family, n); }
inline JordanAlgebra direct_sum(const JordanAlgebra& a, const JordanAlgebra& b) {
  return JordanAlgebra::sum(a, b);
}

struct JordanElement {
  JordanAlgebra alg;
  std::vector<double> coords;

  JordanElement() = default;
  explicit JordanElement(JordanAlgebra a) : alg(std::move(a)), coords(alg.dim(), 0.0) {}
  JordanElement(JordanAlgebra a, std::vector<double> c) : alg(std::move(a)), coords(std::move(c)) {
    if (static_cast<int>(coords.size()) != alg.dim())
      throw DimensionError("JordanElement: expected " + std::to_string(alg.dim()) +
                           " coordinates, got " + std::to_string(coords.size()));
  }

  int size() const { return static_cast<int>(coords.size()); }
  std::span<const double> part(std::size_t i) const {
    return std::span<const double>(coords).subspan(alg.offset(i), alg.parts()[i].N);
  }
  std::span<double> part(std::size_t i) {
    return std::span<double>(coords).subspan(alg.offset(i), alg.parts()[i].N);
  }

  Eigen::Map<const Eigen::VectorXd> vec() const { return {coords.data(), size()}; }

  JordanElement& operator+=(const JordanElement& o) {
    require_same(o);
    for (int i = 0; i < size(); ++i) coords[i] += o.coords[i];
    return *this;
  }
  JordanElement& operator-=(const JordanElement& o) {
    require_same(o);
    for (int i = 0; i < size(); ++i) coords[i] -= o.coords[i];
    return *this;
  }
  JordanElement& operator*=(double s) {
    for (auto& v : coords) v *= s;
    return *this;
  }

  void require_same(const JordanElement& o) const {
    if (!(alg == o.alg)) throw DimensionError("algebra mismatch: " + alg.name() + " vs " + o.alg.name());
  }
};

inline JordanElement operator+(JordanElement a, const JordanElement& b) { return a += b; }
inline JordanElement operator-(JordanElement a, const JordanElement& b) { return a -= b; }
inline JordanElement operator*(double s, JordanElement a) { return a *= s; }
inline JordanElement operator*(JordanElement a, double s) { return a *= s; }

/// Euclidean norm of the coordinates, i.e. the trace-form norm.
inline double coord_norm(const JordanElement& x) { return x.vec().norm(); }

// ---------------------------------------------------------------------------
// Realizations

/// Dense n x n matrix with entries in a Cayley-Dickson algebra.
template <class T>
struct KMatrix {
  int n = 0;
  int d = 1;
  std::vector<CDNumber<T>> e;

  KMatrix() = default;
  KMatrix(int n_, int d_) : n(n_), d(d_), e(static_cast<std::size_t>(n_) * n_, CDNumber<T>(d_)) {}

  CDNumber<T>& operator()(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
  const CDNumber<T>& operator()(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }
};

template <class T>
KMatrix<T> matmul(const KMatrix<T>& a, const KMatrix<T>& b) {
  if (a.n != b.n || a.d != b.d) throw DimensionError("matmul: shape mismatch");
  KMatrix<T> out(a.n, a.d);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      CDNumber<T> acc(a.d);
      for (int k = 0; k < a.n; ++k) acc = acc + cd_mul(a(i, k), b(k, j));
      out(i, j) = acc;
    }
  return out;
}

template <class T>
KMatrix<T> operator+(const KMatrix<T>& a, const KMatrix<T>& b) {
  KMatrix<T> out(a.n, a.d);
  for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.e[i] + b.e[i];
  return out;
}

template <class T>
KMatrix<T> operator-(const KMatrix<T>& a, const KMatrix<T>& b) {
  KMatrix<T> out(a.n, a.d);
  for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.e[i] - b.e[i];
  return out;
}

/// Conjugate transpose.
template <class T>
KMatrix<T> adjoint(const KMatrix<T>& a) {
  KMatrix<T> out(a.n, a.d);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) out(i, j) = conj(a(j, i));
  return out;
}

template <class T>
T real_trace(const KMatrix<T>& a) {
  T s = a(0, 0).c[0];
  for (int i = 1; i < a.n; ++i) s = s + a(i, i).c[0];
  return s;
}

/// Self-adjoint matrix of a matrix-family summand from its coordinates.
template <class T>
KMatrix<T> realize_matrix(const SimpleAlgebra& s, std::span<const T> coords) {
  if (!s.is_matrix()) throw DimensionError("realize_matrix: not a matrix family");
  KMatrix<T> x(s.n, s.d);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < s.n; ++i) x(i, i).c[0] = coords[i];
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j) {
      const int base = s.n + s.pair_index(i, j) * s.d;
      CDNumber<T> q(s.d);
      for (int u = 0; u < s.d; ++u) q.c[u] = coords[base + u] * inv_sqrt2;
      x(j, i) = conj(q);
      x(i, j) = q;
    }
  return x;
}

/// Coordinates of the self-adjoint part of a square matrix.
inline void matrix_to_coords(const SimpleAlgebra& s, const KMatrix<double>& x, std::span<double> out) {
  for (int i = 0; i < s.n; ++i) out[i] = x(i, i).c[0];
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j) {
      const int base = s.n + s.pair_index(i, j) * s.d;
      const DivisionScalar q = scale(x(i, j) + conj(x(j, i)), 0.5);
      for (int u = 0; u < s.d; ++u) out[base + u] = std::numbers::sqrt2 * q.c[u];
    }
}

/// Natural (t, xbar) coordinates of a spin-factor summand.
template <class T>
std::vector<T> spin_natural(std::span<const T> coords) {
  std::vector<T> v(coords.begin(), coords.end());
  for (auto& c : v) c = c * (1.0 / std::numbers::sqrt2);
  return v;
}

inline KMatrix<double> to_matrix(const JordanElement& x, std::size_t part = 0) {
  return realize_matrix<double>(x.alg.parts()[part], x.part(part));
}

/// Element of an irreducible matrix-family algebra from a self-adjoint matrix.
inline JordanElement from_matrix(const JordanAlgebra& J, const KMatrix<double>& m) {
  if (!J.is_simple() || !J.parts()[0].is_matrix()) throw DimensionError("from_matrix: not a matrix family");
  const auto& s = J.parts()[0];
  if (m.n != s.n || m.d != s.d) throw DimensionError("from_matrix: shape mismatch");
  JordanElement x(J);
  matrix_to_coords(s, m, x.coords);
  return x;
}

/// Element of an irreducible matrix-family algebra from a real symmetric matrix.
inline JordanElement from_real_matrix(const JordanAlgebra& J, const Eigen::MatrixXd& m) {
  const auto& s = J.parts().at(0);
  KMatrix<double> k(s.n, s.d);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) k(i, j).c[0] = m(i, j);
  return from_matrix(J, k);
}

/// Element of a spin factor from natural coordinates (t, xbar).
inline JordanElement from_spin(const JordanAlgebra& J, double t, const std::vector<double>& xbar) {
  if (J.family() != Family::Spin || static_cast<int>(xbar.size()) + 1 != J.n())
    throw DimensionError("from_spin: expected Spin(" + std::to_string(xbar.size() + 1) + ")");
  JordanElement x(J);
  x.coords[0] = std::numbers::sqrt2 * t;
  for (std::size_t i = 0; i < xbar.size(); ++i) x.coords[i + 1] = std::numbers::sqrt2 * xbar[i];
  return x;
}

/// Places a summand's element into a direct sum.
inline JordanElement embed_part(const JordanAlgebra& J, std::size_t part, const JordanElement& x) {
  if (!(x.alg == J.part_algebra(part))) throw DimensionError("embed_part: summand mismatch");
  JordanElement out(J);
  std::copy(x.coords.begin(), x.coords.end(), out.coords.begin() + J.offset(part));
  return out;
}

inline JordanElement extract_part(const JordanElement& x, std::size_t part) {
  auto p = x.part(part);
  return JordanElement(x.alg.part_algebra(part), std::vector<double>(p.begin(), p.end()));
}

// ---------------------------------------------------------------------------
// Product, trace form, identity

namespace detail {

inline void simple_product(const SimpleAlgebra& s, std::span<const double> x, std::span<const double> y,
                           std::span<double> out) {
  if (s.family == Family::Spin) {
    auto a = spin_natural(x);
    auto b = spin_natural(y);
    double dot = 0.0;
    for (int i = 1; i < s.n; ++i) dot += a[i] * b[i];
    out[0] = std::numbers::sqrt2 * (a[0] * b[0] + dot);
    for (int i = 1; i < s.n; ++i) out[i] = std::numbers::sqrt2 * (a[0] * b[i] + b[0] * a[i]);
    return;
  }
  const auto X = realize_matrix<double>(s, x);
  const auto Y = realize_matrix<double>(s, y);
  auto P = matmul(X, Y) + matmul(Y, X);
  for (auto& v : P.e) v = scale(v, 0.5);
  matrix_to_coords(s, P, out);
}

inline double simple_trace_form(const SimpleAlgebra& s, std::span<const double> x, std::span<const double> y) {
  if (s.family == Family::Spin) {
    auto a = spin_natural(x);
    auto b = spin_natural(y);
    double acc = a[0] * b[0];
    for (int i = 1; i < s.n; ++i) acc += a[i] * b[i];
    return 2.0 * acc;
  }
  const auto X = realize_matrix<double>(s, x);
  const auto Y = realize_matrix<double>(s, y);
  double acc = 0.0;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) acc += real_part(cd_mul(X(i, j), Y(j, i)));
  return acc;
}

}  // namespace detail

inline JordanElement jordan_product(const JordanElement& x, const JordanElement& y) {
  x.require_same(y);
  JordanElement out(x.alg);
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p)
    detail::simple_product(x.alg.parts()[p], x.part(p), y.part(p), out.part(p));
  return out;
}

inline double trace_form(const JordanElement& x, const JordanElement& y) {
  x.require_same(y);
  double acc = 0.0;
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p)
    acc += detail::simple_trace_form(x.alg.parts()[p], x.part(p), y.part(p));
  return acc;
}

inline JordanElement identity(const JordanAlgebra& J) {
  JordanElement e(J);
  for (std::size_t p = 0; p < J.parts().size(); ++p) {
    const auto& s = J.parts()[p];
    auto c = e.part(p);
    if (s.family == Family::Spin)
      c[0] = std::numbers::sqrt2;
    else
      for (int i = 0; i < s.n; ++i) c[i] = 1.0;
  }
  return e;
}

/// x^m with x^(m+1) = x o x^m.
inline JordanElement power(const JordanElement& x, int m) {
  if (m < 0) throw DimensionError("power: exponent must be >= 0");
  if (m == 0) return identity(x.alg);
  JordanElement out = x;
  for (int i = 1; i < m; ++i) out = jordan_product(x, out);
  return out;
}

/// Orthonormal basis as coordinate unit vectors.
inline std::vector<JordanElement> basis(const JordanAlgebra& J) {
  std::vector<JordanElement> b;
  b.reserve(J.dim());
  for (int i = 0; i < J.dim(); ++i) {
    JordanElement e(J);
    e.coords[i] = 1.0;
    b.push_back(std::move(e));
  }
  return b;
}

template <class Rng>
JordanElement random_element(const JordanAlgebra& J, Rng& rng, double sigma = 1.0) {
  std::normal_distribution<double> nd(0.0, sigma);
  JordanElement x(J);
  for (auto& c : x.coords) c = nd(rng);
  return x;
}

/// exp(x) = sum x^m / m!, by scaling and squaring.
inline JordanElement jordan_exp(const JordanElement& x) {
  const double norm = coord_norm(x);
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const JordanElement y = std::ldexp(1.0, -squarings) * x;
  JordanElement sum = identity(x.alg);
  JordanElement term = identity(x.alg);
  for (int m = 1; m <= 18; ++m) {
    term = (1.0 / m) * jordan_product(y, term);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = jordan_product(sum, sum);
  return sum;
}

// ---------------------------------------------------------------------------
// Embeddings used for spectra and determinants

namespace detail {

/// Left-multiplication matrices L(e_m) of the basis units of an associative
/// scalar algebra (d <= 4): L(e_m)(r, k) = coefficient r of e_m e_k.
inline const std::vector<Eigen::MatrixXd>& left_mult_table(int d) {
  static const auto tables = [] {
    std::array<std::vector<Eigen::MatrixXd>, 5> t;
    for (int dd : {1, 2, 4}) {
      for (int m = 0; m < dd; ++m) {
        Eigen::MatrixXd L(dd, dd);
        for (int k = 0; k < dd; ++k) {
          auto prod = cd_mul(DivisionScalar::unit(dd, m), DivisionScalar::unit(dd, k));
          for (int r = 0; r < dd; ++r) L(r, k) = prod.c[r];
        }
        t[dd].push_back(L);
      }
    }
    return t;
  }();
  if (d != 1 && d != 2 && d != 4) throw UnsupportedError("left-multiplication embedding needs an associative scalar algebra");
  return tables[d];
}

}  // namespace detail

/// Real (n d) x (n d) symmetric matrix representing a self-adjoint matrix over
/// R, C or H by left multiplication. Each eigenvalue of the original appears
/// with multiplicity d, so its determinant is det^d.
template <class S>
std::vector<S> real_embedding(const SimpleAlgebra& s, std::span<const S> coords) {
  const auto X = realize_matrix<S>(s, coords);
  const auto& L = detail::left_mult_table(s.d);
  const int m = s.n * s.d;
  std::vector<S> out(static_cast<std::size_t>(m) * m, S(0.0));
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int u = 0; u < s.d; ++u) {
        const S& coef = X(i, j).c[u];
        if (is_zero(coef)) continue;
        for (int r = 0; r < s.d; ++r)
          for (int k = 0; k < s.d; ++k) {
            const double l = L[u](r, k);
            if (l != 0.0) out[static_cast<std::size_t>(i * s.d + r) * m + (j * s.d + k)] += coef * l;
          }
      }
  return out;
}

inline Eigen::MatrixXd real_embedding_matrix(const SimpleAlgebra& s, std::span<const double> coords) {
  auto v = real_embedding<double>(s, coords);
  const int m = s.n * s.d;
  Eigen::MatrixXd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = v[static_cast<std::size_t>(i) * m + j];
  return M;
}

/// Complex representation of a matrix over R, C (n x n) or H (2n x 2n, each
/// quaternion x + y j with complex halves x, y mapped to [[x, -y], [conj y, conj x]]).
inline Eigen::MatrixXcd complex_embedding(const KMatrix<double>& X) {
  using C = std::complex<double>;
  if (X.d <= 2) {
    Eigen::MatrixXcd M(X.n, X.n);
    for (int i = 0; i < X.n; ++i)
      for (int j = 0; j < X.n; ++j) M(i, j) = C(X(i, j).c[0], X.d == 2 ? X(i, j).c[1] : 0.0);
    return M;
  }
  if (X.d != 4) throw UnsupportedError("complex_embedding: octonions have no matrix representation");
  Eigen::MatrixXcd M(2 * X.n, 2 * X.n);
  for (int i = 0; i < X.n; ++i)
    for (int j = 0; j < X.n; ++j) {
      const auto& q = X(i, j);
      const C x(q.c[0], q.c[1]);
      const C y(q.c[2], q.c[3]);
      M(2 * i, 2 * j) = x;
      M(2 * i, 2 * j + 1) = -y;
      M(2 * i + 1, 2 * j) = std::conj(y);
      M(2 * i + 1, 2 * j + 1) = std::conj(x);
    }
  return M;
}

// ---------------------------------------------------------------------------
// Albert algebra cubic invariants. Layout X = [[a, x12, x13], [.., b, x23], [.., .., c]].

template <class S>
S albert_det(const KMatrix<S>& X) {
  const S& a = X(0, 0).c[0];
  const S& b = X(1, 1).c[0];
  const S& c = X(2, 2).c[0];
  const auto& x12 = X(0, 1);
  const auto& x13 = X(0, 2);
  const auto& x23 = X(1, 2);
  const auto x31 = conj(x13);
  const S cubic = real_part(cd_mul(x12, cd_mul(x23, x31)));
  return a * b * c - a * norm_sq(x23) - b * norm_sq(x13) - c * norm_sq(x12) + cubic * 2.0;
}

/// Second elementary invariant: sum of principal 2x2 minors.
inline double albert_minor_sum(const KMatrix<double>& X) {
  const double a = X(0, 0).c[0], b = X(1, 1).c[0], c = X(2, 2).c[0];
  return a * b + b * c + c * a - norm_sq(X(0, 1)) - norm_sq(X(0, 2)) - norm_sq(X(1, 2));
}

/// Eigenvalues (ascending) as the real roots of t^3 - T t^2 + S t - N.
inline std::array<double, 3> albert_eigenvalues(const KMatrix<double>& X) {
  const double T = X(0, 0).c[0] + X(1, 1).c[0] + X(2, 2).c[0];
  const double S = albert_minor_sum(X);
  const double N = albert_det(X);
  // depressed cubic in u = t - T/3: u^3 + p u + q
  const double p = S - T * T / 3.0;
  const double q = -2.0 * T * T * T / 27.0 + T * S / 3.0 - N;
  std::array<double, 3> roots{};
  if (p >= 0.0) {
    roots.fill(T / 3.0);  // triple root; p > 0 cannot occur for real-rooted cubics
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots[k] = T / 3.0 + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Determinant

inline double simple_determinant(const SimpleAlgebra& s, std::span<const double> coords) {
  switch (s.family) {
    case Family::Spin: {
      auto v = spin_natural(coords);
      double q = v[0] * v[0];
      for (int i = 1; i < s.n; ++i) q -= v[i] * v[i];
      return q;
    }
    case Family::Albert: return albert_det(realize_matrix<double>(s, coords));
    case Family::SymR: {
      const auto X = realize_matrix<double>(s, coords);
      Eigen::MatrixXd M(s.n, s.n);
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) M(i, j) = X(i, j).c[0];
      return M.determinant();
    }
    case Family::HermC: return complex_embedding(realize_matrix<double>(s, coords)).determinant().real();
    case Family::HermH: {
      // Eigenvalues of the complex embedding come in equal pairs; the
      // determinant is the product of one from each pair.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(complex_embedding(realize_matrix<double>(s, coords)),
                                                         Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      double det = 1.0;
      for (int i = 0; i < ev.size(); i += 2) det *= 0.5 * (ev[i] + ev[i + 1]);
      return det;
    }
    case Family::DirectSum: break;
  }
  throw DimensionError("simple_determinant: bad family");
}

inline double determinant(const JordanElement& x) {
  double det = 1.0;
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p) det *= simple_determinant(x.alg.parts()[p], x.part(p));
  return det;
}

/// Ascending spectrum of one summand (each eigenvalue listed once per Jordan-frame slot).
inline std::vector<double> simple_eigenvalues(const SimpleAlgebra& s, std::span<const double> coords) {
  switch (s.family) {
    case Family::Spin: {
      auto v = spin_natural(coords);
      double r2 = 0.0;
      for (int i = 1; i < s.n; ++i) r2 += v[i] * v[i];
      const double r = std::sqrt(r2);
      return {v[0] - r, v[0] + r};
    }
    case Family::Albert: {
      auto ev = albert_eigenvalues(realize_matrix<double>(s, coords));
      return {ev.begin(), ev.end()};
    }
    default: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_embedding_matrix(s, coords), Eigen::EigenvaluesOnly);
      std::vector<double> out;
      for (int i = 0; i < es.eigenvalues().size(); i += s.d) out.push_back(es.eigenvalues()[i]);
      return out;
    }
  }
}

inline std::vector<double> eigenvalues(const JordanElement& x) {
  std::vector<double> out;
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p) {
    auto ev = simple_eigenvalues(x.alg.parts()[p], x.part(p));
    out.insert(out.end(), ev.begin(), ev.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// log det over a generic scalar (double or Jet), defined on the open cone.

namespace detail {

/// log det of a symmetric positive definite matrix by LDL^T without pivoting.
template <class S>
S log_det_spd(std::vector<S> a, int m) {
  std::vector<S> dinv(m);
  S acc(0.0);
  for (int j = 0; j < m; ++j) {
    // column j of L (stored in the lower triangle of a) times D
    for (int k = 0; k < j; ++k) {
      const S ljk_d = a[static_cast<std::size_t>(j) * m + k];  // L_jk D_k
      const S ljk = ljk_d * dinv[k];
      for (int i = j; i < m; ++i) a[static_cast<std::size_t>(i) * m + j] -= a[static_cast<std::size_t>(i) * m + k] * ljk;
    }
    const S& djj = a[static_cast<std::size_t>(j) * m + j];
    if (!(jet_value(djj) > 0.0)) throw ConditioningError("log det: matrix is not positive definite along the jet");
    if constexpr (std::is_same_v<S, double>) {
      dinv[j] = 1.0 / djj;
      acc += std::log(djj);
    } else {
      dinv[j] = reciprocal(djj);
      acc += log(djj);
    }
  }
  return acc;
}

template <class S>
S log_positive(const S& v, const char* what) {
  if (!(jet_value(v) > 0.0)) throw ConditioningError(std::string(what) + ": determinant is not positive");
  if constexpr (std::is_same_v<S, double>)
    return std::log(v);
  else
    return log(v);
}

}  // namespace detail

/// log det of one summand at an interior point.
template <class S>
S simple_log_det(const SimpleAlgebra& s, std::span<const S> coords) {
  switch (s.family) {
    case Family::Spin: {
      S q = coords[0] * coords[0];
      for (int i = 1; i < s.n; ++i) q -= coords[i] * coords[i];
      if (!(jet_value(coords[0]) > 0.0)) throw ConditioningError("spin log det: t <= 0");
      return detail::log_positive(q * 0.5, "spin log det");
    }
    case Family::Albert:
      return detail::log_positive(albert_det(realize_matrix<S>(s, coords)), "Albert log det");
    default: {
      S ld = detail::log_det_spd(real_embedding<S>(s, coords), s.n * s.d);
      return ld * (1.0 / s.d);
    }
  }
}

}  // namespace symcone
