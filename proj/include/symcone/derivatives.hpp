#pragma once

// Mixed directional derivatives of the potential up to order four.
//
// Primary route: multilinear Taylor jets pushed through log det (LDL^T of the
// real embedding for R/C/H, the Freudenthal cubic for O, the Lorentz quadratic
// for spin factors).
// Oracle route, independent of the jets:
//   * R, C, H: trace formulas in X^{-1} on the complex representation;
//   * spin, O: derivatives of the determinant polynomial (closed form for the
//     quadratic, exact difference stencils for the cubic) fed through the
//     set-partition expansion of log.
// A third, approximate route is central finite differences of Phi.

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "symcone/cone.hpp"
#include "symcone/jet.hpp"

namespace symcone {

/// Affine frame: a base point and tangent directions.
struct Chart {
  ConePoint base;
  std::vector<JordanElement> dirs;

  int size() const { return static_cast<int>(dirs.size()); }

  static Chart make(ConePoint base, std::vector<JordanElement> dirs) {
    const int m = static_cast<int>(dirs.size());
    if (m == 0) throw DimensionError("chart needs at least one direction");
    if (m > base.element.alg.dim()) throw DimensionError("chart has more directions than the algebra dimension");
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i) {
      dirs[i].require_same(base.element);
      for (int j = 0; j < m; ++j) G(i, j) = dirs[i].vec().dot(dirs[j].vec());
    }
    if (!(G.determinant() > 1e-12)) throw ConditioningError("chart directions are not linearly independent");
    return Chart{std::move(base), std::move(dirs)};
  }
};

/// Chart with the orthonormal basis as directions.
inline Chart ambient_chart(ConePoint base) {
  auto dirs = basis(base.element.alg);
  return Chart::make(std::move(base), std::move(dirs));
}

/// Value and every mixed partial of Phi along up to four directions.
/// partials[mask] is the derivative along the directions whose bits are set.
struct JetResult {
  int order = 0;
  std::vector<double> partials;

  double value() const { return partials[0]; }
  double partial(unsigned mask) const { return partials.at(mask); }
  double top() const { return partials.back(); }
};

namespace detail {

template <int K>
JetResult jet_eval(const PotentialSpec& spec, const JordanElement& base,
                   const std::vector<const JordanElement*>& dirs) {
  const int n = base.size();
  std::vector<Jet<K>> coords(n);
  for (int i = 0; i < n; ++i) {
    coords[i] = Jet<K>(base.coords[i]);
    for (int a = 0; a < K; ++a) coords[i].c[1u << a] = dirs[a]->coords[i];
  }
  const Jet<K> phi = potential_value<Jet<K>>(spec, coords);
  return JetResult{K, std::vector<double>(phi.c.begin(), phi.c.end())};
}

}  // namespace detail

/// Jet of Phi at base along the given directions (order = dirs.size() <= 4).
inline JetResult potential_jet(const PotentialSpec& spec, const JordanElement& base,
                               const std::vector<const JordanElement*>& dirs) {
  for (const auto* d : dirs) d->require_same(base);
  switch (dirs.size()) {
    case 1: return detail::jet_eval<1>(spec, base, dirs);
    case 2: return detail::jet_eval<2>(spec, base, dirs);
    case 3: return detail::jet_eval<3>(spec, base, dirs);
    case 4: return detail::jet_eval<4>(spec, base, dirs);
    default: throw DimensionError("potential_jet: order must be between 1 and 4");
  }
}

/// Mixed partials along chart directions selected by index (repeats allowed).
inline JetResult directional_jet(const PotentialSpec& spec, const Chart& chart, const std::vector<int>& multi_index,
                                 int order) {
  if (order < 1 || order > 4 || static_cast<int>(multi_index.size()) != order)
    throw DimensionError("directional_jet: need 1..4 direction indices matching the order");
  std::vector<const JordanElement*> dirs;
  for (int i : multi_index) dirs.push_back(&chart.dirs.at(i));
  return potential_jet(spec, chart.base.element, dirs);
}

/// Top mixed partial of Phi along the given directions.
inline double mixed_partial(const PotentialSpec& spec, const JordanElement& base,
                            const std::vector<const JordanElement*>& dirs) {
  return potential_jet(spec, base, dirs).top();
}

// ---------------------------------------------------------------------------
// Oracle route

namespace detail {

/// Derivative of log p along the set `mask` from derivatives dp[sub] of p
/// (dp[0] = p): sum over set partitions pi of (-1)^{|pi|-1} (|pi|-1)! prod dp[B] / p^|pi|.
inline double log_derivative_from_partitions(const std::vector<double>& dp, unsigned mask) {
  double total = 0.0;
  // enumerate partitions by always placing the lowest remaining element
  std::function<void(unsigned, int, double)> rec = [&](unsigned rest, int blocks, double prod) {
    if (rest == 0) {
      double fact = 1.0;
      for (int i = 2; i < blocks; ++i) fact *= i;
      const double sign = (blocks % 2 == 1) ? 1.0 : -1.0;
      total += sign * fact * prod / std::pow(dp[0], blocks);
      return;
    }
    const unsigned low = rest & (~rest + 1);
    const unsigned others = rest ^ low;
    for (unsigned sub = others;; sub = (sub - 1) & others) {
      const unsigned block = sub | low;
      rec(rest ^ block, blocks + 1, prod * dp[block]);
      if (sub == 0) break;
    }
  };
  rec(mask, 0, 1.0);
  return total;
}

inline Eigen::MatrixXcd complex_rep(const SimpleAlgebra& s, std::span<const double> coords) {
  return complex_embedding(realize_matrix<double>(s, coords));
}

/// -k * d^j log det via X^{-1} trace formulas, one matrix summand.
inline double matrix_trace_oracle(const SimpleAlgebra& s, double k, std::span<const double> x,
                                  const std::vector<std::span<const double>>& dirs) {
  const Eigen::MatrixXcd X = complex_rep(s, x);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(X);
  if (!(std::abs(lu.determinant()) > 0.0)) throw ConditioningError("logdet_oracle: singular point");
  std::vector<Eigen::MatrixXcd> M;
  for (const auto& d : dirs) M.push_back(lu.solve(complex_rep(s, d)));
  // the quaternionic complex representation doubles every trace
  const double f = s.d == 4 ? 0.5 : 1.0;
  auto tr = [&](std::initializer_list<int> idx) {
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(X.rows(), X.cols());
    for (int i : idx) P = P * M[i];
    return f * P.trace().real();
  };
  switch (dirs.size()) {
    case 1: return -k * tr({0});
    case 2: return k * tr({0, 1});
    case 3: return -k * (tr({0, 1, 2}) + tr({0, 2, 1}));
    case 4:
      return k * (tr({0, 1, 2, 3}) + tr({0, 1, 3, 2}) + tr({0, 2, 1, 3}) + tr({0, 2, 3, 1}) + tr({0, 3, 1, 2}) +
                  tr({0, 3, 2, 1}));
    default: throw DimensionError("logdet_oracle: order must be 1..4");
  }
}

/// Derivatives of the Lorentz quadratic q(c) = (c0^2 - |cbar|^2) / 2 in
/// orthonormal coordinates: q_a = eta(c, a), q_ab = eta(a, b), higher zero.
inline std::vector<double> spin_poly_derivatives(std::span<const double> x,
                                                 const std::vector<std::span<const double>>& dirs) {
  auto eta = [](std::span<const double> a, std::span<const double> b) {
    double s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
    return s;
  };
  const unsigned full = (1u << dirs.size());
  std::vector<double> dp(full, 0.0);
  dp[0] = 0.5 * eta(x, x);
  for (unsigned mask = 1; mask < full; ++mask) {
    const int bits = std::popcount(mask);
    if (bits == 1) {
      dp[mask] = eta(x, dirs[std::countr_zero(mask)]);
    } else if (bits == 2) {
      const int a = std::countr_zero(mask);
      const int b = std::countr_zero(mask ^ (1u << a));
      dp[mask] = eta(dirs[a], dirs[b]);
    }
  }
  return dp;
}

/// Derivatives of the cubic p(t) = det(x + sum t_a d_a) at t = 0 by difference
/// stencils that are exact for polynomials of degree <= 3.
inline std::vector<double> albert_poly_derivatives(const SimpleAlgebra& s, std::span<const double> x,
                                                   const std::vector<std::span<const double>>& dirs) {
  const int n = static_cast<int>(x.size());
  auto p = [&](std::initializer_list<std::pair<int, double>> steps) {
    std::vector<double> y(x.begin(), x.end());
    for (auto [a, h] : steps)
      for (int i = 0; i < n; ++i) y[i] += h * dirs[a][i];
    return albert_det(realize_matrix<double>(s, std::span<const double>(y)));
  };
  const unsigned full = (1u << dirs.size());
  std::vector<double> dp(full, 0.0);
  dp[0] = p({});
  for (unsigned mask = 1; mask < full; ++mask) {
    std::vector<int> idx;
    for (int a = 0; a < static_cast<int>(dirs.size()); ++a)
      if (mask & (1u << a)) idx.push_back(a);
    switch (idx.size()) {
      case 1: {
        const int a = idx[0];
        dp[mask] = (-p({{a, 2.0}}) + 8.0 * p({{a, 1.0}}) - 8.0 * p({{a, -1.0}}) + p({{a, -2.0}})) / 12.0;
        break;
      }
      case 2: {
        const int a = idx[0], b = idx[1];
        dp[mask] = (p({{a, 1.0}, {b, 1.0}}) - p({{a, 1.0}, {b, -1.0}}) - p({{a, -1.0}, {b, 1.0}}) +
                    p({{a, -1.0}, {b, -1.0}})) /
                   4.0;
        break;
      }
      case 3: {
        double acc = 0.0;
        for (unsigned e = 0; e < 8; ++e) {
          const double sign = (std::popcount(e) % 2 == 1) ? 1.0 : -1.0;  // (-1)^(3 - |e|)
          acc += sign * p({{idx[0], (e & 1) ? 1.0 : 0.0}, {idx[1], (e & 2) ? 1.0 : 0.0},
                           {idx[2], (e & 4) ? 1.0 : 0.0}});
        }
        dp[mask] = acc;
        break;
      }
      default: dp[mask] = 0.0;  // quartic and higher vanish
    }
  }
  return dp;
}

}  // namespace detail

/// Closed-form (or exact-polynomial) derivative of Phi along dirs at x; the
/// order is dirs.size().
inline double logdet_oracle(const PotentialSpec& spec, const JordanElement& x,
                            const std::vector<const JordanElement*>& dirs) {
  if (dirs.empty() || dirs.size() > 4) throw DimensionError("logdet_oracle: order must be 1..4");
  if (!contains(x)) throw ConditioningError("logdet_oracle: point outside the open cone");
  const unsigned full = (1u << dirs.size()) - 1;
  double total = 0.0;
  for (std::size_t p = 0; p < spec.alg.parts().size(); ++p) {
    const auto& s = spec.alg.parts()[p];
    const double k = spec.exponent(p);
    std::vector<std::span<const double>> ds;
    for (const auto* d : dirs) ds.push_back(d->part(p));
    switch (s.family) {
      case Family::SymR:
      case Family::HermC:
      case Family::HermH: total += detail::matrix_trace_oracle(s, k, x.part(p), ds); break;
      case Family::Spin:
        total += -k * detail::log_derivative_from_partitions(detail::spin_poly_derivatives(x.part(p), ds), full);
        break;
      case Family::Albert:
        total += -k * detail::log_derivative_from_partitions(detail::albert_poly_derivatives(s, x.part(p), ds), full);
        break;
      default: throw DimensionError("logdet_oracle: bad family");
    }
  }
  return total;
}

/// Central finite differences of Phi, orders 1 and 2.
inline double finite_difference(const PotentialSpec& spec, const JordanElement& x,
                                const std::vector<const JordanElement*>& dirs, double h = 1e-4) {
  auto phi = [&](double s0, double s1) {
    JordanElement y = x;
    y += s0 * *dirs[0];
    if (dirs.size() > 1) y += s1 * *dirs[1];
    return kv_potential(spec, y);
  };
  if (dirs.size() == 1) return (phi(h, 0) - phi(-h, 0)) / (2 * h);
  if (dirs.size() == 2) return (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / (4 * h * h);
  throw DimensionError("finite_difference: orders 1 and 2 only");
}

// ---------------------------------------------------------------------------
// Tensors in a chart

struct MetricTensor {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inv;
  double cond = 1.0;
  double min_eigenvalue = 0.0;

  int size() const { return static_cast<int>(g.rows()); }

  static MetricTensor from_matrix(const Eigen::MatrixXd& g, double max_cond = 1e12) {
    MetricTensor out;
    out.g = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.g);
    const auto& ev = es.eigenvalues();
    const double lo = ev.cwiseAbs().minCoeff();
    const double hi = ev.cwiseAbs().maxCoeff();
    out.min_eigenvalue = ev.minCoeff();
    if (!(lo > 0.0)) throw ConditioningError("metric is singular");
    out.cond = hi / lo;
    if (out.cond > max_cond) throw ConditioningError("ill-conditioned chart: cond(g) = " + std::to_string(out.cond));
    out.inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return out;
  }
};

/// Dense totally symmetric tensor of order R over m indices.
template <int R>
struct SymTensor {
  int m = 0;
  std::vector<double> v;

  SymTensor() = default;
  explicit SymTensor(int m_) : m(m_), v(static_cast<std::size_t>(std::pow(m_, R)), 0.0) {}

  template <class... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == R);
    return v[flat({static_cast<int>(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == R);
    return v[flat({static_cast<int>(idx)...})];
  }

  std::size_t flat(std::array<int, R> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * m + i;
    return f;
  }

  /// Largest deviation from total symmetry, relative to the largest entry.
  double symmetry_defect() const {
    double worst = 0.0, scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    std::array<int, R> idx{};
    for (std::size_t f = 0; f < v.size(); ++f) {
      std::size_t r = f;
      for (int k = R - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(r % m);
        r /= m;
      }
      auto perm = idx;
      std::sort(perm.begin(), perm.end());
      do {
        worst = std::max(worst, std::abs(v[f] - v[flat(perm)]));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return scale > 0.0 ? worst / scale : worst;
  }
};

using CTensor = SymTensor<3>;
using QTensor = SymTensor<4>;

namespace detail {

/// Evaluates f on every sorted index tuple and fills all permutations.
template <int R, class F>
SymTensor<R> fill_symmetric(int m, F&& f) {
  SymTensor<R> t(m);
  std::array<int, R> idx{};
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == R) {
      const double val = f(idx);
      auto perm = idx;
      do {
        t.v[t.flat(perm)] = val;
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[pos] = i;
      rec(pos + 1, i);
    }
  };
  rec(0, 0);
  return t;
}

template <int R>
SymTensor<R> derivative_tensor(const PotentialSpec& spec, const Chart& chart) {
  return fill_symmetric<R>(chart.size(), [&](const std::array<int, R>& idx) {
    std::vector<const JordanElement*> dirs;
    for (int i : idx) dirs.push_back(&chart.dirs[i]);
    return potential_jet(spec, chart.base.element, dirs).top();
  });
}

}  // namespace detail

inline MetricTensor metric(const PotentialSpec& spec, const Chart& chart) {
  const auto t = detail::derivative_tensor<2>(spec, chart);
  const int m = chart.size();
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = t(i, j);
  return MetricTensor::from_matrix(g);
}

inline CTensor c_tensor(const PotentialSpec& spec, const Chart& chart) {
  return detail::derivative_tensor<3>(spec, chart);
}

inline QTensor q_tensor(const PotentialSpec& spec, const Chart& chart) {
  return detail::derivative_tensor<4>(spec, chart);
}

/// det(g) exp(-2 Phi) in the ambient orthonormal chart; constant on the cone.
inline double monge_ampere_invariant(const PotentialSpec& spec, const ConePoint& x) {
  const auto g = metric(spec, ambient_chart(x));
  return g.g.determinant() * std::exp(-2.0 * kv_potential(spec, x.element));
}

}  // namespace symcone
