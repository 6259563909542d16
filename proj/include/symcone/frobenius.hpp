#pragma once

// Structure constants of the potential-induced product and the residuals of
// the Frobenius axioms: associativity (WDVV), metric compatibility, unit and
// flatness of the connection pencil nabla_0 + lambda Gamma.
//
// Residuals are normalized as |L - R| / (1 + largest compared magnitude).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symcone/derivatives.hpp"

namespace symcone {

/// Gamma^i_jk = sigma * kappa * C_jkl g^li.
struct Convention {
  int sigma = -1;
  double kappa = 0.5;

  double factor() const { return sigma * kappa; }
  void validate() const {
    if (sigma != 1 && sigma != -1) throw ConfigError("convention: sigma must be +1 or -1");
    if (kappa != 1.0 && kappa != 0.5) throw ConfigError("convention: kappa must be 1 or 0.5");
  }
};

struct StructureConstants {
  int m = 0;
  std::vector<double> gamma;  // gamma[(i * m + j) * m + k] = Gamma^i_jk
  Convention convention;

  double operator()(int i, int j, int k) const { return gamma[(static_cast<std::size_t>(i) * m + j) * m + k]; }
  double& operator()(int i, int j, int k) { return gamma[(static_cast<std::size_t>(i) * m + j) * m + k]; }
};

inline void require_shapes(const MetricTensor& g, const CTensor& C) {
  if (g.size() != C.m) throw DimensionError("metric and C tensor sizes differ");
}

inline StructureConstants structure_constants(const MetricTensor& g, const CTensor& C, Convention conv = {}) {
  require_shapes(g, C);
  conv.validate();
  const int m = C.m;
  StructureConstants sc{m, std::vector<double>(static_cast<std::size_t>(m) * m * m, 0.0), conv};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j; k < m; ++k) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += C(j, k, l) * g.inv(l, i);
        sc(i, j, k) = sc(i, k, j) = conv.factor() * s;
      }
  return sc;
}

/// (X o Y)^i = Gamma^i_jk X^j Y^k.
inline Eigen::VectorXd circ(const StructureConstants& sc, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  if (X.size() != sc.m || Y.size() != sc.m) throw DimensionError("circ: vector size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sc.m);
  // paired (j, k) and (k, j) terms keep X o Y = Y o X bitwise
  for (int i = 0; i < sc.m; ++i)
    for (int j = 0; j < sc.m; ++j) {
      out[i] += sc(i, j, j) * (X[j] * Y[j]);
      for (int k = j + 1; k < sc.m; ++k) out[i] += sc(i, j, k) * (X[j] * Y[k] + X[k] * Y[j]);
    }
  return out;
}

namespace detail {

/// P(ab, cd) = C_abe g^ef C_fcd.
inline Eigen::MatrixXd wdvv_contraction(const MetricTensor& g, const CTensor& C) {
  const int m = C.m;
  Eigen::MatrixXd Cm(m * m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int e = 0; e < m; ++e) Cm(a * m + b, e) = C(a, b, e);
  return Cm * g.inv * Cm.transpose();
}

}  // namespace detail

/// max |C_abe g^ef C_fcd - C_bce g^ef C_fad|, normalized.
inline double wdvv_residual(const MetricTensor& g, const CTensor& C) {
  require_shapes(g, C);
  const int m = C.m;
  const Eigen::MatrixXd P = detail::wdvv_contraction(g, C);
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          const double lhs = P(a * m + b, c * m + d);
          const double rhs = P(b * m + c, a * m + d);
          worst = std::max(worst, std::abs(lhs - rhs));
          scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        }
  return worst / (1.0 + scale);
}

/// g(e_a o e_b, e_c) against sigma kappa C_abc and against g(e_a, e_b o e_c).
inline double frobenius_compat_residual(const MetricTensor& g, const StructureConstants& sc, const CTensor& C) {
  require_shapes(g, C);
  if (sc.m != C.m) throw DimensionError("structure constants size mismatch");
  const int m = C.m;
  // G(a, b, c) = g(e_a o e_b, e_c)
  std::vector<double> G(static_cast<std::size_t>(m) * m * m, 0.0);
  auto at = [m](int a, int b, int c) { return (static_cast<std::size_t>(a) * m + b) * m + c; };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += sc(i, a, b) * g.g(i, c);
        G[at(a, b, c)] = s;
      }
  const double f = sc.convention.factor();
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const double lhs = G[at(a, b, c)];
        const double rhs = G[at(b, c, a)];  // g(e_a, e_b o e_c)
        const double target = f * C(a, b, c);
        worst = std::max({worst, std::abs(lhs - target), std::abs(lhs - rhs)});
        scale = std::max({scale, std::abs(lhs), std::abs(rhs), std::abs(target)});
      }
  return worst / (1.0 + scale);
}

/// max |e^i C_iab - g_ab|, normalized.
inline double unit_residual(const MetricTensor& g, const CTensor& C, const Eigen::VectorXd& e) {
  require_shapes(g, C);
  const int m = C.m;
  if (e.size() != m) throw DimensionError("unit_residual: field size mismatch");
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += e[i] * C(i, a, b);
      worst = std::max(worst, std::abs(s - g.g(a, b)));
      scale = std::max({scale, std::abs(s), std::abs(g.g(a, b))});
    }
  return worst / (1.0 + scale);
}

struct UnitSolution {
  Eigen::VectorXd e;
  double residual = 0.0;
};

/// Least-squares solution of e^i C_iab = g_ab.
inline UnitSolution solve_unit(const MetricTensor& g, const CTensor& C) {
  require_shapes(g, C);
  const int m = C.m;
  Eigen::MatrixXd A(m * m, m);
  Eigen::VectorXd rhs(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < m; ++i) A(a * m + b, i) = C(i, a, b);
      rhs[a * m + b] = g.g(a, b);
    }
  UnitSolution out;
  out.e = A.completeOrthogonalDecomposition().solve(rhs);
  out.residual = unit_residual(g, C, out.e);
  return out;
}

// ---------------------------------------------------------------------------
// Pencil nabla_lambda = nabla_0 + lambda Gamma in the affine chart

struct PencilTerms {
  int m = 0;
  std::vector<double> linear;     // d_k Gamma^i_lj - d_l Gamma^i_kj
  std::vector<double> quadratic;  // Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj

  std::size_t at(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * m + j) * m + k) * m + l;
  }
};

inline PencilTerms pencil_terms(const MetricTensor& g, const CTensor& C, const QTensor& Q, Convention conv = {}) {
  require_shapes(g, C);
  if (Q.m != C.m) throw DimensionError("Q tensor size mismatch");
  const int m = C.m;
  const auto sc = structure_constants(g, C, conv);
  const double f = conv.factor();
  // d_p g^{li} = -g^{la} C_abp g^{bi}
  std::vector<Eigen::MatrixXd> dginv(m);
  for (int p = 0; p < m; ++p) {
    Eigen::MatrixXd Cp(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) Cp(a, b) = C(a, b, p);
    dginv[p] = -g.inv * Cp * g.inv;
  }
  // dGamma[p](i, j, k) = d_p Gamma^i_jk
  auto dgamma = [&](int p, int i, int j, int k) {
    double s = 0.0;
    for (int l = 0; l < m; ++l) s += Q(j, k, l, p) * g.inv(l, i) + C(j, k, l) * dginv[p](l, i);
    return f * s;
  };
  PencilTerms t{m, std::vector<double>(static_cast<std::size_t>(m) * m * m * m, 0.0),
                std::vector<double>(static_cast<std::size_t>(m) * m * m * m, 0.0)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          t.linear[t.at(i, j, k, l)] = dgamma(k, i, l, j) - dgamma(l, i, k, j);
          double q = 0.0;
          for (int n = 0; n < m; ++n) q += sc(i, k, n) * sc(n, l, j) - sc(i, l, n) * sc(n, k, j);
          t.quadratic[t.at(i, j, k, l)] = q;
        }
  return t;
}

/// max |R(lambda)^i_jkl|, normalized by 1 + the largest term magnitude.
inline double pencil_curvature_residual(const PencilTerms& t, double lambda) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < t.linear.size(); ++n) {
    const double a = lambda * t.linear[n];
    const double b = lambda * lambda * t.quadratic[n];
    worst = std::max(worst, std::abs(a + b));
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  return worst / (1.0 + scale);
}

inline double pencil_curvature_residual(const PotentialSpec& spec, const Chart& chart, double lambda,
                                        Convention conv = {}) {
  const auto g = metric(spec, chart);
  return pencil_curvature_residual(pencil_terms(g, c_tensor(spec, chart), q_tensor(spec, chart), conv), lambda);
}

/// Coefficients of R(lambda) = r0 + r1 lambda + r2 lambda^2 recovered from
/// evaluations at lambda = 1, 2, 3; each is the normalized max over indices.
struct PencilCoefficients {
  double constant = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;
};

inline PencilCoefficients pencil_coefficients(const PencilTerms& t) {
  Eigen::Matrix3d V;
  V << 1, 1, 1, 1, 2, 4, 1, 3, 9;
  const Eigen::Matrix3d Vinv = V.inverse();
  PencilCoefficients out;
  double scale = 0.0;
  for (std::size_t n = 0; n < t.linear.size(); ++n) {
    Eigen::Vector3d r;
    for (int s = 0; s < 3; ++s) {
      const double lam = s + 1.0;
      r[s] = lam * t.linear[n] + lam * lam * t.quadratic[n];
    }
    const Eigen::Vector3d c = Vinv * r;
    out.constant = std::max(out.constant, std::abs(c[0]));
    out.linear = std::max(out.linear, std::abs(c[1]));
    out.quadratic = std::max(out.quadratic, std::abs(c[2]));
    scale = std::max({scale, std::abs(t.linear[n]), std::abs(t.quadratic[n])});
  }
  out.constant /= 1.0 + scale;
  out.linear /= 1.0 + scale;
  out.quadratic /= 1.0 + scale;
  return out;
}

/// Point-free check <x o y, z> = <x, y o z> over random triples, normalized.
template <class Rng>
double trace_assoc_residual(const JordanAlgebra& J, int samples, Rng& rng) {
  if (samples < 1) throw DomainError("trace_assoc_residual: samples must be >= 1");
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = random_element(J, rng);
    const auto y = random_element(J, rng);
    const auto z = random_element(J, rng);
    const double lhs = trace_form(jordan_product(x, y), z);
    const double rhs = trace_form(x, jordan_product(y, z));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs))));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reports

struct ResidualReport {
  std::string check;
  std::string family;
  std::string chart_kind;  // "ambient", "flat" or "none"
  int samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;
  bool lower_bound = false;  // pass means max_residual > tolerance
  std::string note;
  std::string error;
  double seconds = 0.0;
};

/// Accumulates sample residuals into a report.
class ResidualAccumulator {
 public:
  void add(double r) {
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    max_ = std::max(max_, r);
    sum_ += r;
    ++n_;
  }
  int count() const { return n_; }

  ResidualReport finish(ResidualReport base) const {
    base.samples = n_;
    base.max_residual = n_ ? max_ : 0.0;
    base.mean_residual = n_ ? std::min(sum_ / n_, max_) : 0.0;
    const bool ok = base.lower_bound ? base.max_residual > base.tolerance : base.max_residual < base.tolerance;
    base.pass = n_ > 0 && base.error.empty() && ok;
    return base;
  }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;
  int n_ = 0;
};

}  // namespace symcone
