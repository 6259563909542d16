#pragma once

// Maximal flats through the identity, Lie brackets in the ambient matrix
// model, curvature of the symmetric space and Weyl chambers.
//
// Every flat here is spanned by a Jordan frame {c_j} (orthogonal primitive
// idempotents summing to e). The abelian Lie-triple basis a_a is stored with
// its frame coefficients, a_a = sum_j A(a, j) c_j, so that
//   exp(sum_a t_a a_a) = sum_j exp((A^T t)_j) c_j
// holds in closed form.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symcone/derivatives.hpp"

namespace symcone {

struct FlatDescriptor {
  JordanAlgebra alg;
  std::vector<JordanElement> abasis;  // spans the abelian subspace
  std::vector<JordanElement> frame;   // Jordan frame; directions of the flat chart
  Eigen::MatrixXd coeffs;             // abasis[a] = sum_j coeffs(a, j) frame[j]
  std::string note;

  int dim() const { return static_cast<int>(abasis.size()); }
};

namespace detail {

inline FlatDescriptor simple_flat(const JordanAlgebra& J) {
  const auto& s = J.parts()[0];
  FlatDescriptor F{J, {}, {}, {}, {}};
  if (s.family == Family::Spin) {
    std::vector<double> xbar(s.n - 1, 0.0);
    xbar[0] = 0.5;
    F.frame.push_back(from_spin(J, 0.5, xbar));
    xbar[0] = -0.5;
    F.frame.push_back(from_spin(J, 0.5, xbar));
    xbar[0] = 0.0;
    F.abasis.push_back(from_spin(J, 1.0, xbar));
    xbar[0] = 1.0;
    F.abasis.push_back(from_spin(J, 0.0, xbar));
    F.coeffs.resize(2, 2);
    F.coeffs << 1, 1, 1, -1;
    F.note = "Lorentz 2-flat: identity ray and the x1 boost; light-cone chart";
    return F;
  }
  for (int a = 0; a < s.n; ++a) {
    JordanElement c(J);
    c.coords[a] = 1.0;
    F.frame.push_back(c);
    F.abasis.push_back(c);
  }
  F.coeffs = Eigen::MatrixXd::Identity(s.n, s.n);
  F.note = s.family == Family::Albert ? "diagonal idempotents of the Albert algebra"
                                      : "diagonal units: identity ray plus traceless diagonals";
  return F;
}

}  // namespace detail

/// Maximal flat through e; direct sums concatenate their summands' flats.
inline FlatDescriptor cartan_flat(const JordanAlgebra& J) {
  if (J.is_simple()) return detail::simple_flat(J);
  FlatDescriptor F{J, {}, {}, {}, "product of summand flats"};
  std::vector<FlatDescriptor> parts;
  int total = 0;
  for (std::size_t p = 0; p < J.parts().size(); ++p) {
    parts.push_back(detail::simple_flat(J.part_algebra(p)));
    total += parts.back().dim();
  }
  F.coeffs = Eigen::MatrixXd::Zero(total, total);
  int at = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (const auto& a : parts[p].abasis) F.abasis.push_back(embed_part(J, p, a));
    for (const auto& c : parts[p].frame) F.frame.push_back(embed_part(J, p, c));
    const int k = parts[p].dim();
    F.coeffs.block(at, at, k, k) = parts[p].coeffs;
    at += k;
  }
  return F;
}

inline void check_params(const FlatDescriptor& F, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != F.dim())
    throw DimensionError("flat of " + F.alg.name() + " has dimension " + std::to_string(F.dim()) + ", got " +
                         std::to_string(params.size()) + " parameters");
}

/// Frame eigenvalues exp((A^T t)_j) of the flat point.
inline std::vector<double> flat_eigenvalues(const FlatDescriptor& F, const std::vector<double>& params) {
  check_params(F, params);
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(params.data(), F.dim());
  const Eigen::VectorXd s = F.coeffs.transpose() * t;
  std::vector<double> out(s.size());
  for (int j = 0; j < s.size(); ++j) out[j] = std::exp(s[j]);
  return out;
}

/// exp(sum t_a a_a) acting on e.
inline ConePoint flat_point(const FlatDescriptor& F, const std::vector<double>& params) {
  const auto lam = flat_eigenvalues(F, params);
  JordanElement x(F.alg);
  for (std::size_t j = 0; j < lam.size(); ++j) x += lam[j] * F.frame[j];
  return ConePoint::certify(std::move(x));
}

/// Affine slice through the flat point; coordinates are the frame eigenvalues.
inline Chart flat_chart(const FlatDescriptor& F, const std::vector<double>& params) {
  return Chart::make(flat_point(F, params), F.frame);
}

/// Strictly increasing and summing to zero.
inline bool weyl_chamber_contains(const std::vector<double>& t) {
  double sum = 0.0;
  for (double v : t) sum += v;
  if (std::abs(sum) > 1e-12) return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i - 1] < t[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Brackets in the ambient matrix model
//
// Matrix families: the self-adjoint matrix itself. Spin factors: the
// multiplication operator L(x) = [[t, xbar^T], [xbar, t I]], whose traceless
// part is a boost in o(1, n-1). Brackets of tangent elements land in the
// skew (compact) part; double brackets return to the tangent space.

struct AmbientElement {
  JordanAlgebra alg;
  std::vector<KMatrix<double>> blocks;
};

inline void require_bracket(const JordanAlgebra& J) {
  for (const auto& s : J.parts())
    if (s.family == Family::Albert)
      throw UnsupportedError("lie_bracket: no bracket realization for the Albert algebra");
}

inline AmbientElement to_ambient(const JordanElement& x) {
  require_bracket(x.alg);
  AmbientElement out{x.alg, {}};
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p) {
    const auto& s = x.alg.parts()[p];
    if (s.is_matrix()) {
      out.blocks.push_back(realize_matrix<double>(s, x.part(p)));
      continue;
    }
    const auto v = spin_natural(x.part(p));
    KMatrix<double> L(s.n, 1);
    for (int i = 0; i < s.n; ++i) L(i, i).c[0] = v[0];
    for (int i = 1; i < s.n; ++i) {
      L(0, i).c[0] = v[i];
      L(i, 0).c[0] = v[i];
    }
    out.blocks.push_back(std::move(L));
  }
  return out;
}

/// Self-adjoint projection back to the Jordan algebra.
inline JordanElement tangent_part(const AmbientElement& a) {
  JordanElement x(a.alg);
  for (std::size_t p = 0; p < a.alg.parts().size(); ++p) {
    const auto& s = a.alg.parts()[p];
    const auto& M = a.blocks[p];
    auto out = x.part(p);
    if (s.is_matrix()) {
      matrix_to_coords(s, M, out);
      continue;
    }
    double t = 0.0;
    for (int i = 0; i < s.n; ++i) t += M(i, i).c[0];
    out[0] = std::numbers::sqrt2 * t / s.n;
    for (int i = 1; i < s.n; ++i) out[i] = std::numbers::sqrt2 * 0.5 * (M(0, i).c[0] + M(i, 0).c[0]);
  }
  return x;
}

inline double max_abs(const AmbientElement& a) {
  double m = 0.0;
  for (const auto& b : a.blocks)
    for (const auto& q : b.e)
      for (double c : q.c) m = std::max(m, std::abs(c));
  return m;
}

inline AmbientElement commutator(const AmbientElement& x, const AmbientElement& y) {
  if (!(x.alg == y.alg)) throw DimensionError("commutator: algebra mismatch");
  AmbientElement out{x.alg, {}};
  for (std::size_t p = 0; p < x.blocks.size(); ++p)
    out.blocks.push_back(matmul(x.blocks[p], y.blocks[p]) - matmul(y.blocks[p], x.blocks[p]));
  return out;
}

inline AmbientElement lie_bracket(const JordanElement& x, const JordanElement& y) {
  x.require_same(y);
  return commutator(to_ambient(x), to_ambient(y));
}

/// [[x, y], z] in the tangent space.
inline JordanElement double_bracket(const JordanElement& x, const JordanElement& y, const JordanElement& z) {
  return tangent_part(commutator(lie_bracket(x, y), to_ambient(z)));
}

/// R(x, y) z = -[[x, y], z].
inline JordanElement curvature_triple(const JordanElement& x, const JordanElement& y, const JordanElement& z) {
  return -1.0 * double_bracket(x, y, z);
}

/// Largest distance from [[x, y], z] to span(basis) over basis triples,
/// relative to 1 + |[[x, y], z]|.
inline double lie_triple_residual(const std::vector<JordanElement>& basis) {
  if (basis.empty()) return 0.0;
  require_bracket(basis[0].alg);
  const int n = basis[0].size();
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd B(n, m);
  for (int a = 0; a < m; ++a) {
    basis[a].require_same(basis[0]);
    B.col(a) = basis[a].vec();
  }
  const auto qr = B.colPivHouseholderQr();
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const auto ab = lie_bracket(basis[a], basis[b]);
      if (max_abs(ab) == 0.0) continue;
      for (int c = 0; c < m; ++c) {
        const auto w = tangent_part(commutator(ab, to_ambient(basis[c])));
        const Eigen::VectorXd v = w.vec();
        const Eigen::VectorXd r = v - B * qr.solve(v);
        worst = std::max(worst, r.norm() / (1.0 + v.norm()));
      }
    }
  return worst;
}

/// Second-fundamental-form proxy: C(u, v, w) for flat directions u, v and w
/// g-orthogonal to the flat, relative to the largest |C(u, v, .)| entry.
inline double totally_geodesic_residual(const PotentialSpec& spec, const FlatDescriptor& F,
                                        const std::vector<double>& params) {
  const auto x = flat_point(F, params);
  const auto chart = ambient_chart(x);
  const auto g = metric(spec, chart);
  const int n = F.alg.dim();
  const int r = static_cast<int>(F.frame.size());
  Eigen::MatrixXd U(n, r);
  for (int a = 0; a < r; ++a) U.col(a) = F.frame[a].vec();
  // basis of {w : U^T g w = 0}
  const Eigen::MatrixXd constraint = (g.g * U).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraint);
  const Eigen::MatrixXd W = lu.kernel();
  if (W.cols() == 0 || (W.cols() == 1 && W.norm() == 0.0)) return 0.0;

  std::vector<JordanElement> normals;
  for (int k = 0; k < W.cols(); ++k) {
    JordanElement w(F.alg);
    Eigen::Map<Eigen::VectorXd>(w.coords.data(), n) = W.col(k).normalized();
    normals.push_back(std::move(w));
  }
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b) {
      for (int k = 0; k < r; ++k)
        scale = std::max(scale, std::abs(mixed_partial(spec, x.element, {&F.frame[a], &F.frame[b], &F.frame[k]})));
      for (const auto& w : normals)
        worst = std::max(worst, std::abs(mixed_partial(spec, x.element, {&F.frame[a], &F.frame[b], &w})));
    }
  return worst / (1.0 + scale);
}

}  // namespace symcone
