#pragma once

// The open symmetric cone of a Euclidean Jordan algebra and its
// Koszul-Vinberg potential Phi = -(N/r) log det (summed over irreducible
// summands for direct sums), which is strictly convex and tends to +infinity
// at the boundary.

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "symcone/jordan.hpp"

namespace symcone {

/// Smallest eigenvalue over all summands; positive exactly on the open cone.
inline double interior_margin(const JordanElement& x) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p) {
    const auto ev = simple_eigenvalues(x.alg.parts()[p], x.part(p));
    m = std::min(m, ev.front());
  }
  return m;
}

inline bool contains(const JordanElement& x) {
  if (!(interior_margin(x) > 0.0)) return false;
  // The Albert spectrum comes from a cubic; confirm with the exact invariants.
  for (std::size_t p = 0; p < x.alg.parts().size(); ++p) {
    const auto& s = x.alg.parts()[p];
    if (s.family != Family::Albert) continue;
    const auto X = realize_matrix<double>(s, x.part(p));
    const double T = X(0, 0).c[0] + X(1, 1).c[0] + X(2, 2).c[0];
    if (!(T > 0.0 && albert_minor_sum(X) > 0.0 && albert_det(X) > 0.0)) return false;
  }
  return true;
}

/// A point certified to lie in the open cone.
struct ConePoint {
  JordanElement element;
  double interior_margin = 0.0;

  static ConePoint certify(JordanElement x) {
    if (!contains(x)) throw DomainError("point is not in the open cone of " + x.alg.name());
    const double m = symcone::interior_margin(x);
    return {std::move(x), m};
  }
};

/// a o a + spread e, interior because squares lie in the closed cone.
inline ConePoint interior_from(const JordanElement& a, double spread) {
  if (!(spread > 0.0)) throw DomainError("sample_interior: spread must be positive");
  return ConePoint::certify(jordan_product(a, a) + spread * identity(a.alg));
}

template <class Rng>
ConePoint sample_interior(const JordanAlgebra& J, Rng& rng, double spread) {
  return interior_from(random_element(J, rng), spread);
}

// ---------------------------------------------------------------------------
// Potential

struct PotentialSpec {
  JordanAlgebra alg;
  double constant = 0.0;

  explicit PotentialSpec(JordanAlgebra a, double c = 0.0) : alg(std::move(a)), constant(c) {}

  /// N/r of one irreducible summand.
  double exponent(std::size_t part) const {
    const auto& s = alg.parts()[part];
    return static_cast<double>(s.N) / s.r;
  }
  /// N/r of an irreducible algebra.
  double k() const {
    if (!alg.is_simple()) throw UnsupportedError("k(): direct sums carry one exponent per summand");
    return exponent(0);
  }
  /// Homogeneity degree of chi = exp(Phi): chi(lambda x) = lambda^degree chi(x).
  double degree() const { return -static_cast<double>(alg.dim()); }
};

/// Phi over a generic scalar (double or Jet); coordinates must be interior.
template <class S>
S potential_value(const PotentialSpec& spec, std::span<const S> coords) {
  S acc(spec.constant);
  for (std::size_t p = 0; p < spec.alg.parts().size(); ++p) {
    const auto& s = spec.alg.parts()[p];
    acc += simple_log_det<S>(s, coords.subspan(spec.alg.offset(p), s.N)) * (-spec.exponent(p));
  }
  return acc;
}

inline double kv_potential(const PotentialSpec& spec, const JordanElement& x) {
  if (!(x.alg == spec.alg)) throw DimensionError("kv_potential: algebra mismatch");
  if (!contains(x)) throw DomainError("kv_potential: point outside the open cone");
  return potential_value<double>(spec, x.coords);
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of the characteristic integral
//   chi(x) = int_{cone} exp(-<x, a>) da
// with da the Lebesgue measure of the trace-form orthonormal coordinates and
// the cone identified with its dual.

namespace detail {

// Rank-one and spin-factor cones supported by the sampler, expressed as
// (natural t, xbar) with trace form 2(t s + x.y), or a half-line.
struct LowDimCone {
  bool half_line = false;
  double t = 0.0;            // half-line: the scalar; spin: natural t
  std::vector<double> xbar;  // spin only
  int n = 1;                 // spin ambient dimension
};

inline LowDimCone low_dim_view(const JordanElement& x) {
  const auto& J = x.alg;
  if (!J.is_simple() || J.dim() > 3)
    throw UnsupportedError("kv_integral_mc: supported only for irreducible cones of dimension <= 3, got " + J.name());
  const auto& s = J.parts()[0];
  LowDimCone v;
  if (s.is_matrix() && s.n == 1) {
    v.half_line = true;
    v.t = x.coords[0];
    return v;
  }
  if (s.family == Family::Spin) {
    v.n = s.n;
    v.t = x.coords[0] / std::numbers::sqrt2;
    for (int i = 1; i < s.n; ++i) v.xbar.push_back(x.coords[i] / std::numbers::sqrt2);
    return v;
  }
  if (s.family == Family::SymR && s.n == 2) {
    // [[a, b], [b, c]] -> t = (a + c) / 2, xbar = ((a - c) / 2, b): a trace-form
    // isometry onto Spin(3) mapping the cone onto the Lorentz cone.
    const auto X = to_matrix(x);
    const double a = X(0, 0).c[0], b = X(0, 1).c[0], c = X(1, 1).c[0];
    v.n = 3;
    v.t = 0.5 * (a + c);
    v.xbar = {0.5 * (a - c), b};
    return v;
  }
  throw UnsupportedError("kv_integral_mc: unsupported cone " + J.name());
}

}  // namespace detail

/// Importance-sampling estimate. The proposal is exponential in the cone's
/// time coordinate with rate 3/4 of the largest rate keeping weights bounded.
template <class Rng>
double kv_integral_mc(const JordanElement& x, long n_samples, Rng& rng) {
  if (n_samples < 1) throw DomainError("kv_integral_mc: n_samples must be positive");
  if (!contains(x)) throw DomainError("kv_integral_mc: point outside the open cone");
  const auto v = detail::low_dim_view(x);
  constexpr double kRateFraction = 0.75;

  if (v.half_line) {
    const double mu = kRateFraction * v.t;
    std::exponential_distribution<double> ex(mu);
    double sum = 0.0;
    for (long i = 0; i < n_samples; ++i) {
      const double a = ex(rng);
      sum += std::exp(-(v.t - mu) * a) / mu;
    }
    return sum / n_samples;
  }

  // Lorentz cone {a0 > |abar|} in R^n: a0 ~ Gamma(n, mu), abar uniform in the
  // ball of radius a0. Natural-coordinate density mu^n e^{-mu a0} / (Gamma(n) V),
  // V the volume of the unit ball in R^{n-1}.
  const int n = v.n;
  const int m = n - 1;
  double xnorm = 0.0;
  for (double c : v.xbar) xnorm += c * c;
  xnorm = std::sqrt(xnorm);
  const double lambda_min = v.t - xnorm;
  const double mu = kRateFraction * 2.0 * lambda_min;
  const double ball = std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  // orthonormal coordinates are sqrt(2) times natural ones
  const double jacobian = std::pow(std::numbers::sqrt2, n);
  const double inv_density_scale = std::tgamma(n) * ball / std::pow(mu, n);

  std::gamma_distribution<double> gamma(n, 1.0 / mu);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> dir(m);
  double sum = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const double a0 = gamma(rng);
    double dn = 0.0;
    for (auto& c : dir) {
      c = normal(rng);
      dn += c * c;
    }
    const double radius = a0 * std::pow(unif(rng), 1.0 / m) / std::sqrt(dn);
    double dot = 0.0;
    for (int k = 0; k < m; ++k) dot += v.xbar[k] * dir[k] * radius;
    const double pairing = 2.0 * (v.t * a0 + dot);
    sum += std::exp(-pairing + mu * a0);
  }
  return jacobian * inv_density_scale * sum / n_samples;
}

/// Necessary condition for self-duality: <x, y> > 0 on sampled interior pairs.
template <class Rng>
bool self_duality_sample(const JordanAlgebra& J, Rng& rng, int trials, double spread = 1.0) {
  if (trials < 1) throw DomainError("self_duality_sample: trials must be >= 1");
  for (int i = 0; i < trials; ++i) {
    const auto x = sample_interior(J, rng, spread);
    const auto y = sample_interior(J, rng, spread);
    if (!(trace_form(x.element, y.element) > 0.0)) return false;
  }
  return true;
}

}  // namespace symcone
