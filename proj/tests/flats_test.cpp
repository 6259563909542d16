#include <gtest/gtest.h>

#include <cmath>

#include "symcone/flats.hpp"
#include "test_util.hpp"

namespace {

using namespace symcone;
using symcone::testing::all_families;

std::vector<JordanAlgebra> bracket_families() {
  return {make_algebra(Family::SymR, 4), make_algebra(Family::HermC, 3), make_algebra(Family::HermH, 3),
          make_algebra(Family::Spin, 3), make_algebra(Family::Spin, 5),
          direct_sum(make_algebra(Family::SymR, 2), make_algebra(Family::Spin, 3))};
}

template <class Rng>
std::vector<double> random_params(int k, Rng& g, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> t(k);
  for (auto& v : t) v = u(g);
  return t;
}

TEST(CartanFlat, Dimensions) {
  EXPECT_EQ(cartan_flat(make_algebra(Family::SymR, 3)).dim(), 3);
  EXPECT_EQ(cartan_flat(make_algebra(Family::HermH, 2)).dim(), 2);
  EXPECT_EQ(cartan_flat(make_algebra(Family::Albert, 3)).dim(), 3);
  EXPECT_EQ(cartan_flat(make_algebra(Family::Spin, 5)).dim(), 2);
  EXPECT_EQ(cartan_flat(direct_sum(make_algebra(Family::SymR, 2), make_algebra(Family::Spin, 3))).dim(), 4);
}

TEST(CartanFlat, FrameIsJordanFrame) {
  for (const auto& J : all_families()) {
    const auto F = cartan_flat(J);
    JordanElement sum(J);
    for (std::size_t a = 0; a < F.frame.size(); ++a) {
      sum += F.frame[a];
      for (std::size_t b = 0; b < F.frame.size(); ++b) {
        const auto p = jordan_product(F.frame[a], F.frame[b]);
        const auto expected = a == b ? F.frame[a] : JordanElement(J);
        EXPECT_LT(symcone::testing::diff_norm(p, expected), 1e-15) << J.name();
      }
    }
    EXPECT_LT(symcone::testing::diff_norm(sum, identity(J)), 1e-15) << J.name();
  }
}

TEST(CartanFlat, AbasisOperatorsCommute) {
  // (a o x) o b = a o (x o b) for commuting multiplication operators.
  auto g = symcone::testing::rng(60);
  for (const auto& J : all_families()) {
    const auto F = cartan_flat(J);
    for (const auto& a : F.abasis)
      for (const auto& b : F.abasis) {
        const auto x = random_element(J, g);
        const auto lhs = jordan_product(jordan_product(a, x), b);
        const auto rhs = jordan_product(a, jordan_product(x, b));
        EXPECT_LT(symcone::testing::diff_norm(lhs, rhs), 1e-13) << J.name();
      }
  }
}

TEST(LieBracket, Examples) {
  const auto S = make_algebra(Family::SymR, 2);
  Eigen::MatrixXd X(2, 2), Y(2, 2);
  X << 0, 1, 1, 0;
  Y << 1, 0, 0, -1;
  const auto b = lie_bracket(from_real_matrix(S, X), from_real_matrix(S, Y));
  const auto& M = b.blocks[0];
  EXPECT_DOUBLE_EQ(M(0, 0).c[0], 0.0);
  EXPECT_DOUBLE_EQ(M(0, 1).c[0], -2.0);
  EXPECT_DOUBLE_EQ(M(1, 0).c[0], 2.0);
  EXPECT_DOUBLE_EQ(M(1, 1).c[0], 0.0);

  auto g = symcone::testing::rng(61);
  for (const auto& J : bracket_families()) {
    const auto x = random_element(J, g);
    EXPECT_EQ(max_abs(lie_bracket(x, x)), 0.0) << J.name();
  }
}

TEST(LieBracket, AlbertUnsupported) {
  const auto A = make_algebra(Family::Albert, 3);
  EXPECT_THROW(lie_bracket(identity(A), identity(A)), UnsupportedError);
  EXPECT_THROW(lie_triple_residual(cartan_flat(A).abasis), UnsupportedError);
}

TEST(LieBracket, FlatBasesCommuteExactly) {
  for (const auto& J : bracket_families()) {
    const auto F = cartan_flat(J);
    for (const auto& a : F.abasis)
      for (const auto& b : F.abasis) EXPECT_EQ(max_abs(lie_bracket(a, b)), 0.0) << J.name();
    EXPECT_LE(lie_triple_residual(F.abasis), 1e-12) << J.name();
    for (const auto& a : F.abasis)
      for (const auto& b : F.abasis)
        for (const auto& c : F.abasis) EXPECT_LE(coord_norm(curvature_triple(a, b, c)), 1e-12) << J.name();
  }
}

TEST(LieTriple, FullTangentSpaceIsClosed) {
  const auto S = make_algebra(Family::SymR, 3);
  EXPECT_LE(lie_triple_residual(basis(S)), 1e-12);
  const auto L = make_algebra(Family::Spin, 4);
  EXPECT_LE(lie_triple_residual(basis(L)), 1e-12);
}

TEST(LieTriple, RandomSubspaceIsNotClosed) {
  auto g = symcone::testing::rng(62);
  const auto S = make_algebra(Family::SymR, 3);
  std::vector<JordanElement> sub;
  for (int i = 0; i < 3; ++i) sub.push_back(random_element(S, g));
  EXPECT_GT(lie_triple_residual(sub), 1e-3);
}

TEST(Curvature, AntisymmetricAndGenericallyNonzero) {
  auto g = symcone::testing::rng(63);
  const auto H = make_algebra(Family::HermC, 2);
  const auto x = random_element(H, g);
  const auto y = random_element(H, g);
  const auto r = curvature_triple(x, y, x);
  EXPECT_GT(coord_norm(r), 1e-3);
  EXPECT_EQ((r + curvature_triple(y, x, x)).vec().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Curvature, SpinDoubleBracketIsABoost) {
  // [[B(a), B(b)], B(c)] = B((a b^T - b a^T) c)
  const auto L = make_algebra(Family::Spin, 4);
  const auto a = from_spin(L, 0.0, {1.0, 0.0, 0.0});
  const auto b = from_spin(L, 0.0, {0.0, 1.0, 0.0});
  const auto c = from_spin(L, 0.0, {0.0, 2.0, 0.0});
  const auto w = double_bracket(a, b, c);
  EXPECT_LT(symcone::testing::diff_norm(w, from_spin(L, 0.0, {2.0, 0.0, 0.0})), 1e-15);
}

TEST(FlatPoint, Examples) {
  for (const auto& J : all_families()) {
    const auto F = cartan_flat(J);
    const auto e = flat_point(F, std::vector<double>(F.dim(), 0.0));
    EXPECT_LT(symcone::testing::diff_norm(e.element, identity(J)), 1e-15) << J.name();
    EXPECT_THROW(flat_point(F, std::vector<double>(F.dim() + 1, 0.0)), DimensionError);
  }
  const auto S = make_algebra(Family::SymR, 2);
  const auto x = flat_point(cartan_flat(S), {std::log(2.0), std::log(3.0)});
  Eigen::MatrixXd D = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  EXPECT_LT(symcone::testing::diff_norm(x.element, from_real_matrix(S, D)), 1e-15);
}

TEST(FlatPoint, MatchesJordanExponential) {
  auto g = symcone::testing::rng(64);
  for (const auto& J : all_families()) {
    const auto F = cartan_flat(J);
    for (int trial = 0; trial < 20; ++trial) {
      const auto t = random_params(F.dim(), g);
      JordanElement gen(J);
      for (int a = 0; a < F.dim(); ++a) gen += t[a] * F.abasis[a];
      const auto x = flat_point(F, t);
      EXPECT_TRUE(contains(x.element));
      EXPECT_LT(symcone::testing::diff_norm(x.element, jordan_exp(gen)) / coord_norm(x.element), 1e-12) << J.name();
    }
  }
}

TEST(FlatPoint, ExponentialsCompose) {
  auto g = symcone::testing::rng(65);
  for (const auto& J : all_families()) {
    const auto F = cartan_flat(J);
    const auto s = random_params(F.dim(), g);
    const auto t = random_params(F.dim(), g);
    std::vector<double> st(F.dim());
    for (int a = 0; a < F.dim(); ++a) st[a] = s[a] + t[a];
    const auto ls = flat_eigenvalues(F, s), lt = flat_eigenvalues(F, t), lst = flat_eigenvalues(F, st);
    for (std::size_t j = 0; j < lst.size(); ++j) EXPECT_NEAR(lst[j], ls[j] * lt[j], 1e-12 * lst[j]);
    // the frame product realizes the same composition
    const auto prod = jordan_product(flat_point(F, s).element, flat_point(F, t).element);
    EXPECT_LT(symcone::testing::diff_norm(prod, flat_point(F, st).element) / coord_norm(prod), 1e-12) << J.name();
  }
}

TEST(FlatChart, SpinUsesLightConeCoordinates) {
  const auto L = make_algebra(Family::Spin, 5);
  const auto F = cartan_flat(L);
  const auto chart = flat_chart(F, {0.3, 0.2});
  ASSERT_EQ(chart.size(), 2);
  // x = u c+ + v c- with u = x0 + x1, v = x0 - x1 (natural coordinates)
  const auto nat = spin_natural(chart.base.element.part(0));
  const auto lam = flat_eigenvalues(F, {0.3, 0.2});
  EXPECT_NEAR(lam[0], nat[0] + nat[1], 1e-14);
  EXPECT_NEAR(lam[1], nat[0] - nat[1], 1e-14);
  EXPECT_NEAR(lam[0], std::exp(0.5), 1e-14);
  EXPECT_NEAR(lam[1], std::exp(0.1), 1e-14);
}

TEST(FlatChart, RestrictedPotentialIsSeparable) {
  auto g = symcone::testing::rng(66);
  for (const auto& J : all_families()) {
    const PotentialSpec spec(J);
    const auto F = cartan_flat(J);
    const auto chart = flat_chart(F, random_params(F.dim(), g));
    const auto gm = metric(spec, chart);
    for (int a = 0; a < chart.size(); ++a)
      for (int b = 0; b < chart.size(); ++b)
        if (a != b) {
          EXPECT_LE(std::abs(gm.g(a, b)), 1e-13 * gm.g.diagonal().cwiseAbs().maxCoeff()) << J.name();
        }
  }
}

TEST(FlatChart, TotallyGeodesic) {
  auto g = symcone::testing::rng(67);
  for (const auto& J : all_families()) {
    const PotentialSpec spec(J);
    const auto F = cartan_flat(J);
    for (int trial = 0; trial < 5; ++trial)
      EXPECT_LE(totally_geodesic_residual(spec, F, random_params(F.dim(), g)), 1e-9) << J.name();
  }
}

TEST(FlatChart, GenericSliceIsNotTotallyGeodesic) {
  // negative control. Every plane through the origin is totally geodesic in a
  // Lorentz cone, so this needs rank 3.
  const auto S = make_algebra(Family::SymR, 3);
  const PotentialSpec spec(S);
  auto F = cartan_flat(S);
  Eigen::MatrixXd P(3, 3);
  P << 2, 1, 1, 1, 1, 0, 1, 0, 1;
  F.frame[0] = from_real_matrix(S, P);
  EXPECT_GT(totally_geodesic_residual(spec, F, {0.3, -0.2, 0.1}), 1e-3);
}

TEST(WeylChamber, Membership) {
  EXPECT_TRUE(weyl_chamber_contains({-1.0, 0.0, 1.0}));
  EXPECT_FALSE(weyl_chamber_contains({1.0, 0.0, -1.0}));
  EXPECT_FALSE(weyl_chamber_contains({-1.0, -1.0, 2.0}));
  EXPECT_FALSE(weyl_chamber_contains({-1.0, 0.0, 1.1}));
  EXPECT_TRUE(weyl_chamber_contains({}));
}

}  // namespace
