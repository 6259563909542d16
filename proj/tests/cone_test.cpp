#include <gtest/gtest.h>

#include <cmath>

#include "symcone/cone.hpp"
#include "test_util.hpp"

namespace {

using namespace symcone;
using symcone::testing::all_families;

TEST(Cone, IdentityIsInterior) {
  for (const auto& J : all_families()) {
    EXPECT_TRUE(contains(identity(J))) << J.name();
    EXPECT_NEAR(interior_margin(identity(J)), 1.0, 1e-12) << J.name();
  }
}

TEST(Cone, MembershipExamples) {
  const auto L = make_algebra(Family::Spin, 3);
  EXPECT_FALSE(contains(from_spin(L, 1.0, {2.0, 0.0})));
  EXPECT_TRUE(contains(from_spin(L, 3.0, {2.0, 0.0})));
  EXPECT_FALSE(contains(from_spin(L, -3.0, {0.0, 0.0})));

  // eigenvalues 3 and -1
  const auto S = make_algebra(Family::SymR, 2);
  Eigen::MatrixXd X(2, 2);
  X << 1, 2, 2, 1;
  EXPECT_FALSE(contains(from_real_matrix(S, X)));
  EXPECT_NEAR(interior_margin(from_real_matrix(S, X)), -1.0, 1e-12);
}

TEST(Cone, AlbertMembershipMatchesQuaternionicSubalgebra) {
  auto g = symcone::testing::rng(30);
  const auto A = make_algebra(Family::Albert, 3);
  const auto H = make_algebra(Family::HermH, 3);
  int inside = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto h = random_element(H, g);
    h += 1.5 * identity(H);
    const auto hm = to_matrix(h);
    KMatrix<double> om(3, 8);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int u = 0; u < 4; ++u) om(i, j).c[u] = hm(i, j).c[u];
    const auto o = from_matrix(A, om);
    EXPECT_EQ(contains(o), contains(h));
    if (contains(h)) {
      ++inside;
      EXPECT_NEAR(interior_margin(o), interior_margin(h), 1e-7);
    }
  }
  EXPECT_GT(inside, 10);
  EXPECT_LT(inside, 290);
}

TEST(Cone, SampleInterior) {
  auto g = symcone::testing::rng(31);
  const auto H = make_algebra(Family::HermH, 3);
  for (int i = 0; i < 10000; ++i) ASSERT_TRUE(contains(sample_interior(H, g, 1.0).element));

  const auto zero = JordanElement(H);
  const auto p = interior_from(zero, 1.0);
  EXPECT_EQ(p.element.coords, identity(H).coords);
  EXPECT_THROW(interior_from(zero, 0.0), DomainError);
}

TEST(Cone, ConeAxioms) {
  auto g = symcone::testing::rng(32);
  std::uniform_real_distribution<double> lam(0.01, 100.0);
  for (const auto& J : all_families()) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = sample_interior(J, g, 0.5).element;
      const auto y = sample_interior(J, g, 0.5).element;
      EXPECT_TRUE(contains(lam(g) * x));
      EXPECT_TRUE(contains(x + y));
      const auto z = random_element(J, g);
      EXPECT_EQ(contains(lam(g) * z), contains(z));
    }
  }
}

TEST(Cone, CertifyRejectsExterior) {
  const auto L = make_algebra(Family::Spin, 3);
  EXPECT_THROW(ConePoint::certify(from_spin(L, 1.0, {2.0, 0.0})), DomainError);
}

TEST(Potential, Values) {
  for (const auto& J : all_families()) {
    const PotentialSpec spec(J);
    EXPECT_EQ(spec.degree(), -J.dim());
    EXPECT_NEAR(kv_potential(spec, identity(J)), 0.0, 1e-14) << J.name();
    const double lambda = 2.7;
    EXPECT_NEAR(kv_potential(spec, lambda * identity(J)), -J.dim() * std::log(lambda), 1e-12) << J.name();
  }
  const auto S = make_algebra(Family::SymR, 2);
  Eigen::MatrixXd X = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NEAR(kv_potential(PotentialSpec(S), from_real_matrix(S, X)), -1.5 * std::log(4.0), 1e-14);
  EXPECT_NEAR(kv_potential(PotentialSpec(S, 0.25), identity(S)), 0.25, 1e-15);
}

TEST(Potential, DomainError) {
  const auto L = make_algebra(Family::Spin, 3);
  EXPECT_THROW(kv_potential(PotentialSpec(L), from_spin(L, 1.0, {2.0, 0.0})), DomainError);
}

TEST(Potential, Homogeneity) {
  auto g = symcone::testing::rng(33);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  for (const auto& J : all_families()) {
    const PotentialSpec spec(J);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = sample_interior(J, g, 1.0).element;
      const double l = lam(g);
      EXPECT_NEAR(kv_potential(spec, l * x) - kv_potential(spec, x) - spec.degree() * std::log(l), 0.0, 1e-10)
          << J.name();
    }
  }
}

TEST(Potential, ConvexAlongSegments) {
  auto g = symcone::testing::rng(34);
  for (const auto& J : all_families()) {
    const PotentialSpec spec(J);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = sample_interior(J, g, 0.3).element;
      const auto y = sample_interior(J, g, 0.3).element;
      const double mid = kv_potential(spec, 0.5 * (x + y));
      const double avg = 0.5 * (kv_potential(spec, x) + kv_potential(spec, y));
      EXPECT_LE(mid, avg + 1e-12) << J.name();
    }
  }
}

TEST(SelfDuality, SampledPairsPairPositively) {
  auto g = symcone::testing::rng(35);
  for (const auto& J : all_families()) {
    EXPECT_NEAR(trace_form(identity(J), identity(J)), J.rank(), 1e-12);
    EXPECT_TRUE(self_duality_sample(J, g, 2000)) << J.name();
  }
  EXPECT_THROW(self_duality_sample(make_algebra(Family::SymR, 2), g, 0), DomainError);
}

TEST(SelfDuality, BoundaryProbe) {
  // y = a o a with a a primitive idempotent has zero eigenvalues.
  auto g = symcone::testing::rng(36);
  const auto S = make_algebra(Family::SymR, 3);
  Eigen::VectorXd v = Eigen::VectorXd::Random(3).normalized();
  const auto y = from_real_matrix(S, v * v.transpose());
  EXPECT_NEAR(interior_margin(y), 0.0, 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sample_interior(S, g, 0.1).element;
    EXPECT_GE(trace_form(x, y), 0.0);
  }
}

TEST(KvIntegral, HalfLineClosedForm) {
  auto g = symcone::testing::rng(37);
  const auto R = make_algebra(Family::SymR, 1);
  for (double t : {0.5, 1.0, 3.0}) {
    JordanElement x(R, {t});
    const double est = kv_integral_mc(x, 400000, g);
    EXPECT_NEAR(est, 1.0 / t, 0.01 / t) << t;
  }
}

TEST(KvIntegral, SpinScaling) {
  auto g = symcone::testing::rng(38);
  const auto L = make_algebra(Family::Spin, 2);
  const auto e = identity(L);
  for (double lambda : {0.5, 2.0}) {
    const double ratio = kv_integral_mc(e, 400000, g) / kv_integral_mc(lambda * e, 400000, g);
    EXPECT_NEAR(ratio / std::pow(lambda, 2), 1.0, 0.01);
  }
}

TEST(KvIntegral, ProportionalToDeterminantPower) {
  auto g = symcone::testing::rng(39);
  for (const auto& J : {make_algebra(Family::Spin, 3), make_algebra(Family::SymR, 2)}) {
    const PotentialSpec spec(J);
    std::vector<double> intercepts;
    for (int i = 0; i < 8; ++i) {
      const auto x = sample_interior(J, g, 0.5).element;
      intercepts.push_back(std::log(kv_integral_mc(x, 200000, g)) - kv_potential(spec, x));
    }
    const auto [lo, hi] = std::minmax_element(intercepts.begin(), intercepts.end());
    EXPECT_LT(*hi - *lo, 0.02) << J.name();
  }
}

TEST(KvIntegral, UnsupportedDimension) {
  auto g = symcone::testing::rng(40);
  EXPECT_THROW(kv_integral_mc(identity(make_algebra(Family::Spin, 4)), 1000, g), UnsupportedError);
  EXPECT_THROW(kv_integral_mc(identity(make_algebra(Family::SymR, 3)), 1000, g), UnsupportedError);
}

}  // namespace
