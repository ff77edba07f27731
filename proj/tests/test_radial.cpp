#include "tzlab/bubbles.hpp"
#include "tzlab/radial.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace tzlab::radial {
namespace {

using tzlab::testing::kPi;

double max_abs_pohozaev(const RadialProfile& p) {
  double worst = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) worst = std::max(worst, std::abs(pohozaev_residual_at(p, i)));
  return worst;
}

TEST(Shoot, ConstantSolution) {
  const auto p = shoot(0.0, 1.0, 1.0, 1.0, 1e-3);
  ASSERT_EQ(p.size(), 1001u);
  EXPECT_EQ(p.r.front(), 0.0);
  EXPECT_DOUBLE_EQ(p.r_max(), 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p.u[i], 0.0);
    EXPECT_EQ(p.du[i], 0.0);
    EXPECT_NEAR(p.sigma1[i], 0.5 * p.r[i] * p.r[i], 1e-14);
    EXPECT_NEAR(p.sigma2[i], 0.5 * p.r[i] * p.r[i], 1e-14);
  }
}

TEST(Shoot, InitialConditions) {
  const auto p = shoot(2.5, 1.0, 0.7, 0.5, 1e-3);
  EXPECT_EQ(p.u[0], 2.5);
  EXPECT_EQ(p.du[0], 0.0);
  EXPECT_EQ(p.sigma1[0], 0.0);
  EXPECT_EQ(p.sigma2[0], 0.0);
}

TEST(Shoot, LiouvilleClosedForm) {
  for (double alpha : {0.0, 5.0, 10.0}) {
    const auto p = shoot(alpha, 1.0, 0.0, 1.0, 1e-4);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      worst = std::max(worst, std::abs(p.u[i] - liouville_profile(alpha, p.r[i])));
    }
    EXPECT_LT(worst, 1e-7) << "alpha " << alpha;
  }
  const auto p = shoot(10.0, 1.0, 0.0, 1.0, 1e-4);
  EXPECT_NEAR(p.u.back(), liouville_profile(10.0, 1.0), 1e-7);
  EXPECT_NEAR(p.sigma1.back(), liouville_mass(10.0, 1.0), 2e-3);
  EXPECT_NEAR(p.sigma1.back(), 3.99855, 1e-4);
}

TEST(Shoot, DerivativeIdentity) {
  const auto p = shoot(8.0, 1.0, 1.0, 1.0, 1e-4);
  EXPECT_LT(derivative_identity_defect(p), 1e-6);
  for (double alpha : {-3.0, 0.0, 5.0, 8.0}) {
    for (double h2 : {0.0, 1.0}) {
      const double step = std::min(1e-3, max_step(alpha));
      const auto q = shoot(alpha, 1.0, h2, 1.0, step);
      EXPECT_LE(derivative_identity_defect(q), 10.0 * step * step) << alpha << " " << h2;
    }
  }
}

TEST(Shoot, MassesAreMonotone) {
  for (double alpha : {-4.0, 3.0, 9.0}) {
    const auto p = shoot(alpha, 1.0, 1.0, 1.0, std::min(1e-3, max_step(alpha)));
    for (std::size_t i = 1; i < p.size(); ++i) {
      EXPECT_GE(p.sigma1[i], p.sigma1[i - 1]);
      EXPECT_GE(p.sigma2[i], p.sigma2[i - 1]);
    }
    EXPECT_GE(p.sigma1.front(), 0.0);
  }
}

TEST(Shoot, StepRuleAndErrors) {
  EXPECT_DOUBLE_EQ(max_step(0.0), 0.1);
  EXPECT_DOUBLE_EQ(max_step(4.0), 0.1 * std::exp(-2.0));
  EXPECT_DOUBLE_EQ(max_step(-2.0), 0.1 * std::exp(-2.0));
  EXPECT_THROW(shoot(10.0, 1.0, 0.0, 1.0, 1e-2), StepTooLarge);
  EXPECT_THROW(shoot(10.0, 1.0, 0.0, 1.0, 1e-2), PreconditionError);
  EXPECT_THROW(shoot(0.0, 0.0, 1.0, 1.0, 1e-3), PreconditionError);
  EXPECT_THROW(shoot(0.0, 1.0, -1.0, 1.0, 1e-3), PreconditionError);
  EXPECT_THROW(shoot(0.0, 1.0, 1.0, 0.0, 1e-3), PreconditionError);
  EXPECT_THROW(shoot(0.0, 1.0, 1.0, 1.0, 0.0), PreconditionError);
  // Liouville solutions with huge h1 plunge to -infinity within the unit disk.
  EXPECT_THROW(shoot(0.0, 1e300, 0.0, 1.0, 1e-3), OverflowError);
}

TEST(Pohozaev, ConstantSolutionExample) {
  const auto p = shoot(0.0, 1.0, 1.0, 1.0, 1e-3);
  EXPECT_NEAR(pohozaev_lhs(p, p.node(0.5)), 2 * kPi * 0.375, 1e-12);
  EXPECT_NEAR(pohozaev_residual(p, 0.5), 0.0, 1e-12);
  EXPECT_THROW(pohozaev_residual(p, 1.5), PreconditionError);
  EXPECT_THROW(pohozaev_residual(p, -0.1), PreconditionError);
}

TEST(Pohozaev, LiouvilleProfileAtUnitRadius) {
  const auto p = shoot(10.0, 1.0, 0.0, 1.0, 1e-4);
  EXPECT_LT(std::abs(pohozaev_residual(p, 1.0)) / pohozaev_lhs(p, p.size() - 1), 1e-8);
}

TEST(Pohozaev, SmallAtEveryRadius) {
  for (double alpha : {0.0, 5.0, 8.0}) {
    for (double h2 : {0.0, 1.0}) {
      EXPECT_LT(max_pohozaev_ratio(shoot(alpha, 1.0, h2, 1.0, 1e-4)), 1e-6) << alpha << " " << h2;
    }
  }
}

TEST(Pohozaev, FourthOrderConvergence) {
  for (double alpha : {5.0, 8.0}) {
    const double coarse = max_abs_pohozaev(shoot(alpha, 1.0, 0.0, 1.0, 1e-3));
    const double fine = max_abs_pohozaev(shoot(alpha, 1.0, 0.0, 1.0, 5e-4));
    EXPECT_GE(coarse / fine, 12.0) << "alpha " << alpha;
  }
  for (double alpha : {0.0, 5.0, 8.0}) {
    for (double h2 : {0.0, 1.0}) {
      const auto e = pohozaev_order(alpha, 1.0, h2, 1.0, 1e-3);
      EXPECT_TRUE(e.at_roundoff || e.order >= 3.5) << alpha << " " << h2 << " " << e.order;
    }
  }
  // The constant solution is exact at any step.
  EXPECT_TRUE(pohozaev_order(0.0, 1.0, 1.0, 1.0, 1e-3).at_roundoff);
  EXPECT_FALSE(pohozaev_order(8.0, 1.0, 1.0, 1.0, 1e-3).at_roundoff);
}

TEST(Dirichlet, RecoversBothLiouvilleSolutions) {
  // u(1) = 0 for the Liouville profile iff e^{alpha/2} = 4 +- 2 sqrt 2.
  const double small = 2.0 * std::log(4.0 - 2.0 * std::sqrt(2.0));
  const double large = 2.0 * std::log(4.0 + 2.0 * std::sqrt(2.0));
  const auto a = solve_dirichlet(1.0, 0.0, 0.0, 2.0, 1e-3);
  EXPECT_NEAR(a.alpha, small, 1e-9);
  EXPECT_NEAR(a.u.back(), 0.0, 1e-10);
  const auto b = solve_dirichlet(1.0, 0.0, 2.0, 6.0, 1e-3);
  EXPECT_NEAR(b.alpha, large, 1e-8);
  EXPECT_THROW(solve_dirichlet(1.0, 0.0, 0.0, 0.1, 1e-3), PreconditionError);
}

TEST(MassRelation, Examples) {
  EXPECT_EQ(limit_mass_relation(4, 0), 0.0);
  EXPECT_EQ(limit_mass_relation(20, 10), 0.0);
  EXPECT_EQ(limit_mass_relation(0, 0), 0.0);
  EXPECT_EQ(limit_mass_relation(1, 1), -6.0);
  EXPECT_EQ(limit_mass_relation_exact(20, 10), 0);
  EXPECT_EQ(limit_mass_relation_exact(7, 7), -42);
}

TEST(QuantizationTable, ClosedFormExamples) {
  auto eq = [](LatticePair p, Family f, std::int64_t s1, std::int64_t s2) {
    return p.family == f && p.sigma1 == s1 && p.sigma2 == s2;
  };
  EXPECT_TRUE(eq(type_one(1), Family::type_one, 4, 0));
  EXPECT_TRUE(eq(type_one(0), Family::type_one, 0, 2));
  EXPECT_TRUE(eq(type_two(0), Family::type_two, 4, 10));
  EXPECT_TRUE(eq(type_one(-1), Family::type_one, 8, 16));
  EXPECT_TRUE(eq(type_two(2), Family::type_two, 8, 2));
  EXPECT_TRUE(eq(type_two(3), Family::type_two, 28, 16));
  EXPECT_TRUE(eq(type_one(2), Family::type_one, 20, 10));
}

TEST(QuantizationTable, EveryEntryIsAdmissible) {
  const auto table = quantization_table(-6, 6);
  ASSERT_FALSE(table.empty());
  for (const auto& p : table) {
    EXPECT_EQ(limit_mass_relation_exact(p.sigma1, p.sigma2), 0);
    EXPECT_EQ(p.sigma1 % 4, 0);
    EXPECT_EQ(p.sigma2 % 2, 0);
    EXPECT_GE(p.sigma1, 0);
    EXPECT_GE(p.sigma2, 0);
    EXPECT_FALSE(p.sigma1 == 0 && p.sigma2 == 0);
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& a = table[i - 1];
    const auto& b = table[i];
    EXPECT_TRUE(a.sigma1 < b.sigma1 || (a.sigma1 == b.sigma1 && a.sigma2 < b.sigma2));
  }
  EXPECT_THROW(quantization_table(2, 1), PreconditionError);
}

TEST(QuantizationTable, FamiliesNeverCollide) {
  // sigma1 - sigma2 is 4 mod 6 on Type I and 0 mod 6 on Type II.
  for (int m = -50; m <= 50; ++m) {
    const auto a = type_one(m);
    const auto b = type_two(m);
    EXPECT_EQ(((a.sigma1 - a.sigma2) % 6 + 6) % 6, 4);
    EXPECT_EQ(((b.sigma1 - b.sigma2) % 6 + 6) % 6, 0);
    EXPECT_EQ(limit_mass_relation_exact(a.sigma1, a.sigma2), 0);
    EXPECT_EQ(limit_mass_relation_exact(b.sigma1, b.sigma2), 0);
  }
}

TEST(Classify, Examples) {
  const auto a = classify_mass_pair(3.9986, 0.001, 0.01);
  EXPECT_EQ(a.family, Family::type_one);
  EXPECT_EQ(a.m, 1);
  EXPECT_NEAR(a.distance, 0.0014, 1e-9);
  EXPECT_EQ(classify_mass_pair(7, 7, 0.01).family, Family::none);
  EXPECT_GT(classify_mass_pair(7, 7, 0.01).distance, 0.01);
  EXPECT_EQ(classify_mass_pair(0, 0, 0.01).family, Family::none);
  const auto b = classify_mass_pair(4.0, 10.0, 0.01);
  EXPECT_EQ(b.family, Family::type_two);
  EXPECT_EQ(b.m, 0);
  EXPECT_STREQ(family_name(b.family), "TypeII");
}

TEST(Classify, FindsLargeLatticePairs) {
  for (int m : {-9, -4, 5, 11}) {
    for (const auto& p : {type_one(m), type_two(m)}) {
      if (p.sigma1 < 0 || p.sigma2 < 0 || (p.sigma1 == 0 && p.sigma2 == 0)) continue;
      const auto c = classify_mass_pair(p.sigma1 + 0.01, p.sigma2 - 0.01, 0.05);
      EXPECT_EQ(c.family, p.family);
      EXPECT_EQ(c.m, p.m);
    }
  }
  EXPECT_EQ(classify_mass_pair(std::nan(""), 1.0).family, Family::none);
}

TEST(Classify, LiouvilleShootingIsTypeOne) {
  const auto p = shoot(10.0, 1.0, 0.0, 1.0, 1e-4);
  const auto c = classify_mass_pair(p.sigma1.back(), p.sigma2.back());
  EXPECT_EQ(c.family, Family::type_one);
  EXPECT_EQ(c.m, 1);
}

}  // namespace
}  // namespace tzlab::radial
