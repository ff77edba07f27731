#include "tzlab/surface.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace tzlab {
namespace {

using testing::kPi;
using testing::TrigPoly;

ScalarField cos_x(const GridPtr& g) {
  return ScalarField::from_function(g, [](double x, double) { return std::cos(2 * kPi * x); });
}

TEST(BuildGrid, UnitAreaAndSpacing) {
  const auto g = build_grid(64);
  EXPECT_EQ(g->n(), 64u);
  EXPECT_DOUBLE_EQ(g->dx(), 1.0 / 64.0);
  EXPECT_NEAR(g->area(), 1.0, 1e-15);
}

TEST(BuildGrid, RejectsOddAndSmall) {
  try {
    build_grid(7);
    FAIL() << "odd n accepted";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("n must be even"), std::string::npos);
  }
  EXPECT_THROW(build_grid(6), PreconditionError);
  EXPECT_THROW(build_grid(0), PreconditionError);
}

TEST(BuildGrid, WavenumbersPairConjugates) {
  const auto g = build_grid(128);
  const auto k = g->wavenumbers();
  ASSERT_EQ(k.size(), 128u);
  EXPECT_DOUBLE_EQ(k[1], 2 * kPi);
  EXPECT_DOUBLE_EQ(k[0], 0.0);
  for (std::size_t j = 1; j < 64; ++j) EXPECT_DOUBLE_EQ(k[j], -k[128 - j]);
}

TEST(FftConvention, ForwardUnnormalizedInverseScaled) {
  const auto g = build_grid(16);
  const auto one = ScalarField::constant(g, 1.0);
  const auto& plan = fft::plan(16);
  auto spec = plan.forward(one.values());
  EXPECT_NEAR(spec[0].real(), 256.0, 1e-12);
  for (std::size_t i = 1; i < spec.size(); ++i) EXPECT_NEAR(std::abs(spec[i]), 0.0, 1e-12);
  const auto f = TrigPoly::random(3).sample(g);
  const auto back = plan.inverse(plan.forward(f.values()));
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-13);
}

TEST(Integrate, Examples) {
  const auto g = build_grid(64);
  EXPECT_NEAR(integrate(ScalarField::constant(g, 1.0)), 1.0, 1e-14);
  EXPECT_NEAR(integrate(cos_x(g)), 0.0, 1e-12);
  const auto c2 = cos_x(g) * cos_x(g);
  EXPECT_NEAR(integrate(c2), 0.5, 1e-12);
}

TEST(Mean, Examples) {
  const auto g = build_grid(32);
  EXPECT_NEAR(mean(ScalarField::constant(g, 2.75)), 2.75, 1e-14);
  const auto sin_y = ScalarField::from_function(g, [](double, double y) { return std::sin(2 * kPi * y); });
  EXPECT_NEAR(mean(sin_y), 0.0, 1e-14);
  EXPECT_NEAR(mean(cos_x(g) + 3.0), 3.0, 1e-13);
}

TEST(Laplacian, ConstantAndEigenfunction) {
  const auto g = build_grid(64);
  EXPECT_LT(max_abs(laplacian(ScalarField::constant(g, 5.0))), 1e-12);
  const auto f = cos_x(g);
  const auto lf = laplacian(f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(lf[i], -4 * kPi * kPi * f[i], 1e-10);
}

TEST(Laplacian, MatchesAnalyticForBandLimited) {
  const auto g = build_grid(32);
  const auto p = TrigPoly::random(11);
  const auto lf = laplacian(p.sample(g));
  for (std::size_t i = 0; i < lf.size(); ++i) {
    const auto x = g->node(i);
    EXPECT_NEAR(lf[i], p.laplacian(x.x, x.y), 1e-9);
  }
}

TEST(Laplacian, FivePointOracleConvergesAtSecondOrder) {
  const auto p = TrigPoly::random(5, 2);
  std::vector<double> errors;
  for (int n : {16, 32, 64, 128}) {
    const auto g = build_grid(n);
    const auto f = p.sample(g);
    const auto spectral = laplacian(f);
    const auto fd = testing::five_point_laplacian(f);
    double err = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) err = std::max(err, std::abs(fd[i] - spectral[i]));
    errors.push_back(err);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    EXPECT_GE(std::log2(errors[i - 1] / errors[i]), 1.9) << "refinement " << i;
  }
}

TEST(GradNormSq, Examples) {
  const auto g = build_grid(64);
  EXPECT_NEAR(grad_norm_sq(ScalarField::constant(g, -1.5)), 0.0, 1e-12);
  EXPECT_NEAR(grad_norm_sq(cos_x(g)) / (2 * kPi * kPi), 1.0, 1e-10);
  const auto p = TrigPoly::random(21);
  EXPECT_NEAR(grad_norm_sq(p.sample(g)) / p.dirichlet(), 1.0, 1e-10);
}

TEST(GradNormSq, IntegrationByParts) {
  const auto g = build_grid(48);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    // Nodewise white noise exercises every mode including Nyquist.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(g->size());
    for (double& x : v) x = normal(rng);
    const ScalarField f(g, v);
    const double a = grad_norm_sq(f);
    const double b = -integrate(f * laplacian(f));
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a));
  }
}

TEST(SurfaceProperties, LaplacianHasZeroMeanAndIsLinear) {
  const auto g = build_grid(32);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto f = TrigPoly::random(seed, 4).sample(g);
    const auto h = TrigPoly::random(seed + 100, 4).sample(g);
    EXPECT_NEAR(integrate(laplacian(f)), 0.0, 1e-10);
    const auto lhs = laplacian(2.5 * f + (-0.75) * h);
    const auto rhs = 2.5 * laplacian(f) + (-0.75) * laplacian(h);
    EXPECT_LT(max_abs(lhs - rhs), 1e-9);
  }
}

TEST(SurfaceProperties, GradNormNonnegativeZeroOnlyForConstants) {
  const auto g = build_grid(16);
  EXPECT_LT(grad_norm_sq(ScalarField::constant(g, 3.0)), 1e-12);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    EXPECT_GT(grad_norm_sq(TrigPoly::random(seed, 2, 0.01).sample(g)), 1e-12);
  }
}

TEST(SurfaceProperties, RefinementLeavesIntegralsUnchanged) {
  const auto p = TrigPoly::random(9, 3);
  const double coarse = integrate(p.sample(build_grid(16)));
  const double fine = integrate(p.sample(build_grid(32)));
  EXPECT_NEAR(coarse, fine, 1e-12);
  EXPECT_NEAR(coarse, p.offset, 1e-12);
}

TEST(ScalarFieldAlgebra, PreservesGridAndRejectsMismatch) {
  const auto g = build_grid(16);
  const auto f = ScalarField::constant(g, 1.0);
  EXPECT_EQ((f + f).grid(), g);
  EXPECT_EQ(f.exp().grid(), g);
  EXPECT_THROW(f + ScalarField::constant(build_grid(32), 1.0), PreconditionError);
  EXPECT_THROW(ScalarField(g, std::vector<double>(g->size(), std::nan(""))), OverflowError);
}

TEST(TorusDistance, WrapsAcrossBoundary) {
  EXPECT_NEAR(torus_distance({0.05, 0.5}, {0.95, 0.5}), 0.1, 1e-15);
  EXPECT_NEAR(torus_distance({0.0, 0.0}, {0.5, 0.5}), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(torus_distance({0.1, 0.9}, {0.9, 0.1}), std::sqrt(0.08), 1e-15);
  EXPECT_NEAR(torus_distance({0.3, 0.3}, {0.3, 0.3}), 0.0, 0.0);
}

}  // namespace
}  // namespace tzlab
