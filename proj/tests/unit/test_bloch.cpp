#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blochdiff/bloch.hpp"

namespace blochdiff {
namespace {

const SymbolExpr z = SymbolExpr::identity();
const SamplingGrid kGrid(GridParams{10, 16, 8});

TEST(WeightedModulus, Examples) {
  const DiskPoint p(0.3, -0.5);
  EXPECT_NEAR(weighted_modulus(z, p, 1.0), 1 - p.norm(), 1e-15);
  EXPECT_EQ(weighted_modulus(z, DiskPoint(), 1.0), 1.0);
  EXPECT_EQ(weighted_modulus(SymbolExpr::constant(3.0), p, 1.0), 0.0);
  const double r = 1 / std::sqrt(3.0);
  EXPECT_NEAR(weighted_modulus(SymbolExpr::monomial(2), DiskPoint(r, 0), 1.0), 2 * r * 2.0 / 3.0,
              1e-15);
}

TEST(BlochSeminorm, Examples) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto e = bloch_seminorm(z, alpha, kGrid);
    EXPECT_EQ(e.value, 1.0);
    EXPECT_EQ(e.argmax, Complex(0.0, 0.0));
  }
  EXPECT_NEAR(bloch_seminorm(SymbolExpr::monomial(2), 1.0, kGrid).value, 4 / (3 * std::sqrt(3.0)),
              1e-4);
  EXPECT_NEAR(bloch_seminorm(SymbolExpr::monomial(3), 1.0, kGrid).value, 0.75, 1e-4);
}

TEST(BlochSeminorm, ValueIsRecomputableFromWitness) {
  const SymbolExpr f = SymbolExpr::mobius(DiskPoint(0.3, 0.6)) * SymbolExpr::monomial(2);
  const auto e = bloch_seminorm(f, 1.5, kGrid);
  EXPECT_EQ(e.value, weighted_modulus(f, DiskPoint(e.argmax), 1.5));
}

TEST(BlochNorm, Examples) {
  EXPECT_EQ(bloch_norm(SymbolExpr::constant({3.0, 4.0}), 1.0, kGrid), 5.0);
  EXPECT_EQ(bloch_norm(z, 1.0, kGrid), 1.0);
  EXPECT_NEAR(bloch_norm(SymbolExpr::monomial(2) + SymbolExpr::constant(1.0), 1.0, kGrid),
              1 + 4 / (3 * std::sqrt(3.0)), 1e-4);
}

TEST(MonomialSeminormExact, Examples) {
  for (double alpha : {0.3, 1.0, 4.0}) EXPECT_EQ(monomial_seminorm_exact(1, alpha), 1.0);
  EXPECT_NEAR(monomial_seminorm_exact(2, 1.0), 4 / (3 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(monomial_seminorm_exact(3, 1.0), 0.75, 1e-15);
  EXPECT_THROW(monomial_seminorm_exact(0, 1.0), std::invalid_argument);
}

TEST(MonomialSeminormExact, MatchesGridSearch) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (unsigned n : {1u, 2u, 5u, 17u, 64u}) {
      const double exact = monomial_seminorm_exact(n, alpha);
      const double grid = bloch_seminorm(SymbolExpr::monomial(n), alpha, kGrid).value;
      EXPECT_NEAR(grid / exact, 1.0, 1e-4) << "n=" << n << " alpha=" << alpha;
      EXPECT_LE(grid, exact * (1 + 1e-12));
    }
  }
}

TEST(MonomialSeminormExact, ScaledSequenceIsCauchy) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    double prev_diff = INFINITY;
    double prev = monomial_seminorm_exact(16, alpha) * std::pow(16.0, alpha - 1);
    for (unsigned n = 32; n <= (1u << 14); n *= 2) {
      const double cur = monomial_seminorm_exact(n, alpha) * std::pow(n, alpha - 1);
      const double diff = std::abs(cur - prev);
      EXPECT_LT(diff, prev_diff);
      prev_diff = diff;
      prev = cur;
    }
    // Limit (2 alpha / e)^alpha.
    EXPECT_NEAR(prev, std::pow(2 * alpha / std::exp(1.0), alpha), 1e-3);
  }
}

TEST(BlochProperties, Homogeneity) {
  const SymbolExpr f = SymbolExpr::blaschke({DiskPoint(0.4, 0.1)}) + SymbolExpr::monomial(3);
  const double base = bloch_seminorm(f, 1.0, kGrid).value;
  for (Complex c : {Complex(2.0, 0), Complex(-0.3, 0.4), Complex(0, 7)}) {
    EXPECT_NEAR(bloch_seminorm(SymbolExpr::scale(c, f), 1.0, kGrid).value, std::abs(c) * base,
                1e-10 * std::abs(c) * base);
  }
}

TEST(BlochProperties, SampledTriangleInequality) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 20; ++i) {
    const SymbolExpr f = SymbolExpr::mobius(DiskPoint(u(rng), u(rng) * 0.5)) *
                         SymbolExpr::monomial(1 + i % 4);
    const SymbolExpr g = SymbolExpr::blaschke({DiskPoint(u(rng), u(rng) * 0.5)}) +
                         SymbolExpr::scale(Complex(u(rng), u(rng)), SymbolExpr::monomial(i % 5));
    const double lhs = bloch_seminorm(f + g, 1.0, kGrid).value;
    EXPECT_LE(lhs, bloch_seminorm(f, 1.0, kGrid).value + bloch_seminorm(g, 1.0, kGrid).value + 1e-8);
  }
}

TEST(LittleBloch, Examples) {
  const std::vector<double> rs{0.9, 0.99, 0.999, 0.9999};
  const auto poly = little_bloch_test(SymbolExpr::monomial(3) + SymbolExpr::scale(0.1, SymbolExpr::monomial(2)), 1.0, rs);
  EXPECT_TRUE(poly.in_little_bloch);

  const auto id = little_bloch_test(z, 1.0, rs);
  EXPECT_TRUE(id.in_little_bloch);
  for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_NEAR(id.trace[i], 1 - rs[i] * rs[i], 1e-15);

  const auto log = little_bloch_test([](Complex w) { return 1.0 / (1.0 - w); }, 1.0, rs);
  EXPECT_FALSE(log.in_little_bloch);
  EXPECT_NEAR(log.trace.back(), 2.0, 1e-3);
  EXPECT_NEAR(std::abs(log.argmax.back() - rs.back()), 0.0, 1e-6);

  const std::vector<double> bad{0.5, 0.4};
  EXPECT_THROW(little_bloch_test(z, 1.0, bad), std::invalid_argument);
}

}  // namespace
}  // namespace blochdiff
