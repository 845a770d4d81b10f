#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liouville/params.hpp"

using namespace liouville;

TEST(Classify, RegionExamples) {
  EXPECT_EQ(classify({2, 2, 0}), Region::G1);
  EXPECT_EQ(classify({2, 0.5, 0.5}), Region::G5);
  EXPECT_EQ(classify({2, -1, 1.5}), Region::G3);
  EXPECT_EQ(classify({3, 0, 2}), Region::G5);
  EXPECT_EQ(classify({2, 0, 3}), Region::G2);
  EXPECT_EQ(classify({2, 3, 2}), Region::G2);
  EXPECT_EQ(classify({2, -1, 1}), Region::G4);
  EXPECT_EQ(classify({2, -1, 0}), Region::G6);
  EXPECT_EQ(classify({2, 1, 0}), Region::G5);
}

TEST(Classify, BoundaryLinesWithRoundoff) {
  // 0.7 + 0.2 differs from 0.9 in the last bit.
  EXPECT_EQ(classify({1.9, 0.7, 0.2}), Region::G5);
  EXPECT_EQ(k_classify({1.9, 0.7, 0.2}).on_critical_line, true);
}

TEST(Classify, InvalidExponents) {
  EXPECT_THROW(classify({1.0, 0, 0}), ParameterError);
  EXPECT_THROW(Params::make(2, NAN, 0), ParameterError);
}

TEST(Classify, PartitionProperty) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-6.0, 6.0);
  for (double m : {1.5, 2.0, 3.0}) {
    for (int i = 0; i < 20000; ++i) {
      const Params x{m, d(rng), d(rng)};
      int g = 0;
      for (Region r : {Region::G1, Region::G2, Region::G3, Region::G4, Region::G5, Region::G6})
        g += in_region(r, x);
      ASSERT_EQ(g, 1) << x.p << " " << x.q;
      if (compare(x.p + x.q, m - 1) != 0) {
        int k = 0;
        for (KTag t : {KTag::K1, KTag::K2, KTag::K3, KTag::K4}) k += in_k_region(t, x);
        ASSERT_EQ(k, 1);
      }
    }
  }
}

TEST(KClassify, Examples) {
  EXPECT_EQ(*k_classify({2, 2, 0}).tag, KTag::K2);
  EXPECT_EQ(*k_classify({2, -1, 1.5}).tag, KTag::K4);
  EXPECT_TRUE(k_classify({2, 0.5, 0.5}).on_critical_line);
  EXPECT_FALSE(k_classify({2, 0.5, 0.5}).tag.has_value());
}

TEST(AdmissibleA, TableIntervals) {
  auto a = admissible_a({2, 2, 0});
  EXPECT_DOUBLE_EQ(a.lo, 0.0);
  EXPECT_DOUBLE_EQ(a.hi, 1.0);
  a = admissible_a({2, -1, 1.5});
  EXPECT_DOUBLE_EQ(a.lo, 1.0);
  EXPECT_DOUBLE_EQ(a.hi, 2.0);
  a = admissible_a({2, -0.2, 1.5});
  EXPECT_NEAR(a.lo, 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(a.hi, 1.0);
  EXPECT_THROW(admissible_a({2, 0.5, 0.5}), ParameterError);
}

TEST(AdmissibleA, PositiveLowerEnd) {
  // K3 with p > 0: the table bound p(1-m)/(q-m+1) is negative.
  const auto a = admissible_a({2, 1, 1.5});
  EXPECT_EQ(a.lo, 0.0);
  EXPECT_EQ(a.hi, 1.0);
}

TEST(AdmissibleA, CondAbHoldsForLargeB) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  int tested = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Params x{2.0 + 0.5 * (trial % 3), d(rng), d(rng)};
    if (compare(x.p + x.q, x.m - 1) == 0) continue;
    const auto iv = admissible_a(x);
    if (iv.empty()) continue;
    const double hi = std::isfinite(iv.hi) ? iv.hi : iv.lo + 10.0;
    for (int k = 1; k <= 100; ++k) {
      const double a = iv.lo + (hi - iv.lo) * k / 101.0;
      const auto e = lemma_exponents(x, a);
      const double b = 10.0 * std::max(1.0, e.t * e.rho);
      ASSERT_TRUE(check_cond_ab(x, a, b).ok)
          << x.m << " " << x.p << " " << x.q << " a=" << a << ": "
          << check_cond_ab(x, a, b).diagnostic;
      ++tested;
    }
  }
  EXPECT_GT(tested, 10000);
}

TEST(CondAb, Examples) {
  const Params x{2, 2, 0};
  const auto ok = check_cond_ab(x, 0.5, 100);
  EXPECT_TRUE(ok.ok);
  EXPECT_DOUBLE_EQ(ok.exponents.s, 2.0);
  EXPECT_DOUBLE_EQ(ok.exponents.t, 2.0);
  EXPECT_DOUBLE_EQ(ok.exponents.gamma, 3.0);
  EXPECT_DOUBLE_EQ(ok.exponents.rho, 1.5);
  EXPECT_DOUBLE_EQ(ok.exponents.b_min, 3.0);
  EXPECT_FALSE(check_cond_ab(x, 0.5, 1).ok);
  EXPECT_FALSE(check_cond_ab(x, 1.0, 100).ok);  // a = m-1
  EXPECT_FALSE(check_cond_ab({2, 0.5, 0.5}, 0.5, 100).ok);
}

TEST(CriticalGrowth, Examples) {
  auto g = critical_growth({2, 2, 0});
  EXPECT_EQ(g.kind, GrowthKind::polynomial_log);
  EXPECT_EQ(*g.alpha, 4.0);
  EXPECT_EQ(*g.beta, 1.0);
  g = critical_growth({3, -1, 4});
  EXPECT_EQ(*g.alpha, 3.0);
  EXPECT_EQ(*g.beta, 2.0);
  g = critical_growth({2, -1, 1.5});
  EXPECT_EQ(*g.alpha, 3.0);
  EXPECT_EQ(*g.beta, 2.0);
  g = critical_growth({2, -1, 0});
  EXPECT_EQ(g.kind, GrowthKind::exp_r_log_r);
  EXPECT_DOUBLE_EQ(*g.kappa_sup, 0.5);
  g = critical_growth({2, 1, 0});
  EXPECT_EQ(g.kind, GrowthKind::exponential);
  EXPECT_DOUBLE_EQ(*g.kappa_sup, 1.0 / (2.0 * std::exp(1.0)));
  EXPECT_EQ(critical_growth({2, -1, 1}).kind, GrowthKind::polynomial_any_alpha);
}

TEST(CriticalGrowth, SemilinearFamily) {
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const auto g = critical_growth({2, p, 0});
    EXPECT_EQ(*g.alpha, 2 * p / (p - 1));
    EXPECT_EQ(*g.beta, 1 / (p - 1));
  }
}

TEST(CriticalGrowth, AlphaExceedsMInG1) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 6.0);
  int n = 0;
  for (int i = 0; i < 5000; ++i) {
    const Params x{1.2 + d(rng) / 2, d(rng), d(rng) - 3};
    if (classify(x) != Region::G1 || boundary_distance(x) < 1e-9) continue;
    EXPECT_GT(*critical_growth(x).alpha, x.m);
    ++n;
  }
  EXPECT_GT(n, 100);
}

TEST(G3Exponent, DiffersFromThresholdUnlessMIsTwo) {
  EXPECT_EQ(g3_existence_log_exponent({2, -1, 1.5}), *critical_growth({2, -1, 1.5}).beta);
  EXPECT_NE(g3_existence_log_exponent({3, -1, 2.5}), *critical_growth({3, -1, 2.5}).beta);
}

TEST(HOfP, Values) {
  EXPECT_NEAR(H_of_p(2, 1), 2.0, 1e-15);
  EXPECT_NEAR(H_of_p(3, 2), 3.0, 1e-15);
  EXPECT_NEAR(H_of_p(2, 1e-6), 1.0, 1e-4);
  EXPECT_NEAR(H_optimal_eta(2, 1), 1.0, 1e-15);
  EXPECT_THROW(H_of_p(2, 0), ParameterError);
}

TEST(HOfP, UnimodalAtMMinusOne) {
  for (double m : {1.5, 2.0, 3.0}) {
    double prev = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const double p = 2.0 * (m - 1) * k / 1000.0;
      const double h = H_of_p(m, p);
      if (p <= m - 1)
        EXPECT_GE(h, prev);
      else
        EXPECT_LE(h, prev);
      prev = h;
    }
  }
}

TEST(BoundaryDistance, ReportsNearestLine) {
  EXPECT_DOUBLE_EQ(boundary_distance({2, 2, 0}), 1.0);
  EXPECT_NEAR(boundary_distance({2, 0.3, 0.7 + 1e-9}), 1e-9, 1e-15);
}
