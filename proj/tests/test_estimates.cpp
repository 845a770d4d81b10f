#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/constructors.hpp"
#include "liouville/estimates.hpp"

using namespace liouville;

namespace {

PiecewiseSolution quiet(const Params& x) {
  ConstructionOptions o;
  o.verify = false;
  return construct(x, o);
}

// Random (m, p, q) off the critical line with an admissible a.
struct Sample {
  Params x;
  double a;
};

Sample random_admissible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mm(1.2, 4.0), pq(-4.0, 6.0), unit(0.02, 0.98);
  for (;;) {
    const Params x{mm(rng), pq(rng), pq(rng)};
    if (std::abs(x.p + x.q - x.m + 1.0) < 1e-3) continue;
    const OpenInterval I = admissible_a(x);
    if (I.empty()) continue;
    const double hi = std::isinf(I.hi) ? I.lo + 3.0 : I.hi;
    const double a = I.lo + (hi - I.lo) * unit(rng);
    const double den = (x.m - 1) * x.p + a * (x.q - x.m + 1);
    if (std::abs(den) < 1e-6 || std::abs(x.m - 1 - a) < 1e-6) continue;
    return {x, a};
  }
}

}  // namespace

TEST(LemmaExponents, IdentitiesOnRandomInputs) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 1000; ++k) {
    const auto [x, a] = random_admissible(rng);
    const LemmaExponents e = lemma_exponents(x, a);
    const double l1 = e.t * (x.m - 1) - x.m * e.t / e.s, r1 = x.m - e.t;
    const double l2 = -a * e.t + e.t * (a + 1) / e.s, r2 = -a + e.t - 1;
    const double sc1 = std::max({1.0, std::abs(e.t * (x.m - 1)), std::abs(x.m * e.t / e.s)});
    const double sc2 = std::max({1.0, std::abs(a * e.t), std::abs(e.t * (a + 1) / e.s)});
    EXPECT_LE(std::abs(l1 - r1), 1e-12 * sc1);
    EXPECT_LE(std::abs(l2 - r2), 1e-12 * sc2);
    EXPECT_NEAR(1 / e.s + 1 / e.t, 1.0, 1e-12);
  }
}

TEST(LemmaExponents, YoungInequality) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lx(-10.0, 10.0);
  int pairs = 0;
  while (pairs < 20) {
    const auto [x, a] = random_admissible(rng);
    const CondAbResult c = check_cond_ab(x, a, 1e6);
    if (!c.ok) continue;
    ++pairs;
    const double s = c.exponents.s, t = c.exponents.t;
    for (int k = 0; k < 500; ++k) {
      const double X = std::exp(lx(rng)), Y = std::exp(lx(rng));
      const double rhs = std::pow(X, s) + std::pow(Y, t);
      if (!std::isfinite(rhs)) continue;
      EXPECT_LE(X * Y, rhs * (1 + 1e-14)) << "s=" << s << " t=" << t;
    }
  }
}

TEST(LemmaExponents, PrefactorGrowsTowardBoundary) {
  const Params x{2, 2, 0};
  double prev = 0.0;
  for (double a : {0.5, 0.25, 0.1, 0.05, 0.01}) {
    const LemmaExponents e = lemma_exponents(x, a);
    const double pre = std::pow(2 * 50.0, e.t) * std::pow(a, 1 - e.t);
    EXPECT_GT(pre, prev);
    prev = pre;
  }
}

TEST(Lemma1, G1ExplicitInequality) {
  const PiecewiseSolution s = quiet({2, 2, 0});
  for (int i = 3; i <= 8; ++i) {
    const Lemma1Report r = verify_lemma1(s.params, s.manifold, s, 1.0 / i, 50, i);
    ASSERT_EQ(r.steps.size(), 2u);
    for (const auto& st : r.steps) {
      EXPECT_TRUE(st.pass) << st.name << " i=" << i << " ratio " << st.ratio;
      EXPECT_LE(st.ratio, 1 + 1e-6);
    }
    EXPECT_TRUE(r.support_check.pass);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.L, 0.0);
    EXPECT_LE(r.R1, r.L);
  }
}

TEST(Lemma1, LeftSideDoesNotVanish) {
  const PiecewiseSolution s = quiet({2, 2, 0});
  std::vector<double> L;
  for (int i = 3; i <= 8; ++i)
    L.push_back(verify_lemma1(s.params, s.manifold, s, 1.0 / i, 50, i).unscaled_L());
  // Bounded away from zero along the sequence, not a limit claim.
  for (double v : L) EXPECT_GE(v, 0.5 * L.front());
}

TEST(Lemma1, StableUnderSmallShift) {
  const PiecewiseSolution s = quiet({2, 2, 0});
  const Lemma1Report base = verify_lemma1(s.params, s.manifold, s, 0.25, 50, 4);
  for (double shift : {1e-3, 1e-6}) {
    const Lemma1Report r = verify_lemma1(s.params, s.manifold, s, 0.25, 50, 4, Cutoff(), shift);
    for (const auto& st : r.steps) EXPECT_TRUE(st.pass) << st.name << " shift " << shift;
    EXPECT_GT(r.L, 0.0);
  }
  EXPECT_TRUE(base.pass);
}

TEST(Lemma1, Preconditions) {
  const PiecewiseSolution s = quiet({2, 2, 0});
  const double tr = lemma_exponents(s.params, 0.25).b_min;
  EXPECT_THROW(verify_lemma1(s.params, s.manifold, s, 0.25, 0.5 * tr, 4), ParameterError);
  EXPECT_THROW(verify_lemma1(s.params, s.manifold, s, 1.5, 50, 4), ParameterError);
  EXPECT_THROW(verify_lemma1({2, 0, 1}, s.manifold, s, 0.25, 50, 4), ParameterError);
}

TEST(Energy, YoungPointwise) {
  const double w = 0.5;
  EXPECT_NEAR(std::pow(w, 1.5), 0.3536, 1e-4);
  EXPECT_LE(std::pow(w, 1.5), std::pow(w, 2.0) + std::pow(w, 1.0));
}

TEST(Energy, ChainHoldsOnG5Solution) {
  ConstructionOptions o;
  o.verify = false;
  o.iota = H_of_p(2, 1);
  const PiecewiseSolution s = construct({2, 1, 0}, o);
  for (double R : {8.0, 16.0, 32.0}) {
    const EnergyReport e = verify_energy_bound_G5(s.params, s.manifold, s, R, 1.5, Cutoff(), 0.1);
    EXPECT_TRUE(e.young_pass);
    ASSERT_EQ(e.steps.size(), 2u);
    for (const auto& st : e.steps) EXPECT_TRUE(st.pass) << st.name << " R=" << R;
    EXPECT_TRUE(e.pass);
  }
}

TEST(Energy, ExponentSignAtOptimalTheta) {
  const PiecewiseSolution s = quiet({2, 1, 0});
  const Cutoff h;
  const double lam = 1.5, z = lam / (lam - 1.0), l = 1.0;
  const double C1 = h.slope_bound() / l;
  const double R = z * C1 * std::numbers::e;  // θ = z/R = 1/(C1 e)
  for (double kappa : {0.05, 0.1, 0.2}) {
    const EnergyReport e = verify_energy_bound_G5(s.params, s.manifold, s, R, lam, h, kappa);
    EXPECT_NEAR(e.exponent, 2 * kappa - 1 / (C1 * std::numbers::e), 1e-12);
    EXPECT_NEAR(e.kappa_rough, 1 / (2 * C1 * std::numbers::e), 1e-15);
    EXPECT_EQ(e.exponent < 0, kappa < e.kappa_rough);
    EXPECT_EQ(e.below_threshold, kappa < e.kappa_rough);
  }
}

TEST(Energy, Preconditions) {
  const PiecewiseSolution s = quiet({2, 1, 0});
  EXPECT_THROW(verify_energy_bound_G5(s.params, s.manifold, s, 8, 2.5, Cutoff(), 0.1),
               ParameterError);
  EXPECT_THROW(verify_energy_bound_G5({2, 2, 0}, s.manifold, s, 8, 1.5, Cutoff(), 0.1),
               ParameterError);
}

TEST(CCoefficients, Examples) {
  const CCoefficients c = c_coefficients({2, -1, 0}, 0.3);
  EXPECT_DOUBLE_EQ(c.c1, 1.0);
  EXPECT_DOUBLE_EQ(c.c2, 1.0);
  EXPECT_DOUBLE_EQ(c.c4, -0.5);
  EXPECT_DOUBLE_EQ(c.c6, -1.0);
  EXPECT_NEAR(c.C1, -0.2, 1e-15);
  EXPECT_TRUE(c.C1_negative);
  EXPECT_DOUBLE_EQ(c.kappa_star, 0.5);
  const CCoefficients d = c_coefficients({2, -1, 0}, 0.6);
  EXPECT_NEAR(d.C1, 0.1, 1e-15);
  EXPECT_FALSE(d.C1_negative);
  EXPECT_THROW(c_coefficients({2, 2, 0}, 0.3), ParameterError);
}

TEST(CCoefficients, C1IdentityAndSignFlip) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mm(1.2, 4.0), u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double m = mm(rng);
    const double q = (m - 1) - 0.05 - 4 * u(rng);
    const double p = (m - 1 - q) - 0.05 - 4 * u(rng);
    const Params x{m, p, q};
    ASSERT_TRUE(in_region(Region::G6, x));
    const double kappa = 2 * u(rng);
    const CCoefficients c = c_coefficients(x, kappa);
    const double D = p + q - m + 1;
    const double scale = std::max({1.0, std::abs(c.c1), std::abs(c.c4), kappa});
    EXPECT_LE(std::abs(c.C1 - (kappa + (m - 1 - q) / D)), 1e-14 * scale);
    const double ks = c.kappa_star;
    const double root = numeric::bisect(
        [&](double kk) { return c_coefficients(x, kk).C1; }, 0.0, ks + 10.0, 1e-15);
    EXPECT_NEAR(root, ks, 1e-12 * std::max(1.0, ks));
  }
}

TEST(KappaThreshold, Examples) {
  EXPECT_NEAR(kappa_threshold({2, 1, 0}).statement, 1 / (2 * std::numbers::e), 1e-15);
  EXPECT_NEAR(*kappa_threshold({2, 1, 0}).proof, 1 / (2 * 1.5 * std::numbers::e), 1e-15);
  EXPECT_NEAR(kappa_threshold({2, -1, 0}).statement, 0.5, 1e-15);
  EXPECT_FALSE(kappa_threshold({2, -1, 0}).proof.has_value());
  EXPECT_NEAR(kappa_threshold({1.5, 0.5, 0}).statement, 0.5 / (2 * std::numbers::e), 1e-15);
  EXPECT_THROW(kappa_threshold({2, 2, 0}), ParameterError);
}

TEST(ChainStep, RatioAndSlack) {
  EXPECT_TRUE(chain_step("x", 1.0, 1.0).pass);
  EXPECT_TRUE(chain_step("x", 1.0 + 5e-7, 1.0).pass);
  EXPECT_FALSE(chain_step("x", 1.0 + 2e-6, 1.0).pass);
  EXPECT_DOUBLE_EQ(chain_step("x", 2.0, 4.0).ratio, 0.5);
}
