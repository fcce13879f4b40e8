#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hedgebench/bounds.hpp"
#include "hedgebench/harness.hpp"

namespace hb = hedgebench;

namespace {

// Expected values come from 30-digit evaluations of each formula (mpmath).

hb::BoundParams params(std::optional<double> M, std::optional<double> T, std::optional<double> delta,
                       std::optional<double> c0 = std::nullopt) {
  hb::BoundParams p;
  p.M = M;
  p.T = T;
  p.delta = delta;
  p.c0 = c0;
  return p;
}

TEST(TheoryValue, Thm1) {
  const auto v = hb::theory_value("thm1", params(10, std::nullopt, 0.1));
  EXPECT_NEAR(v.value, 342.103403719761827, 1e-10);
  EXPECT_EQ(v.direction, hb::BoundDirection::upper);
}

TEST(TheoryValue, Prop3) {
  const auto c = hb::theory_value("prop3-const", params(10, 1e4, std::nullopt, std::sqrt(8.0)));
  EXPECT_NEAR(c.value, 17.8830502190778937, 1e-10);
  EXPECT_EQ(c.direction, hb::BoundDirection::lower);
  const auto d = hb::theory_value("prop3-dbl", params(10, 1e4, std::nullopt, std::sqrt(8.0)));
  EXPECT_NEAR(d.value, 8.94152510953894683, 1e-10);
  // Short horizons are capped by T/3 and T/12.
  EXPECT_DOUBLE_EQ(hb::theory_value("prop3-const", params(10, 2, std::nullopt, 0.01)).value, 2.0 / 3);
  EXPECT_DOUBLE_EQ(hb::theory_value("prop3-dbl", params(10, 2, std::nullopt, 0.01)).value, 2.0 / 12);
}

TEST(TheoryValue, Thm4) {
  const auto v = hb::theory_value("thm4", params(10, 1e4, std::nullopt, 2.0));
  EXPECT_NEAR(v.value, 25.2904521564191058, 1e-10);
  EXPECT_EQ(v.direction, hb::BoundDirection::lower);
}

TEST(TheoryValue, Thm5) {
  const auto v = hb::theory_value("thm5", params(10, 100, 0.1, 2.0));
  EXPECT_NEAR(v.value, 2.61960690293908235e-4, 1e-16);
  EXPECT_EQ(v.direction, hb::BoundDirection::lower);
  EXPECT_THROW(hb::theory_value("thm5", params(10, 24, 0.1, 2.0)), hb::Error);
  EXPECT_THROW(hb::theory_value("thm5", params(10, 100, 0.1, 0.5)), hb::Error);
}

TEST(TheoryValue, Prop1AndProp2) {
  EXPECT_NEAR(hb::theory_value("prop1", params(10, 100, std::nullopt)).value, 15.1742712938514635, 1e-12);
  const auto v = hb::theory_value("prop2", params(16, 18, 0.1));
  EXPECT_NEAR(v.value, 0.108304246962491455, 1e-15);
  EXPECT_EQ(v.direction, hb::BoundDirection::lower);
  try {
    hb::theory_value("prop2", params(10, 5, 0.1));
    FAIL();
  } catch (const hb::Error& e) {
    EXPECT_EQ(e.code(), hb::Errc::out_of_validity_domain);
    EXPECT_NE(std::string(e.what()).find("T ≥ lnM/(16Δ²)"), std::string::npos);
  }
  // ln 16 / (16 * 0.01) = 17.33, so T = 17 is just outside.
  EXPECT_THROW(hb::theory_value("prop2", params(16, 17, 0.1)), hb::Error);
}

TEST(TheoryValue, AdversarialGapFamily) {
  auto p = params(10, std::nullopt, 0.1, 2.0);
  p.tau0 = 80;
  EXPECT_NEAR(hb::theory_value("thm2", p).value, 141.725073119376554, 1e-10);
  EXPECT_NEAR(hb::theory_value("cor1-exp", p).value, 371.434839190794945, 1e-10);
  p.epsilon = 0.05;
  EXPECT_NEAR(hb::theory_value("cor1-prob", p).value, 395.718074816530162, 1e-10);
  EXPECT_FALSE(hb::theory_value("cor1-exp", p).notes.empty());  // c1 defaulted
  p.c1 = 1.0;
  EXPECT_TRUE(hb::theory_value("cor1-exp", p).notes.empty());

  const auto c = hb::gap_constants(2.0, 1.0);
  EXPECT_DOUBLE_EQ(c.c2, 1.0 + std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(c.c3, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(c.c4, 4.0);
}

TEST(TheoryValue, Prop4) {
  hb::BoundParams p;
  p.M = 10;
  p.T = 1000;
  p.beta = 1;
  p.B = 1;
  auto v = hb::theory_value("prop4", p);
  EXPECT_NEAR(v.value, 13.8155105579642741, 1e-12);  // C3 = 4, C4 = 2
  EXPECT_EQ(v.notes.size(), 2u);
  p.beta = 0.5;
  p.B = 2;
  EXPECT_NEAR(hb::theory_value("prop4", p).value, 115.324584786889083, 1e-9);
  p.beta = 1.5;
  EXPECT_THROW(hb::theory_value("prop4", p), hb::Error);
}

TEST(TheoryValue, MissingAndUnknown) {
  try {
    hb::theory_value("thm1", params(10, std::nullopt, std::nullopt));
    FAIL();
  } catch (const hb::Error& e) {
    EXPECT_EQ(e.code(), hb::Errc::missing_parameter);
  }
  EXPECT_THROW(hb::theory_value("thm9", params(10, 10, 0.1)), hb::Error);
  EXPECT_THROW(hb::theory_value("thm1", params(2, std::nullopt, 0.1)), hb::Error);
}

TEST(TheoryValue, Monotone) {
  double prev = INFINITY;
  for (double d = 0.01; d <= 1.0; d += 0.01) {
    const double v = hb::theory_value("thm1", params(10, std::nullopt, d)).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
  for (double m : {2.0, 3.0, 10.0, 100.0}) {
    double last = 0.0;
    for (double t = 1; t <= 1e6; t *= 3) {
      const double v = hb::theory_value("prop1", params(m, t, std::nullopt)).value;
      EXPECT_GT(v, last);
      last = v;
    }
  }
  for (double t : {1.0, 10.0, 1e4}) {
    double last = 0.0;
    for (double m : {2.0, 3.0, 10.0, 100.0}) {
      const double v = hb::theory_value("prop1", params(m, t, std::nullopt)).value;
      EXPECT_GT(v, last);
      last = v;
    }
  }
}

TEST(TheoryValue, MinimaxScaleRecoveredFromGapLowerBound) {
  // With gap = sqrt(ln M / T), ln M / (256 gap) = sqrt(T ln M) / 256.
  for (double m : {4.0, 16.0, 100.0}) {
    for (double t : {1e2, 1e4, 1e6}) {
      const double gap = std::sqrt(std::log(m) / t);
      if (gap >= 0.25) continue;
      const double lower = hb::theory_value("prop2", params(m, t, gap)).value;
      const double upper = hb::theory_value("prop1", params(m, t, std::nullopt)).value;
      EXPECT_LE(lower, upper);
      EXPECT_GE(lower * 256.0 * 16.0, upper);
    }
  }
}

TEST(ExactRegret, Examples) {
  EXPECT_NEAR(hb::constant_hedge_exact_regret(4, 2, std::sqrt(8.0)), 0.850610580786608264, 1e-12);
  EXPECT_DOUBLE_EQ(hb::constant_hedge_exact_regret(1, 2, 3.7), 0.5);
  const double big = hb::constant_hedge_exact_regret(10000, 10, std::sqrt(8.0));
  EXPECT_NEAR(big, 54.0994725475913410, 1e-9);
  EXPECT_GE(big, hb::theory_value("prop3-const", params(10, 1e4, std::nullopt, std::sqrt(8.0))).value);
}

TEST(ExactRegret, MatchesSimulation) {
  for (std::size_t m : {2u, 10u, 100u}) {
    const auto spec = hb::builtin_instance("prop3", {.experts = m});
    for (std::size_t horizon : {1u, 2u, 7u, 100u, 1000u, 10000u}) {
      const auto trace = hb::run_trial(hb::LearnerId::hedge_constant, spec, horizon, {0, 1});
      EXPECT_NEAR(hb::regret_of_trace(trace).regret, hb::constant_hedge_exact_regret(horizon, m, std::sqrt(8.0)),
                  1e-9)
          << "M=" << m << " T=" << horizon;
    }
  }
}

TEST(Bernstein, DeterministicInstancesExact) {
  const auto t4 = hb::builtin_instance("t4", {.experts = 10, .horizon = 10000, .c0 = 2.0});
  const double b = hb::bernstein_estimate(t4, 1.0, 5, {1, 1});
  EXPECT_NEAR(b, *t4.gap, 1e-15);
  EXPECT_EQ(b, hb::bernstein_estimate(t4, 1.0, 100000, {7, 7}));
  EXPECT_EQ(hb::bernstein_estimate(hb::builtin_instance("prop3"), 1.0, 10, {1, 1}), 1.0);
}

TEST(Bernstein, FigAWithinEnvelope) {
  const double b = hb::bernstein_estimate(hb::builtin_instance("fig-a"), 1.0, 100000, {1, 1});
  // Exact value for independent Bernoulli experts: P(l_i != l_1) / gap_i,
  // maximised by the 0.4 experts: 0.46 / 0.1 = 4.6.
  EXPECT_NEAR(b, 4.6, 0.2);
  EXPECT_GE(b, 1.0);
  EXPECT_LE(b, 1.0 + 2.0 * 0.3 / 0.1);
}

TEST(Bernstein, Errors) {
  EXPECT_THROW(hb::bernstein_estimate(hb::builtin_instance("fig-d"), 1.0, 10, {1, 1}), hb::Error);
  try {
    hb::bernstein_estimate(hb::builtin_instance("fig-b"), 1.0, 1000, {1, 1});
    FAIL();
  } catch (const hb::Error& e) {
    EXPECT_EQ(e.code(), hb::Errc::zero_gap_division);
  }
  auto s = hb::builtin_instance("fig-a");
  s.i_star.reset();
  try {
    hb::bernstein_estimate(s, 1.0, 10, {1, 1});
    FAIL();
  } catch (const hb::Error& e) {
    EXPECT_EQ(e.code(), hb::Errc::undeclared_best_expert);
  }
}

}  // namespace
