#include <sstream>

#include <gtest/gtest.h>

#include "hedgebench/config.hpp"

namespace hb = hedgebench;
namespace cfg = hedgebench::config;

namespace {

TEST(Parse, KeyValuesAndComments) {
  const auto kv = cfg::parse(
      "# experiment\n"
      "instance = fig-a\n"
      "  horizon=1000   # inline\n"
      "\n"
      "algorithms = hedge, ftl\n");
  EXPECT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("instance"), "fig-a");
  EXPECT_EQ(kv.at("horizon"), "1000");
  EXPECT_EQ(kv.at("algorithms"), "hedge, ftl");
}

TEST(Parse, RejectsMalformedLine) {
  EXPECT_THROW(cfg::parse("instance fig-a\n"), hb::Error);
}

TEST(ToExperiment, Defaults) {
  const auto e = cfg::to_experiment(cfg::parse("instance = fig-b\n"));
  EXPECT_EQ(e.instance.id, "fig-b");
  EXPECT_EQ(e.learners, (std::vector<hb::LearnerId>{hb::LearnerId::hedge}));
}

TEST(ToExperiment, Overrides) {
  const auto e = cfg::to_experiment(cfg::parse(
      "instance = prop2\nexperts = 8\ndelta = 0.2\nistar = 3\nalgorithms = hedge,adahedge\n"
      "horizon = 50\ntrials = 4\nseed = 9\nc0 = hedge=1.5, hedge_constant=2\n"));
  EXPECT_EQ(e.instance.experts, 8u);
  EXPECT_EQ(e.instance.i_star, 2u);  // 1-based in config
  EXPECT_NEAR(*e.instance.gap, 0.2, 1e-15);
  EXPECT_EQ(e.horizon, 50u);
  EXPECT_EQ(e.trials, 4u);
  EXPECT_EQ(e.seed, 9u);
  EXPECT_EQ(e.c0.at(hb::LearnerId::hedge), 1.5);
  EXPECT_EQ(e.c0.at(hb::LearnerId::hedge_constant), 2.0);
  EXPECT_EQ(e.learners.size(), 2u);
}

TEST(ToExperiment, Errors) {
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance = fig-a\nhorizn = 10\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("horizon = 10\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance = fig-a\nalgorithms = hedge,exp3\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance = fig-a\nhorizon = ten\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance = prop2\nistar = 0\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance = fig-a\nc0 = hedge\n")), hb::Error);
}

TEST(CustomInstance, Kinds) {
  auto e = cfg::to_experiment(cfg::parse("instance.kind = bernoulli\ninstance.params = 0.6, 0.2, 0.5\n"));
  EXPECT_EQ(e.instance.id, "custom");
  EXPECT_EQ(e.instance.experts, 3u);
  EXPECT_EQ(e.instance.i_star, 1u);
  EXPECT_NEAR(*e.instance.gap, 0.3, 1e-15);

  e = cfg::to_experiment(cfg::parse("instance.kind = beta\ninstance.params = 1:3, 1:1\ninstance.id = mine\n"));
  EXPECT_EQ(e.instance.id, "mine");
  EXPECT_EQ(e.instance.i_star, 0u);
  EXPECT_NEAR(*e.instance.gap, 0.25, 1e-15);

  e = cfg::to_experiment(cfg::parse("instance.kind = constant\ninstance.params = 0.1, 0.1\n"));
  EXPECT_TRUE(e.instance.deterministic());
  EXPECT_EQ(*e.instance.gap, 0.0);
}

TEST(CustomInstance, Errors) {
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance.kind = gauss\ninstance.params = 0.1, 0.2\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance.kind = bernoulli\ninstance.params = 0.1, 1.2\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance.kind = bernoulli\ninstance.params = 0.1\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance.kind = beta\ninstance.params = 1, 2\n")), hb::Error);
  EXPECT_THROW(cfg::to_experiment(cfg::parse("instance.kind = bernoulli\n")), hb::Error);
  EXPECT_THROW(
      cfg::to_experiment(cfg::parse("instance = fig-a\ninstance.kind = bernoulli\ninstance.params = 0.1, 0.2\n")),
      hb::Error);
}

}  // namespace
