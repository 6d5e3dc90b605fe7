#include <gtest/gtest.h>

#include <random>

#include <mobadda/dda.hpp>

#include "oracles.hpp"

using namespace mobadda;

namespace {

FeatureSnapshot snap(int t, int level, int deaths, int towers, Team p = Team::A) {
  return {t, p, level, deaths, towers};
}

}  // namespace

TEST(Performance, Examples) {
  EXPECT_EQ(performance(snap(0, 1, 0, 0)), 1);
  EXPECT_EQ(performance(snap(0, 5, 2, 1)), 4);
  EXPECT_EQ(performance(snap(0, 10, 12, 0)), -2);
}

TEST(Performance, RandomSnapshots) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const int l = 1 + static_cast<int>(rng() % 25), d = static_cast<int>(rng() % 60), t = static_cast<int>(rng() % 13);
    ASSERT_EQ(performance(snap(0, l, d, t)), l - d + t);
  }
}

TEST(Delta, Examples) {
  EXPECT_EQ(delta_performance(snap(1, 4, 0, 0), snap(0, 4, 0, 0)), 0);
  EXPECT_EQ(delta_performance(snap(1, 5, 2, 1), snap(0, 4, 2, 1)), 1);
  EXPECT_EQ(delta_performance(snap(1, 5, 3, 1), snap(0, 5, 2, 1)), -1);
}

TEST(Delta, Contract) {
  EXPECT_THROW(delta_performance(snap(2, 5, 0, 0), snap(0, 4, 0, 0)), ContractViolation);
  EXPECT_THROW(delta_performance(snap(1, 5, 0, 0, Team::B), snap(0, 4, 0, 0)), ContractViolation);
}

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha(3, 1), 2);
  EXPECT_EQ(alpha(2, 2), 0);
  EXPECT_EQ(alpha(0, 3), -3);
}

TEST(Alpha, AntiSymmetric) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const int a = static_cast<int>(rng() % 41) - 20, b = static_cast<int>(rng() % 41) - 20;
    ASSERT_EQ(alpha(a, b), a - b);
    ASSERT_EQ(alpha(a, b), -alpha(b, a));
  }
}

TEST(Adjustment, Examples) {
  EXPECT_EQ(decide_adjustment(2, 1, DifficultyMode::Regular),
            std::pair(AdjustmentDecision::Increase, DifficultyMode::Hard));
  EXPECT_EQ(decide_adjustment(0, 1, DifficultyMode::Regular),
            std::pair(AdjustmentDecision::Keep, DifficultyMode::Regular));
  EXPECT_EQ(decide_adjustment(-5, 1, DifficultyMode::Easy),
            std::pair(AdjustmentDecision::Decrease, DifficultyMode::Easy));
  EXPECT_EQ(decide_adjustment(5, 1, DifficultyMode::Hard),
            std::pair(AdjustmentDecision::Increase, DifficultyMode::Hard));
  EXPECT_THROW(decide_adjustment(0, 0, DifficultyMode::Easy), ContractViolation);
}

TEST(Adjustment, BandAndOneStep) {
  for (int beta = 1; beta <= 5; ++beta)
    for (int a = -20; a <= 20; ++a)
      for (DifficultyMode m : {DifficultyMode::Easy, DifficultyMode::Regular, DifficultyMode::Hard}) {
        const auto [d, next] = decide_adjustment(a, beta, m);
        ASSERT_LE(std::abs(tier(next) - tier(m)), 1);
        if (std::abs(a) <= beta) {
          ASSERT_EQ(d, AdjustmentDecision::Keep);
          ASSERT_EQ(next, m);
        } else {
          ASSERT_EQ(d, a > 0 ? AdjustmentDecision::Increase : AdjustmentDecision::Decrease);
        }
      }
}

TEST(Evaluate, FirstCallPrimes) {
  DdaState s = DdaState::from_config({});
  const Evaluation e = evaluate(s, snap(0, 1, 0, 0), snap(0, 1, 0, 0, Team::B));
  EXPECT_EQ(e.decision, AdjustmentDecision::Keep);
  EXPECT_EQ(e.mode, DifficultyMode::Regular);
  EXPECT_FALSE(e.alpha);
  EXPECT_TRUE(s.alpha_history.empty());
}

TEST(Evaluate, BoundaryStaysInBand) {
  DdaState s = DdaState::from_config({});
  evaluate(s, snap(0, 3, 0, 0), snap(0, 3, 0, 0, Team::B));
  const Evaluation e = evaluate(s, snap(1, 5, 0, 0), snap(1, 4, 0, 0, Team::B));
  EXPECT_EQ(e.alpha, 1);
  EXPECT_EQ(e.decision, AdjustmentDecision::Keep);
}

TEST(Evaluate, LevelsAndTowerIncrease) {
  // x: P 3 -> 6 (two levels, one tower); y: P 3 -> 3.
  DdaState s = DdaState::from_config({});
  evaluate(s, snap(0, 3, 0, 0), snap(0, 3, 0, 0, Team::B));
  const Evaluation e = evaluate(s, snap(1, 5, 0, 1), snap(1, 3, 0, 0, Team::B));
  EXPECT_EQ(e.alpha, 3);
  EXPECT_EQ(e.decision, AdjustmentDecision::Increase);
  EXPECT_EQ(e.mode, DifficultyMode::Hard);
  ASSERT_EQ(s.alpha_history.size(), 1u);
  EXPECT_EQ(s.alpha_history[0].alpha, 3);
}

TEST(Evaluate, ClampRecordsDecision) {
  DdaConfig c;
  c.initial_mode = DifficultyMode::Easy;
  DdaState s = DdaState::from_config(c);
  evaluate(s, snap(0, 1, 0, 0), snap(0, 1, 0, 0, Team::B));
  evaluate(s, snap(1, 1, 0, 0), snap(1, 4, 0, 0, Team::B));
  ASSERT_EQ(s.alpha_history.size(), 1u);
  EXPECT_EQ(s.alpha_history[0].decision, AdjustmentDecision::Decrease);
  EXPECT_EQ(s.current_mode, DifficultyMode::Easy);
}

TEST(Evaluate, MatchesOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 100);
    const int beta = 1 + static_cast<int>(rng() % 3);
    const auto xs = oracle::random_stream(rng, n), ys = oracle::random_stream(rng, n);
    DdaConfig c;
    c.beta = beta;
    c.initial_mode = static_cast<DifficultyMode>(rng() % 3);
    DdaState s = DdaState::from_config(c);
    const auto want = oracle::modes(xs, ys, beta, tier(c.initial_mode));
    for (int i = 0; i < n; ++i) {
      const auto& x = xs[static_cast<std::size_t>(i)];
      const auto& y = ys[static_cast<std::size_t>(i)];
      const Evaluation e = evaluate(s, snap(0, x.level, x.deaths, x.towers), snap(0, y.level, y.deaths, y.towers));
      ASSERT_EQ(tier(e.mode), want[static_cast<std::size_t>(i)]) << "trial " << trial << " eval " << i;
    }
    ASSERT_EQ(s.alpha_history.size(), static_cast<std::size_t>(n - 1));
  }
}

TEST(Snapshot, FromWorld) {
  WorldState w = new_world({});
  EXPECT_EQ(snapshot_features(w, Team::A), snap(0, 1, 0, 0));
  w.hero(Team::B).level = 5;
  w.hero(Team::B).deaths = 2;
  w.towers_destroyed[index(Team::B)] = 1;
  EXPECT_EQ(snapshot_features(w, Team::B), snap(0, 5, 2, 1, Team::B));
  EXPECT_EQ(snapshot_features(w, Team::B), snapshot_features(w, Team::B));
}

TEST(Snapshot, EvaluateTickUsesWorld) {
  WorldState w = new_world({});
  DdaState s = DdaState::from_config({});
  evaluate_tick(s, w);
  w.hero(Team::A).level = 3;
  w.towers_destroyed[index(Team::A)] = 1;
  const Evaluation e = evaluate_tick(s, w);
  EXPECT_EQ(e.alpha, 3);
  EXPECT_EQ(e.mode, DifficultyMode::Hard);
}

TEST(Config, Validation) {
  DdaConfig c;
  c.beta = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.evaluation_period = 0;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_EQ(DdaConfig{}.initial_mode, DifficultyMode::Regular);
  EXPECT_EQ(DdaConfig{}.beta, 1);
  EXPECT_EQ(DdaConfig{}.evaluation_period, 15.0);
}

TEST(Decision, Names) {
  for (auto d : {AdjustmentDecision::Increase, AdjustmentDecision::Decrease, AdjustmentDecision::Keep})
    EXPECT_EQ(parse_decision(to_string(d)), d);
  EXPECT_THROW(parse_decision("up"), ConfigError);
}
