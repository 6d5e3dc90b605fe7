#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agents.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "world.hpp"

namespace mobadda {

enum class AdjustmentDecision : std::uint8_t { Increase, Decrease, Keep };

constexpr std::string_view to_string(AdjustmentDecision d) {
  switch (d) {
    case AdjustmentDecision::Increase: return "increase";
    case AdjustmentDecision::Decrease: return "decrease";
    case AdjustmentDecision::Keep: return "keep";
  }
  return "?";
}

inline AdjustmentDecision parse_decision(std::string_view s) {
  if (s == "increase") return AdjustmentDecision::Increase;
  if (s == "decrease") return AdjustmentDecision::Decrease;
  if (s == "keep") return AdjustmentDecision::Keep;
  throw ConfigError("unknown adjustment decision '" + std::string(s) + "'");
}

inline FeatureSnapshot snapshot_features(const WorldState& world, Team player, int t = 0) {
  return features_of(world, player, t);
}

// Change in performance between two consecutive evaluations of one player.
inline int delta_performance(const FeatureSnapshot& curr, const FeatureSnapshot& prev) {
  if (curr.player != prev.player) throw ContractViolation("delta_performance: snapshots of different players");
  if (curr.t != prev.t + 1) throw ContractViolation("delta_performance: snapshots are not consecutive");
  return performance(curr) - performance(prev);
}

// x is the analyzed player, y the one whose difficulty is adjusted.
constexpr int alpha(int px_prime, int py_prime) { return px_prime - py_prime; }

// Moves at most one tier; |alpha| == beta stays inside the band.
inline std::pair<AdjustmentDecision, DifficultyMode> decide_adjustment(int alpha_value, int beta,
                                                                       DifficultyMode current) {
  if (beta <= 0) throw ContractViolation("beta must be positive");
  if (alpha_value > beta) return {AdjustmentDecision::Increase, successor(current)};
  if (alpha_value < -beta) return {AdjustmentDecision::Decrease, predecessor(current)};
  return {AdjustmentDecision::Keep, current};
}

struct DdaConfig {
  int beta = 1;
  double evaluation_period = 15.0;
  DifficultyMode initial_mode = DifficultyMode::Regular;
};

inline void validate(const DdaConfig& c) {
  if (c.beta <= 0) throw ConfigError("beta must be a positive integer");
  if (!(c.evaluation_period > 0.0)) throw ConfigError("evaluation_period must be > 0");
}

struct AlphaEntry {
  int t = 0;
  double sim_time = 0.0;
  int alpha = 0;
  AdjustmentDecision decision = AdjustmentDecision::Keep;
  DifficultyMode mode = DifficultyMode::Regular;  // mode in force after the decision

  friend bool operator==(const AlphaEntry&, const AlphaEntry&) = default;
};

struct DdaState {
  int beta = 1;
  double evaluation_period = 15.0;
  DifficultyMode current_mode = DifficultyMode::Regular;
  Team analyzed = Team::A;  // x
  Team adapted = Team::B;   // y
  std::optional<FeatureSnapshot> prev_x;
  std::optional<FeatureSnapshot> prev_y;
  std::vector<AlphaEntry> alpha_history;
  int next_t = 0;

  static DdaState from_config(const DdaConfig& c, Team analyzed = Team::A) {
    validate(c);
    DdaState s;
    s.beta = c.beta;
    s.evaluation_period = c.evaluation_period;
    s.current_mode = c.initial_mode;
    s.analyzed = analyzed;
    s.adapted = opponent(analyzed);
    return s;
  }
};

struct Evaluation {
  DifficultyMode mode = DifficultyMode::Regular;
  AdjustmentDecision decision = AdjustmentDecision::Keep;
  std::optional<int> alpha;  // nullopt on the first evaluation
};

// Feeds one pair of snapshots (indices are assigned here) through the
// controller. The first call only primes the previous snapshots.
inline Evaluation evaluate(DdaState& state, FeatureSnapshot x, FeatureSnapshot y, double sim_time = 0.0) {
  x.t = y.t = state.next_t++;
  x.player = state.analyzed;
  y.player = state.adapted;
  Evaluation out{state.current_mode, AdjustmentDecision::Keep, std::nullopt};
  if (state.prev_x && state.prev_y) {
    const int a = alpha(delta_performance(x, *state.prev_x), delta_performance(y, *state.prev_y));
    const auto [decision, mode] = decide_adjustment(a, state.beta, state.current_mode);
    state.current_mode = mode;
    state.alpha_history.push_back({x.t, sim_time, a, decision, mode});
    out = {mode, decision, a};
  }
  state.prev_x = x;
  state.prev_y = y;
  return out;
}

inline Evaluation evaluate_tick(DdaState& state, const WorldState& world) {
  return evaluate(state, snapshot_features(world, state.analyzed), snapshot_features(world, state.adapted),
                  world.sim_time);
}

}  // namespace mobadda
