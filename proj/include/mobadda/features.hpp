#pragma once

#include "world_config.hpp"

namespace mobadda {

// One player's evaluation features at evaluation index `t`.
struct FeatureSnapshot {
  int t = 0;
  Team player = Team::A;
  int hero_level = 1;
  int hero_deaths = 0;
  int towers_destroyed = 0;  // enemy towers destroyed by the player's team

  friend bool operator==(const FeatureSnapshot&, const FeatureSnapshot&) = default;
};

// P = level - deaths + towers destroyed.
constexpr int performance(const FeatureSnapshot& s) {
  return s.hero_level - s.hero_deaths + s.towers_destroyed;
}

}  // namespace mobadda
