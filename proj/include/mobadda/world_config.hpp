#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace mobadda {

enum class Team : std::uint8_t { A = 0, B = 1 };

constexpr Team opponent(Team t) { return t == Team::A ? Team::B : Team::A; }
constexpr std::size_t index(Team t) { return static_cast<std::size_t>(t); }
constexpr std::string_view to_string(Team t) { return t == Team::A ? "A" : "B"; }

enum class Lane : std::uint8_t { Top = 0, Mid = 1, Bottom = 2 };
inline constexpr std::size_t kLaneCount = 3;

constexpr std::string_view to_string(Lane l) {
  switch (l) {
    case Lane::Top: return "top";
    case Lane::Mid: return "mid";
    case Lane::Bottom: return "bottom";
  }
  return "?";
}

// All tunable numbers of the simulated world. Defaults are sized for 10-20
// sim-minute matches on a 8000 x 8000 map.
struct WorldConfig {
  Vec2 map_size{8000.0, 8000.0};
  // Each polyline runs from team A's base to team B's base; team B's creeps
  // walk it in reverse.
  std::array<std::vector<Vec2>, kLaneCount> lane_waypoints{{
      {{600, 600}, {600, 7400}, {7400, 7400}},
      {{600, 600}, {7400, 7400}},
      {{600, 600}, {7400, 600}, {7400, 7400}},
  }};
  std::array<Vec2, 2> base_position{{{500, 500}, {7500, 7500}}};
  std::array<Vec2, 2> ancient_position{{{1000, 1000}, {7000, 7000}}};

  int towers_per_lane = 2;
  // Towers sit between these fractions of the lane length, measured from the
  // owner's base; the outermost tower is at the far end.
  double tower_inner_fraction = 0.15;
  double tower_outer_fraction = 0.36;

  double creep_wave_period = 30.0;
  int creeps_per_wave = 4;
  double match_time_limit = 1200.0;
  double tick_length = 0.5;
  double xp_share_radius = 800.0;
  double respawn_delay_base = 10.0;
  double respawn_delay_per_level = 2.0;
  double periodic_gold_income = 1.0;
  int max_hero_level = 25;
  std::uint64_t rng_seed = 42;

  double sight_radius = 1200.0;
  double shop_radius = 600.0;
  double fountain_regen_fraction = 0.10;  // of max hp/mana per second
  double under_attack_window = 2.0;
  double spell_cast_range = 600.0;
  int max_permanent_items = 6;
  int starting_gold = 0;

  double hero_hp = 550.0;
  double hero_mana = 300.0;
  double hero_damage = 50.0;
  double hero_attack_cooldown = 1.5;
  double hero_attack_range = 300.0;
  double hero_move_speed = 300.0;
  double hero_hp_regen = 1.0;
  double hero_mana_regen = 2.5;
  double hero_hp_per_level = 20.0;
  double hero_mana_per_level = 15.0;
  double hero_damage_per_level = 3.0;
  int hero_kill_gold = 200;
  int hero_kill_xp = 100;

  double creep_hp = 300.0;
  double creep_damage = 20.0;
  double creep_attack_cooldown = 1.0;
  double creep_attack_range = 100.0;
  double creep_acquire_radius = 250.0;
  double creep_move_speed = 325.0;
  int creep_xp = 30;
  int creep_gold = 40;
  double creep_spawn_jitter = 60.0;

  double tower_hp = 1300.0;
  double tower_damage = 110.0;
  double tower_attack_cooldown = 1.5;
  double tower_attack_range = 700.0;
  int tower_gold = 150;

  double ancient_hp = 2000.0;
  bool ancient_requires_towers = true;

  double potion_heal = 200.0;
  double potion_duration = 8.0;
  double charm_hp = 150.0;
  double charm_damage = 0.0;
  double boots_speed_factor = 1.2;
  double gem_mana = 100.0;
  double gem_spell_amp = 0.1;
  double spell_damage_scale = 1.5;
};

inline std::int64_t ticks_in(double seconds, double tick_length) {
  return std::llround(seconds / tick_length);
}

// True when `seconds` is a whole number of ticks.
inline bool is_tick_multiple(double seconds, double tick_length) {
  const double n = seconds / tick_length;
  return std::abs(n - std::round(n)) < 1e-9;
}

inline void validate(const WorldConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.tick_length > 0.0)) fail("tick_length must be > 0");
  if (!(c.match_time_limit > 0.0)) fail("match_time_limit must be > 0");
  if (!is_tick_multiple(c.match_time_limit, c.tick_length))
    fail("match_time_limit must be a multiple of tick_length");
  if (c.towers_per_lane < 1) fail("towers_per_lane must be >= 1");
  if (c.creeps_per_wave < 1) fail("creeps_per_wave must be >= 1");
  if (!(c.creep_wave_period > 0.0)) fail("creep_wave_period must be > 0");
  if (c.max_hero_level < 1) fail("max_hero_level must be >= 1");
  if (!(c.map_size.x > 0.0 && c.map_size.y > 0.0)) fail("map_size must be positive");
  for (std::size_t i = 0; i < kLaneCount; ++i) {
    if (c.lane_waypoints[i].size() < 2)
      fail("lane " + std::string(to_string(static_cast<Lane>(i))) + " needs >= 2 waypoints");
    for (Vec2 p : c.lane_waypoints[i])
      if (p.x < 0 || p.y < 0 || p.x > c.map_size.x || p.y > c.map_size.y)
        fail("lane waypoint outside the map");
  }
  for (Vec2 p : {c.base_position[0], c.base_position[1], c.ancient_position[0], c.ancient_position[1]})
    if (p.x < 0 || p.y < 0 || p.x > c.map_size.x || p.y > c.map_size.y)
      fail("base or ancient outside the map");
  if (!(0.0 < c.tower_inner_fraction && c.tower_inner_fraction <= c.tower_outer_fraction &&
        c.tower_outer_fraction < 0.5))
    fail("tower fractions must satisfy 0 < inner <= outer < 0.5");
  if (c.spell_damage_scale < 0) fail("spell_damage_scale must be >= 0");
  if (c.potion_heal < 0 || !(c.potion_duration > 0.0)) fail("potion_heal must be >= 0 and potion_duration > 0");
  if (c.charm_hp < 0 || c.charm_damage < 0 || c.gem_mana < 0 || c.gem_spell_amp < 0 || !(c.boots_speed_factor >= 1.0))
    fail("item bonuses must be non-negative (boots factor >= 1)");
  if (c.hero_hp <= 0 || c.creep_hp <= 0 || c.tower_hp <= 0 || c.ancient_hp <= 0)
    fail("hit points must be positive");
  if (c.hero_attack_cooldown <= 0 || c.creep_attack_cooldown <= 0 || c.tower_attack_cooldown <= 0)
    fail("attack cooldowns must be positive");
  if (c.xp_share_radius < 0 || c.sight_radius < 0 || c.shop_radius < 0)
    fail("radii must be non-negative");
  if (c.starting_gold < 0 || c.periodic_gold_income < 0) fail("gold settings must be non-negative");
}

}  // namespace mobadda
