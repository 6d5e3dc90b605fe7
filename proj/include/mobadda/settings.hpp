#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <string>
#include <string_view>
#include <vector>

#include "agents.hpp"
#include "dda.hpp"
#include "errors.hpp"
#include "telemetry.hpp"
#include "world_config.hpp"

namespace mobadda {

// Everything a match needs besides the two players' roles.
struct Settings {
  WorldConfig world;
  BehaviorConfig behavior;
  DdaConfig dda;
  double gamelog_interval = 15.0;
  double balance_threshold = 0.7;
  FailureRules failure_rules;
};

inline void validate(const Settings& s) {
  validate(s.world);
  validate(s.behavior);
  validate(s.dda);
  if (!is_tick_multiple(s.gamelog_interval, s.world.tick_length) || s.gamelog_interval <= 0)
    throw ConfigError("gamelog_interval must be a positive multiple of tick_length");
  if (!is_tick_multiple(s.dda.evaluation_period, s.world.tick_length))
    throw ConfigError("evaluation_period must be a multiple of tick_length");
  if (!is_tick_multiple(s.world.creep_wave_period, s.world.tick_length))
    throw ConfigError("creep_wave_period must be a multiple of tick_length");
  if (!(s.balance_threshold > 0.0 && s.balance_threshold <= 1.0))
    throw ConfigError("balance_threshold must be in (0, 1]");
  if (s.failure_rules.too_slow_run < 1 || !(s.failure_rules.oscillating_fraction > 0.0))
    throw ConfigError("failure rules must be positive");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("'" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("'" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  return out;
}

inline bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("'" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

inline Vec2 to_point(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos) throw ConfigError("'" + std::string(key) + "': expected x,y");
  return {to_double(key, trim(v.substr(0, comma))), to_double(key, trim(v.substr(comma + 1)))};
}

inline std::string from_point(Vec2 p) { return format_double(p.x) + "," + format_double(p.y); }

inline std::vector<Vec2> to_polyline(std::string_view key, std::string_view v) {
  std::vector<Vec2> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto semi = v.find(';', start);
    const auto piece = trim(v.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
    if (!piece.empty()) out.push_back(to_point(key, piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

inline std::string from_polyline(const std::vector<Vec2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ';';
    out += from_point(pts[i]);
  }
  return out;
}

struct Key {
  std::string name;
  std::function<void(Settings&, std::string_view)> set;
  std::function<std::string(const Settings&)> get;
};

template <typename Member>
Key number_key(std::string name, Member member) {
  return {name,
          [name, member](Settings& s, std::string_view v) {
            auto& field = member(s);
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_same_v<T, bool>) field = to_bool(name, v);
            else if constexpr (std::is_floating_point_v<T>) field = to_double(name, v);
            else field = to_int<T>(name, v);
          },
          [member](const Settings& s) {
            auto& field = member(const_cast<Settings&>(s));
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_same_v<T, bool>) return std::string(field ? "true" : "false");
            else if constexpr (std::is_floating_point_v<T>) return format_double(field);
            else return std::to_string(field);
          }};
}

#define MOBADDA_KEY(name, expr) number_key(name, [](Settings& s) -> auto& { return expr; })

inline const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back({"map_size", [](Settings& s, std::string_view v) { s.world.map_size = to_point("map_size", v); },
                 [](const Settings& s) { return from_point(s.world.map_size); }});
    for (std::size_t l = 0; l < kLaneCount; ++l) {
      const std::string name = "lane_" + std::string(to_string(static_cast<Lane>(l)));
      k.push_back({name,
                   [name, l](Settings& s, std::string_view v) { s.world.lane_waypoints[l] = to_polyline(name, v); },
                   [l](const Settings& s) { return from_polyline(s.world.lane_waypoints[l]); }});
    }
    for (Team t : {Team::A, Team::B}) {
      const std::string suffix = t == Team::A ? "_a" : "_b";
      const std::size_t i = index(t);
      k.push_back({"base_position" + suffix,
                   [i](Settings& s, std::string_view v) { s.world.base_position[i] = to_point("base_position", v); },
                   [i](const Settings& s) { return from_point(s.world.base_position[i]); }});
      k.push_back({"ancient_position" + suffix,
                   [i](Settings& s, std::string_view v) { s.world.ancient_position[i] = to_point("ancient_position", v); },
                   [i](const Settings& s) { return from_point(s.world.ancient_position[i]); }});
    }
    k.push_back(MOBADDA_KEY("towers_per_lane", s.world.towers_per_lane));
    k.push_back(MOBADDA_KEY("tower_inner_fraction", s.world.tower_inner_fraction));
    k.push_back(MOBADDA_KEY("tower_outer_fraction", s.world.tower_outer_fraction));
    k.push_back(MOBADDA_KEY("creep_wave_period", s.world.creep_wave_period));
    k.push_back(MOBADDA_KEY("creeps_per_wave", s.world.creeps_per_wave));
    k.push_back(MOBADDA_KEY("match_time_limit", s.world.match_time_limit));
    k.push_back(MOBADDA_KEY("tick_length", s.world.tick_length));
    k.push_back(MOBADDA_KEY("xp_share_radius", s.world.xp_share_radius));
    k.push_back(MOBADDA_KEY("respawn_delay_base", s.world.respawn_delay_base));
    k.push_back(MOBADDA_KEY("respawn_delay_per_level", s.world.respawn_delay_per_level));
    k.push_back(MOBADDA_KEY("periodic_gold_income", s.world.periodic_gold_income));
    k.push_back(MOBADDA_KEY("max_hero_level", s.world.max_hero_level));
    k.push_back(MOBADDA_KEY("rng_seed", s.world.rng_seed));
    k.push_back(MOBADDA_KEY("sight_radius", s.world.sight_radius));
    k.push_back(MOBADDA_KEY("shop_radius", s.world.shop_radius));
    k.push_back(MOBADDA_KEY("fountain_regen_fraction", s.world.fountain_regen_fraction));
    k.push_back(MOBADDA_KEY("under_attack_window", s.world.under_attack_window));
    k.push_back(MOBADDA_KEY("spell_cast_range", s.world.spell_cast_range));
    k.push_back(MOBADDA_KEY("max_permanent_items", s.world.max_permanent_items));
    k.push_back(MOBADDA_KEY("starting_gold", s.world.starting_gold));
    k.push_back(MOBADDA_KEY("hero_hp", s.world.hero_hp));
    k.push_back(MOBADDA_KEY("hero_mana", s.world.hero_mana));
    k.push_back(MOBADDA_KEY("hero_damage", s.world.hero_damage));
    k.push_back(MOBADDA_KEY("hero_attack_cooldown", s.world.hero_attack_cooldown));
    k.push_back(MOBADDA_KEY("hero_attack_range", s.world.hero_attack_range));
    k.push_back(MOBADDA_KEY("hero_move_speed", s.world.hero_move_speed));
    k.push_back(MOBADDA_KEY("hero_hp_regen", s.world.hero_hp_regen));
    k.push_back(MOBADDA_KEY("hero_mana_regen", s.world.hero_mana_regen));
    k.push_back(MOBADDA_KEY("hero_hp_per_level", s.world.hero_hp_per_level));
    k.push_back(MOBADDA_KEY("hero_mana_per_level", s.world.hero_mana_per_level));
    k.push_back(MOBADDA_KEY("hero_damage_per_level", s.world.hero_damage_per_level));
    k.push_back(MOBADDA_KEY("hero_kill_gold", s.world.hero_kill_gold));
    k.push_back(MOBADDA_KEY("hero_kill_xp", s.world.hero_kill_xp));
    k.push_back(MOBADDA_KEY("creep_hp", s.world.creep_hp));
    k.push_back(MOBADDA_KEY("creep_damage", s.world.creep_damage));
    k.push_back(MOBADDA_KEY("creep_attack_cooldown", s.world.creep_attack_cooldown));
    k.push_back(MOBADDA_KEY("creep_attack_range", s.world.creep_attack_range));
    k.push_back(MOBADDA_KEY("creep_acquire_radius", s.world.creep_acquire_radius));
    k.push_back(MOBADDA_KEY("creep_move_speed", s.world.creep_move_speed));
    k.push_back(MOBADDA_KEY("creep_xp", s.world.creep_xp));
    k.push_back(MOBADDA_KEY("creep_gold", s.world.creep_gold));
    k.push_back(MOBADDA_KEY("creep_spawn_jitter", s.world.creep_spawn_jitter));
    k.push_back(MOBADDA_KEY("tower_hp", s.world.tower_hp));
    k.push_back(MOBADDA_KEY("tower_damage", s.world.tower_damage));
    k.push_back(MOBADDA_KEY("tower_attack_cooldown", s.world.tower_attack_cooldown));
    k.push_back(MOBADDA_KEY("tower_attack_range", s.world.tower_attack_range));
    k.push_back(MOBADDA_KEY("tower_gold", s.world.tower_gold));
    k.push_back(MOBADDA_KEY("ancient_hp", s.world.ancient_hp));
    k.push_back(MOBADDA_KEY("ancient_requires_towers", s.world.ancient_requires_towers));
    k.push_back(MOBADDA_KEY("potion_heal", s.world.potion_heal));
    k.push_back(MOBADDA_KEY("potion_duration", s.world.potion_duration));
    k.push_back(MOBADDA_KEY("charm_hp", s.world.charm_hp));
    k.push_back(MOBADDA_KEY("charm_damage", s.world.charm_damage));
    k.push_back(MOBADDA_KEY("boots_speed_factor", s.world.boots_speed_factor));
    k.push_back(MOBADDA_KEY("gem_mana", s.world.gem_mana));
    k.push_back(MOBADDA_KEY("gem_spell_amp", s.world.gem_spell_amp));
    k.push_back(MOBADDA_KEY("spell_damage_scale", s.world.spell_damage_scale));

    k.push_back(MOBADDA_KEY("retreat_hp_fraction", s.behavior.retreat_hp_fraction));
    k.push_back(MOBADDA_KEY("engage_radius", s.behavior.engage_radius));
    k.push_back(MOBADDA_KEY("defend_response", s.behavior.defend_response));
    k.push_back(MOBADDA_KEY("potion_reserve", s.behavior.potion_reserve));
    k.push_back(MOBADDA_KEY("defend_arrival_radius", s.behavior.defend_arrival_radius));
    k.push_back(MOBADDA_KEY("recover_hp_fraction", s.behavior.recover_hp_fraction));
    k.push_back(MOBADDA_KEY("drain_mana_fraction", s.behavior.drain_mana_fraction));
    k.push_back(MOBADDA_KEY("tower_wait_margin", s.behavior.tower_wait_margin));
    k.push_back(MOBADDA_KEY("engage_hp_margin", s.behavior.engage_hp_margin));
    k.push_back(MOBADDA_KEY("restock_potions", s.behavior.restock_potions));
    k.push_back(MOBADDA_KEY("finish_hp_fraction", s.behavior.finish_hp_fraction));
    k.push_back(MOBADDA_KEY("spell_surplus_mana_fraction", s.behavior.spell_surplus_mana_fraction));

    k.push_back(MOBADDA_KEY("beta", s.dda.beta));
    k.push_back(MOBADDA_KEY("evaluation_period", s.dda.evaluation_period));
    k.push_back({"initial_mode", [](Settings& s, std::string_view v) { s.dda.initial_mode = parse_mode(v); },
                 [](const Settings& s) { return std::string(to_string(s.dda.initial_mode)); }});

    k.push_back(MOBADDA_KEY("gamelog_interval", s.gamelog_interval));
    k.push_back(MOBADDA_KEY("balance_threshold", s.balance_threshold));
    k.push_back(MOBADDA_KEY("too_slow_run", s.failure_rules.too_slow_run));
    k.push_back(MOBADDA_KEY("oscillating_fraction", s.failure_rules.oscillating_fraction));
    return k;
  }();
  return table;
}

#undef MOBADDA_KEY

}  // namespace detail

inline std::vector<std::string> setting_names() {
  std::vector<std::string> out;
  for (const auto& k : detail::keys()) out.push_back(k.name);
  return out;
}

inline void set_value(Settings& s, std::string_view key, std::string_view value) {
  for (const auto& k : detail::keys())
    if (k.name == key) {
      k.set(s, detail::trim(value));
      return;
    }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

inline std::string get_value(const Settings& s, std::string_view key) {
  for (const auto& k : detail::keys())
    if (k.name == key) return k.get(s);
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

// `key = value` lines; '#' starts a comment. Keys not mentioned keep their
// current values.
inline void load_settings(std::istream& in, Settings& s) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view v = text;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    try {
      set_value(s, detail::trim(v.substr(0, eq)), v.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line) + ": " + e.what());
    }
  }
}

inline Settings load_settings_file(const std::string& path, Settings base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_settings(in, base);
  return base;
}

inline void dump_settings(std::ostream& out, const Settings& s) {
  for (const auto& k : detail::keys()) out << k.name << " = " << k.get(s) << '\n';
}

}  // namespace mobadda
