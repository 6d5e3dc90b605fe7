#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "world.hpp"

namespace mobadda {

// Ordered difficulty tier. Each tier keeps every behavior of the tiers below.
enum class DifficultyMode : std::uint8_t { Easy = 0, Regular = 1, Hard = 2 };

constexpr int tier(DifficultyMode m) { return static_cast<int>(m); }
constexpr DifficultyMode successor(DifficultyMode m) {
  return m == DifficultyMode::Hard ? m : static_cast<DifficultyMode>(tier(m) + 1);
}
constexpr DifficultyMode predecessor(DifficultyMode m) {
  return m == DifficultyMode::Easy ? m : static_cast<DifficultyMode>(tier(m) - 1);
}

constexpr std::string_view to_string(DifficultyMode m) {
  switch (m) {
    case DifficultyMode::Easy: return "easy";
    case DifficultyMode::Regular: return "regular";
    case DifficultyMode::Hard: return "hard";
  }
  return "?";
}

inline DifficultyMode parse_mode(std::string_view s) {
  if (s == "easy") return DifficultyMode::Easy;
  if (s == "regular") return DifficultyMode::Regular;
  if (s == "hard") return DifficultyMode::Hard;
  throw ConfigError("unknown difficulty mode '" + std::string(s) + "'");
}

struct BehaviorConfig {
  double retreat_hp_fraction = 0.30;
  // Radius around the hero that hard mode watches for the enemy hero.
  double engage_radius = 700.0;
  bool defend_response = true;
  int potion_reserve = 0;
  // A defending hero this close to the attacked tower has arrived and fights.
  double defend_arrival_radius = 400.0;
  // A retreating hero keeps retreating until healed to this fraction.
  double recover_hp_fraction = 0.95;
  // Hard mode drains when mana falls below this fraction.
  double drain_mana_fraction = 0.25;
  // Hard mode nukes creeps only while mana stays above this fraction.
  double spell_surplus_mana_fraction = 0.4;
  // Hard mode follows a hero this weak under its towers.
  double finish_hp_fraction = 0.2;
  // Item users walk back to the shop once out of potions.
  bool restock_potions = false;
  // Hard mode engages only when ahead on hp fraction by this much.
  double engage_hp_margin = 0.0;
  // Distance outside tower range where a hero waits for its creeps.
  double tower_wait_margin = 100.0;
};

inline void validate(const BehaviorConfig& c) {
  if (!(c.retreat_hp_fraction > 0.0 && c.retreat_hp_fraction < 1.0))
    throw ConfigError("retreat_hp_fraction must be in (0, 1)");
  if (!(c.recover_hp_fraction >= c.retreat_hp_fraction && c.recover_hp_fraction <= 1.0))
    throw ConfigError("recover_hp_fraction must be in [retreat_hp_fraction, 1]");
  if (c.engage_radius < 0 || c.defend_arrival_radius < 0) throw ConfigError("radii must be non-negative");
  if (c.potion_reserve < 0) throw ConfigError("potion_reserve must be >= 0");
}

// Weakest alive enemy tower; ties go top -> mid -> bottom, then outermost.
// nullopt means every enemy tower is down and the ancient is next.
inline std::optional<EntityId> select_target_tower(const Observation& obs) {
  const TowerView* best = nullptr;
  for (const TowerView& t : obs.towers) {
    if (!t.alive || t.team == obs.team) continue;
    if (!best || t.hp < best->hp ||
        (t.hp == best->hp && std::pair(t.lane, t.lane_index) < std::pair(best->lane, best->lane_index)))
      best = &t;
  }
  if (!best) return std::nullopt;
  return best->id;
}

inline bool should_retreat(const Observation& obs, DifficultyMode mode, const BehaviorConfig& cfg) {
  const Hero& h = obs.hero;
  if (h.hp_fraction() >= cfg.retreat_hp_fraction) return false;
  return mode == DifficultyMode::Easy || h.count(ItemKind::HealthPotion) <= cfg.potion_reserve;
}

// Shopping list: potions up to two in stock, then charm, boots, gem, repeating.
inline std::optional<ItemKind> choose_purchase(const Observation& obs, DifficultyMode mode) {
  if (mode < DifficultyMode::Regular || !obs.at_shop) return std::nullopt;
  const Hero& h = obs.hero;
  if (h.count(ItemKind::HealthPotion) < 2) {
    if (h.gold >= item_cost(ItemKind::HealthPotion)) return ItemKind::HealthPotion;
    return std::nullopt;
  }
  const int owned = h.permanent_items();
  if (owned >= obs.max_permanent_items) return std::nullopt;
  constexpr std::array cycle{ItemKind::StrengthCharm, ItemKind::SpeedBoots, ItemKind::IntelligenceGem};
  const ItemKind next = cycle[static_cast<std::size_t>(owned) % cycle.size()];
  if (h.gold >= item_cost(next)) return next;
  return std::nullopt;
}

// Round-robin nuke -> freeze -> drain, skipping maxed spells. nullopt banks
// the point.
inline std::optional<int> allocate_skill_point(const Hero& hero) {
  if (hero.unspent_skill_points <= 0) return std::nullopt;
  std::optional<int> pick;
  int lowest = kMaxSpellLevel;
  for (int slot = 0; slot < kSpellSlots; ++slot) {
    const int lvl = hero.spells[static_cast<std::size_t>(slot)].level;
    if (lvl < lowest && lvl + 1 <= hero.level) {
      lowest = lvl;
      pick = slot;
    }
  }
  return pick;
}

namespace detail {

inline bool spell_ready(const Hero& h, SpellKind kind) {
  const Spell& s = h.spells[static_cast<std::size_t>(kind)];
  return s.level > 0 && s.cooldown_remaining <= 0.0 && h.mana >= s.mana_cost();
}

inline const UnitView* visible_enemy_hero(const Observation& obs) {
  for (const UnitView& u : obs.visible_enemies)
    if (u.kind == UnitKind::Hero) return &u;
  return nullptr;
}

inline const TowerView* tower_needing_defense(const Observation& obs) {
  const TowerView* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const TowerView& t : obs.towers) {
    if (t.team != obs.team || !t.alive || !t.under_attack) continue;
    const double d = distance(obs.hero.position, t.position);
    if (d < best_d) {
      best_d = d;
      best = &t;
    }
  }
  return best;
}

inline bool is_visible_unit(const Observation& obs, EntityId id) {
  return std::any_of(obs.visible_enemies.begin(), obs.visible_enemies.end(),
                     [id](const UnitView& u) { return u.id == id; });
}

inline bool under_enemy_tower(const Observation& obs, Vec2 p) {
  for (const TowerView& t : obs.towers)
    if (t.alive && t.team != obs.team && distance(t.position, p) <= obs.tower_attack_range) return true;
  return false;
}

// An enemy tower is only pushed while allied creeps are in its range.
inline bool tower_covered(const Observation& obs, Vec2 tower) {
  return std::any_of(obs.allied_creeps.begin(), obs.allied_creeps.end(),
                     [&](Vec2 p) { return distance(p, tower) <= obs.tower_attack_range; });
}

// Allied creep closest to the given point.
inline const Vec2* creep_front(const Observation& obs, Vec2 toward) {
  const Vec2* best = nullptr;
  for (const Vec2& p : obs.allied_creeps)
    if (!best || distance(p, toward) < distance(*best, toward)) best = &p;
  return best;
}

// Just outside the tower's range, on the hero's side.
inline Vec2 staging_point(const Observation& obs, Vec2 tower, double margin) {
  const Vec2 d = obs.hero.position - tower;
  const double len = length(d);
  const Vec2 dir = len > 0.0 ? d * (1.0 / len) : Vec2{-1.0, -1.0} * (1.0 / std::sqrt(2.0));
  return tower + dir * (obs.tower_attack_range + margin);
}

// Nearest enemy in attack range: visible units, covered enemy towers, the ancient.
inline std::optional<EntityId> attack_target(const Observation& obs) {
  const Vec2 me = obs.hero.position;
  const double range = obs.hero.attack_range;
  std::optional<EntityId> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](EntityId id, Vec2 pos) {
    const double d = distance(me, pos);
    if (d > range) return;
    if (d < best_d || (d == best_d && best && id < *best)) {
      best_d = d;
      best = id;
    }
  };
  for (const UnitView& u : obs.visible_enemies) consider(u.id, u.position);
  for (const TowerView& t : obs.towers)
    if (t.alive && t.team != obs.team && tower_covered(obs, t.position)) consider(t.id, t.position);
  if (obs.enemy_ancient.hp > 0) consider(obs.enemy_ancient.id, obs.enemy_ancient.position);
  return best;
}

}  // namespace detail

// One action per tick, from the first rule that applies:
//   1. survive: potion (regular+) or retreat, and finish a retreat once begun;
//      regular+ restocks potions at the shop when out
//   2. defend an allied tower under attack
//   3. hard only: learn spells, then fight an enemy hero inside engage_radius
//      unless that hero stands under one of its own towers
//   4. attack the nearest enemy in attack range (hard: nuke it with spare mana)
//   5. shop when at base (regular+)
//   6. walk to the weakest enemy tower once allied creeps reach it, else join
//      the creep closest to it; the ancient when no tower remains
inline Action decide(DifficultyMode mode, const Observation& obs, const BehaviorConfig& cfg) {
  const Hero& h = obs.hero;
  if (!h.alive) return action::Idle{};

  if (h.hp_fraction() < cfg.retreat_hp_fraction) {
    if (should_retreat(obs, mode, cfg)) return action::Retreat{};
    if (!h.potion_active()) return action::UseItem{ItemKind::HealthPotion};
    // Back off while the potion works.
    return action::Move{obs.base};
  }
  if (h.retreating && h.hp_fraction() < cfg.recover_hp_fraction) return action::Retreat{};
  if (cfg.restock_potions && mode >= DifficultyMode::Regular && h.count(ItemKind::HealthPotion) == 0 &&
      h.gold >= 2 * item_cost(ItemKind::HealthPotion)) {
    if (auto item = choose_purchase(obs, mode)) return action::BuyItem{*item};
    return action::Move{obs.base};
  }

  if (cfg.defend_response) {
    if (const TowerView* t = detail::tower_needing_defense(obs);
        t && distance(h.position, t->position) > cfg.defend_arrival_radius)
      return action::Move{t->position};
  }

  if (mode == DifficultyMode::Hard) {
    if (auto slot = allocate_skill_point(h)) return action::LearnSpell{*slot};
    if (const UnitView* enemy = detail::visible_enemy_hero(obs);
        enemy && distance(h.position, enemy->position) <= cfg.engage_radius &&
        (!detail::under_enemy_tower(obs, enemy->position) || enemy->hp / enemy->max_hp < cfg.finish_hp_fraction) &&
        enemy->hp / enemy->max_hp + cfg.engage_hp_margin <= h.hp_fraction()) {
      if (detail::spell_ready(h, SpellKind::Freeze))
        return action::CastSpell{static_cast<int>(SpellKind::Freeze), enemy->id};
      if (detail::spell_ready(h, SpellKind::Nuke))
        return action::CastSpell{static_cast<int>(SpellKind::Nuke), enemy->id};
      if (detail::spell_ready(h, SpellKind::Drain) && h.mana < cfg.drain_mana_fraction * h.max_mana)
        return action::CastSpell{static_cast<int>(SpellKind::Drain), enemy->id};
      return action::AttackUnit{enemy->id};
    }
  }

  if (auto target = detail::attack_target(obs)) {
    // Hard mode spends surplus mana on units it is already fighting.
    if (mode == DifficultyMode::Hard && h.mana >= cfg.spell_surplus_mana_fraction * h.max_mana &&
        detail::spell_ready(h, SpellKind::Nuke) && detail::is_visible_unit(obs, *target))
      return action::CastSpell{static_cast<int>(SpellKind::Nuke), *target};
    return action::AttackUnit{*target};
  }

  if (auto item = choose_purchase(obs, mode)) return action::BuyItem{*item};

  if (auto tower = select_target_tower(obs)) {
    for (const TowerView& t : obs.towers) {
      if (t.id != *tower) continue;
      if (detail::tower_covered(obs, t.position)) return action::Move{t.position};
      if (const Vec2* front = detail::creep_front(obs, t.position)) return action::Move{*front};
      return action::Move{detail::staging_point(obs, t.position, cfg.tower_wait_margin)};
    }
  }
  if (obs.enemy_ancient.hp > 0) return action::Move{obs.enemy_ancient.position};
  return action::Idle{};
}

}  // namespace mobadda
