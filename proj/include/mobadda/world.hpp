#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "features.hpp"
#include "geometry.hpp"
#include "world_config.hpp"

namespace mobadda {

using EntityId = std::uint32_t;
inline constexpr EntityId kNoEntity = 0;

enum class UnitKind : std::uint8_t { Hero, Creep, Tower, Ancient };

// ---------------------------------------------------------------------------
// Spells and items
// ---------------------------------------------------------------------------

enum class SpellKind : std::uint8_t { Nuke = 0, Freeze = 1, Drain = 2 };
inline constexpr int kSpellSlots = 3;
inline constexpr int kMaxSpellLevel = 4;

constexpr std::string_view to_string(SpellKind k) {
  switch (k) {
    case SpellKind::Nuke: return "nuke";
    case SpellKind::Freeze: return "freeze";
    case SpellKind::Drain: return "drain";
  }
  return "?";
}

struct SpellStats {
  double mana_cost;
  double cooldown;
  // nuke: damage; freeze: immobilize seconds; drain: hp and mana restored.
  double magnitude;
};

// Stats per learned level (index 0 is level 1).
constexpr SpellStats spell_stats(SpellKind kind, int level) {
  constexpr std::array<SpellStats, kMaxSpellLevel> nuke{{{100, 12, 150}, {120, 11, 225}, {140, 10, 300}, {160, 9, 375}}};
  constexpr std::array<SpellStats, kMaxSpellLevel> freeze{{{80, 14, 1.5}, {90, 13, 2.0}, {100, 12, 2.5}, {110, 11, 3.0}}};
  constexpr std::array<SpellStats, kMaxSpellLevel> drain{{{0, 16, 50}, {0, 15, 75}, {0, 14, 100}, {0, 13, 125}}};
  const int i = std::clamp(level, 1, kMaxSpellLevel) - 1;
  switch (kind) {
    case SpellKind::Nuke: return nuke[i];
    case SpellKind::Freeze: return freeze[i];
    case SpellKind::Drain: return drain[i];
  }
  return {};
}

// Damage that accompanies a freeze.
constexpr double freeze_damage(int level) { return 20.0 + 20.0 * level; }
inline constexpr double kDrainDuration = 3.0;

struct Spell {
  SpellKind kind = SpellKind::Nuke;
  int level = 0;
  double cooldown_remaining = 0.0;

  double mana_cost() const { return spell_stats(kind, level).mana_cost; }
  double cooldown() const { return spell_stats(kind, level).cooldown; }
  double magnitude() const { return spell_stats(kind, level).magnitude; }

  friend bool operator==(const Spell&, const Spell&) = default;
};

enum class ItemKind : std::uint8_t { HealthPotion, StrengthCharm, SpeedBoots, IntelligenceGem };

constexpr std::string_view to_string(ItemKind k) {
  switch (k) {
    case ItemKind::HealthPotion: return "health_potion";
    case ItemKind::StrengthCharm: return "strength_charm";
    case ItemKind::SpeedBoots: return "speed_boots";
    case ItemKind::IntelligenceGem: return "intelligence_gem";
  }
  return "?";
}

constexpr int item_cost(ItemKind k) {
  switch (k) {
    case ItemKind::HealthPotion: return 100;
    case ItemKind::StrengthCharm: return 400;
    case ItemKind::SpeedBoots: return 450;
    case ItemKind::IntelligenceGem: return 400;
  }
  return 0;
}

constexpr bool is_consumable(ItemKind k) { return k == ItemKind::HealthPotion; }

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

struct Regen {
  double hp_per_second = 0.0;
  double mana_per_second = 0.0;
  double until = 0.0;
  bool from_potion = false;

  friend bool operator==(const Regen&, const Regen&) = default;
};

struct Hero {
  EntityId id = kNoEntity;
  Team team = Team::A;
  Vec2 position;
  double hp = 0.0;
  double max_hp = 0.0;
  double mana = 0.0;
  double max_mana = 0.0;
  double attack_damage = 0.0;
  double attack_range = 0.0;
  double attack_cooldown = 0.0;
  double attack_timer = 0.0;
  double move_speed = 0.0;
  double spell_amp = 1.0;
  int level = 1;
  int xp = 0;
  int gold = 0;
  int deaths = 0;
  std::vector<ItemKind> inventory;
  std::array<Spell, kSpellSlots> spells{{{SpellKind::Nuke}, {SpellKind::Freeze}, {SpellKind::Drain}}};
  int unspent_skill_points = 0;
  bool alive = true;
  double respawn_at = 0.0;
  double frozen_until = 0.0;
  bool retreating = false;
  std::vector<Regen> regens;

  double hp_fraction() const { return max_hp > 0 ? hp / max_hp : 0.0; }
  int count(ItemKind k) const { return static_cast<int>(std::count(inventory.begin(), inventory.end(), k)); }
  int permanent_items() const {
    return static_cast<int>(std::count_if(inventory.begin(), inventory.end(),
                                          [](ItemKind k) { return !is_consumable(k); }));
  }
  bool potion_active() const {
    return std::any_of(regens.begin(), regens.end(), [](const Regen& r) { return r.from_potion; });
  }

  friend bool operator==(const Hero&, const Hero&) = default;
};

struct Tower {
  EntityId id = kNoEntity;
  Team team = Team::A;
  Vec2 position;
  Lane lane = Lane::Top;
  int lane_index = 0;  // 0 = outermost, increasing toward the owner's base
  double hp = 0.0;
  double max_hp = 0.0;
  double attack_damage = 0.0;
  double attack_range = 0.0;
  double attack_cooldown = 0.0;
  double attack_timer = 0.0;
  double last_damaged_at = -1e9;
  bool alive = true;

  friend bool operator==(const Tower&, const Tower&) = default;
};

struct Creep {
  EntityId id = kNoEntity;
  Team team = Team::A;
  Vec2 position;
  Lane lane = Lane::Top;
  double hp = 0.0;
  double max_hp = 0.0;
  double attack_damage = 0.0;
  double attack_range = 0.0;
  double attack_cooldown = 0.0;
  double attack_timer = 0.0;
  double move_speed = 0.0;
  int xp_bounty = 0;
  int gold_bounty = 0;
  std::size_t next_waypoint = 1;
  double frozen_until = 0.0;

  friend bool operator==(const Creep&, const Creep&) = default;
};

struct Ancient {
  EntityId id = kNoEntity;
  Team team = Team::A;
  Vec2 position;
  double hp = 0.0;
  double max_hp = 0.0;

  friend bool operator==(const Ancient&, const Ancient&) = default;
};

// ---------------------------------------------------------------------------
// Actions and events
// ---------------------------------------------------------------------------

namespace action {
struct Idle {
  friend bool operator==(const Idle&, const Idle&) = default;
};
struct Move {
  Vec2 target;
  friend bool operator==(const Move&, const Move&) = default;
};
struct AttackUnit {
  EntityId target = kNoEntity;
  friend bool operator==(const AttackUnit&, const AttackUnit&) = default;
};
struct CastSpell {
  int slot = 0;
  EntityId target = kNoEntity;
  friend bool operator==(const CastSpell&, const CastSpell&) = default;
};
struct BuyItem {
  ItemKind item = ItemKind::HealthPotion;
  friend bool operator==(const BuyItem&, const BuyItem&) = default;
};
struct UseItem {
  ItemKind item = ItemKind::HealthPotion;
  friend bool operator==(const UseItem&, const UseItem&) = default;
};
struct Retreat {
  friend bool operator==(const Retreat&, const Retreat&) = default;
};
// Spends one skill point on a spell slot.
struct LearnSpell {
  int slot = 0;
  friend bool operator==(const LearnSpell&, const LearnSpell&) = default;
};
}  // namespace action

using Action = std::variant<action::Idle, action::Move, action::AttackUnit, action::CastSpell, action::BuyItem,
                            action::UseItem, action::Retreat, action::LearnSpell>;

enum class ActionKind : std::uint8_t { Idle, Move, AttackUnit, CastSpell, BuyItem, UseItem, Retreat, LearnSpell };

inline ActionKind kind_of(const Action& a) { return static_cast<ActionKind>(a.index()); }

using TeamActions = std::array<Action, 2>;

enum class EventKind : std::uint8_t {
  CreepKilled,
  HeroKilled,
  HeroRespawned,
  TowerDestroyed,
  AncientDestroyed,
  LevelUp,
  ItemPurchased,
  ItemUsed,
  SpellCast,
  SpellLearned,
  WaveSpawned,
  InvalidAction,
};

// `team` is the team of `subject`. `value` is event-specific: new level,
// item/spell kind, gold gained, or the rejected ActionKind.
struct Event {
  EventKind kind;
  double time = 0.0;
  Team team = Team::A;
  EntityId subject = kNoEntity;
  EntityId other = kNoEntity;
  int value = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// ---------------------------------------------------------------------------
// World state
// ---------------------------------------------------------------------------

struct WorldState {
  WorldConfig config;
  std::int64_t tick = 0;
  double sim_time = 0.0;
  std::array<Hero, 2> heroes;
  std::vector<Creep> creeps;  // sorted by id
  std::vector<Tower> towers;  // sorted by id
  std::array<Ancient, 2> ancients;
  std::array<int, 2> towers_destroyed{};  // enemy towers razed, by team
  std::array<double, 2> income_carry{};
  EntityId next_id = 1;
  std::mt19937_64 rng;

  Hero& hero(Team t) { return heroes[index(t)]; }
  const Hero& hero(Team t) const { return heroes[index(t)]; }
};

struct StepResult {
  WorldState world;
  std::vector<Event> events;
};

enum class OutcomeKind : std::uint8_t { Ongoing, Winner, Draw };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Ongoing;
  Team winner = Team::A;  // meaningful only for OutcomeKind::Winner

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Cumulative xp needed to reach `level`.
constexpr int xp_threshold(int level) { return 100 * level * (level - 1) / 2; }

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Lane polyline oriented from `team`'s base toward the enemy.
inline std::vector<Vec2> lane_path(const WorldConfig& c, Lane lane, Team team) {
  std::vector<Vec2> path = c.lane_waypoints[static_cast<std::size_t>(lane)];
  if (team == Team::B) std::reverse(path.begin(), path.end());
  return path;
}

inline Hero make_hero(const WorldConfig& c, Team team, EntityId id) {
  Hero h;
  h.id = id;
  h.team = team;
  h.position = c.base_position[index(team)];
  h.hp = h.max_hp = c.hero_hp;
  h.mana = h.max_mana = c.hero_mana;
  h.attack_damage = c.hero_damage;
  h.attack_range = c.hero_attack_range;
  h.attack_cooldown = c.hero_attack_cooldown;
  h.move_speed = c.hero_move_speed;
  h.gold = c.starting_gold;
  h.unspent_skill_points = 1;
  return h;
}

}  // namespace detail

inline WorldState new_world(const WorldConfig& config) {
  validate(config);
  if (!is_tick_multiple(config.creep_wave_period, config.tick_length))
    throw ConfigError("creep_wave_period must be a multiple of tick_length");

  WorldState w;
  w.config = config;
  w.rng.seed(config.rng_seed);
  for (Team t : {Team::A, Team::B}) w.heroes[index(t)] = detail::make_hero(config, t, w.next_id++);
  for (Team t : {Team::A, Team::B}) {
    Ancient& a = w.ancients[index(t)];
    a.id = w.next_id++;
    a.team = t;
    a.position = config.ancient_position[index(t)];
    a.hp = a.max_hp = config.ancient_hp;
  }
  for (Team t : {Team::A, Team::B}) {
    for (std::size_t l = 0; l < kLaneCount; ++l) {
      const auto lane = static_cast<Lane>(l);
      const auto path = detail::lane_path(config, lane, t);
      const double len = polyline_length(path);
      const int n = config.towers_per_lane;
      for (int k = 0; k < n; ++k) {
        const double f = n == 1 ? config.tower_outer_fraction
                                : config.tower_outer_fraction -
                                      k * (config.tower_outer_fraction - config.tower_inner_fraction) / (n - 1);
        Tower tw;
        tw.id = w.next_id++;
        tw.team = t;
        tw.lane = lane;
        tw.lane_index = k;
        tw.position = point_along(path, f * len);
        tw.hp = tw.max_hp = config.tower_hp;
        tw.attack_damage = config.tower_damage;
        tw.attack_range = config.tower_attack_range;
        tw.attack_cooldown = config.tower_attack_cooldown;
        w.towers.push_back(tw);
      }
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

struct UnitView {
  EntityId id = kNoEntity;
  UnitKind kind = UnitKind::Creep;
  Team team = Team::A;
  Vec2 position;
  double hp = 0.0;
  double max_hp = 0.0;

  friend bool operator==(const UnitView&, const UnitView&) = default;
};

// Live unit with the given id, or nullopt if it is unknown or dead.
inline std::optional<UnitView> find_unit(const WorldState& w, EntityId id) {
  for (const Hero& h : w.heroes)
    if (h.id == id) {
      if (!h.alive) return std::nullopt;
      return UnitView{h.id, UnitKind::Hero, h.team, h.position, h.hp, h.max_hp};
    }
  for (const Ancient& a : w.ancients)
    if (a.id == id) {
      if (a.hp <= 0) return std::nullopt;
      return UnitView{a.id, UnitKind::Ancient, a.team, a.position, a.hp, a.max_hp};
    }
  auto tw = std::lower_bound(w.towers.begin(), w.towers.end(), id,
                             [](const Tower& t, EntityId v) { return t.id < v; });
  if (tw != w.towers.end() && tw->id == id) {
    if (!tw->alive) return std::nullopt;
    return UnitView{tw->id, UnitKind::Tower, tw->team, tw->position, tw->hp, tw->max_hp};
  }
  auto cr = std::lower_bound(w.creeps.begin(), w.creeps.end(), id,
                             [](const Creep& c, EntityId v) { return c.id < v; });
  if (cr != w.creeps.end() && cr->id == id)
    return UnitView{cr->id, UnitKind::Creep, cr->team, cr->position, cr->hp, cr->max_hp};
  return std::nullopt;
}

inline FeatureSnapshot features_of(const WorldState& w, Team team, int t = 0) {
  const Hero& h = w.hero(team);
  return FeatureSnapshot{t, team, h.level, h.deaths, w.towers_destroyed[index(team)]};
}

inline Outcome check_victory(const WorldState& w) {
  const bool a_down = w.ancients[index(Team::A)].hp <= 0;
  const bool b_down = w.ancients[index(Team::B)].hp <= 0;
  if (a_down && b_down) return {OutcomeKind::Draw};
  if (b_down) return {OutcomeKind::Winner, Team::A};
  if (a_down) return {OutcomeKind::Winner, Team::B};
  if (w.tick >= ticks_in(w.config.match_time_limit, w.config.tick_length)) {
    const int pa = performance(features_of(w, Team::A));
    const int pb = performance(features_of(w, Team::B));
    if (pa == pb) return {OutcomeKind::Draw};
    return {OutcomeKind::Winner, pa > pb ? Team::A : Team::B};
  }
  return {};
}

// An ancient takes no damage while its team still has a tower standing.
inline bool ancient_protected(const WorldState& w, Team team) {
  if (!w.config.ancient_requires_towers) return false;
  return std::any_of(w.towers.begin(), w.towers.end(), [team](const Tower& t) { return t.team == team && t.alive; });
}

// ---------------------------------------------------------------------------
// Experience
// ---------------------------------------------------------------------------

struct DyingUnit {
  Team team = Team::A;
  Vec2 position;
  int xp_bounty = 0;
};

inline void level_up(const WorldConfig& c, Hero& h, double now, std::vector<Event>& events) {
  ++h.level;
  ++h.unspent_skill_points;
  h.max_hp += c.hero_hp_per_level;
  h.hp += c.hero_hp_per_level;
  h.max_mana += c.hero_mana_per_level;
  h.mana += c.hero_mana_per_level;
  h.attack_damage += c.hero_damage_per_level;
  events.push_back({EventKind::LevelUp, now, h.team, h.id, kNoEntity, h.level});
}

inline void add_experience(const WorldConfig& c, Hero& h, int amount, double now, std::vector<Event>& events) {
  h.xp += amount;
  while (h.level < c.max_hero_level && h.xp >= xp_threshold(h.level + 1)) level_up(c, h, now, events);
}

// Splits the bounty equally among live enemy heroes within xp_share_radius.
inline void award_experience(WorldState& w, const DyingUnit& dying, std::vector<Event>& events) {
  std::vector<Hero*> recipients;
  for (Hero& h : w.heroes)
    if (h.alive && h.team != dying.team && distance(h.position, dying.position) <= w.config.xp_share_radius)
      recipients.push_back(&h);
  if (recipients.empty()) return;
  const int share = dying.xp_bounty / static_cast<int>(recipients.size());
  for (Hero* h : recipients) add_experience(w.config, *h, share, w.sim_time, events);
}

inline WorldState award_experience(WorldState w, const DyingUnit& dying) {
  std::vector<Event> ignored;
  award_experience(w, dying, ignored);
  return w;
}

// ---------------------------------------------------------------------------
// Step
// ---------------------------------------------------------------------------

namespace detail {

struct PendingHit {
  EntityId source = kNoEntity;
  UnitKind source_kind = UnitKind::Creep;
  Team source_team = Team::A;
  EntityId target = kNoEntity;
  double damage = 0.0;
  double freeze_seconds = 0.0;
};

struct HeroPlan {
  std::optional<Vec2> move_to;
  EntityId attack = kNoEntity;
  std::optional<int> cast_slot;
  EntityId cast_target = kNoEntity;
};

struct KillCredit {
  EntityId killer = kNoEntity;
  UnitKind kind = UnitKind::Creep;
  Team team = Team::A;
};

inline void clamp_hero(Hero& h) {
  h.hp = std::clamp(h.hp, 0.0, h.max_hp);
  h.mana = std::clamp(h.mana, 0.0, h.max_mana);
}

inline void tick_timers(WorldState& w, double prev, double now, double dt) {
  const WorldConfig& c = w.config;
  for (Hero& h : w.heroes) {
    double& carry = w.income_carry[index(h.team)];
    carry += c.periodic_gold_income * dt;
    const double whole = std::floor(carry);
    h.gold += static_cast<int>(whole);
    carry -= whole;
    if (!h.alive) continue;
    h.attack_timer = std::max(0.0, h.attack_timer - dt);
    for (Spell& s : h.spells) s.cooldown_remaining = std::max(0.0, s.cooldown_remaining - dt);
    h.hp += c.hero_hp_regen * dt;
    h.mana += c.hero_mana_regen * dt;
    for (const Regen& r : h.regens) {
      const double overlap = std::max(0.0, std::min(now, r.until) - prev);
      h.hp += r.hp_per_second * overlap;
      h.mana += r.mana_per_second * overlap;
    }
    std::erase_if(h.regens, [now](const Regen& r) { return r.until <= now; });
    if (distance(h.position, c.base_position[index(h.team)]) <= c.shop_radius) {
      h.hp += c.fountain_regen_fraction * h.max_hp * dt;
      h.mana += c.fountain_regen_fraction * h.max_mana * dt;
    }
    clamp_hero(h);
  }
  for (Creep& cr : w.creeps) cr.attack_timer = std::max(0.0, cr.attack_timer - dt);
  for (Tower& t : w.towers) t.attack_timer = std::max(0.0, t.attack_timer - dt);
}

inline void respawn_heroes(WorldState& w, double now, std::vector<Event>& events) {
  for (Hero& h : w.heroes) {
    if (h.alive || h.respawn_at > now + 1e-9) continue;
    h.alive = true;
    h.position = w.config.base_position[index(h.team)];
    h.hp = h.max_hp;
    h.mana = h.max_mana;
    h.frozen_until = 0.0;
    h.attack_timer = 0.0;
    h.retreating = false;
    h.regens.clear();
    events.push_back({EventKind::HeroRespawned, now, h.team, h.id});
  }
}

inline void reject(std::vector<Event>& events, double now, const Hero& h, ActionKind k, EntityId other = kNoEntity) {
  events.push_back({EventKind::InvalidAction, now, h.team, h.id, other, static_cast<int>(k)});
}

inline bool is_enemy_target(const std::optional<UnitView>& u, Team self) { return u && u->team != self; }

inline HeroPlan plan_hero(WorldState& w, Hero& h, const Action& act, double now, std::vector<Event>& events) {
  HeroPlan plan;
  const WorldConfig& c = w.config;
  const bool frozen = h.frozen_until > now;
  const bool at_shop = distance(h.position, c.base_position[index(h.team)]) <= c.shop_radius;

  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, action::Idle>) {
        } else if constexpr (std::is_same_v<T, action::Move>) {
          h.retreating = false;
          if (!frozen) plan.move_to = a.target;
        } else if constexpr (std::is_same_v<T, action::Retreat>) {
          h.retreating = true;
          if (!frozen) plan.move_to = c.base_position[index(h.team)];
        } else if constexpr (std::is_same_v<T, action::AttackUnit>) {
          h.retreating = false;
          const auto target = find_unit(w, a.target);
          if (!is_enemy_target(target, h.team)) {
            reject(events, now, h, ActionKind::AttackUnit, a.target);
            return;
          }
          if (frozen) return;
          plan.attack = a.target;
          if (distance(h.position, target->position) > h.attack_range) plan.move_to = target->position;
        } else if constexpr (std::is_same_v<T, action::CastSpell>) {
          h.retreating = false;
          const auto target = find_unit(w, a.target);
          if (a.slot < 0 || a.slot >= kSpellSlots) {
            reject(events, now, h, ActionKind::CastSpell, a.target);
            return;
          }
          const Spell& s = h.spells[static_cast<std::size_t>(a.slot)];
          if (s.level == 0 || s.cooldown_remaining > 0 || h.mana < s.mana_cost() || !is_enemy_target(target, h.team)) {
            reject(events, now, h, ActionKind::CastSpell, a.target);
            return;
          }
          if (frozen) return;
          plan.cast_slot = a.slot;
          plan.cast_target = a.target;
          if (distance(h.position, target->position) > c.spell_cast_range) plan.move_to = target->position;
        } else if constexpr (std::is_same_v<T, action::BuyItem>) {
          const int cost = item_cost(a.item);
          const bool slot_free = is_consumable(a.item) || h.permanent_items() < c.max_permanent_items;
          if (!at_shop || h.gold < cost || !slot_free) {
            reject(events, now, h, ActionKind::BuyItem);
            return;
          }
          h.gold -= cost;
          h.inventory.push_back(a.item);
          switch (a.item) {
            case ItemKind::HealthPotion: break;
            case ItemKind::StrengthCharm:
              h.max_hp += c.charm_hp;
              h.hp += c.charm_hp;
              h.attack_damage += c.charm_damage;
              break;
            case ItemKind::SpeedBoots: h.move_speed *= c.boots_speed_factor; break;
            case ItemKind::IntelligenceGem:
              h.max_mana += c.gem_mana;
              h.mana += c.gem_mana;
              h.spell_amp += c.gem_spell_amp;
              break;
          }
          events.push_back({EventKind::ItemPurchased, now, h.team, h.id, kNoEntity, static_cast<int>(a.item)});
        } else if constexpr (std::is_same_v<T, action::UseItem>) {
          auto it = std::find(h.inventory.begin(), h.inventory.end(), a.item);
          if (!is_consumable(a.item) || it == h.inventory.end()) {
            reject(events, now, h, ActionKind::UseItem);
            return;
          }
          h.inventory.erase(it);
          h.regens.push_back({c.potion_heal / c.potion_duration, 0.0, now + c.potion_duration, true});
          events.push_back({EventKind::ItemUsed, now, h.team, h.id, kNoEntity, static_cast<int>(a.item)});
        } else if constexpr (std::is_same_v<T, action::LearnSpell>) {
          if (a.slot < 0 || a.slot >= kSpellSlots || h.unspent_skill_points <= 0) {
            reject(events, now, h, ActionKind::LearnSpell);
            return;
          }
          Spell& s = h.spells[static_cast<std::size_t>(a.slot)];
          if (s.level >= kMaxSpellLevel || s.level + 1 > h.level) {
            reject(events, now, h, ActionKind::LearnSpell);
            return;
          }
          ++s.level;
          --h.unspent_skill_points;
          events.push_back({EventKind::SpellLearned, now, h.team, h.id, kNoEntity, a.slot});
        }
      },
      act);
  return plan;
}

// Nearest live enemy of `team` within `radius` of `from`; ties by lowest id.
inline std::optional<UnitView> nearest_enemy(const WorldState& w, Team team, Vec2 from, double radius,
                                             bool include_structures) {
  std::optional<UnitView> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const UnitView& u) {
    const double d = distance(from, u.position);
    if (d > radius) return;
    if (d < best_d || (d == best_d && best && u.id < best->id)) {
      best = u;
      best_d = d;
    }
  };
  for (const Hero& h : w.heroes)
    if (h.alive && h.team != team) consider({h.id, UnitKind::Hero, h.team, h.position, h.hp, h.max_hp});
  for (const Creep& c : w.creeps)
    if (c.team != team) consider({c.id, UnitKind::Creep, c.team, c.position, c.hp, c.max_hp});
  if (include_structures) {
    for (const Tower& t : w.towers)
      if (t.alive && t.team != team) consider({t.id, UnitKind::Tower, t.team, t.position, t.hp, t.max_hp});
    for (const Ancient& a : w.ancients)
      if (a.hp > 0 && a.team != team) consider({a.id, UnitKind::Ancient, a.team, a.position, a.hp, a.max_hp});
  }
  return best;
}

inline void spawn_wave(WorldState& w, double now, std::vector<Event>& events) {
  const WorldConfig& c = w.config;
  for (Team t : {Team::A, Team::B}) {
    for (std::size_t l = 0; l < kLaneCount; ++l) {
      const auto lane = static_cast<Lane>(l);
      const Vec2 start = lane_path(c, lane, t).front();
      for (int i = 0; i < c.creeps_per_wave; ++i) {
        Creep cr;
        cr.id = w.next_id++;
        cr.team = t;
        cr.lane = lane;
        const double jx = (uniform01(w.rng) * 2.0 - 1.0) * c.creep_spawn_jitter;
        const double jy = (uniform01(w.rng) * 2.0 - 1.0) * c.creep_spawn_jitter;
        cr.position = clamp_to(start + Vec2{jx, jy}, c.map_size);
        cr.hp = cr.max_hp = c.creep_hp;
        cr.attack_damage = c.creep_damage;
        cr.attack_range = c.creep_attack_range;
        cr.attack_cooldown = c.creep_attack_cooldown;
        cr.attack_timer = uniform01(w.rng) * c.creep_attack_cooldown;
        cr.move_speed = c.creep_move_speed;
        cr.xp_bounty = c.creep_xp;
        cr.gold_bounty = c.creep_gold;
        w.creeps.push_back(cr);
      }
    }
    events.push_back({EventKind::WaveSpawned, now, t, kNoEntity, kNoEntity, c.creeps_per_wave});
  }
}

}  // namespace detail

// Advances the world by one tick in place and returns the tick's events.
// Movement is resolved before attacks and all damage lands simultaneously, so
// neither team gains from evaluation order.
inline std::vector<Event> advance(WorldState& w, const TeamActions& actions) {
  if (check_victory(w).kind != OutcomeKind::Ongoing) throw ContractViolation("step called on a finished match");

  const WorldConfig& c = w.config;
  const double dt = c.tick_length;
  const double prev = w.sim_time;
  ++w.tick;
  w.sim_time = static_cast<double>(w.tick) * dt;
  const double now = w.sim_time;
  std::vector<Event> events;

  detail::tick_timers(w, prev, now, dt);
  detail::respawn_heroes(w, now, events);

  // Alternate hero resolution order each tick.
  const std::array<Team, 2> order =
      (w.tick % 2 == 0) ? std::array<Team, 2>{Team::A, Team::B} : std::array<Team, 2>{Team::B, Team::A};

  // Plans are computed from start-of-tick positions.
  std::array<detail::HeroPlan, 2> plans;
  for (Team t : order) {
    Hero& h = w.hero(t);
    if (h.alive) plans[index(t)] = detail::plan_hero(w, h, actions[index(t)], now, events);
  }

  struct CreepPlan {
    std::optional<Vec2> move_to;
    EntityId attack = kNoEntity;
  };
  std::vector<CreepPlan> creep_plans(w.creeps.size());
  for (std::size_t i = 0; i < w.creeps.size(); ++i) {
    const Creep& cr = w.creeps[i];
    if (cr.frozen_until > now) continue;
    if (auto target = detail::nearest_enemy(w, cr.team, cr.position, c.creep_acquire_radius, true)) {
      creep_plans[i].attack = target->id;
      if (distance(cr.position, target->position) > cr.attack_range) creep_plans[i].move_to = target->position;
    } else {
      const auto path = detail::lane_path(c, cr.lane, cr.team);
      if (cr.next_waypoint < path.size()) creep_plans[i].move_to = path[cr.next_waypoint];
    }
  }

  // Movement.
  for (Team t : order) {
    Hero& h = w.hero(t);
    const auto& p = plans[index(t)];
    if (h.alive && p.move_to) h.position = clamp_to(move_toward(h.position, *p.move_to, h.move_speed * dt), c.map_size);
  }
  for (std::size_t i = 0; i < w.creeps.size(); ++i) {
    Creep& cr = w.creeps[i];
    const auto& p = creep_plans[i];
    if (!p.move_to) continue;
    cr.position = clamp_to(move_toward(cr.position, *p.move_to, cr.move_speed * dt), c.map_size);
    if (p.attack == kNoEntity) {
      const auto path = detail::lane_path(c, cr.lane, cr.team);
      if (cr.next_waypoint < path.size() && distance(cr.position, path[cr.next_waypoint]) < 1e-6)
        ++cr.next_waypoint;
    }
  }

  // Attacks against post-movement positions.
  std::vector<detail::PendingHit> hits;
  for (Team t : order) {
    Hero& h = w.hero(t);
    const auto& p = plans[index(t)];
    if (!h.alive) continue;
    if (p.attack != kNoEntity && h.attack_timer <= 0.0) {
      const auto target = find_unit(w, p.attack);
      if (target && distance(h.position, target->position) <= h.attack_range) {
        hits.push_back({h.id, UnitKind::Hero, h.team, p.attack, std::max(1.0, h.attack_damage), 0.0});
        h.attack_timer = h.attack_cooldown;
      }
    }
    if (p.cast_slot) {
      const auto target = find_unit(w, p.cast_target);
      Spell& s = h.spells[static_cast<std::size_t>(*p.cast_slot)];
      if (target && distance(h.position, target->position) <= c.spell_cast_range) {
        h.mana -= s.mana_cost();
        s.cooldown_remaining = s.cooldown();
        const double amp = h.spell_amp;
        switch (s.kind) {
          case SpellKind::Nuke:
            hits.push_back({h.id, UnitKind::Hero, h.team, p.cast_target, s.magnitude() * amp * c.spell_damage_scale, 0.0});
            break;
          case SpellKind::Freeze:
            hits.push_back({h.id, UnitKind::Hero, h.team, p.cast_target, freeze_damage(s.level) * amp * c.spell_damage_scale,
                            s.magnitude()});
            break;
          case SpellKind::Drain: {
            const double rate = s.magnitude() * amp / kDrainDuration;
            h.regens.push_back({rate, rate, now + kDrainDuration, false});
            break;
          }
        }
        events.push_back({EventKind::SpellCast, now, h.team, h.id, p.cast_target, static_cast<int>(s.kind)});
      }
    }
  }
  for (std::size_t i = 0; i < w.creeps.size(); ++i) {
    Creep& cr = w.creeps[i];
    const EntityId target_id = creep_plans[i].attack;
    if (target_id == kNoEntity || cr.attack_timer > 0.0) continue;
    const auto target = find_unit(w, target_id);
    if (target && distance(cr.position, target->position) <= cr.attack_range) {
      hits.push_back({cr.id, UnitKind::Creep, cr.team, target_id, std::max(1.0, cr.attack_damage), 0.0});
      cr.attack_timer = cr.attack_cooldown;
    }
  }
  for (Tower& tw : w.towers) {
    if (!tw.alive || tw.attack_timer > 0.0) continue;
    // Creeps draw tower fire before heroes do.
    std::optional<UnitView> target;
    double best = std::numeric_limits<double>::infinity();
    for (const Creep& cr : w.creeps) {
      const double d = distance(tw.position, cr.position);
      if (cr.team != tw.team && d <= tw.attack_range && d < best) {
        best = d;
        target = UnitView{cr.id, UnitKind::Creep, cr.team, cr.position, cr.hp, cr.max_hp};
      }
    }
    if (!target) {
      const Hero& enemy = w.hero(opponent(tw.team));
      if (enemy.alive && distance(tw.position, enemy.position) <= tw.attack_range)
        target = UnitView{enemy.id, UnitKind::Hero, enemy.team, enemy.position, enemy.hp, enemy.max_hp};
    }
    if (target) {
      hits.push_back({tw.id, UnitKind::Tower, tw.team, target->id, std::max(1.0, tw.attack_damage), 0.0});
      tw.attack_timer = tw.attack_cooldown;
    }
  }

  // Damage lands simultaneously; the hit that crosses zero gets the credit.
  std::vector<std::pair<EntityId, detail::KillCredit>> credits;
  auto credit = [&](EntityId victim, const detail::PendingHit& hit) {
    credits.emplace_back(victim, detail::KillCredit{hit.source, hit.source_kind, hit.source_team});
  };
  for (const auto& hit : hits) {
    bool handled = false;
    for (Hero& h : w.heroes) {
      if (h.id != hit.target) continue;
      handled = true;
      if (!h.alive || h.hp <= 0.0) break;
      h.hp = std::max(0.0, h.hp - hit.damage);
      if (h.hp <= 0.0) credit(h.id, hit);
      else if (hit.freeze_seconds > 0.0) h.frozen_until = std::max(h.frozen_until, now + hit.freeze_seconds);
    }
    if (handled) continue;
    for (Ancient& a : w.ancients) {
      if (a.id != hit.target) continue;
      handled = true;
      if (a.hp <= 0.0 || ancient_protected(w, a.team)) break;
      a.hp = std::max(0.0, a.hp - hit.damage);
      if (a.hp <= 0.0) events.push_back({EventKind::AncientDestroyed, now, a.team, a.id, hit.source});
    }
    if (handled) continue;
    for (Tower& tw : w.towers) {
      if (tw.id != hit.target) continue;
      handled = true;
      if (!tw.alive || tw.hp <= 0.0) break;
      tw.hp = std::max(0.0, tw.hp - hit.damage);
      tw.last_damaged_at = now;
      if (tw.hp <= 0.0) credit(tw.id, hit);
    }
    if (handled) continue;
    for (Creep& cr : w.creeps) {
      if (cr.id != hit.target) continue;
      if (cr.hp <= 0.0) break;
      cr.hp = std::max(0.0, cr.hp - hit.damage);
      if (cr.hp <= 0.0) credit(cr.id, hit);
      else if (hit.freeze_seconds > 0.0) cr.frozen_until = std::max(cr.frozen_until, now + hit.freeze_seconds);
      break;
    }
  }
  auto killer_of = [&](EntityId victim) {
    for (const auto& [id, kc] : credits)
      if (id == victim) return kc;
    return detail::KillCredit{};
  };
  auto hero_killer = [&](const detail::KillCredit& kc, Team victim_team) -> Hero* {
    if (kc.kind != UnitKind::Hero || kc.team == victim_team) return nullptr;
    Hero& h = w.hero(kc.team);
    return h.id == kc.killer ? &h : nullptr;
  };

  // Deaths: heroes, creeps, towers, in id order.
  for (Hero& h : w.heroes) {
    if (!h.alive || h.hp > 0.0) continue;
    const auto kc = killer_of(h.id);
    h.alive = false;
    ++h.deaths;
    h.respawn_at = now + c.respawn_delay_base + c.respawn_delay_per_level * h.level;
    h.retreating = false;
    h.frozen_until = 0.0;
    h.regens.clear();
    events.push_back({EventKind::HeroKilled, now, h.team, h.id, kc.killer, h.deaths});
    if (Hero* k = hero_killer(kc, h.team)) k->gold += c.hero_kill_gold;
    award_experience(w, DyingUnit{h.team, h.position, c.hero_kill_xp}, events);
  }
  for (const Creep& cr : w.creeps) {
    if (cr.hp > 0.0) continue;
    const auto kc = killer_of(cr.id);
    events.push_back({EventKind::CreepKilled, now, cr.team, cr.id, kc.killer, 0});
    if (Hero* k = hero_killer(kc, cr.team)) k->gold += cr.gold_bounty;
    award_experience(w, DyingUnit{cr.team, cr.position, cr.xp_bounty}, events);
  }
  std::erase_if(w.creeps, [](const Creep& cr) { return cr.hp <= 0.0; });
  for (Tower& tw : w.towers) {
    if (!tw.alive || tw.hp > 0.0) continue;
    const auto kc = killer_of(tw.id);
    tw.alive = false;
    const Team razer = opponent(tw.team);
    ++w.towers_destroyed[index(razer)];
    w.hero(razer).gold += c.tower_gold;
    events.push_back({EventKind::TowerDestroyed, now, tw.team, tw.id, kc.killer, w.towers_destroyed[index(razer)]});
  }

  if (w.tick % ticks_in(c.creep_wave_period, dt) == 0) detail::spawn_wave(w, now, events);
  return events;
}

inline StepResult step(WorldState world, const TeamActions& actions) {
  auto events = advance(world, actions);
  return {std::move(world), std::move(events)};
}

// ---------------------------------------------------------------------------
// Observation
// ---------------------------------------------------------------------------

struct TowerView {
  EntityId id = kNoEntity;
  Team team = Team::A;
  Lane lane = Lane::Top;
  int lane_index = 0;
  Vec2 position;
  double hp = 0.0;
  double max_hp = 0.0;
  bool alive = true;
  bool under_attack = false;

  friend bool operator==(const TowerView&, const TowerView&) = default;
};

// What one team's agent may see.
struct Observation {
  Team team = Team::A;
  double sim_time = 0.0;
  Hero hero;
  Vec2 base;
  bool at_shop = false;
  double spell_cast_range = 0.0;
  int max_permanent_items = 0;
  double tower_attack_range = 0.0;
  std::vector<UnitView> visible_enemies;  // heroes and creeps within sight, by id
  std::vector<TowerView> towers;          // both teams, always visible
  UnitView enemy_ancient;
  std::vector<Vec2> allied_creeps;  // by id

  friend bool operator==(const Observation&, const Observation&) = default;
};

inline Observation observe(const WorldState& w, Team team) {
  const WorldConfig& c = w.config;
  Observation o;
  o.team = team;
  o.sim_time = w.sim_time;
  o.hero = w.hero(team);
  o.base = c.base_position[index(team)];
  o.at_shop = o.hero.alive && distance(o.hero.position, o.base) <= c.shop_radius;
  o.spell_cast_range = c.spell_cast_range;
  o.max_permanent_items = c.max_permanent_items;
  o.tower_attack_range = c.tower_attack_range;
  const Vec2 eye = o.hero.position;
  const Hero& enemy = w.hero(opponent(team));
  if (o.hero.alive && enemy.alive && distance(eye, enemy.position) <= c.sight_radius)
    o.visible_enemies.push_back({enemy.id, UnitKind::Hero, enemy.team, enemy.position, enemy.hp, enemy.max_hp});
  if (o.hero.alive)
    for (const Creep& cr : w.creeps)
      if (cr.team != team && distance(eye, cr.position) <= c.sight_radius)
        o.visible_enemies.push_back({cr.id, UnitKind::Creep, cr.team, cr.position, cr.hp, cr.max_hp});
  std::sort(o.visible_enemies.begin(), o.visible_enemies.end(),
            [](const UnitView& a, const UnitView& b) { return a.id < b.id; });
  for (const Tower& tw : w.towers)
    o.towers.push_back({tw.id, tw.team, tw.lane, tw.lane_index, tw.position, tw.hp, tw.max_hp, tw.alive,
                        tw.alive && w.sim_time - tw.last_damaged_at <= c.under_attack_window});
  const Ancient& a = w.ancients[index(opponent(team))];
  o.enemy_ancient = {a.id, UnitKind::Ancient, a.team, a.position, a.hp, a.max_hp};
  for (const Creep& cr : w.creeps)
    if (cr.team == team) o.allied_creeps.push_back(cr.position);
  return o;
}

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

// 64-bit FNV-1a over the dynamic state, for determinism checks.
class StateHasher {
 public:
  template <typename T>
    requires std::is_arithmetic_v<T> || std::is_enum_v<T>
  void add(T v) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (unsigned char b : bytes) {
      hash_ ^= b;
      hash_ *= 0x00000100000001b3ull;
    }
  }
  void add(Vec2 v) {
    add(v.x);
    add(v.y);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

inline std::uint64_t state_hash(const WorldState& w) {
  StateHasher s;
  s.add(w.tick);
  s.add(w.sim_time);
  for (const Hero& h : w.heroes) {
    s.add(h.id);
    s.add(h.position);
    s.add(h.hp);
    s.add(h.mana);
    s.add(h.max_hp);
    s.add(h.max_mana);
    s.add(h.attack_damage);
    s.add(h.attack_timer);
    s.add(h.move_speed);
    s.add(h.level);
    s.add(h.xp);
    s.add(h.gold);
    s.add(h.deaths);
    s.add(h.alive);
    s.add(h.respawn_at);
    s.add(h.frozen_until);
    s.add(h.unspent_skill_points);
    for (const Spell& sp : h.spells) {
      s.add(sp.level);
      s.add(sp.cooldown_remaining);
    }
    for (ItemKind k : h.inventory) s.add(k);
  }
  for (const Creep& cr : w.creeps) {
    s.add(cr.id);
    s.add(cr.position);
    s.add(cr.hp);
    s.add(cr.attack_timer);
  }
  for (const Tower& t : w.towers) {
    s.add(t.hp);
    s.add(t.alive);
    s.add(t.attack_timer);
  }
  for (const Ancient& a : w.ancients) s.add(a.hp);
  s.add(w.towers_destroyed[0]);
  s.add(w.towers_destroyed[1]);
  s.add(w.next_id);
  std::mt19937_64 probe = w.rng;
  s.add(probe());
  return s.value();
}

}  // namespace mobadda
