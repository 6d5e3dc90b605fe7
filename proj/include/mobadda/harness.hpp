#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "agents.hpp"
#include "dda.hpp"
#include "errors.hpp"
#include "settings.hpp"
#include "telemetry.hpp"
#include "world.hpp"

namespace mobadda {

// A match-time failure that is not a configuration problem.
class RuntimeFailure : public std::runtime_error {
 public:
  RuntimeFailure(const std::string& what, std::uint64_t seed) : std::runtime_error(what), seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

struct PlayerRole {
  bool adaptive = false;
  DifficultyMode mode = DifficultyMode::Regular;

  static PlayerRole fixed(DifficultyMode m) { return {false, m}; }
  static PlayerRole dynamic() { return {true, DifficultyMode::Regular}; }
  std::string label() const { return adaptive ? "adaptive" : std::string(to_string(mode)); }
};

struct MatchResult {
  MatchSummary summary;
  Gamelog gamelog;
  std::vector<AlphaEntry> alpha_history;
  Outcome outcome;
  std::uint64_t final_state_hash = 0;
};

// Player A is the analyzed player and always plays a fixed tier; player B is
// either fixed or driven by the difficulty controller.
inline MatchResult run_match(const Settings& settings, PlayerRole a, PlayerRole b, std::uint64_t seed) {
  validate(settings);
  if (a.adaptive) throw ConfigError("only player B may be adaptive");

  WorldConfig wc = settings.world;
  wc.rng_seed = seed;
  WorldState world = new_world(wc);

  DdaConfig dc = settings.dda;
  DdaState dda = DdaState::from_config(dc, Team::A);
  DifficultyMode mode_b = b.adaptive ? dda.current_mode : b.mode;

  MatchResult result;
  Gamelog& log = result.gamelog;
  log.header.seed = seed;
  log.header.player_a = a.label();
  log.header.player_b = b.label();
  log.header.beta = dc.beta;
  log.header.interval = settings.gamelog_interval;

  const std::int64_t eval_ticks = ticks_in(dc.evaluation_period, wc.tick_length);
  const std::int64_t log_ticks = ticks_in(settings.gamelog_interval, wc.tick_length);

  if (b.adaptive) evaluate_tick(dda, world);
  record(log, world, a.mode, mode_b);

  ControllerNote note;
  while (check_victory(world).kind == OutcomeKind::Ongoing) {
    const TeamActions actions{decide(a.mode, observe(world, Team::A), settings.behavior),
                              decide(mode_b, observe(world, Team::B), settings.behavior)};
    advance(world, actions);
    if (b.adaptive && world.tick % eval_ticks == 0) {
      const Evaluation ev = evaluate_tick(dda, world);
      mode_b = ev.mode;
      note.decision = ev.decision;
      ++note.evaluations;
      if (ev.decision != AdjustmentDecision::Keep) ++note.adjustments;
    }
    if (world.tick % log_ticks == 0) {
      record(log, world, a.mode, mode_b, note);
      note = {};
    }
  }

  result.outcome = check_victory(world);
  result.alpha_history = std::move(dda.alpha_history);
  result.summary = summarize(log, result.outcome, world.sim_time, settings.balance_threshold, settings.failure_rules);
  result.final_state_hash = state_hash(world);
  return result;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string gamelog_text(const Gamelog& log) {
  std::ostringstream o;
  write_gamelog(o, log);
  return o.str();
}

inline std::string gamelog_filename(std::uint64_t seed) { return "match_" + std::to_string(seed) + ".jsonl"; }

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class Opponent : std::uint8_t { Easy, Regular, Hard, Baseline };

inline Opponent parse_opponent(std::string_view s) {
  if (s == "baseline") return Opponent::Baseline;
  switch (parse_mode(s)) {
    case DifficultyMode::Easy: return Opponent::Easy;
    case DifficultyMode::Regular: return Opponent::Regular;
    case DifficultyMode::Hard: return Opponent::Hard;
  }
  return Opponent::Regular;
}

inline std::pair<PlayerRole, PlayerRole> roles_for(Opponent o) {
  switch (o) {
    case Opponent::Easy: return {PlayerRole::fixed(DifficultyMode::Easy), PlayerRole::dynamic()};
    case Opponent::Regular: return {PlayerRole::fixed(DifficultyMode::Regular), PlayerRole::dynamic()};
    case Opponent::Hard: return {PlayerRole::fixed(DifficultyMode::Hard), PlayerRole::dynamic()};
    case Opponent::Baseline: return {PlayerRole::fixed(DifficultyMode::Easy), PlayerRole::fixed(DifficultyMode::Hard)};
  }
  return {};
}

struct ExperimentSpec {
  std::string name = "experiment";
  Opponent opponent = Opponent::Regular;
  int match_count = 20;
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> seeds;  // overrides base_seed + i when non-empty
  Settings settings;
  std::string output_dir;  // empty: nothing is written
  unsigned jobs = 1;
};

inline std::vector<std::uint64_t> seeds_for(const ExperimentSpec& spec) {
  if (spec.match_count < 1) throw ConfigError("match_count must be >= 1");
  std::vector<std::uint64_t> seeds = spec.seeds;
  if (seeds.empty())
    for (int i = 0; i < spec.match_count; ++i) seeds.push_back(spec.base_seed + static_cast<std::uint64_t>(i));
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("seeds must be pairwise distinct");
  return seeds;
}

struct ExperimentReport {
  std::string name;
  std::string player_a;
  std::string player_b;
  std::vector<MatchSummary> matches;
  int b_wins = 0;  // the adaptive side in campaigns
  int a_wins = 0;
  int draws = 0;
  int balanced = 0;
  int too_slow = 0;
  int oscillating = 0;
  int unclassified = 0;  // unbalanced matches without a failure tag

  double rate(int n) const { return matches.empty() ? 0.0 : static_cast<double>(n) / matches.size(); }
  double b_win_rate() const { return rate(b_wins); }
  double a_win_rate() const { return rate(a_wins); }
  double draw_rate() const { return rate(draws); }
  double balanced_fraction() const { return rate(balanced); }
};

inline ExperimentReport make_report(std::string name, const std::vector<MatchSummary>& summaries) {
  ExperimentReport r;
  r.name = std::move(name);
  r.matches = summaries;
  if (!summaries.empty()) {
    r.player_a = summaries.front().player_a;
    r.player_b = summaries.front().player_b;
  }
  for (const MatchSummary& s : summaries) {
    switch (s.winner) {
      case MatchWinner::A: ++r.a_wins; break;
      case MatchWinner::B: ++r.b_wins; break;
      case MatchWinner::Draw: ++r.draws; break;
    }
    if (s.balanced) {
      ++r.balanced;
      continue;
    }
    switch (s.failure) {
      case FailureMode::TooSlow: ++r.too_slow; break;
      case FailureMode::Oscillating: ++r.oscillating; break;
      case FailureMode::None: ++r.unclassified; break;
    }
  }
  return r;
}

inline std::string report_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["format"] = "mobadda-report";
  j["format_version"] = 1;
  j["name"] = r.name;
  j["player_a"] = r.player_a;
  j["player_b"] = r.player_b;
  j["matches"] = r.matches.size();
  j["b_wins"] = r.b_wins;
  j["a_wins"] = r.a_wins;
  j["draws"] = r.draws;
  j["b_win_rate"] = r.b_win_rate();
  j["a_win_rate"] = r.a_win_rate();
  j["draw_rate"] = r.draw_rate();
  j["balanced_fraction"] = r.balanced_fraction();
  j["too_slow"] = r.too_slow;
  j["oscillating"] = r.oscillating;
  j["unclassified"] = r.unclassified;
  return j.dump(2) + "\n";
}

inline std::string summaries_text(const std::vector<MatchSummary>& summaries) {
  std::ostringstream o;
  write_summaries(o, summaries);
  return o.str();
}

// Runs every seed, `jobs` at a time; results are kept in seed order so the
// report does not depend on scheduling.
inline ExperimentReport run_experiment(const ExperimentSpec& spec, std::vector<MatchResult>* results_out = nullptr) {
  validate(spec.settings);
  const auto seeds = seeds_for(spec);
  const auto [a, b] = roles_for(spec.opponent);

  std::vector<MatchResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        results[i] = run_match(spec.settings, a, b, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(seeds.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw RuntimeFailure("match with seed " + std::to_string(seeds[i]) + " failed: " + e.what(), seeds[i]);
    }
  }

  std::vector<MatchSummary> summaries;
  for (const auto& r : results) summaries.push_back(r.summary);
  ExperimentReport report = make_report(spec.name, summaries);

  if (!spec.output_dir.empty()) {
    const std::filesystem::path dir = std::filesystem::path(spec.output_dir) / spec.name;
    for (const auto& r : results)
      write_text_file(dir / "gamelogs" / gamelog_filename(r.summary.seed), gamelog_text(r.gamelog));
    write_text_file(dir / "summaries.csv", summaries_text(summaries));
    write_text_file(dir / "report.json", report_json(report));
  }
  if (results_out) *results_out = std::move(results);
  return report;
}

// ---------------------------------------------------------------------------
// Curves and tables
// ---------------------------------------------------------------------------

struct Curves {
  std::string p_prime;     // sim_time,p_prime_a,p_prime_b
  std::string cumulative;  // sim_time,cum_p_a,cum_p_b
  std::string alpha;       // sim_time,alpha,mode_b,decision
};

inline Curves make_curves(const Gamelog& log) {
  std::ostringstream pp, cum, al;
  pp << "sim_time,p_prime_a,p_prime_b\n";
  cum << "sim_time,cum_p_a,cum_p_b\n";
  al << "sim_time,alpha,mode_b,decision\n";
  for (const GamelogRecord& r : log.records) {
    const std::string t = format_double(r.sim_time);
    pp << t << ',' << r.players[0].p_prime << ',' << r.players[1].p_prime << '\n';
    cum << t << ',' << r.players[0].cumulative_p << ',' << r.players[1].cumulative_p << '\n';
    al << t << ',' << r.alpha << ',' << to_string(r.mode_b) << ','
       << (r.decision ? to_string(*r.decision) : std::string_view("none")) << '\n';
  }
  return {pp.str(), cum.str(), al.str()};
}

// Writes <stem>_pprime.csv, <stem>_cumulative.csv and <stem>_alpha.csv.
inline void emit_curves(const std::filesystem::path& gamelog_path, const std::filesystem::path& out_dir) {
  std::ifstream in(gamelog_path);
  if (!in) throw FormatError("cannot open gamelog '" + gamelog_path.string() + "'", 0);
  const Curves c = make_curves(read_gamelog(in));
  const std::string stem = gamelog_path.stem().string();
  write_text_file(out_dir / (stem + "_pprime.csv"), c.p_prime);
  write_text_file(out_dir / (stem + "_cumulative.csv"), c.cumulative);
  write_text_file(out_dir / (stem + "_alpha.csv"), c.alpha);
}

inline constexpr std::string_view kTableCsvHeader =
    "format_version,opponent,player_b,matches,b_wins,b_losses,draws,balanced_fraction,too_slow,oscillating";

// One row per report, from player B's point of view.
inline std::string emit_table(const std::vector<ExperimentReport>& reports) {
  std::ostringstream o;
  o << kTableCsvHeader << '\n';
  for (const auto& r : reports)
    o << 1 << ',' << r.player_a << ',' << r.player_b << ',' << r.matches.size() << ',' << r.b_wins << ','
      << r.a_wins << ',' << r.draws << ',' << format_double(r.balanced_fraction()) << ',' << r.too_slow << ','
      << r.oscillating << '\n';
  return o.str();
}

}  // namespace mobadda
