#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dda.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "world.hpp"

namespace mobadda {

inline constexpr int kGamelogFormatVersion = 1;
inline constexpr int kSummaryFormatVersion = 1;
inline constexpr std::string_view kGamelogFormatName = "mobadda-gamelog";

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("bad number '" + std::string(s) + "'", line);
  return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::size_t line) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("bad integer '" + std::string(s) + "'", line);
  return v;
}

// ---------------------------------------------------------------------------
// Gamelog
// ---------------------------------------------------------------------------

struct PlayerRecord {
  FeatureSnapshot features;
  int p = 0;
  int p_prime = 0;  // 0 on the first record
  int cumulative_p = 0;

  friend bool operator==(const PlayerRecord&, const PlayerRecord&) = default;
};

struct GamelogRecord {
  double sim_time = 0.0;
  std::array<PlayerRecord, 2> players;
  int alpha = 0;
  DifficultyMode mode_a = DifficultyMode::Easy;
  DifficultyMode mode_b = DifficultyMode::Regular;
  // Latest controller decision since the previous record, if any.
  std::optional<AdjustmentDecision> decision;
  int evaluations = 0;  // controller evaluations since the previous record
  int adjustments = 0;  // of which Increase or Decrease

  friend bool operator==(const GamelogRecord&, const GamelogRecord&) = default;
};

struct GamelogHeader {
  int format_version = kGamelogFormatVersion;
  std::uint64_t seed = 0;
  std::string player_a;  // "easy" | "regular" | "hard" | "adaptive"
  std::string player_b;
  int beta = 1;
  double interval = 15.0;

  friend bool operator==(const GamelogHeader&, const GamelogHeader&) = default;
};

struct Gamelog {
  GamelogHeader header;
  std::vector<GamelogRecord> records;

  friend bool operator==(const Gamelog&, const Gamelog&) = default;
};

// Controller activity to attach to a record.
struct ControllerNote {
  std::optional<AdjustmentDecision> decision;
  int evaluations = 0;
  int adjustments = 0;
};

// Appends one record for the current world. Records must be exactly
// `header.interval` sim-seconds apart.
inline void record(Gamelog& log, const WorldState& world, DifficultyMode mode_a, DifficultyMode mode_b,
                   const ControllerNote& note = {}) {
  const double interval = log.header.interval;
  if (!log.records.empty()) {
    const double expected = log.records.back().sim_time + interval;
    if (std::abs(world.sim_time - expected) > 1e-9)
      throw ContractViolation("gamelog record at " + format_double(world.sim_time) + " s, expected " +
                              format_double(expected) + " s");
  }
  GamelogRecord r;
  r.sim_time = world.sim_time;
  const int t = static_cast<int>(log.records.size());
  for (Team team : {Team::A, Team::B}) {
    PlayerRecord& pr = r.players[index(team)];
    pr.features = features_of(world, team, t);
    pr.p = performance(pr.features);
    if (log.records.empty()) {
      pr.p_prime = 0;
      pr.cumulative_p = pr.p;
    } else {
      const PlayerRecord& prev = log.records.back().players[index(team)];
      pr.p_prime = delta_performance(pr.features, prev.features);
      pr.cumulative_p = prev.cumulative_p + pr.p_prime;
    }
  }
  r.alpha = alpha(r.players[0].p_prime, r.players[1].p_prime);
  r.mode_a = mode_a;
  r.mode_b = mode_b;
  r.decision = note.decision;
  r.evaluations = note.evaluations;
  r.adjustments = note.adjustments;
  log.records.push_back(r);
}

namespace detail {

inline nlohmann::ordered_json player_json(const PlayerRecord& p) {
  nlohmann::ordered_json j;
  j["level"] = p.features.hero_level;
  j["deaths"] = p.features.hero_deaths;
  j["towers"] = p.features.towers_destroyed;
  j["p"] = p.p;
  j["p_prime"] = p.p_prime;
  j["cum_p"] = p.cumulative_p;
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'", line);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("bad value for '") + key + "'", line);
  }
}

inline DifficultyMode mode_field(const nlohmann::json& j, const char* key, std::size_t line) {
  try {
    return parse_mode(field<std::string>(j, key, line));
  } catch (const ConfigError& e) {
    throw FormatError(e.what(), line);
  }
}

}  // namespace detail

// Line-delimited JSON. Line 1 is the header; each further line is a record
// with fields in this order:
//   sim_time, a{level,deaths,towers,p,p_prime,cum_p}, b{...}, alpha,
//   mode_a, mode_b, decision (string or null), evaluations, adjustments
inline void write_gamelog(std::ostream& out, const Gamelog& log) {
  nlohmann::ordered_json h;
  h["format"] = kGamelogFormatName;
  h["format_version"] = log.header.format_version;
  h["seed"] = log.header.seed;
  h["player_a"] = log.header.player_a;
  h["player_b"] = log.header.player_b;
  h["beta"] = log.header.beta;
  h["interval"] = log.header.interval;
  out << h.dump() << '\n';
  for (const GamelogRecord& r : log.records) {
    nlohmann::ordered_json j;
    j["sim_time"] = r.sim_time;
    j["a"] = detail::player_json(r.players[0]);
    j["b"] = detail::player_json(r.players[1]);
    j["alpha"] = r.alpha;
    j["mode_a"] = std::string(to_string(r.mode_a));
    j["mode_b"] = std::string(to_string(r.mode_b));
    if (r.decision) j["decision"] = std::string(to_string(*r.decision));
    else j["decision"] = nullptr;
    j["evaluations"] = r.evaluations;
    j["adjustments"] = r.adjustments;
    out << j.dump() << '\n';
  }
}

inline Gamelog read_gamelog(std::istream& in) {
  Gamelog log;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      throw FormatError("malformed JSON", line);
    }
    if (!have_header) {
      if (detail::field<std::string>(j, "format", line) != kGamelogFormatName)
        throw FormatError("not a gamelog", line);
      log.header.format_version = detail::field<int>(j, "format_version", line);
      if (log.header.format_version != kGamelogFormatVersion)
        throw FormatError("unsupported gamelog version " + std::to_string(log.header.format_version), line);
      log.header.seed = detail::field<std::uint64_t>(j, "seed", line);
      log.header.player_a = detail::field<std::string>(j, "player_a", line);
      log.header.player_b = detail::field<std::string>(j, "player_b", line);
      log.header.beta = detail::field<int>(j, "beta", line);
      log.header.interval = detail::field<double>(j, "interval", line);
      have_header = true;
      continue;
    }
    GamelogRecord r;
    r.sim_time = detail::field<double>(j, "sim_time", line);
    const int t = static_cast<int>(log.records.size());
    for (Team team : {Team::A, Team::B}) {
      const auto& pj = j.contains(team == Team::A ? "a" : "b") ? j.at(team == Team::A ? "a" : "b") : nlohmann::json();
      if (pj.is_null()) throw FormatError(std::string("missing field '") + (team == Team::A ? "a" : "b") + "'", line);
      PlayerRecord& p = r.players[index(team)];
      p.features = {t, team, detail::field<int>(pj, "level", line), detail::field<int>(pj, "deaths", line),
                    detail::field<int>(pj, "towers", line)};
      p.p = detail::field<int>(pj, "p", line);
      p.p_prime = detail::field<int>(pj, "p_prime", line);
      p.cumulative_p = detail::field<int>(pj, "cum_p", line);
    }
    r.alpha = detail::field<int>(j, "alpha", line);
    r.mode_a = detail::mode_field(j, "mode_a", line);
    r.mode_b = detail::mode_field(j, "mode_b", line);
    if (!j.contains("decision")) throw FormatError("missing field 'decision'", line);
    if (!j.at("decision").is_null()) {
      try {
        r.decision = parse_decision(detail::field<std::string>(j, "decision", line));
      } catch (const ConfigError& e) {
        throw FormatError(e.what(), line);
      }
    }
    r.evaluations = detail::field<int>(j, "evaluations", line);
    r.adjustments = detail::field<int>(j, "adjustments", line);
    log.records.push_back(r);
  }
  if (!have_header) throw FormatError("empty gamelog", line);
  return log;
}

// ---------------------------------------------------------------------------
// Balance and failure classification
// ---------------------------------------------------------------------------

struct BalanceVerdict {
  bool balanced = false;
  double balance_fraction = 0.0;
};

inline BalanceVerdict classify_balance(const Gamelog& log, int beta, double threshold) {
  if (log.records.empty()) throw ContractViolation("classify_balance: empty gamelog");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ContractViolation("classify_balance: threshold must be in (0, 1]");
  int inside = 0;
  for (const GamelogRecord& r : log.records)
    if (std::abs(r.alpha) <= beta) ++inside;
  const double fraction = static_cast<double>(inside) / static_cast<double>(log.records.size());
  return {fraction >= threshold, fraction};
}

enum class FailureMode : std::uint8_t { None, TooSlow, Oscillating };

constexpr std::string_view to_string(FailureMode f) {
  switch (f) {
    case FailureMode::None: return "none";
    case FailureMode::TooSlow: return "too-slow";
    case FailureMode::Oscillating: return "oscillating";
  }
  return "?";
}

inline FailureMode parse_failure_mode(std::string_view s, std::size_t line) {
  if (s == "none") return FailureMode::None;
  if (s == "too-slow") return FailureMode::TooSlow;
  if (s == "oscillating") return FailureMode::Oscillating;
  throw FormatError("unknown failure mode '" + std::string(s) + "'", line);
}

struct FailureRules {
  int too_slow_run = 4;             // contiguous out-of-band records
  double oscillating_fraction = 0.5;  // share of non-Keep decisions
};

struct FailureStats {
  int longest_out_of_band_run = 0;
  int evaluations = 0;
  int adjustments = 0;

  double adjustment_fraction() const {
    return evaluations > 0 ? static_cast<double>(adjustments) / evaluations : 0.0;
  }
};

inline FailureStats failure_stats(const Gamelog& log, int beta) {
  FailureStats s;
  int run = 0;
  for (const GamelogRecord& r : log.records) {
    run = std::abs(r.alpha) > beta ? run + 1 : 0;
    s.longest_out_of_band_run = std::max(s.longest_out_of_band_run, run);
    s.evaluations += r.evaluations;
    s.adjustments += r.adjustments;
  }
  return s;
}

// Tags an unbalanced match with the failure cause. A match meeting neither
// rule outright goes to whichever rule it comes closer to meeting.
inline FailureMode classify_failure(const Gamelog& log, int beta, bool balanced, const FailureRules& rules = {}) {
  if (balanced) return FailureMode::None;
  const FailureStats s = failure_stats(log, beta);
  if (s.longest_out_of_band_run >= rules.too_slow_run) return FailureMode::TooSlow;
  if (s.evaluations > 0 && s.adjustment_fraction() >= rules.oscillating_fraction) return FailureMode::Oscillating;
  const double slow_score = static_cast<double>(s.longest_out_of_band_run) / rules.too_slow_run;
  const double osc_score = s.adjustment_fraction() / rules.oscillating_fraction;
  return osc_score > slow_score ? FailureMode::Oscillating : FailureMode::TooSlow;
}

// ---------------------------------------------------------------------------
// Match summary
// ---------------------------------------------------------------------------

enum class MatchWinner : std::uint8_t { A, B, Draw };

constexpr std::string_view to_string(MatchWinner w) {
  switch (w) {
    case MatchWinner::A: return "A";
    case MatchWinner::B: return "B";
    case MatchWinner::Draw: return "draw";
  }
  return "?";
}

inline MatchWinner winner_of(const Outcome& o) {
  if (o.kind == OutcomeKind::Winner) return o.winner == Team::A ? MatchWinner::A : MatchWinner::B;
  if (o.kind == OutcomeKind::Draw) return MatchWinner::Draw;
  throw ContractViolation("match is still ongoing");
}

struct MatchSummary {
  std::uint64_t seed = 0;
  std::string player_a;
  std::string player_b;
  MatchWinner winner = MatchWinner::Draw;
  double duration = 0.0;
  int adjustments = 0;
  bool balanced = false;
  double balance_fraction = 0.0;
  int final_p_a = 0;
  int final_p_b = 0;
  FailureMode failure = FailureMode::None;
  int records = 0;

  friend bool operator==(const MatchSummary&, const MatchSummary&) = default;
};

inline MatchSummary summarize(const Gamelog& log, const Outcome& victory, double duration, double threshold,
                              const FailureRules& rules = {}) {
  MatchSummary s;
  s.seed = log.header.seed;
  s.player_a = log.header.player_a;
  s.player_b = log.header.player_b;
  s.winner = winner_of(victory);
  s.duration = duration;
  const BalanceVerdict v = classify_balance(log, log.header.beta, threshold);
  s.balanced = v.balanced;
  s.balance_fraction = v.balance_fraction;
  for (const GamelogRecord& r : log.records) s.adjustments += r.adjustments;
  s.final_p_a = log.records.back().players[0].cumulative_p;
  s.final_p_b = log.records.back().players[1].cumulative_p;
  s.failure = classify_failure(log, log.header.beta, v.balanced, rules);
  s.records = static_cast<int>(log.records.size());
  return s;
}

inline constexpr std::string_view kSummaryCsvHeader =
    "format_version,seed,player_a,player_b,winner,duration,adjustments,balanced,balance_fraction,final_p_a,"
    "final_p_b,failure_mode,records";

inline std::string summary_csv_row(const MatchSummary& s) {
  std::ostringstream o;
  o << kSummaryFormatVersion << ',' << s.seed << ',' << s.player_a << ',' << s.player_b << ','
    << to_string(s.winner) << ',' << format_double(s.duration) << ',' << s.adjustments << ','
    << (s.balanced ? "true" : "false") << ',' << format_double(s.balance_fraction) << ',' << s.final_p_a << ','
    << s.final_p_b << ',' << to_string(s.failure) << ',' << s.records;
  return o.str();
}

inline void write_summaries(std::ostream& out, const std::vector<MatchSummary>& summaries) {
  out << kSummaryCsvHeader << '\n';
  for (const MatchSummary& s : summaries) out << summary_csv_row(s) << '\n';
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<MatchSummary> read_summaries(std::istream& in) {
  std::vector<MatchSummary> out;
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) throw FormatError("empty summary file", 1);
  ++line;
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != kSummaryCsvHeader) throw FormatError("unexpected summary header", line);
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    const auto f = split_csv(text);
    if (f.size() != 13) throw FormatError("expected 13 fields, got " + std::to_string(f.size()), line);
    if (parse_int<int>(f[0], line) != kSummaryFormatVersion) throw FormatError("unsupported summary version", line);
    MatchSummary s;
    s.seed = parse_int<std::uint64_t>(f[1], line);
    s.player_a = std::string(f[2]);
    s.player_b = std::string(f[3]);
    if (f[4] == "A") s.winner = MatchWinner::A;
    else if (f[4] == "B") s.winner = MatchWinner::B;
    else if (f[4] == "draw") s.winner = MatchWinner::Draw;
    else throw FormatError("bad winner '" + std::string(f[4]) + "'", line);
    s.duration = parse_double(f[5], line);
    s.adjustments = parse_int<int>(f[6], line);
    if (f[7] != "true" && f[7] != "false") throw FormatError("bad balanced flag", line);
    s.balanced = f[7] == "true";
    s.balance_fraction = parse_double(f[8], line);
    s.final_p_a = parse_int<int>(f[9], line);
    s.final_p_b = parse_int<int>(f[10], line);
    s.failure = parse_failure_mode(f[11], line);
    s.records = parse_int<int>(f[12], line);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mobadda
