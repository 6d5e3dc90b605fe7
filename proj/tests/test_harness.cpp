#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <mobadda/harness.hpp>

#include "oracles.hpp"

using namespace mobadda;
namespace fs = std::filesystem;

namespace {

Settings quick() {
  Settings s;
  s.world.match_time_limit = 300;
  return s;
}

ExperimentSpec spec(Opponent o, int n, unsigned jobs = 1) {
  ExperimentSpec e;
  e.name = "t";
  e.opponent = o;
  e.match_count = n;
  e.settings = quick();
  e.jobs = jobs;
  return e;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mobadda_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Match, Deterministic) {
  const auto a = run_match(quick(), PlayerRole::fixed(DifficultyMode::Hard), PlayerRole::dynamic(), 11);
  const auto b = run_match(quick(), PlayerRole::fixed(DifficultyMode::Hard), PlayerRole::dynamic(), 11);
  EXPECT_EQ(a.final_state_hash, b.final_state_hash);
  EXPECT_EQ(gamelog_text(a.gamelog), gamelog_text(b.gamelog));
  EXPECT_EQ(a.summary, b.summary);
  const auto c = run_match(quick(), PlayerRole::fixed(DifficultyMode::Hard), PlayerRole::dynamic(), 12);
  EXPECT_NE(a.final_state_hash, c.final_state_hash);
}

TEST(Match, LogShape) {
  const auto r = run_match(quick(), PlayerRole::fixed(DifficultyMode::Easy), PlayerRole::dynamic(), 3);
  const auto& recs = r.gamelog.records;
  ASSERT_FALSE(recs.empty());
  EXPECT_EQ(recs.front().sim_time, 0.0);
  EXPECT_EQ(static_cast<int>(recs.size()), static_cast<int>(r.summary.duration / 15.0 + 1e-9) + 1);
  EXPECT_EQ(oracle::check_gamelog(gamelog_text(r.gamelog)), 0);
  for (const auto& rec : recs) EXPECT_EQ(rec.mode_a, DifficultyMode::Easy);
  EXPECT_EQ(r.alpha_history.size(), recs.size() - 1);
}

TEST(Match, AdaptiveMovesOneTierPerEvaluation) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto r = run_match(quick(), PlayerRole::fixed(DifficultyMode::Hard), PlayerRole::dynamic(), seed);
    const auto& recs = r.gamelog.records;
    EXPECT_EQ(recs.front().mode_b, DifficultyMode::Regular);
    for (std::size_t i = 1; i < recs.size(); ++i)
      EXPECT_LE(std::abs(tier(recs[i].mode_b) - tier(recs[i - 1].mode_b)), recs[i].evaluations);
  }
}

TEST(Match, OnlyBMayAdapt) {
  EXPECT_THROW(run_match(quick(), PlayerRole::dynamic(), PlayerRole::dynamic(), 1), ConfigError);
}

TEST(Experiment, SerialEqualsParallel) {
  std::vector<MatchResult> serial, parallel;
  const auto r1 = run_experiment(spec(Opponent::Regular, 6, 1), &serial);
  const auto r4 = run_experiment(spec(Opponent::Regular, 6, 4), &parallel);
  EXPECT_EQ(r1.matches, r4.matches);
  EXPECT_EQ(report_json(r1), report_json(r4));
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    EXPECT_EQ(gamelog_text(serial[i].gamelog), gamelog_text(parallel[i].gamelog));
}

TEST(Experiment, CountsPartition) {
  const auto r = run_experiment(spec(Opponent::Easy, 5));
  EXPECT_EQ(r.b_wins + r.a_wins + r.draws, 5);
  EXPECT_EQ(r.balanced + r.too_slow + r.oscillating + r.unclassified, 5);
  EXPECT_EQ(r.unclassified, 0);
  EXPECT_EQ(r.player_b, "adaptive");
  EXPECT_EQ(r.player_a, "easy");
}

TEST(Experiment, Seeds) {
  auto e = spec(Opponent::Hard, 3);
  e.base_seed = 40;
  EXPECT_EQ(seeds_for(e), (std::vector<std::uint64_t>{40, 41, 42}));
  e.seeds = {5, 9};
  EXPECT_EQ(seeds_for(e), (std::vector<std::uint64_t>{5, 9}));
  e.seeds = {5, 5};
  EXPECT_THROW(seeds_for(e), ConfigError);
  e.seeds.clear();
  e.match_count = 0;
  EXPECT_THROW(seeds_for(e), ConfigError);
}

TEST(Experiment, BaselineRoles) {
  const auto [a, b] = roles_for(Opponent::Baseline);
  EXPECT_FALSE(a.adaptive);
  EXPECT_FALSE(b.adaptive);
  EXPECT_EQ(a.mode, DifficultyMode::Easy);
  EXPECT_EQ(b.mode, DifficultyMode::Hard);
  EXPECT_TRUE(roles_for(Opponent::Hard).second.adaptive);
  EXPECT_EQ(parse_opponent("regular"), Opponent::Regular);
  EXPECT_THROW(parse_opponent("nightmare"), ConfigError);
}

TEST(Experiment, WritesOutputs) {
  const fs::path dir = scratch("out");
  auto e = spec(Opponent::Hard, 3);
  e.output_dir = dir.string();
  const auto r = run_experiment(e);
  const fs::path root = dir / "t";
  EXPECT_TRUE(fs::exists(root / "report.json"));
  for (std::uint64_t s = 1; s <= 3; ++s) EXPECT_TRUE(fs::exists(root / "gamelogs" / gamelog_filename(s)));
  std::istringstream csv(slurp(root / "summaries.csv"));
  EXPECT_EQ(read_summaries(csv), r.matches);
  fs::remove_all(dir);
}

TEST(Curves, RowsAndAlpha) {
  const auto r = run_match(quick(), PlayerRole::fixed(DifficultyMode::Regular), PlayerRole::dynamic(), 5);
  const Curves c = make_curves(r.gamelog);
  const int n = static_cast<int>(r.gamelog.records.size());
  EXPECT_EQ(lines(c.p_prime), n + 1);
  EXPECT_EQ(lines(c.cumulative), n + 1);
  EXPECT_EQ(lines(c.alpha), n + 1);
  std::istringstream pp(c.p_prime), al(c.alpha);
  std::string a, b;
  std::getline(pp, a);
  std::getline(al, b);
  while (std::getline(pp, a) && std::getline(al, b)) {
    int pa = 0, pb = 0, alpha = 0;
    double t1 = 0, t2 = 0;
    char comma = 0;
    std::istringstream(a) >> t1 >> comma >> pa >> comma >> pb;
    std::istringstream(b) >> t2 >> comma >> alpha;
    EXPECT_EQ(t1, t2);
    EXPECT_EQ(alpha, pa - pb);
  }
}

TEST(Curves, EmitFromFile) {
  const fs::path dir = scratch("curves");
  const auto r = run_match(quick(), PlayerRole::fixed(DifficultyMode::Easy), PlayerRole::dynamic(), 2);
  write_text_file(dir / "m.jsonl", gamelog_text(r.gamelog));
  emit_curves(dir / "m.jsonl", dir);
  EXPECT_EQ(slurp(dir / "m_alpha.csv"), make_curves(r.gamelog).alpha);
  EXPECT_TRUE(fs::exists(dir / "m_pprime.csv"));
  EXPECT_TRUE(fs::exists(dir / "m_cumulative.csv"));
  EXPECT_THROW(emit_curves(dir / "missing.jsonl", dir), FormatError);
  fs::remove_all(dir);
}

TEST(Table, FromStoredSummaries) {
  std::vector<ExperimentReport> live, stored;
  for (Opponent o : {Opponent::Easy, Opponent::Regular, Opponent::Hard}) {
    auto e = spec(o, 4);
    e.name = std::string(o == Opponent::Easy ? "easy" : o == Opponent::Regular ? "regular" : "hard");
    live.push_back(run_experiment(e));
    std::stringstream io;
    write_summaries(io, live.back().matches);
    stored.push_back(make_report(e.name, read_summaries(io)));
  }
  const std::string table = emit_table(live);
  EXPECT_EQ(table, emit_table(stored));
  EXPECT_EQ(lines(table), 4);
  EXPECT_EQ(table.substr(0, kTableCsvHeader.size()), kTableCsvHeader);
  std::istringstream in(table);
  std::string row;
  std::getline(in, row);
  while (std::getline(in, row)) {
    std::vector<std::string> f;
    std::stringstream rs(row);
    for (std::string x; std::getline(rs, x, ',');) f.push_back(x);
    ASSERT_EQ(f.size(), 10u);
    EXPECT_EQ(std::stoi(f[4]) + std::stoi(f[5]) + std::stoi(f[6]), std::stoi(f[3]));
  }
}
