#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <mobadda/mobadda.hpp>

using namespace mobadda;
namespace fs = std::filesystem;

namespace {

constexpr int kConfigExit = 2;
constexpr int kRuntimeExit = 3;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<int> beta;
  std::optional<double> eval_period;
  std::optional<double> balance_threshold;
  std::string out;
};

void add_common(CLI::App* app, Common& c, bool with_out = true) {
  app->add_option("--config", c.config, "settings file (key = value lines)");
  app->add_option("--set", c.sets, "override one setting, key=value (repeatable)");
  app->add_option("--beta", c.beta, "DDA band half-width");
  app->add_option("--eval-period", c.eval_period, "seconds between DDA evaluations");
  app->add_option("--balance-threshold", c.balance_threshold, "fraction of in-band evaluations for a balanced match");
  if (with_out) app->add_option("--out", c.out, "output directory (default: $MOBADDA_OUT_DIR or ./mobadda_out)");
}

Settings build_settings(const Common& c) {
  Settings s;
  if (!c.config.empty()) s = load_settings_file(c.config);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_value(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.beta) s.dda.beta = *c.beta;
  if (c.eval_period) s.dda.evaluation_period = *c.eval_period;
  if (c.balance_threshold) s.balance_threshold = *c.balance_threshold;
  validate(s);
  return s;
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("MOBADDA_OUT_DIR"); env && *env) return env;
  return "mobadda_out";
}

void print_report(const ExperimentReport& r) {
  std::cout << r.name << ": " << r.player_a << " vs " << r.player_b << ", " << r.matches.size() << " matches, B won "
            << r.b_wins << ", A won " << r.a_wins << ", draws " << r.draws << ", balanced " << r.balanced
            << " (too slow " << r.too_slow << ", oscillating " << r.oscillating << ")\n";
}

std::vector<ExperimentReport> load_reports(const std::vector<std::string>& dirs) {
  std::vector<ExperimentReport> out;
  for (const auto& d : dirs) {
    const fs::path csv = fs::path(d) / "summaries.csv";
    std::ifstream in(csv);
    if (!in) throw FormatError("cannot open '" + csv.string() + "'", 0);
    out.push_back(make_report(fs::path(d).filename().string(), read_summaries(in)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mobadda: MOBA lane simulator with dynamic difficulty adjustment"};
  app.require_subcommand(1);

  Common match_opts;
  std::uint64_t match_seed = 1;
  std::string match_opponent = "regular";
  auto* match = app.add_subcommand("match", "run one match and write its gamelog, summary and curves");
  add_common(match, match_opts);
  match->add_option("--seed", match_seed, "match seed");
  match->add_option("--opponent", match_opponent, "easy | regular | hard | baseline")->capture_default_str();

  Common exp_opts;
  std::string exp_opponent = "regular";
  std::string exp_name;
  std::vector<std::uint64_t> exp_seeds;
  std::uint64_t exp_base_seed = 1;
  int exp_matches = 20;
  unsigned exp_jobs = 1;
  auto* experiment = app.add_subcommand("experiment", "run a seeded campaign against one static opponent");
  add_common(experiment, exp_opts);
  experiment->add_option("--opponent", exp_opponent, "easy | regular | hard | baseline")->capture_default_str();
  experiment->add_option("--name", exp_name, "campaign name (default: the opponent)");
  experiment->add_option("--seeds", exp_seeds, "explicit seed list (overrides --base-seed/--matches)");
  experiment->add_option("--base-seed", exp_base_seed, "first seed; later matches use base+i")->capture_default_str();
  experiment->add_option("--matches", exp_matches, "number of matches")->capture_default_str();
  experiment->add_option("--jobs", exp_jobs, "matches run concurrently")->capture_default_str();

  Common base_opts;
  std::vector<std::uint64_t> base_seeds;
  std::uint64_t base_base_seed = 1;
  int base_matches = 20;
  unsigned base_jobs = 1;
  auto* baseline = app.add_subcommand("baseline", "static easy vs static hard campaign");
  add_common(baseline, base_opts);
  baseline->add_option("--seeds", base_seeds, "explicit seed list");
  baseline->add_option("--base-seed", base_base_seed, "first seed")->capture_default_str();
  baseline->add_option("--matches", base_matches, "number of matches")->capture_default_str();
  baseline->add_option("--jobs", base_jobs, "matches run concurrently")->capture_default_str();

  std::vector<std::string> report_dirs;
  std::string report_out;
  bool report_curves = false;
  auto* report = app.add_subcommand("report", "build the results table (and optionally curves) from campaign directories");
  report->add_option("dirs", report_dirs, "campaign directories holding summaries.csv")->required();
  report->add_option("--out", report_out, "output directory (default: $MOBADDA_OUT_DIR or ./mobadda_out)");
  report->add_flag("--curves", report_curves, "also write curve CSVs for every gamelog");

  Common dump_opts;
  auto* dump = app.add_subcommand("config-dump", "print the effective settings");
  add_common(dump, dump_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*match) {
      const Settings s = build_settings(match_opts);
      const auto [a, b] = roles_for(parse_opponent(match_opponent));
      const MatchResult r = run_match(s, a, b, match_seed);
      const fs::path dir = out_dir(match_opts);
      const fs::path log = dir / gamelog_filename(match_seed);
      write_text_file(log, gamelog_text(r.gamelog));
      write_text_file(dir / ("match_" + std::to_string(match_seed) + "_summary.csv"), summaries_text({r.summary}));
      emit_curves(log, dir);
      std::cout << summary_csv_row(r.summary) << '\n';
    } else if (*experiment || *baseline) {
      const bool is_base = baseline->parsed();
      const Common& c = is_base ? base_opts : exp_opts;
      ExperimentSpec spec;
      spec.settings = build_settings(c);
      spec.opponent = is_base ? Opponent::Baseline : parse_opponent(exp_opponent);
      spec.name = is_base ? "baseline" : (exp_name.empty() ? exp_opponent : exp_name);
      spec.seeds = is_base ? base_seeds : exp_seeds;
      spec.base_seed = is_base ? base_base_seed : exp_base_seed;
      spec.match_count = spec.seeds.empty() ? (is_base ? base_matches : exp_matches) : static_cast<int>(spec.seeds.size());
      spec.jobs = is_base ? base_jobs : exp_jobs;
      spec.output_dir = out_dir(c).string();
      print_report(run_experiment(spec));
    } else if (*report) {
      Common c;
      c.out = report_out;
      const fs::path dir = out_dir(c);
      const auto reports = load_reports(report_dirs);
      write_text_file(dir / "table.csv", emit_table(reports));
      if (report_curves)
        for (const auto& d : report_dirs) {
          const fs::path logs = fs::path(d) / "gamelogs";
          if (!fs::exists(logs)) continue;
          for (const auto& entry : fs::directory_iterator(logs))
            if (entry.path().extension() == ".jsonl")
              emit_curves(entry.path(), dir / "curves" / fs::path(d).filename());
        }
      std::cout << emit_table(reports);
    } else if (*dump) {
      dump_settings(std::cout, build_settings(dump_opts));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kRuntimeExit;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeExit;
  }
  return 0;
}
