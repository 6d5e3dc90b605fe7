#pragma once

// Reference implementations used by the tests. Deliberately written without
// the library's dda or telemetry headers.

#include <cstdint>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace oracle {

struct Feat {
  int level = 1;
  int deaths = 0;
  int towers = 0;
};

// Random monotone stream of evaluation snapshots.
inline std::vector<Feat> random_stream(std::mt19937_64& rng, int n) {
  std::vector<Feat> s(static_cast<std::size_t>(n));
  Feat f;
  for (auto& x : s) {
    if (rng() % 3 == 0) f.level = std::min(25, f.level + static_cast<int>(rng() % 3));
    if (rng() % 4 == 0) f.deaths += static_cast<int>(rng() % 3);
    if (rng() % 6 == 0) f.towers = std::min(12, f.towers + 1);
    x = f;
  }
  return s;
}

// Tier index (0 easy .. 2 hard) after each evaluation, starting from `start`.
// Evaluation 0 only primes. Recomputed from scratch for each index.
inline std::vector<int> modes(const std::vector<Feat>& x, const std::vector<Feat>& y, int beta, int start) {
  std::vector<int> out;
  for (std::size_t k = 0; k < x.size(); ++k) {
    int m = start;
    for (std::size_t i = 1; i <= k; ++i) {
      const int px = (x[i].level - x[i].deaths + x[i].towers) - (x[i - 1].level - x[i - 1].deaths + x[i - 1].towers);
      const int py = (y[i].level - y[i].deaths + y[i].towers) - (y[i - 1].level - y[i - 1].deaths + y[i - 1].towers);
      const int a = px - py;
      if (a > beta && m < 2) ++m;
      if (a < -beta && m > 0) --m;
    }
    out.push_back(m);
  }
  return out;
}

// Re-derives alpha and cumulative P from a gamelog's raw JSON lines. Returns
// the number of inconsistent records.
inline int check_gamelog(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  int bad = 0, cum_a = 0, cum_b = 0;
  bool first = true;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto &a = j["a"], &b = j["b"];
    cum_a = first ? a["p"].get<int>() : cum_a + a["p_prime"].get<int>();
    cum_b = first ? b["p"].get<int>() : cum_b + b["p_prime"].get<int>();
    first = false;
    if (j["alpha"].get<int>() != a["p_prime"].get<int>() - b["p_prime"].get<int>()) ++bad;
    else if (a["cum_p"].get<int>() != cum_a || b["cum_p"].get<int>() != cum_b) ++bad;
  }
  return bad;
}

}  // namespace oracle
