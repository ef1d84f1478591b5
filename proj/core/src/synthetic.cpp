#include "oddsmith/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "oddsmith/error.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {
namespace {

constexpr std::array<std::string_view, 20> kTeamNames = {
    "Ashford",   "Bramley",   "Carrow",    "Dunmore",   "Eastleigh", "Fenwick",  "Glenholt",
    "Harrowgate", "Ilkestone", "Jarrow",   "Kingsmere", "Lowther",   "Marston",  "Northam",
    "Oakhurst",  "Penrith",   "Queensby",  "Redcliffe", "Stanwell",  "Thornbury"};

constexpr std::array<std::string_view, 4> kFormations = {"4-3-3", "4-2-3-1", "3-4-3", "4-4-2"};

int poisson(Rng& rng, double mean) {
  // Knuth's method; means here stay well below 50.
  const double limit = std::exp(-mean);
  int k = 0;
  double p = rng.uniform();
  while (p > limit) {
    ++k;
    p *= rng.uniform();
  }
  return k;
}

int binomial(Rng& rng, int n, double p) {
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.uniform() < p ? 1 : 0;
  return hits;
}

// One side's sampled match statistics, before they are split into the two
// team perspectives.
struct Side {
  double xg = 0;
  int goals = 0;
  double poss = 0;
  int sh = 0, sot = 0, fk = 0, pk = 0, pkatt = 0, sca = 0, gca = 0;
  double dist = 0;
  int att = 0, cmp = 0, prgp = 0, kp = 0, ppa = 0, crspa = 0;
  int tkl = 0, tklw = 0, intercepts = 0, blocks = 0, clr = 0, err = 0, touches = 0, prgc = 0,
      fls = 0;
  std::string formation;
};

Side simulate_side(Rng& rng, double xg, double poss, double edge) {
  Side s;
  s.xg = std::round(xg * 10.0) / 10.0;
  s.goals = poisson(rng, xg);
  s.poss = poss;
  s.sh = std::max(s.goals, poisson(rng, 4.0 + 8.0 * xg));
  s.sot = std::clamp(binomial(rng, s.sh, 0.34), s.goals, s.sh);
  s.dist = std::round((17.0 - 1.5 * xg + 2.0 * rng.normal()) * 10.0) / 10.0;
  s.fk = poisson(rng, 0.5);
  s.pkatt = poisson(rng, 0.1 + 0.05 * xg);
  s.pk = binomial(rng, s.pkatt, 0.78);
  s.sca = static_cast<int>(std::round(1.7 * s.sh)) + poisson(rng, 3.0);
  s.gca = std::min(s.sca, static_cast<int>(std::round(1.6 * s.goals)) + poisson(rng, 0.3));
  s.att = std::max(150, static_cast<int>(std::round(poss * 10.0 + 30.0 * rng.normal())));
  const double accuracy = std::clamp(0.7 + 0.004 * (poss - 50.0) + 0.03 * rng.normal(), 0.5, 0.95);
  s.cmp = static_cast<int>(std::round(s.att * accuracy));
  s.prgp = poisson(rng, 0.08 * s.att);
  s.kp = std::min(s.sh, poisson(rng, 0.7 * s.sh));
  s.ppa = poisson(rng, 6.0 + 6.0 * xg);
  s.crspa = poisson(rng, 2.0);
  s.tkl = poisson(rng, 17.0 - 4.0 * edge);
  s.tklw = binomial(rng, s.tkl, 0.6);
  s.intercepts = poisson(rng, 9.0);
  s.blocks = poisson(rng, 11.0 - 2.0 * edge);
  s.clr = poisson(rng, 18.0 - 6.0 * edge);
  s.err = poisson(rng, 0.3);
  s.touches = static_cast<int>(std::round(s.att * 1.35)) + poisson(rng, 20.0);
  s.prgc = poisson(rng, 15.0 + 8.0 * edge);
  s.fls = poisson(rng, 11.0);
  s.formation = std::string(kFormations[rng.index(kFormations.size())]);
  return s;
}

std::string fmt(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Circle-method schedule: round r pairs teams so that each meets every other
// exactly once over teams - 1 rounds. Home/away alternates per round.
std::vector<std::vector<std::pair<int, int>>> single_round_robin(int teams) {
  std::vector<int> order(teams);
  for (int i = 0; i < teams; ++i) order[i] = i;
  std::vector<std::vector<std::pair<int, int>>> rounds;
  for (int r = 0; r < teams - 1; ++r) {
    std::vector<std::pair<int, int>> fixtures;
    for (int i = 0; i < teams / 2; ++i) {
      int a = order[i];
      int b = order[teams - 1 - i];
      if ((i == 0 && r % 2 == 1) || (i > 0 && i % 2 == 1)) std::swap(a, b);
      fixtures.emplace_back(a, b);
    }
    rounds.push_back(std::move(fixtures));
    std::rotate(order.begin() + 1, order.end() - 1, order.end());
  }
  return rounds;
}

}  // namespace

std::vector<std::string> synthetic_league_header() {
  std::vector<std::string> header = {
      "date",     "time",      "comp",    "round",     "day",           "season",
      "matchweek", "venue",    "result",  "team",      "opponent",      "attendance",
      "captain",  "formation", "opp formation", "referee", "match report", "notes"};
  for (const auto name : kDefaultStatRoster) header.emplace_back(name);
  return header;
}

std::string synthetic_league_csv(const LeagueOptions& options) {
  if (options.teams < 4 || options.teams % 2 != 0 ||
      options.teams > static_cast<int>(kTeamNames.size())) {
    throw Error(ErrorCode::InvalidConfig, "teams must be even and in [4, 20]");
  }
  if (options.seasons < 1) throw Error(ErrorCode::InvalidConfig, "seasons must be >= 1");
  if (!(options.missing_rate >= 0.0 && options.missing_rate < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "missing_rate must be in [0, 1)");
  }

  Rng rng(options.seed);
  const int n = options.teams;
  std::vector<double> strength(n);
  for (auto& s : strength) s = options.strength_spread * rng.normal();

  const auto first_half = single_round_robin(n);
  const auto header = synthetic_league_header();
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  const std::size_t descriptor_count = header.size() - kDefaultStatRoster.size();
  auto blank_some = [&](std::vector<std::string>& row) {
    if (options.missing_rate <= 0.0) return;
    for (std::size_t c = descriptor_count; c < row.size(); ++c) {
      if (rng.uniform() < options.missing_rate) row[c].clear();
    }
  };

  for (int season = 0; season < options.seasons; ++season) {
    const int year = options.first_season + season;
    const std::string label = std::to_string(year) + "-" + std::to_string(year + 1);
    if (season > 0) {
      for (auto& s : strength) s = 0.8 * s + 0.5 * options.strength_spread * rng.normal();
    }
    // Second Saturday of August.
    const std::chrono::sys_days kickoff{std::chrono::year{year} / std::chrono::August /
                                        std::chrono::Saturday[2]};

    const int weeks = 2 * (n - 1);
    for (int week = 1; week <= weeks; ++week) {
      const bool second_half = week > n - 1;
      const auto& round = first_half[(week - 1) % (n - 1)];
      for (std::size_t f = 0; f < round.size(); ++f) {
        auto [home, away] = round[f];
        if (second_half) std::swap(home, away);
        // Fixtures of a matchweek are spread over Saturday and Sunday.
        const Date date{kickoff + std::chrono::days{7 * (week - 1) + static_cast<int>(f % 2)}};
        const char* day = f % 2 == 0 ? "Sat" : "Sun";

        const double edge = strength[home] - strength[away];
        const double xg_home =
            1.3 * std::exp(options.home_advantage / 2 + edge + 0.25 * rng.normal());
        const double xg_away =
            1.3 * std::exp(-options.home_advantage / 2 - edge + 0.25 * rng.normal());
        const double poss_home = std::clamp(
            std::round((50.0 + 12.0 * edge + 5.0 * rng.normal()) * 10.0) / 10.0, 25.0, 75.0);
        const Side h = simulate_side(rng, xg_home, poss_home, edge);
        const Side a = simulate_side(rng, xg_away, 100.0 - poss_home, -edge);
        const int attendance = 20000 + static_cast<int>(rng.index(40000));
        const std::string referee = "Referee " + std::to_string(1 + rng.index(18));

        auto row_for = [&](const Side& me, const Side& them, int team, int opp, bool at_home) {
          const char* result =
              me.goals > them.goals ? "W" : me.goals == them.goals ? "D" : "L";
          const int saves = std::max(0, them.sot - them.goals);
          std::vector<std::string> row = {
              format_date(date),
              "15:00",
              "Premier League",
              "Matchweek " + std::to_string(week),
              day,
              label,
              std::to_string(week),
              at_home ? "Home" : "Away",
              result,
              std::string(kTeamNames[team]),
              std::string(kTeamNames[opp]),
              std::to_string(attendance),
              "Captain of " + std::string(kTeamNames[team]),
              me.formation,
              them.formation,
              referee,
              "Match Report",
              "",
              std::to_string(me.goals),
              std::to_string(them.goals),
              fmt(me.xg, 1),
              fmt(them.xg, 1),
              fmt(me.poss, 1),
              std::to_string(me.sh),
              std::to_string(me.sot),
              fmt(me.dist, 1),
              std::to_string(me.fk),
              std::to_string(me.pk),
              std::to_string(me.pkatt),
              std::to_string(me.sca),
              std::to_string(me.gca),
              std::to_string(them.sot),
              std::to_string(saves),
              // Undefined when the opponent had no shot on target.
              them.sot > 0 ? fmt(100.0 * saves / them.sot, 1) : "",
              them.goals == 0 ? "1" : "0",
              fmt(std::max(0.0, them.xg * (1.0 + 0.1 * rng.normal())), 1),
              std::to_string(me.cmp),
              std::to_string(me.att),
              fmt(100.0 * me.cmp / me.att, 1),
              std::to_string(me.prgp),
              std::to_string(me.kp),
              std::to_string(me.ppa),
              std::to_string(me.crspa),
              std::to_string(me.tkl),
              std::to_string(me.tklw),
              std::to_string(me.intercepts),
              std::to_string(me.blocks),
              std::to_string(me.clr),
              std::to_string(me.err),
              std::to_string(me.touches),
              std::to_string(me.prgc),
              std::to_string(me.fls)};
          blank_some(row);
          for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
          out << '\n';
        };
        row_for(h, a, home, away, true);
        row_for(a, h, away, home, false);
      }
    }
  }
  return out.str();
}

std::vector<MatchRecord> synthetic_league_records(const LeagueOptions& options) {
  std::istringstream in(synthetic_league_csv(options));
  const auto roster = default_stat_roster();
  return parse_csv(in, roster).records;
}

}  // namespace oddsmith
