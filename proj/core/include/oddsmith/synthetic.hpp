#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oddsmith/dataset.hpp"

namespace oddsmith {

/// Parameters for a simulated double round-robin league. Team strengths are
/// latent; goals are Poisson draws around per-match expected goals and the
/// remaining statistics are noisy functions of the same quantities.
struct LeagueOptions {
  int teams = 20;  // even, >= 4
  int seasons = 2;
  int first_season = 2021;  // season labels read "2021-2022", ...
  std::uint64_t seed = 7;
  double home_advantage = 0.2;
  double strength_spread = 0.35;
  /// Probability that a non-descriptor statistic cell is left blank.
  double missing_rate = 0.0;
};

/// Header of the generated CSV: 18 descriptive columns followed by the
/// 34-statistic roster, matching an fbref team match log export.
std::vector<std::string> synthetic_league_header();

/// The simulated league as CSV text, one row per team per fixture.
std::string synthetic_league_csv(const LeagueOptions& options = {});

/// Convenience wrapper: the simulated league parsed into records.
std::vector<MatchRecord> synthetic_league_records(const LeagueOptions& options = {});

}  // namespace oddsmith
