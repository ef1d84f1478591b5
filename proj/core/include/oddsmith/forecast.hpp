#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/models.hpp"
#include "oddsmith/odds.hpp"
#include "oddsmith/serialize.hpp"

namespace oddsmith {

/// Home-perspective rows of one matchweek with statistics replaced by each
/// team's earlier-season averages: the information available before kickoff.
Dataset upcoming_fixtures(const Dataset& history, std::string_view season, int matchweek);

struct ForecastRow {
  std::string date;
  std::string home_team;
  std::string away_team;
  ProbTriple probs;
  std::optional<VoteCounts> votes;
  int predicted = 0;
  int actual = 0;
  OddsTriple odds;
};

/// Predicts every row of `fixtures` (raw, un-normalized features; any
/// superset of the model's features) and prices it at `margin`. Rows are
/// read from the home side. Throws FeatureMismatch when a model feature is
/// absent.
std::vector<ForecastRow> forecast(const TrainedModel& model, const Dataset& fixtures,
                                  const Margin& margin, const OddsPolicy& policy = {});

/// CSV `home_team,away_team,odds_1,odds_X,odds_2,margin` with 6-decimal odds.
std::string odds_sheet_csv(const std::vector<ForecastRow>& rows, const Margin& margin);
/// JSON variant carrying probabilities, vote counts and results as well.
Json odds_sheet_json(const std::vector<ForecastRow>& rows, const Margin& margin);
std::vector<ForecastRow> forecast_rows_from_json(const Json& sheet);

struct BookRow {
  std::string home_team;
  std::string away_team;
  OddsTriple odds;
};

/// Reads a bookmaker sheet in the odds-sheet CSV layout (the margin column
/// is optional). Throws MissingColumn, MalformedRow or OddsBelowOne.
std::vector<BookRow> parse_book_csv(std::istream& input);

}  // namespace oddsmith
