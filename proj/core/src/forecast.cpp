#include "oddsmith/forecast.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

#include "oddsmith/error.hpp"

namespace oddsmith {

Dataset upcoming_fixtures(const Dataset& history, std::string_view season, int matchweek) {
  const Dataset substituted = season_average_substitute(history, season, matchweek);
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < substituted.rows(); ++r) {
    const auto& m = substituted.meta[r];
    if (m.season != season || m.matchweek != matchweek) continue;
    if (decode(substituted, r).venue == Venue::Home) rows.push_back(r);
  }
  return substituted.select_rows(rows);
}

std::vector<ForecastRow> forecast(const TrainedModel& model, const Dataset& fixtures,
                                  const Margin& margin, const OddsPolicy& policy) {
  const Dataset aligned = fixtures.select_features(model.feature_names());
  std::vector<ForecastRow> out;
  out.reserve(aligned.rows());
  for (std::size_t r = 0; r < aligned.rows(); ++r) {
    const auto raw = aligned.X.row(r);
    const std::vector<double> x =
        model.normalization() ? normalize_row(raw, *model.normalization())
                              : std::vector<double>(raw.begin(), raw.end());
    const auto& m = aligned.meta[r];
    ForecastRow row;
    row.date = format_date(m.date);
    row.home_team = fixtures.encoders.team_name(m.team);
    row.away_team = fixtures.encoders.team_name(m.opponent);
    row.probs = model.predict_proba(x);
    row.votes = model.vote_counts(x);
    row.predicted = row.probs.argmax();
    row.actual = aligned.y[r];
    row.odds = make_book(row.probs, margin, policy);
    out.push_back(std::move(row));
  }
  return out;
}

std::string odds_sheet_csv(const std::vector<ForecastRow>& rows, const Margin& margin) {
  std::ostringstream out;
  out << "home_team,away_team,odds_1,odds_X,odds_2,margin\n";
  auto quoted = [](const std::string& s) {
    return s.find_first_of(",\"") == std::string::npos ? s : "\"" + s + "\"";
  };
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f\n", r.odds.home, r.odds.draw, r.odds.away,
                  margin.value());
    out << quoted(r.home_team) << ',' << quoted(r.away_team) << buf;
  }
  return out.str();
}

Json odds_sheet_json(const std::vector<ForecastRow>& rows, const Margin& margin) {
  Json fixtures = Json::array();
  for (const auto& r : rows) {
    Json row{{"date", r.date},
             {"home_team", r.home_team},
             {"away_team", r.away_team},
             {"probabilities", to_json(r.probs)},
             {"votes", r.votes ? Json(*r.votes) : Json(nullptr)},
             {"predicted", r.predicted},
             {"actual", r.actual},
             {"odds", to_json(r.odds)}};
    fixtures.push_back(std::move(row));
  }
  return {{"format", "oddsmith-odds-sheet"}, {"margin", margin.value()}, {"fixtures", fixtures}};
}

std::vector<ForecastRow> forecast_rows_from_json(const Json& sheet) {
  if (sheet.value("format", "") != "oddsmith-odds-sheet") {
    throw Error(ErrorCode::InvalidFormat, "not an oddsmith odds sheet");
  }
  std::vector<ForecastRow> rows;
  try {
    for (const auto& f : sheet.at("fixtures")) {
      ForecastRow r;
      r.date = f.at("date").get<std::string>();
      r.home_team = f.at("home_team").get<std::string>();
      r.away_team = f.at("away_team").get<std::string>();
      const auto& p = f.at("probabilities");
      r.probs.p = {p.at("p_draw").get<double>(), p.at("p_home").get<double>(),
                   p.at("p_away").get<double>()};
      if (!f.at("votes").is_null()) r.votes = f.at("votes").get<VoteCounts>();
      r.predicted = f.at("predicted").get<int>();
      r.actual = f.at("actual").get<int>();
      const auto& o = f.at("odds");
      r.odds = {o.at("1").get<double>(), o.at("X").get<double>(), o.at("2").get<double>()};
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, e.what());
  }
  return rows;
}

std::vector<BookRow> parse_book_csv(std::istream& input) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(input, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_fields(line);
    if (!fields) throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": bad header");
    header = std::move(*fields);
  }
  if (header.empty()) throw Error(ErrorCode::EmptyFile, "book has no header");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"home_team", "away_team", "odds_1", "odds_X", "odds_2"}) {
    if (!col.contains(name)) throw Error(ErrorCode::MissingColumn, name);
  }

  std::vector<BookRow> rows;
  while (std::getline(input, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_fields(line);
    const auto where = "line " + std::to_string(line_no);
    if (!fields || fields->size() != header.size()) {
      throw Error(ErrorCode::MalformedRow, where + ": expected " + std::to_string(header.size()) + " fields");
    }
    auto price = [&](const char* name) {
      const auto& cell = (*fields)[col.at(name)];
      double v = 0.0;
      std::istringstream in(cell);
      if (!(in >> v) || !(in >> std::ws).eof()) {
        throw Error(ErrorCode::MalformedRow, where + ": bad price '" + cell + "'");
      }
      implied_prob(v);
      return v;
    };
    rows.push_back({(*fields)[col.at("home_team")], (*fields)[col.at("away_team")],
                    {price("odds_1"), price("odds_X"), price("odds_2")}});
  }
  return rows;
}

}  // namespace oddsmith
