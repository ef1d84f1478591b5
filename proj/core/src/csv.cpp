#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>

#include "oddsmith/dataset.hpp"
#include "oddsmith/error.hpp"

namespace oddsmith {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

// Quoted fields may not span lines in match logs.
std::optional<std::vector<std::string>> split_csv_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.emplace_back(trim(current));
  return fields;
}

namespace {

bool is_missing_marker(std::string_view s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null";
}

std::optional<double> parse_number(std::string_view s) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool is_irrelevant(std::string_view name) {
  return std::find(kIrrelevantColumns.begin(), kIrrelevantColumns.end(), name) !=
         kIrrelevantColumns.end();
}

bool is_descriptor(std::string_view name) {
  return std::find(kDescriptorColumns.begin(), kDescriptorColumns.end(), name) !=
         kDescriptorColumns.end();
}

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
  throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + reason);
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto parse = [&](std::size_t pos, std::size_t len, auto& out) {
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
  };
  if (!parse(0, 4, y) || !parse(5, 2, m) || !parse(8, 2, d)) return std::nullopt;
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

CsvLoad parse_csv(std::istream& input, std::span<const std::string> schema) {
  CsvLoad out;
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(input, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv_fields(line);
    if (!fields) malformed(line_no, "unterminated quote in header");
    header = std::move(*fields);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  out.column_count = header.size();

  std::map<std::string, std::size_t, std::less<>> column_of;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column_of.emplace(header[i], i).second) {
      malformed(line_no, "duplicate column '" + header[i] + "'");
    }
  }
  for (const auto name : kDescriptorColumns) {
    if (!column_of.contains(name)) throw Error(ErrorCode::MissingColumn, std::string(name));
  }
  for (const auto& name : schema) {
    if (!column_of.contains(name)) throw Error(ErrorCode::MissingColumn, name);
  }

  for (const auto name : kRequiredStats) {
    if (!column_of.contains(name)) throw Error(ErrorCode::MissingColumn, std::string(name));
  }

  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(input, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parsed = split_csv_fields(line);
    if (!parsed) malformed(line_no, "unterminated quote");
    if (parsed->size() != header.size()) {
      malformed(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(parsed->size()));
    }
    rows.emplace_back(line_no, std::move(*parsed));
  }

  // Statistic columns keep header order.
  std::vector<std::size_t> stat_columns;
  std::vector<std::string> outside_schema, non_numeric;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto& name = header[i];
    if (is_descriptor(name)) continue;
    if (!schema.empty()) {
      if (std::find(schema.begin(), schema.end(), name) != schema.end()) {
        stat_columns.push_back(i);
      } else {
        outside_schema.push_back(name);
      }
      continue;
    }
    const bool text = !is_irrelevant(name) && std::any_of(rows.begin(), rows.end(), [&](const auto& r) {
      const auto& cell = r.second[i];
      return !is_missing_marker(cell) && !parse_number(cell);
    });
    const bool required =
        std::find(kRequiredStats.begin(), kRequiredStats.end(), name) != kRequiredStats.end();
    if (text && !required) {
      non_numeric.push_back(name);
    } else {
      stat_columns.push_back(i);
    }
  }

  auto note_ignored = [&](const std::vector<std::string>& names, const std::string& why) {
    if (names.empty()) return;
    std::string msg = "ignoring " + std::to_string(names.size()) + " " + why + ":";
    for (const auto& n : names) msg += " '" + n + "'";
    out.warnings.push_back(msg);
  };
  note_ignored(outside_schema, outside_schema.size() == 1 ? "column not in schema" : "columns not in schema");
  note_ignored(non_numeric, non_numeric.size() == 1 ? "non-numeric column" : "non-numeric columns");

  auto col = [&](std::string_view name) { return column_of.find(name)->second; };
  const std::size_t c_date = col("date"), c_season = col("season"), c_week = col("matchweek"),
                    c_team = col("team"), c_opp = col("opponent"), c_venue = col("venue"),
                    c_result = col("result");

  for (const auto& [row_line, f] : rows) {
    const std::size_t line_no = row_line;
    MatchRecord rec;
    const auto date = parse_date(f[c_date]);
    if (!date) malformed(line_no, "unparseable date '" + f[c_date] + "'");
    rec.date = *date;
    rec.season = f[c_season];
    if (rec.season.empty()) malformed(line_no, "empty season");

    const auto week = parse_number(f[c_week]);
    if (!week || *week < 1 || std::floor(*week) != *week) {
      malformed(line_no, "matchweek must be a positive integer, got '" + f[c_week] + "'");
    }
    rec.matchweek = static_cast<int>(*week);

    rec.team = f[c_team];
    rec.opponent = f[c_opp];
    if (rec.team.empty() || rec.opponent.empty()) malformed(line_no, "empty team or opponent");
    if (rec.team == rec.opponent) malformed(line_no, "team equals opponent '" + rec.team + "'");

    if (f[c_venue] == "Home") {
      rec.venue = Venue::Home;
    } else if (f[c_venue] == "Away") {
      rec.venue = Venue::Away;
    } else {
      malformed(line_no, "venue must be Home or Away, got '" + f[c_venue] + "'");
    }

    const auto& result = f[c_result];
    if (result == "W") {
      rec.result = Result::Win;
    } else if (result == "D") {
      rec.result = Result::Draw;
    } else if (result == "L") {
      rec.result = Result::Loss;
    } else {
      throw Error(ErrorCode::UnknownResult,
                  "line " + std::to_string(line_no) + ": '" + result + "'");
    }

    rec.stats.reserve(stat_columns.size());
    for (const auto c : stat_columns) {
      const auto& cell = f[c];
      Statistic stat{header[c], std::nullopt};
      if (!is_missing_marker(cell)) {
        stat.value = parse_number(cell);
        // Free-text columns (referee, formation, ...) are dropped by pruning;
        // carry them as missing rather than rejecting the row.
        if (!stat.value && !is_irrelevant(header[c])) {
          malformed(line_no, "non-numeric value '" + cell + "' in column '" + header[c] + "'");
        }
      }
      rec.stats.push_back(std::move(stat));
    }
    out.records.push_back(std::move(rec));
  }

  if (out.records.empty()) throw Error(ErrorCode::EmptyFile, "header present but no data rows");

  // Rescheduled fixtures can legitimately break date order within a season,
  // so this is reported rather than rejected.
  std::map<std::tuple<std::string, std::string>, std::vector<const MatchRecord*>> by_team;
  for (const auto& r : out.records) by_team[{r.season, r.team}].push_back(&r);
  for (auto& [key, rows] : by_team) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto* a, const auto* b) { return a->matchweek < b->matchweek; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i]->date <= rows[i - 1]->date) {
        out.warnings.push_back("season " + std::get<0>(key) + ", team " + std::get<1>(key) +
                               ": matchweek " + std::to_string(rows[i]->matchweek) +
                               " is not dated after matchweek " +
                               std::to_string(rows[i - 1]->matchweek));
      }
    }
  }
  return out;
}

CsvLoad load_csv(const std::filesystem::path& path, std::span<const std::string> schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_csv(in, schema);
}

}  // namespace oddsmith
