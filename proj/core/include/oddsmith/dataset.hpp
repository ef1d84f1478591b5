#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oddsmith/matrix.hpp"

namespace oddsmith {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD; std::nullopt when malformed or not a calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

enum class Venue { Away = 0, Home = 1 };

/// Values are the class codes used everywhere downstream (1x2 coding:
/// draw 0, win 1, loss 2).
enum class Result { Draw = 0, Win = 1, Loss = 2 };

inline constexpr int kNumClasses = 3;

struct Statistic {
  std::string name;
  std::optional<double> value;  // nullopt marks a missing entry

  friend bool operator==(const Statistic&, const Statistic&) = default;
};

/// One team's view of one fixture.
struct MatchRecord {
  Date date;
  std::string season;
  int matchweek = 1;
  std::string team;
  std::string opponent;
  Venue venue = Venue::Home;
  Result result = Result::Draw;
  std::vector<Statistic> stats;

  const Statistic* find_stat(std::string_view name) const;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

inline constexpr std::array<std::string_view, 7> kDescriptorColumns = {
    "date", "season", "matchweek", "team", "opponent", "venue", "result"};

/// Columns carried by fbref match logs that say nothing about the match outcome.
inline constexpr std::array<std::string_view, 5> kIrrelevantColumns = {
    "match report", "notes", "referee", "captain", "formation"};

/// Statistics every match CSV must carry.
inline constexpr std::array<std::string_view, 9> kRequiredStats = {
    "gf", "ga", "xg", "xga", "sca", "gca", "sh", "sot", "poss"};

/// The 34-statistic roster used when none is configured.
inline constexpr std::array<std::string_view, 34> kDefaultStatRoster = {
    "gf",   "ga",     "xg",    "xga",    "poss", "sh",    "sot",    "dist",    "fk",
    "pk",   "pkatt",  "sca",   "gca",    "sota", "saves", "save_pct", "cs",    "psxg",
    "cmp",  "att",    "cmp_pct", "prgp", "kp",   "ppa",   "crspa",  "tkl",     "tklw",
    "int",  "blocks", "clr",   "err",    "touches", "prgc", "fls"};

std::vector<std::string> default_stat_roster();

struct CsvLoad {
  std::vector<MatchRecord> records;
  std::vector<std::string> warnings;
  std::size_t column_count = 0;  // columns in the input header
};

/// Splits one CSV line into trimmed fields (RFC 4180 quoting); nullopt on
/// an unterminated quote.
std::optional<std::vector<std::string>> split_csv_fields(std::string_view line);

/// Reads a match CSV. `schema` lists the statistic columns that must be
/// present; header columns outside the schema are ignored with a warning.
/// An empty schema keeps every numeric non-descriptor column as a statistic
/// and skips text columns with a warning. The columns in kRequiredStats must
/// always be present.
CsvLoad load_csv(const std::filesystem::path& path, std::span<const std::string> schema = {});
CsvLoad parse_csv(std::istream& input, std::span<const std::string> schema = {});

std::vector<MatchRecord> prune_columns(std::vector<MatchRecord> records);

enum class ImputeStrategy { Mean, Median, Mode };

std::vector<MatchRecord> impute(std::vector<MatchRecord> records,
                                ImputeStrategy strategy = ImputeStrategy::Mean);

struct EncodingMaps {
  std::map<std::string, int> team_code;

  static constexpr int venue_code(Venue v) noexcept { return static_cast<int>(v); }
  static constexpr int result_code(Result r) noexcept { return static_cast<int>(r); }
  static Venue venue_from_code(int code);
  static Result result_from_code(int code);

  /// Team code for `name`; throws UnknownTeam.
  int team(std::string_view name) const;
  /// Inverse of team(); throws UnknownTeam.
  const std::string& team_name(int code) const;

  friend bool operator==(const EncodingMaps&, const EncodingMaps&) = default;
};

struct RowMeta {
  Date date;
  std::string season;
  int matchweek = 1;
  int team = 0;
  int opponent = 0;
  std::size_t fixture = 0;  // chronological fixture index

  friend bool operator==(const RowMeta&, const RowMeta&) = default;
};

struct NormalizationParams {
  std::vector<double> min;
  std::vector<double> max;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

/// Encoded design matrix. The first `descriptor_features` columns are the
/// encoded venue, team and opponent; the remainder are match statistics.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix X;
  std::vector<int> y;
  std::vector<RowMeta> meta;
  EncodingMaps encoders;
  std::optional<NormalizationParams> normalization;
  std::size_t descriptor_features = 0;

  std::size_t rows() const noexcept { return y.size(); }
  std::size_t features() const noexcept { return feature_names.size(); }
  std::optional<std::size_t> feature_index(std::string_view name) const;

  Dataset select_rows(std::span<const std::size_t> indices) const;
  /// Keeps only the named features in the given order; throws FeatureMismatch
  /// for unknown names.
  Dataset select_features(std::span<const std::string> names) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct EncodeOptions {
  /// Statistics that are a restatement of the label (goals for/against) and
  /// would leak it into the features.
  std::vector<std::string> excluded_features = {"gf", "ga"};
  /// Demand exactly one home and one away row per fixture.
  bool require_pairs = true;
};

/// Builds the design matrix. Team codes follow first appearance in
/// chronological order unless `fixed` supplies existing encoders.
Dataset encode(std::span<const MatchRecord> records, const EncodeOptions& options = {},
               const EncodingMaps* fixed = nullptr);

struct DecodedDescriptors {
  std::string team;
  std::string opponent;
  Venue venue;
  Result result;

  friend bool operator==(const DecodedDescriptors&, const DecodedDescriptors&) = default;
};

DecodedDescriptors decode(const Dataset& dataset, std::size_t row);

/// Min-max scales every feature into [0, 1]; constant columns map to 0.
std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset);
/// Applies previously fitted parameters (values may fall outside [0, 1]).
Dataset apply_normalization(const Dataset& dataset, const NormalizationParams& params);
std::vector<double> normalize_row(std::span<const double> row, const NormalizationParams& params);
Matrix denormalize(const Matrix& X, const NormalizationParams& params);

/// Replaces the statistics of every row in (season, matchweek) with that
/// team's mean over earlier matchweeks of the same season.
Dataset season_average_substitute(const Dataset& dataset, std::string_view season, int matchweek);

enum class SplitVariant { TwoSeasons, OneSeason, LastNMatchweeks };

struct SplitSpec {
  SplitVariant variant = SplitVariant::TwoSeasons;
  int matchweeks = 10;          // window for LastNMatchweeks
  double test_fraction = 0.2;   // chronological tail held out, in fixtures

  static SplitSpec two_seasons() { return {SplitVariant::TwoSeasons}; }
  static SplitSpec one_season() { return {SplitVariant::OneSeason}; }
  static SplitSpec last_matchweeks(int n) { return {SplitVariant::LastNMatchweeks, n}; }

  std::string label() const;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Chronological split. Every variant shares the same test tail (the final
/// test_fraction of fixtures) and differs only in the training window.
TrainTest split(const Dataset& dataset, const SplitSpec& spec);

}  // namespace oddsmith
