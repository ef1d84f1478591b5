#include "oddsmith/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "oddsmith/error.hpp"

namespace oddsmith {

const Statistic* MatchRecord::find_stat(std::string_view name) const {
  const auto it = std::find_if(stats.begin(), stats.end(),
                               [&](const Statistic& s) { return s.name == name; });
  return it == stats.end() ? nullptr : &*it;
}

std::vector<std::string> default_stat_roster() {
  return {kDefaultStatRoster.begin(), kDefaultStatRoster.end()};
}

std::vector<MatchRecord> prune_columns(std::vector<MatchRecord> records) {
  for (auto& rec : records) {
    std::erase_if(rec.stats, [](const Statistic& s) {
      return std::find(kIrrelevantColumns.begin(), kIrrelevantColumns.end(), s.name) !=
             kIrrelevantColumns.end();
    });
  }
  return records;
}

namespace {

double fill_value(std::vector<double> values, ImputeStrategy strategy) {
  switch (strategy) {
    case ImputeStrategy::Mean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case ImputeStrategy::Median: {
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }
    case ImputeStrategy::Mode: {
      // Most frequent value; the smallest such value on ties.
      std::sort(values.begin(), values.end());
      double best = values.front();
      std::size_t best_count = 0;
      for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        if (j - i > best_count) {
          best_count = j - i;
          best = values[i];
        }
        i = j;
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace

std::vector<MatchRecord> impute(std::vector<MatchRecord> records, ImputeStrategy strategy) {
  // Column set in first-seen order; records from one CSV share it.
  std::vector<std::string> columns;
  std::set<std::string, std::less<>> seen;
  for (const auto& rec : records) {
    for (const auto& s : rec.stats) {
      if (seen.insert(s.name).second) columns.push_back(s.name);
    }
  }

  for (const auto& column : columns) {
    std::vector<double> present;
    bool any_missing = false;
    for (const auto& rec : records) {
      if (const auto* s = rec.find_stat(column)) {
        if (s->value) {
          present.push_back(*s->value);
        } else {
          any_missing = true;
        }
      }
    }
    if (!any_missing) continue;
    if (present.empty()) throw Error(ErrorCode::AllMissing, column);
    const double fill = fill_value(std::move(present), strategy);
    for (auto& rec : records) {
      for (auto& s : rec.stats) {
        if (s.name == column && !s.value) s.value = fill;
      }
    }
  }
  return records;
}

Venue EncodingMaps::venue_from_code(int code) {
  if (code == 0) return Venue::Away;
  if (code == 1) return Venue::Home;
  throw Error(ErrorCode::InvalidFormat, "venue code " + std::to_string(code));
}

Result EncodingMaps::result_from_code(int code) {
  if (code < 0 || code >= kNumClasses) throw Error(ErrorCode::UnknownLabel, std::to_string(code));
  return static_cast<Result>(code);
}

int EncodingMaps::team(std::string_view name) const {
  const auto it = team_code.find(std::string(name));
  if (it == team_code.end()) throw Error(ErrorCode::UnknownTeam, std::string(name));
  return it->second;
}

const std::string& EncodingMaps::team_name(int code) const {
  for (const auto& [name, c] : team_code) {
    if (c == code) return name;
  }
  throw Error(ErrorCode::UnknownTeam, "code " + std::to_string(code));
}

std::optional<std::size_t> Dataset::feature_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - feature_names.begin());
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.X = X.select_rows(indices);
  if (indices.empty()) out.X = Matrix(0, features());
  out.y.reserve(indices.size());
  out.meta.reserve(indices.size());
  for (const auto i : indices) {
    out.y.push_back(y[i]);
    out.meta.push_back(meta[i]);
  }
  out.encoders = encoders;
  out.normalization = normalization;
  out.descriptor_features = descriptor_features;
  return out;
}

Dataset Dataset::select_features(std::span<const std::string> names) const {
  std::vector<std::size_t> columns;
  columns.reserve(names.size());
  std::size_t descriptors = 0;
  for (const auto& name : names) {
    const auto idx = feature_index(name);
    if (!idx) throw Error(ErrorCode::FeatureMismatch, "unknown feature '" + name + "'");
    if (*idx < descriptor_features && descriptors == columns.size()) ++descriptors;
    columns.push_back(*idx);
  }
  Dataset out;
  out.feature_names.assign(names.begin(), names.end());
  out.X = X.select_columns(columns);
  out.y = y;
  out.meta = meta;
  out.encoders = encoders;
  if (normalization) {
    NormalizationParams p;
    for (const auto c : columns) {
      p.min.push_back(normalization->min[c]);
      p.max.push_back(normalization->max[c]);
    }
    out.normalization = std::move(p);
  }
  out.descriptor_features = descriptors;
  return out;
}

Dataset encode(std::span<const MatchRecord> records, const EncodeOptions& options,
               const EncodingMaps* fixed) {
  if (records.empty()) throw Error(ErrorCode::Empty, "no records to encode");

  // Statistic roster from the first record; all rows must agree.
  std::vector<std::string> stat_names;
  for (const auto& s : records.front().stats) {
    if (std::find(options.excluded_features.begin(), options.excluded_features.end(), s.name) ==
        options.excluded_features.end()) {
      stat_names.push_back(s.name);
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.stats.size() != records.front().stats.size()) {
      throw Error(ErrorCode::MalformedRow, "record " + std::to_string(i) + " has " +
                                               std::to_string(rec.stats.size()) +
                                               " statistics, expected " +
                                               std::to_string(records.front().stats.size()));
    }
    for (std::size_t j = 0; j < rec.stats.size(); ++j) {
      if (rec.stats[j].name != records.front().stats[j].name) {
        throw Error(ErrorCode::MalformedRow, "record " + std::to_string(i) +
                                                 ": statistic columns out of order at '" +
                                                 rec.stats[j].name + "'");
      }
      if (!rec.stats[j].value) {
        throw Error(ErrorCode::NonFiniteFeature, "record " + std::to_string(i) + ": '" +
                                                     rec.stats[j].name +
                                                     "' is missing (impute first)");
      }
    }
  }

  // A fixture is identified by its date and unordered team pair; ids follow
  // first appearance in the file, which breaks same-date ties stably.
  using FixtureKey = std::tuple<int, unsigned, unsigned, std::string, std::string>;
  std::map<FixtureKey, std::size_t> fixture_of;
  std::vector<std::size_t> record_fixture(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto& lo = std::min(r.team, r.opponent);
    const auto& hi = std::max(r.team, r.opponent);
    const FixtureKey key{static_cast<int>(r.date.year()), static_cast<unsigned>(r.date.month()),
                         static_cast<unsigned>(r.date.day()), lo, hi};
    record_fixture[i] = fixture_of.emplace(key, fixture_of.size()).first->second;
  }

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = records[a];
    const auto& rb = records[b];
    if (ra.date != rb.date) return ra.date < rb.date;
    if (record_fixture[a] != record_fixture[b]) return record_fixture[a] < record_fixture[b];
    return ra.venue == Venue::Home && rb.venue == Venue::Away;
  });

  if (options.require_pairs) {
    std::vector<std::vector<std::size_t>> members(fixture_of.size());
    for (std::size_t i = 0; i < records.size(); ++i) members[record_fixture[i]].push_back(i);
    for (const auto& m : members) {
      const auto& first = records[m.front()];
      const bool paired = m.size() == 2 && records[m[0]].venue != records[m[1]].venue &&
                          records[m[0]].team == records[m[1]].opponent;
      if (!paired) {
        throw Error(ErrorCode::MalformedRow,
                    "fixture " + first.team + " v " + first.opponent + " on " +
                        format_date(first.date) + " needs exactly one Home and one Away row, found " +
                        std::to_string(m.size()) + " row(s)");
      }
    }
  }

  Dataset ds;
  if (fixed) {
    ds.encoders = *fixed;
  } else {
    for (const auto i : order) {
      for (const auto* name : {&records[i].team, &records[i].opponent}) {
        const int next = static_cast<int>(ds.encoders.team_code.size());
        ds.encoders.team_code.emplace(*name, next);
      }
    }
  }

  ds.feature_names = {"venue", "team", "opponent"};
  ds.descriptor_features = ds.feature_names.size();
  ds.feature_names.insert(ds.feature_names.end(), stat_names.begin(), stat_names.end());
  ds.X = Matrix(records.size(), ds.feature_names.size());
  ds.y.reserve(records.size());
  ds.meta.reserve(records.size());

  std::map<std::size_t, std::size_t> chronological_fixture;
  for (std::size_t row = 0; row < order.size(); ++row) {
    const auto& r = records[order[row]];
    const int team = ds.encoders.team(r.team);
    const int opponent = ds.encoders.team(r.opponent);
    auto x = ds.X.row(row);
    x[0] = EncodingMaps::venue_code(r.venue);
    x[1] = team;
    x[2] = opponent;
    std::size_t c = ds.descriptor_features;
    for (const auto& s : r.stats) {
      if (std::find(options.excluded_features.begin(), options.excluded_features.end(), s.name) !=
          options.excluded_features.end()) {
        continue;
      }
      x[c++] = *s.value;
    }
    ds.y.push_back(EncodingMaps::result_code(r.result));
    const auto fixture = chronological_fixture
                             .emplace(record_fixture[order[row]], chronological_fixture.size())
                             .first->second;
    ds.meta.push_back({r.date, r.season, r.matchweek, team, opponent, fixture});
  }
  return ds;
}

DecodedDescriptors decode(const Dataset& dataset, std::size_t row) {
  const auto& m = dataset.meta.at(row);
  const auto venue_col = dataset.feature_index("venue");
  if (!venue_col) throw Error(ErrorCode::FeatureMismatch, "dataset has no venue column");
  double venue = dataset.X(row, *venue_col);
  if (dataset.normalization) {
    const auto& p = *dataset.normalization;
    venue = p.min[*venue_col] + venue * (p.max[*venue_col] - p.min[*venue_col]);
  }
  return {dataset.encoders.team_name(m.team), dataset.encoders.team_name(m.opponent),
          EncodingMaps::venue_from_code(static_cast<int>(std::lround(venue))),
          EncodingMaps::result_from_code(dataset.y.at(row))};
}

std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset) {
  NormalizationParams params;
  const std::size_t d = dataset.features();
  params.min.assign(d, 0.0);
  params.max.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    if (dataset.rows() == 0) break;
    double lo = dataset.X(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < dataset.rows(); ++r) {
      lo = std::min(lo, dataset.X(r, c));
      hi = std::max(hi, dataset.X(r, c));
    }
    params.min[c] = lo;
    params.max[c] = hi;
  }
  return {apply_normalization(dataset, params), params};
}

std::vector<double> normalize_row(std::span<const double> row, const NormalizationParams& params) {
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = params.max[c] - params.min[c];
    out[c] = range > 0.0 ? (row[c] - params.min[c]) / range : 0.0;
  }
  return out;
}

Dataset apply_normalization(const Dataset& dataset, const NormalizationParams& params) {
  if (params.min.size() != dataset.features()) {
    throw Error(ErrorCode::FeatureMismatch, "normalization parameters cover " +
                                                std::to_string(params.min.size()) +
                                                " features, dataset has " +
                                                std::to_string(dataset.features()));
  }
  Dataset out = dataset;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto scaled = normalize_row(dataset.X.row(r), params);
    std::copy(scaled.begin(), scaled.end(), out.X.row(r).begin());
  }
  out.normalization = params;
  return out;
}

Matrix denormalize(const Matrix& X, const NormalizationParams& params) {
  Matrix out = X;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < X.cols(); ++c) {
      out(r, c) = params.min[c] + X(r, c) * (params.max[c] - params.min[c]);
    }
  }
  return out;
}

Dataset season_average_substitute(const Dataset& dataset, std::string_view season, int matchweek) {
  std::vector<std::size_t> targets;
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    if (dataset.meta[r].season == season && dataset.meta[r].matchweek == matchweek) {
      targets.push_back(r);
    }
  }
  if (targets.empty()) {
    throw Error(ErrorCode::InsufficientData, "season " + std::string(season) + " has no matchweek " +
                                                 std::to_string(matchweek));
  }

  Dataset out = dataset;
  for (const auto r : targets) {
    const int team = dataset.meta[r].team;
    std::vector<double> sums(dataset.features(), 0.0);
    std::size_t count = 0;
    for (std::size_t p = 0; p < dataset.rows(); ++p) {
      const auto& m = dataset.meta[p];
      if (m.season == season && m.team == team && m.matchweek < matchweek) {
        const auto x = dataset.X.row(p);
        for (std::size_t c = dataset.descriptor_features; c < dataset.features(); ++c) sums[c] += x[c];
        ++count;
      }
    }
    if (count == 0) {
      throw Error(ErrorCode::NoPriorMatches, dataset.encoders.team_name(team));
    }
    auto x = out.X.row(r);
    for (std::size_t c = dataset.descriptor_features; c < dataset.features(); ++c) {
      x[c] = sums[c] / static_cast<double>(count);
    }
  }
  return out;
}

std::string SplitSpec::label() const {
  switch (variant) {
    case SplitVariant::TwoSeasons: return "two_seasons";
    case SplitVariant::OneSeason: return "one_season";
    case SplitVariant::LastNMatchweeks: return "last_" + std::to_string(matchweeks) + "_matchweeks";
  }
  return "unknown";
}

TrainTest split(const Dataset& dataset, const SplitSpec& spec) {
  auto insufficient = [&](const std::string& why) {
    return Error(ErrorCode::InsufficientData, spec.label() + ": " + why);
  };
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw insufficient("test fraction must lie in (0, 1)");
  }
  if (spec.variant == SplitVariant::LastNMatchweeks && spec.matchweeks < 1) {
    throw insufficient("matchweek window must be positive");
  }
  if (dataset.rows() == 0) throw insufficient("dataset is empty");

  std::size_t fixtures = 0;
  for (const auto& m : dataset.meta) fixtures = std::max(fixtures, m.fixture + 1);
  const auto n_test = static_cast<std::size_t>(
      std::llround(static_cast<double>(fixtures) * spec.test_fraction));
  if (n_test == 0 || n_test >= fixtures) {
    throw insufficient(std::to_string(fixtures) + " fixtures cannot form both a train and a test set");
  }
  const std::size_t boundary = fixtures - n_test;

  std::vector<std::size_t> pre;
  std::vector<std::size_t> test;
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    (dataset.meta[r].fixture < boundary ? pre : test).push_back(r);
  }

  std::vector<std::size_t> train;
  switch (spec.variant) {
    case SplitVariant::TwoSeasons:
    case SplitVariant::OneSeason: {
      const std::size_t wanted = spec.variant == SplitVariant::TwoSeasons ? 2 : 1;
      // Seasons in reverse chronological order of appearance.
      std::vector<std::string> seasons;
      for (auto it = pre.rbegin(); it != pre.rend() && seasons.size() < wanted; ++it) {
        const auto& s = dataset.meta[*it].season;
        if (std::find(seasons.begin(), seasons.end(), s) == seasons.end()) seasons.push_back(s);
      }
      if (seasons.size() < wanted) {
        throw insufficient("training window spans " + std::to_string(seasons.size()) +
                           " season(s), need " + std::to_string(wanted));
      }
      for (const auto r : pre) {
        if (std::find(seasons.begin(), seasons.end(), dataset.meta[r].season) != seasons.end()) {
          train.push_back(r);
        }
      }
      break;
    }
    case SplitVariant::LastNMatchweeks: {
      const auto& first = dataset.meta[test.front()];
      const int start = first.matchweek - spec.matchweeks;
      if (start < 1) {
        throw insufficient("test window starts at matchweek " + std::to_string(first.matchweek) +
                           ", fewer than " + std::to_string(spec.matchweeks) +
                           " matchweeks precede it");
      }
      for (const auto r : pre) {
        const auto& m = dataset.meta[r];
        if (m.season == first.season && m.matchweek >= start && m.matchweek < first.matchweek) {
          train.push_back(r);
        }
      }
      break;
    }
  }
  if (train.empty()) throw insufficient("training window is empty");

  return {dataset.select_rows(train), dataset.select_rows(test)};
}

}  // namespace oddsmith
