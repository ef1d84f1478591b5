#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oddsmith/dataset.hpp"
#include "support.hpp"

using namespace oddsmith;
using namespace oddsmith::testing;

namespace {

// Ten rows: five fixtures between four teams over three matchweeks.
std::string ten_row_csv() {
  std::string csv = kToyHeader + "\n";
  const char* rows[][5] = {{"2021-08-14", "1", "A", "B", "W"}, {"2021-08-14", "1", "C", "D", "D"},
                           {"2021-08-21", "2", "A", "C", "L"}, {"2021-08-21", "2", "B", "D", "W"},
                           {"2021-08-28", "3", "D", "A", "D"}};
  for (const auto& r : rows) {
    const std::string home_result = r[4];
    const std::string away_result = home_result == "W" ? "L" : home_result == "L" ? "W" : "D";
    csv += toy_row(r[0], "2021-2022", std::stoi(r[1]), r[2], r[3], "Home", home_result) + "\n";
    csv += toy_row(r[0], "2021-2022", std::stoi(r[1]), r[3], r[2], "Away", away_result) + "\n";
  }
  return csv;
}

MatchRecord record_with(std::vector<std::string> names) {
  MatchRecord r;
  for (auto& n : names) r.stats.push_back({std::move(n), 1.0});
  return r;
}

std::vector<MatchRecord> column_records(const std::vector<std::optional<double>>& values) {
  std::vector<MatchRecord> out;
  for (const auto& v : values) {
    MatchRecord r;
    r.stats.push_back({"xg", v});
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(LoadCsv, TenRowsGiveTenRecords) {
  const auto load = parse_text(ten_row_csv());
  ASSERT_EQ(load.records.size(), 10u);
  EXPECT_EQ(load.column_count, 16u);
  EXPECT_EQ(load.records[0].team, "A");
  EXPECT_EQ(load.records[0].venue, Venue::Home);
  EXPECT_EQ(load.records[1].result, Result::Loss);
  ASSERT_NE(load.records[0].find_stat("xg"), nullptr);
  EXPECT_DOUBLE_EQ(*load.records[0].find_stat("xg")->value, 1.2);
}

TEST(LoadCsv, MissingResultColumn) {
  const std::string csv = "date,season,matchweek,team,opponent,venue,gf,ga,xg,xga,sca,gca,sh,sot,poss\n";
  try {
    parse_text(csv);
    FAIL() << "expected MissingColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingColumn);
    EXPECT_NE(std::string(e.what()).find("result"), std::string::npos);
  }
}

TEST(LoadCsv, RequiredStatisticMissing) {
  const std::string csv = "date,season,matchweek,team,opponent,venue,result,gf,ga\n";
  EXPECT_ODDSMITH_ERROR(parse_text(csv), ErrorCode::MissingColumn);
}

TEST(LoadCsv, NeutralVenueIsMalformed) {
  const std::string csv =
      kToyHeader + "\n" + toy_row("2021-08-14", "2021-2022", 1, "A", "B", "Neutral", "W") + "\n";
  EXPECT_ODDSMITH_ERROR(parse_text(csv), ErrorCode::MalformedRow);
}

TEST(LoadCsv, EmptyInputs) {
  EXPECT_ODDSMITH_ERROR(parse_text(""), ErrorCode::EmptyFile);
  EXPECT_ODDSMITH_ERROR(parse_text("\n\n"), ErrorCode::EmptyFile);
  EXPECT_ODDSMITH_ERROR(parse_text(kToyHeader + "\n"), ErrorCode::EmptyFile);
}

TEST(LoadCsv, BadDateNamesTheLine) {
  const std::string csv = kToyHeader + "\n" +
                          toy_row("2021-08-14", "2021-2022", 1, "A", "B", "Home", "W") + "\n" +
                          toy_row("2021-02-30", "2021-2022", 1, "B", "A", "Away", "L") + "\n";
  try {
    parse_text(csv);
    FAIL() << "expected MalformedRow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedRow);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, UnknownResultAndBadRows) {
  const auto base = kToyHeader + "\n";
  EXPECT_ODDSMITH_ERROR(parse_text(base + toy_row("2021-08-14", "s", 1, "A", "B", "Home", "X")),
                        ErrorCode::UnknownResult);
  EXPECT_ODDSMITH_ERROR(parse_text(base + toy_row("2021-08-14", "s", 0, "A", "B", "Home", "W")),
                        ErrorCode::MalformedRow);
  EXPECT_ODDSMITH_ERROR(parse_text(base + toy_row("2021-08-14", "s", 1, "A", "A", "Home", "W")),
                        ErrorCode::MalformedRow);
  EXPECT_ODDSMITH_ERROR(parse_text(base + "2021-08-14,s,1,A,B,Home,W,1\n"), ErrorCode::MalformedRow);
  EXPECT_ODDSMITH_ERROR(parse_text(base + "2021-08-14,s,1,A,B,Home,W,1,1,abc,1,1,1,1,1,1\n"),
                        ErrorCode::MalformedRow);
}

TEST(LoadCsv, SchemaSelectsAndWarns) {
  const std::vector<std::string> schema = {"xg", "xga", "sca", "gca", "sh", "sot", "poss", "gf", "ga"};
  auto csv = ten_row_csv();
  // Add a column outside the schema.
  std::string widened;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    widened += line + (header ? ",extra\n" : ",5\n");
    header = false;
  }
  const auto load = parse_text(widened, schema);
  EXPECT_EQ(load.records[0].stats.size(), schema.size());
  EXPECT_EQ(load.records[0].find_stat("extra"), nullptr);
  ASSERT_FALSE(load.warnings.empty());
  EXPECT_NE(load.warnings[0].find("extra"), std::string::npos);

  const std::vector<std::string> missing = {"xg", "psxg"};
  EXPECT_ODDSMITH_ERROR(parse_text(csv, missing), ErrorCode::MissingColumn);
}

TEST(LoadCsv, TextColumnsWithoutSchema) {
  std::string csv = kToyHeader + ",referee,comp\n";
  csv += toy_row("2021-08-14", "s", 1, "A", "B", "Home", "W") + ",Anthony Taylor,\"League, top\"\n";
  csv += toy_row("2021-08-14", "s", 1, "B", "A", "Away", "L") + ",Anthony Taylor,League\n";
  const auto load = parse_text(csv);
  const auto& rec = load.records[0];
  // Free-text referee is carried as missing so pruning can drop it.
  ASSERT_NE(rec.find_stat("referee"), nullptr);
  EXPECT_FALSE(rec.find_stat("referee")->value.has_value());
  EXPECT_EQ(rec.find_stat("comp"), nullptr);
  EXPECT_TRUE(std::any_of(load.warnings.begin(), load.warnings.end(),
                          [](const std::string& w) { return w.find("comp") != std::string::npos; }));
}

TEST(LoadCsv, QuotedFieldsAndMissingMarkers) {
  const auto fields = split_csv_fields(R"(a,"b, c","say ""hi""",)");
  ASSERT_TRUE(fields);
  EXPECT_EQ(*fields, (std::vector<std::string>{"a", "b, c", "say \"hi\"", ""}));
  EXPECT_FALSE(split_csv_fields(R"(a,"open)"));

  std::string csv = kToyHeader + "\n";
  csv += "2021-08-14,s,1,A,B,Home,W,1,0,NA,,20,2,12,4,50\n";
  const auto load = parse_text(csv);
  EXPECT_FALSE(load.records[0].find_stat("xg")->value);
  EXPECT_FALSE(load.records[0].find_stat("xga")->value);
}

TEST(LoadCsv, MissingFileIsIo) {
  EXPECT_ODDSMITH_ERROR(load_csv("/nonexistent/dir/league.csv"), ErrorCode::Io);
}

TEST(Dates, ParseAndFormat) {
  const auto d = parse_date("2022-05-22");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_date(*d), "2022-05-22");
  EXPECT_FALSE(parse_date("2022-13-01"));
  EXPECT_FALSE(parse_date("22-05-2022"));
  EXPECT_FALSE(parse_date("2023-02-29"));
  EXPECT_TRUE(parse_date("2024-02-29"));
}

TEST(Prune, RemovesTheIrrelevantColumns) {
  const auto pruned = prune_columns({record_with({"xg", "referee"})});
  EXPECT_EQ(pruned[0].stats.size(), 1u);
  EXPECT_EQ(pruned[0].find_stat("referee"), nullptr);

  const std::vector<MatchRecord> clean = {record_with({"xg", "sca"})};
  EXPECT_EQ(prune_columns(clean), clean);

  const auto full = record_with({"match report", "xg", "notes", "referee", "captain", "formation"});
  const auto after = prune_columns({full});
  EXPECT_EQ(full.stats.size() - after[0].stats.size(), 5u);
}

TEST(Prune, Idempotent) {
  const auto once = prune_columns(synthetic_league_records({.teams = 4, .seasons = 1}));
  EXPECT_EQ(prune_columns(once), once);
}

TEST(Impute, Strategies) {
  const auto mean = impute(column_records({1.0, std::nullopt, 3.0}), ImputeStrategy::Mean);
  EXPECT_DOUBLE_EQ(*mean[1].stats[0].value, 2.0);

  const auto median =
      impute(column_records({1.0, std::nullopt, 10.0, 2.0}), ImputeStrategy::Median);
  EXPECT_DOUBLE_EQ(*median[1].stats[0].value, 2.0);

  // Tie between 1 and 5: the smaller value wins.
  const auto mode =
      impute(column_records({5.0, 1.0, std::nullopt, 5.0, 1.0}), ImputeStrategy::Mode);
  EXPECT_DOUBLE_EQ(*mode[2].stats[0].value, 1.0);

  const auto complete = column_records({1.0, 2.0});
  EXPECT_EQ(impute(complete), complete);

  EXPECT_ODDSMITH_ERROR(impute(column_records({std::nullopt, std::nullopt})),
                        ErrorCode::AllMissing);
}

TEST(Encode, SpecMappings) {
  const auto load = parse_text(ten_row_csv());
  const auto data = encode(load.records);
  const auto venue = *data.feature_index("venue");
  // Row 0 is A at home winning, row 1 is B away losing.
  EXPECT_EQ(data.X(0, venue), 1.0);
  EXPECT_EQ(data.y[0], 1);
  EXPECT_EQ(data.X(1, venue), 0.0);
  EXPECT_EQ(data.y[1], 2);
  // C v D drawn: the away row encodes (0, 0).
  EXPECT_EQ(data.X(3, venue), 0.0);
  EXPECT_EQ(data.y[3], 0);

  EXPECT_FALSE(data.feature_index("result"));
  EXPECT_FALSE(data.feature_index("gf"));
  EXPECT_FALSE(data.feature_index("ga"));
  EXPECT_TRUE(data.feature_index("xg"));
  EXPECT_EQ(data.rows(), load.records.size());
}

TEST(Encode, TeamCodesFollowFirstAppearance) {
  const auto records = impute(prune_columns(synthetic_league_records({.teams = 20, .seasons = 1})));
  const auto data = encode(records);

  // Oracle: walk the records in stable date order, noting each new name.
  std::vector<const MatchRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->date < b->date; });
  std::map<std::string, int> expected;
  for (const auto* r : order) {
    for (const auto* name : {&r->team, &r->opponent}) {
      if (!expected.contains(*name)) expected.emplace(*name, static_cast<int>(expected.size()));
    }
  }
  EXPECT_EQ(data.encoders.team_code, expected);
  std::set<int> codes;
  for (const auto& [name, code] : data.encoders.team_code) codes.insert(code);
  EXPECT_EQ(codes.size(), 20u);
  EXPECT_EQ(*codes.begin(), 0);
  EXPECT_EQ(*codes.rbegin(), 19);
}

TEST(Encode, DecodeRoundTrip) {
  const auto records = impute(prune_columns(synthetic_league_records({.teams = 6, .seasons = 2})));
  const auto data = encode(records);
  ASSERT_EQ(data.rows(), records.size());

  using Key = std::tuple<std::string, std::string, Venue, Result, std::string, int>;
  std::multiset<Key> original;
  for (const auto& r : records) {
    original.emplace(r.team, r.opponent, r.venue, r.result, r.season, r.matchweek);
  }
  std::multiset<Key> decoded;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto d = decode(data, i);
    decoded.emplace(d.team, d.opponent, d.venue, d.result, data.meta[i].season, data.meta[i].matchweek);
  }
  EXPECT_EQ(original, decoded);
}

TEST(Encode, ChronologicalRowsTwoPerFixture) {
  const auto data = league_dataset(6, 2);
  EXPECT_EQ(data.rows(), 2u * 2u * 30u);
  for (std::size_t i = 1; i < data.rows(); ++i) {
    EXPECT_LE(data.meta[i - 1].date, data.meta[i].date);
    EXPECT_LE(data.meta[i - 1].fixture, data.meta[i].fixture);
  }
  for (std::size_t i = 0; i < data.rows(); i += 2) {
    EXPECT_EQ(data.meta[i].fixture, data.meta[i + 1].fixture);
    EXPECT_EQ(decode(data, i).venue, Venue::Home);
    EXPECT_EQ(decode(data, i + 1).venue, Venue::Away);
  }
}

TEST(Encode, UnpairedFixtureRejected) {
  const std::string csv =
      kToyHeader + "\n" + toy_row("2021-08-14", "s", 1, "A", "B", "Home", "W") + "\n";
  const auto load = parse_text(csv);
  EXPECT_ODDSMITH_ERROR(encode(load.records), ErrorCode::MalformedRow);
  EncodeOptions loose;
  loose.require_pairs = false;
  EXPECT_EQ(encode(load.records, loose).rows(), 1u);
}

TEST(Encode, FixedEncodersRejectNewTeams) {
  const auto load = parse_text(ten_row_csv());
  EncodingMaps maps;
  maps.team_code = {{"A", 0}, {"B", 1}};
  EXPECT_ODDSMITH_ERROR(encode(load.records, {}, &maps), ErrorCode::UnknownTeam);
}

TEST(Normalize, MinMaxExamples) {
  Matrix X(3, 2);
  const double a[] = {2, 4, 6};
  for (int i = 0; i < 3; ++i) {
    X(i, 0) = a[i];
    X(i, 1) = 5;
  }
  const auto data = table(X, {0, 1, 2}, false);
  const auto [scaled, params] = normalize(data);
  EXPECT_EQ(scaled.X(0, 0), 0.0);
  EXPECT_EQ(scaled.X(1, 0), 0.5);
  EXPECT_EQ(scaled.X(2, 0), 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(scaled.X(i, 1), 0.0);
  // Copy semantics.
  EXPECT_EQ(data.X(2, 0), 6.0);
  EXPECT_FALSE(data.normalization);
  ASSERT_TRUE(scaled.normalization);

  const Matrix back = denormalize(scaled.X, params);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(back(i, 0), a[i], 1e-9);
    EXPECT_NEAR(back(i, 1), 5.0, 1e-9);
  }
}

TEST(Normalize, RandomRoundTripAndRange) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix X(30, 5);
    for (std::size_t r = 0; r < 30; ++r) {
      for (std::size_t c = 0; c < 5; ++c) X(r, c) = rng.uniform(-1e3, 1e3) * (c + 1);
    }
    const auto [scaled, params] = normalize(table(X, std::vector<int>(30, 0), false));
    const Matrix back = denormalize(scaled.X, params);
    for (std::size_t r = 0; r < 30; ++r) {
      for (std::size_t c = 0; c < 5; ++c) {
        EXPECT_GE(scaled.X(r, c), 0.0);
        EXPECT_LE(scaled.X(r, c), 1.0);
        EXPECT_LE(std::abs(back(r, c) - X(r, c)), 1e-9 * std::max(1.0, std::abs(X(r, c))));
      }
    }
    // Applying the fitted parameters to the same data reproduces the scaling.
    const auto again = apply_normalization(table(X, std::vector<int>(30, 0), false), params);
    EXPECT_EQ(again.X, scaled.X);
  }
}

TEST(SeasonAverage, PriorWeekMean) {
  std::string csv = kToyHeader + "\n";
  const char* dates[] = {"2021-08-14", "2021-08-21", "2021-08-28"};
  for (int w = 0; w < 3; ++w) {
    csv += toy_row(dates[w], "2021-2022", w + 1, "A", "B", w % 2 ? "Away" : "Home", "W",
                   static_cast<double>(w + 1)) + "\n";
    csv += toy_row(dates[w], "2021-2022", w + 1, "B", "A", w % 2 ? "Home" : "Away", "L", 0.5) + "\n";
  }
  auto load = parse_text(csv);
  const auto data = encode(load.records);
  const auto out = season_average_substitute(data, "2021-2022", 3);
  const auto xg = *data.feature_index("xg");
  const auto team_a = data.encoders.team("A");

  bool seen = false;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    if (out.meta[r].matchweek == 3 && out.meta[r].team == team_a) {
      EXPECT_DOUBLE_EQ(out.X(r, xg), 1.5);
      seen = true;
    }
    if (out.meta[r].matchweek != 3) {
      for (std::size_t c = 0; c < out.features(); ++c) EXPECT_EQ(out.X(r, c), data.X(r, c));
    }
  }
  EXPECT_TRUE(seen);
  EXPECT_EQ(out.y, data.y);
  EXPECT_EQ(out.meta, data.meta);

  EXPECT_ODDSMITH_ERROR(season_average_substitute(data, "2021-2022", 1), ErrorCode::NoPriorMatches);
  EXPECT_ODDSMITH_ERROR(season_average_substitute(data, "2021-2022", 9), ErrorCode::InsufficientData);
}

TEST(SeasonAverage, DescriptorsUntouched) {
  const auto data = league_dataset(6, 1);
  const auto out = season_average_substitute(data, "2021-2022", 10);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < data.descriptor_features; ++c) EXPECT_EQ(out.X(r, c), data.X(r, c));
  }
}

TEST(Split, FullLeagueSizes) {
  const auto data = league_dataset(20, 2);
  ASSERT_EQ(data.rows(), 1520u);
  const auto two = split(data, SplitSpec::two_seasons());
  EXPECT_EQ(two.train.rows(), 1216u);
  EXPECT_EQ(two.test.rows(), 304u);

  const auto one = split(data, SplitSpec::one_season());
  EXPECT_EQ(one.test.rows(), 304u);
  for (const auto& m : one.train.meta) EXPECT_EQ(m.season, "2022-2023");

  const auto last = split(data, SplitSpec::last_matchweeks(10));
  EXPECT_EQ(last.test.rows(), 304u);
  EXPECT_EQ(last.test.meta, two.test.meta);
  std::set<int> weeks;
  for (const auto& m : last.train.meta) weeks.insert(m.matchweek);
  EXPECT_EQ(weeks.size(), 10u);
}

TEST(Split, TooFewMatchweeks) {
  // Six teams play ten matchweeks per season; trim to nine.
  auto records = impute(prune_columns(synthetic_league_records({.teams = 6, .seasons = 1})));
  std::erase_if(records, [](const MatchRecord& r) { return r.matchweek > 9; });
  const auto data = encode(records);
  EXPECT_ODDSMITH_ERROR(split(data, SplitSpec::last_matchweeks(10)), ErrorCode::InsufficientData);
  EXPECT_ODDSMITH_ERROR(split(data, SplitSpec::two_seasons()), ErrorCode::InsufficientData);
}

TEST(Split, NoLeakAndPartition) {
  Rng rng(5);
  const auto data = league_dataset(8, 2, 3);
  for (int trial = 0; trial < 25; ++trial) {
    // Random contiguous-in-time subsets keep whole fixtures.
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < data.rows(); r += 2) {
      if (rng.uniform() < 0.8) {
        keep.push_back(r);
        keep.push_back(r + 1);
      }
    }
    const auto subset = data.select_rows(keep);
    const SplitSpec specs[] = {SplitSpec::two_seasons(), SplitSpec::one_season(),
                               SplitSpec::last_matchweeks(3)};
    for (const auto& spec : specs) {
      TrainTest tt;
      try {
        tt = split(subset, spec);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
        continue;
      }
      Date max_train = tt.train.meta.front().date;
      for (const auto& m : tt.train.meta) max_train = std::max(max_train, m.date);
      for (const auto& m : tt.test.meta) EXPECT_LE(max_train, m.date);
      if (spec.variant == SplitVariant::TwoSeasons) {
        EXPECT_EQ(tt.train.rows() + tt.test.rows(), subset.rows());
      }
    }
  }
}

TEST(Split, Labels) {
  EXPECT_EQ(SplitSpec::two_seasons().label(), "two_seasons");
  EXPECT_EQ(SplitSpec::one_season().label(), "one_season");
  EXPECT_EQ(SplitSpec::last_matchweeks(10).label(), "last_10_matchweeks");
}
