#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/error.hpp"
#include "oddsmith/models.hpp"
#include "oddsmith/random.hpp"
#include "oddsmith/synthetic.hpp"

// gtest helper: `stmt` must throw oddsmith::Error carrying `expected`.
#define EXPECT_ODDSMITH_ERROR(stmt, expected)                              \
  do {                                                                     \
    try {                                                                  \
      stmt;                                                                \
      ADD_FAILURE() << "no exception, expected " << #expected;             \
    } catch (const ::oddsmith::Error& odd_err) {                           \
      EXPECT_EQ(odd_err.code(), expected) << odd_err.what();               \
    }                                                                      \
  } while (0)

namespace oddsmith::testing {

inline const std::string kToyHeader =
    "date,season,matchweek,team,opponent,venue,result,gf,ga,xg,xga,sca,gca,sh,sot,poss";

/// One CSV row in the kToyHeader layout with plausible statistics.
inline std::string toy_row(const std::string& date, const std::string& season, int week,
                           const std::string& team, const std::string& opp,
                           const std::string& venue, const std::string& result, double xg = 1.2) {
  std::ostringstream out;
  out << date << ',' << season << ',' << week << ',' << team << ',' << opp << ',' << venue << ','
      << result << ",1,1," << xg << ",1.1,20,2,12,4,50";
  return out.str();
}

/// Parses CSV text held in memory.
inline CsvLoad parse_text(const std::string& text, std::span<const std::string> schema = {}) {
  std::istringstream in(text);
  return parse_csv(in, schema);
}

/// A small simulated league run through the standard preparation steps.
inline Dataset league_dataset(int teams = 6, int seasons = 2, std::uint64_t seed = 7) {
  LeagueOptions options;
  options.teams = teams;
  options.seasons = seasons;
  options.seed = seed;
  auto records = impute(prune_columns(synthetic_league_records(options)));
  return encode(records);
}

/// A bare dataset over a design matrix: features f0..f(d-1), one fixture per
/// row on consecutive days, and an identity normalization so models that
/// demand scaled input accept it as is.
inline Dataset table(const Matrix& X, std::vector<int> y, bool mark_normalized = true) {
  Dataset d;
  for (std::size_t j = 0; j < X.cols(); ++j) d.feature_names.push_back("f" + std::to_string(j));
  d.X = X;
  d.y = std::move(y);
  const std::chrono::sys_days start{std::chrono::year{2021} / 8 / 1};
  for (std::size_t r = 0; r < X.rows(); ++r) {
    RowMeta m;
    m.date = Date{start + std::chrono::days{static_cast<int>(r)}};
    m.season = "2021-2022";
    m.matchweek = 1 + static_cast<int>(r);
    m.fixture = r;
    d.meta.push_back(m);
  }
  if (mark_normalized) {
    d.normalization = NormalizationParams{std::vector<double>(X.cols(), 0.0),
                                          std::vector<double>(X.cols(), 1.0)};
  }
  return d;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform();
  }
  return m;
}

/// Three well separated clusters along the first two axes; class c sits
/// around angle 2*pi*c/3.
inline Dataset separable_three_class(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(3 * per_class, 2);
  std::vector<int> y;
  for (int c = 0; c < 3; ++c) {
    const double angle = 2.0 * 3.14159265358979 * c / 3.0;
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t r = c * per_class + i;
      X(r, 0) = 0.5 + 0.35 * std::cos(angle) + 0.05 * rng.uniform(-1.0, 1.0);
      X(r, 1) = 0.5 + 0.35 * std::sin(angle) + 0.05 * rng.uniform(-1.0, 1.0);
      y.push_back(c);
    }
  }
  return table(X, y);
}

class TempDir {
 public:
  TempDir() {
    Rng rng(static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = std::filesystem::temp_directory_path() /
            ("oddsmith-test-" + std::to_string(rng.next() % 1000000000));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace oddsmith::testing
