#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oddsmith/experiment.hpp"
#include "oddsmith/odds.hpp"
#include "support.hpp"

using namespace oddsmith;
using namespace oddsmith::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt";
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd = std::string(ODDSMITH_CLI) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::filesystem::path make_league(const TempDir& dir, int teams, int seasons, const std::string& name,
                                  int seed = 7) {
  const auto path = dir.path() / name;
  const std::string cmd = std::string(SYNTH_TOOL) + " --teams " + std::to_string(teams) +
                          " --seasons " + std::to_string(seasons) + " --seed " +
                          std::to_string(seed) + " --out " + path.string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  return path;
}

}  // namespace

TEST(Cli, IngestCountsAndSnapshotIsStable) {
  TempDir dir;
  const auto csv = make_league(dir, 20, 2, "league.csv");
  const auto a = run(dir, "ingest --data " + csv.string() + " --out " + (dir / "a.json").string());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("rows: 1520\n"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("columns: 52\n"), std::string::npos) << a.out;
  ASSERT_EQ(run(dir, "ingest --data " + csv.string() + " --out " + (dir / "b.json").string()).code, 0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(dataset_from_json(read_json_file(dir / "a.json")).rows(), 1520u);
}

TEST(Cli, InputErrorsExitTwo) {
  TempDir dir;
  std::ofstream(dir / "empty.csv").close();
  const auto empty = run(dir, "ingest --data " + (dir / "empty.csv").string() + " --out " +
                                  (dir / "x.json").string());
  EXPECT_EQ(empty.code, 2);
  EXPECT_NE(empty.err.find("EmptyFile"), std::string::npos) << empty.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "x.json"));

  EXPECT_EQ(run(dir, "ingest --data " + (dir / "missing.csv").string() + " --out x.json").code, 2);
  EXPECT_EQ(run(dir, "no-such-command").code, 2);
  EXPECT_EQ(run(dir, "ingest --bogus").code, 2);
  EXPECT_EQ(run(dir, "--help").code, 0);

  const auto csv = make_league(dir, 6, 2, "small.csv");
  const auto bad_set = run(dir, "train --data " + csv.string() + " --model knn --set k=0 --out " +
                                    (dir / "m.json").string());
  EXPECT_EQ(bad_set.code, 2) << bad_set.err;
  EXPECT_EQ(run(dir, "train --data " + csv.string() + " --model nope --out m.json").code, 2);
}

TEST(Cli, ForecastPricesOneMatchweek) {
  TempDir dir;
  const auto csv = make_league(dir, 16, 2, "league.csv");
  const auto model = (dir / "model.json").string();
  const auto trained = run(dir, "train --data " + csv.string() +
                                    " --model random_forest --set n_trees=40 --before-season 2022-2023"
                                    " --before-matchweek 10 --out " + model);
  ASSERT_EQ(trained.code, 0) << trained.err;

  const auto prefix = (dir / "week10").string();
  const auto fc = run(dir, "forecast --data " + csv.string() + " --model " + model +
                               " --season 2022-2023 --matchweek 10 --margin 0.05 --out " + prefix);
  ASSERT_EQ(fc.code, 0) << fc.err;

  const auto sheet = read_json_file(prefix + ".json");
  ASSERT_EQ(sheet.at("fixtures").size(), 8u);
  std::istringstream csv_text(slurp(prefix + ".csv"));
  std::string line;
  std::getline(csv_text, line);
  EXPECT_EQ(line, "home_team,away_team,odds_1,odds_X,odds_2,margin");
  for (const auto& f : sheet.at("fixtures")) {
    const auto& p = f.at("probabilities");
    const ProbTriple probs{{p.at("p_draw").get<double>(), p.at("p_home").get<double>(),
                            p.at("p_away").get<double>()}};
    EXPECT_NEAR(probs[0] + probs[1] + probs[2], 1.0, 1e-9);
    const auto book = make_book(probs, Margin(0.05));
    EXPECT_NEAR(f.at("odds").at("1").get<double>(), book.home, 1e-12);
    EXPECT_NEAR(f.at("odds").at("X").get<double>(), book.draw, 1e-12);
    EXPECT_NEAR(f.at("odds").at("2").get<double>(), book.away, 1e-12);

    ASSERT_TRUE(std::getline(csv_text, line));
    char expected[256];
    std::snprintf(expected, sizeof expected, "%s,%s,%.6f,%.6f,%.6f,0.050000",
                  f.at("home_team").get<std::string>().c_str(),
                  f.at("away_team").get<std::string>().c_str(), book.home, book.draw, book.away);
    EXPECT_EQ(line, expected);
  }

  // Betting the forecast against its own prices.
  const auto bt = run(dir, "backtest --forecast " + prefix + ".json --book " + prefix + ".csv --out " +
                               (dir / "bt.json").string());
  ASSERT_EQ(bt.code, 0) << bt.err;
  EXPECT_EQ(read_json_file(dir / "bt.json").at("n_bets"), 8);
}

TEST(Cli, ForecastRejectsSnapshotWithOtherTeamCodes) {
  TempDir dir;
  const auto csv = make_league(dir, 8, 2, "eight.csv");
  const auto other = make_league(dir, 10, 2, "ten.csv");
  ASSERT_EQ(run(dir, "ingest --data " + other.string() + " --out " + (dir / "ten.json").string()).code, 0);
  const auto model = (dir / "m.json").string();
  ASSERT_EQ(run(dir, "train --data " + csv.string() + " --model gradient_boost --set n_rounds=5 --out " +
                         model).code,
            0);
  const auto r = run(dir, "forecast --data " + (dir / "ten.json").string() + " --model " + model +
                              " --season 2022-2023 --matchweek 4 --out " + (dir / "f").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("FeatureMismatch"), std::string::npos) << r.err;
}

TEST(Cli, ExperimentMatchesLibraryAndFlagsBeatConfig) {
  TempDir dir;
  const auto csv = make_league(dir, 8, 2, "league.csv");
  std::ofstream(dir / "config.json") << R"({"k": 4, "seed": 5, "margin": 0.1})";
  const auto out = dir / "bundle";
  const auto r = run(dir, "experiment --config " + (dir / "config.json").string() + " --data " +
                              csv.string() + " --seed 9 --models knn,random_forest"
                              " --splits two_seasons,last_matchweeks:5 --selections all,correlation"
                              " --output " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;

  const auto used = experiment_config_from_json(read_json_file(out / "config.json"));
  EXPECT_EQ(used.k, 4u);
  EXPECT_EQ(used.seed, 9u);
  EXPECT_EQ(used.margin, 0.1);
  EXPECT_EQ(used.models, (std::vector<ModelKind>{ModelKind::Knn, ModelKind::RandomForest}));
  EXPECT_EQ(used.splits[1], SplitSpec::last_matchweeks(5));

  const auto bundle = run_experiment(used, prepare_dataset(used));
  const auto written = read_json_file(out / "bundle.json");
  ASSERT_EQ(written.at("cells").size(), 8u);
  for (std::size_t i = 0; i < bundle.cells.size(); ++i) {
    EXPECT_EQ(written.at("cells")[i].dump(), to_json(bundle.cells[i]).dump());
  }
  EXPECT_EQ(r.out, render_table(bundle.cells));

  const auto rep = run(dir, "report " + out.string());
  ASSERT_EQ(rep.code, 0);
  EXPECT_EQ(rep.out, r.out);
}
