// oddsmith: match-outcome models and 1x2 odds from team match logs.
//
// Exit status: 0 on success, 2 for unusable input (bad CSV, config or
// snapshot), 3 when a valid request fails while running.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "oddsmith/error.hpp"
#include "oddsmith/experiment.hpp"
#include "oddsmith/forecast.hpp"

namespace {

using namespace oddsmith;

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

// Options shared by every subcommand. Each maps onto an ExperimentConfig
// field and only overrides it when given on the command line.
struct Common {
  std::string config;
  std::string data;
  std::uint64_t seed = 0;
  std::vector<std::string> stats;
  bool all_stats = false;
  std::string impute;
  std::vector<std::string> exclude;
  double margin = 0.0;
  std::size_t k = 0;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App& cmd, Common& c) {
  c.opts["config"] = cmd.add_option("--config", c.config, "JSON configuration file");
  c.opts["data"] = cmd.add_option("--data", c.data, "match CSV or dataset snapshot (.json)");
  c.opts["seed"] = cmd.add_option("--seed", c.seed, "seed for every random choice");
  c.opts["stats"] = cmd.add_option("--stats", c.stats, "statistic roster (comma separated)")
                        ->delimiter(',');
  c.opts["all-stats"] = cmd.add_flag("--all-stats", c.all_stats, "keep every numeric column");
  c.opts["impute"] = cmd.add_option("--impute", c.impute, "mean, median or mode")
                         ->check(CLI::IsMember({"mean", "median", "mode"}));
  c.opts["exclude"] = cmd.add_option("--exclude", c.exclude, "statistics kept out of the features")
                          ->delimiter(',');
}

void add_margin(CLI::App& cmd, Common& c) {
  c.opts["margin"] = cmd.add_option("--margin", c.margin, "bookmaker overround, in [0, 1)");
}

void add_k(CLI::App& cmd, Common& c) {
  c.opts["k"] = cmd.add_option("--k", c.k, "feature subset size");
}

// Defaults, then the config file, then explicit flags.
ExperimentConfig resolve(const Common& c) {
  ExperimentConfig config;
  if (c.given("config")) config = experiment_config_from_json(read_json_file(c.config), config);
  if (c.given("data")) config.data = c.data;
  if (c.given("seed")) config.seed = c.seed;
  if (c.given("stats")) config.stats = c.stats;
  if (c.given("all-stats") && c.all_stats) config.stats.clear();
  if (c.given("impute")) {
    config = experiment_config_from_json(Json{{"impute", c.impute}}, config);
  }
  if (c.given("exclude")) config.exclude = c.exclude;
  if (c.given("margin")) config.margin = c.margin;
  if (c.given("k")) config.k = c.k;
  if (config.data.empty()) throw Error(ErrorCode::InvalidConfig, "no data given (--data or config)");
  return config;
}

Dataset load_data(const ExperimentConfig& config) {
  std::vector<std::string> warnings;
  Dataset data = prepare_dataset(config, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return data;
}

SplitSpec parse_split(const std::string& text) {
  if (text == "two_seasons") return SplitSpec::two_seasons();
  if (text == "one_season") return SplitSpec::one_season();
  const std::string prefix = "last_matchweeks";
  if (text.rfind(prefix, 0) == 0) {
    int n = 10;
    if (text.size() > prefix.size()) {
      if (text[prefix.size()] != ':') throw Error(ErrorCode::InvalidConfig, "bad split '" + text + "'");
      try {
        n = std::stoi(text.substr(prefix.size() + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad split '" + text + "'");
      }
    }
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "matchweek window must be >= 1");
    return SplitSpec::last_matchweeks(n);
  }
  throw Error(ErrorCode::InvalidConfig,
              "unknown split '" + text + "' (two_seasons, one_season, last_matchweeks[:n])");
}

// Rows strictly before the first row of (season, matchweek).
Dataset rows_before(const Dataset& data, const std::string& season, int matchweek) {
  std::size_t end = data.rows();
  for (std::size_t r = 0; r < data.rows(); ++r) {
    if (data.meta[r].season == season && data.meta[r].matchweek == matchweek) {
      end = r;
      break;
    }
  }
  if (end == data.rows()) {
    throw Error(ErrorCode::InsufficientData,
                "season " + season + " has no matchweek " + std::to_string(matchweek));
  }
  std::vector<std::size_t> keep(end);
  for (std::size_t i = 0; i < end; ++i) keep[i] = i;
  return data.select_rows(keep);
}

void write_text(const std::string& path, const std::string& text) {
  write_file_atomic(path, text);
}

// ---- ingest ----------------------------------------------------------------

struct IngestArgs {
  Common common;
  std::string out;
};

int run_ingest(IngestArgs& a) {
  ExperimentConfig config = resolve(a.common);
  if (config.data.extension() == ".json") {
    throw Error(ErrorCode::InvalidFormat, "ingest reads a match CSV");
  }
  auto loaded = load_csv(config.data, config.stats);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  const std::size_t rows = loaded.records.size();
  auto records = impute(prune_columns(std::move(loaded.records)), config.impute);
  EncodeOptions options;
  options.excluded_features = config.exclude;
  const Dataset data = encode(records, options);
  write_json_file(a.out, to_json(data));
  std::cout << "rows: " << rows << "\ncolumns: " << loaded.column_count
            << "\nfeatures: " << data.features() << "\nsnapshot: " << a.out << '\n';
  return 0;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  Common common;
  std::string output;
  std::vector<std::string> models;
  std::vector<std::string> splits;
  std::vector<std::string> selections;
  bool tune = false;
  int folds = 3;
  std::size_t randomized = 0;
  CLI::Option* output_opt = nullptr;
  CLI::Option* models_opt = nullptr;
  CLI::Option* splits_opt = nullptr;
  CLI::Option* selections_opt = nullptr;
  CLI::Option* tune_opt = nullptr;
  CLI::Option* folds_opt = nullptr;
  CLI::Option* randomized_opt = nullptr;
};

ExperimentConfig resolve_experiment(const ExperimentArgs& a) {
  ExperimentConfig config = resolve(a.common);
  if (a.output_opt->count()) config.output = a.output;
  if (a.models_opt->count()) {
    config.models.clear();
    for (const auto& m : a.models) config.models.push_back(parse_model_kind(m));
  }
  if (a.splits_opt->count()) {
    config.splits.clear();
    for (const auto& s : a.splits) config.splits.push_back(parse_split(s));
  }
  if (a.selections_opt->count()) {
    config.selections.clear();
    for (const auto& s : a.selections) config.selections.push_back(parse_selection_method(s));
  }
  if (a.tune_opt->count()) config.tune = a.tune;
  if (a.folds_opt->count()) config.folds = a.folds;
  if (a.randomized_opt->count()) {
    config.randomized = Randomized{a.randomized, config.seed};
    config.tune = true;
  }
  config.validate();
  return config;
}

int run_experiment_cmd(ExperimentArgs& a) {
  const ExperimentConfig config = resolve_experiment(a);
  const Dataset data = load_data(config);
  const auto bundle = run_experiment(config, data);
  write_bundle(bundle, config.output);
  std::cout << render_table(bundle.cells);
  std::cerr << bundle.cells.size() << " cells written to " << config.output.string() << '\n';
  return 0;
}

// ---- select ----------------------------------------------------------------

struct SelectArgs {
  Common common;
  std::string method = "rfe";
  std::string split;
  std::string estimator;
  std::string out;
  std::string correlation_csv;
};

int run_select(SelectArgs& a) {
  const ExperimentConfig config = resolve(a.common);
  config.validate();
  ExperimentConfig effective = config;
  if (!a.estimator.empty()) {
    effective.rfe_estimator = default_hyperparams(parse_model_kind(a.estimator));
  }
  Dataset data = load_data(config);
  if (!a.split.empty()) data = split(data, parse_split(a.split)).train;
  const auto subset = select_features(effective, parse_selection_method(a.method), data);
  if (!a.out.empty()) write_json_file(a.out, to_json(subset));
  if (!a.correlation_csv.empty()) {
    write_text(a.correlation_csv, correlation_csv(correlation_matrix(data, true)));
  }
  for (const auto& name : subset.names) std::cout << name << '\n';
  return 0;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string model = "random_forest";
  std::vector<std::string> set;
  std::string features;
  std::string split;
  std::string before_season;
  int before_matchweek = 0;
  std::string out;
};

int run_train(TrainArgs& a) {
  const ExperimentConfig config = resolve(a.common);
  const ModelKind kind = parse_model_kind(a.model);
  Hyperparams hp = config.params_for(kind);
  for (const auto& assignment : a.set) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "--set expects name=value, got '" + assignment + "'");
    }
    double value = 0.0;
    try {
      value = std::stod(assignment.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "--set value is not a number: '" + assignment + "'");
    }
    try {
      hp = with_param(hp, assignment.substr(0, eq), value);
      validate(hp);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
  }

  Dataset data = load_data(config);
  const EncodingMaps encoders = data.encoders;
  if (!a.before_season.empty()) data = rows_before(data, a.before_season, a.before_matchweek);
  if (!a.split.empty()) data = split(data, parse_split(a.split)).train;
  if (!a.features.empty()) {
    data = data.select_features(feature_subset_from_json(read_json_file(a.features)).names);
  }
  if (needs_normalized_input(kind)) data = normalize(data).first;

  const auto model = train(hp, data);
  Json j = to_json(model);
  j["encoders"] = to_json(encoders);
  write_json_file(a.out, j);

  const auto predictions = predict_all(model, data);
  std::printf("%s trained on %zu rows, %zu features; training accuracy %.4f\n",
              std::string(to_string(kind)).c_str(), data.rows(), data.features(),
              accuracy(data.y, predictions));
  std::printf("model: %s\n", a.out.c_str());
  return 0;
}

// ---- forecast --------------------------------------------------------------

struct ForecastArgs {
  Common common;
  std::string model;
  std::string season;
  int matchweek = 0;
  std::string out = "forecast";
};

int run_forecast(ForecastArgs& a) {
  const ExperimentConfig config = resolve(a.common);
  const Margin margin(config.margin);
  const Json model_json = read_json_file(a.model);
  const TrainedModel model = model_from_json(model_json);

  Dataset history;
  if (config.data.extension() == ".json") {
    history = dataset_from_json(read_json_file(config.data));
    if (model_json.contains("encoders") &&
        encoding_maps_from_json(model_json.at("encoders")) != history.encoders) {
      throw Error(ErrorCode::FeatureMismatch, "snapshot team codes differ from the model's");
    }
  } else {
    auto loaded = load_csv(config.data, config.stats);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    auto records = impute(prune_columns(std::move(loaded.records)), config.impute);
    EncodeOptions options;
    options.excluded_features = config.exclude;
    if (model_json.contains("encoders")) {
      const EncodingMaps fixed = encoding_maps_from_json(model_json.at("encoders"));
      history = encode(records, options, &fixed);
    } else {
      history = encode(records, options);
    }
  }

  const Dataset fixtures = upcoming_fixtures(history, a.season, a.matchweek);
  const auto rows = forecast(model, fixtures, margin);
  const std::string csv = odds_sheet_csv(rows, margin);
  write_text(a.out + ".csv", csv);
  write_json_file(a.out + ".json", odds_sheet_json(rows, margin));

  std::printf("%-14s %-14s %7s %7s %7s %4s %8s %8s %8s\n", "home", "away", "p(1)", "p(X)", "p(2)",
              "pick", "1", "X", "2");
  for (const auto& r : rows) {
    std::printf("%-14s %-14s %7.3f %7.3f %7.3f %4s %8.2f %8.2f %8.2f\n", r.home_team.c_str(),
                r.away_team.c_str(), r.probs.home(), r.probs.draw(), r.probs.away(),
                std::string(outcome_label(r.predicted)).c_str(), r.odds.home, r.odds.draw,
                r.odds.away);
  }
  std::printf("odds sheet: %s.csv, %s.json\n", a.out.c_str(), a.out.c_str());
  return 0;
}

// ---- backtest --------------------------------------------------------------

struct BacktestArgs {
  std::string forecast;
  std::string book;
  double stake = 1.0;
  std::string out;
};

int run_backtest(BacktestArgs& a) {
  const auto rows = forecast_rows_from_json(read_json_file(a.forecast));
  std::ifstream in(a.book, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + a.book);
  const auto book_rows = parse_book_csv(in);

  std::map<std::pair<std::string, std::string>, OddsTriple> book;
  for (const auto& b : book_rows) book[{b.home_team, b.away_team}] = b.odds;

  std::vector<ProbTriple> probs;
  std::vector<int> actuals;
  std::vector<OddsTriple> prices;
  for (const auto& r : rows) {
    const auto it = book.find({r.home_team, r.away_team});
    if (it == book.end()) {
      throw Error(ErrorCode::UnknownTeam,
                  "book has no price for " + r.home_team + " v " + r.away_team);
    }
    probs.push_back(r.probs);
    actuals.push_back(r.actual);
    prices.push_back(it->second);
  }
  const auto result = backtest(probs, actuals, prices, FlatStakeArgmax{a.stake});
  const Json j = to_json(result);
  if (!a.out.empty()) write_json_file(a.out, j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
  std::string input;
};

int run_report(ReportArgs& a) {
  std::filesystem::path path = a.input;
  if (std::filesystem::is_directory(path)) path /= "bundle.json";
  const Json j = read_json_file(path);
  if (j.is_object() && j.value("format", "") == "oddsmith-bundle") {
    std::cout << render_table(j.at("cells"));
  } else if (j.is_object() && j.contains("report") && j.contains("model")) {
    std::cout << render_table(Json::array({j}));
  } else {
    throw Error(ErrorCode::InvalidFormat, path.string() + " is neither a bundle nor a cell report");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oddsmith: football match-outcome models and 1x2 odds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "oddsmith 0.1.0");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "validate a match CSV and write a dataset snapshot");
  add_common(*ingest_cmd, ingest.common);
  ingest_cmd->add_option("--out", ingest.out, "snapshot path (.json)")->required();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "run the models x splits x selections matrix");
  add_common(*exp_cmd, exp.common);
  add_margin(*exp_cmd, exp.common);
  add_k(*exp_cmd, exp.common);
  exp.output_opt = exp_cmd->add_option("--output", exp.output, "bundle directory");
  exp.models_opt = exp_cmd->add_option("--models", exp.models, "random_forest,knn,svm,gradient_boost")
                       ->delimiter(',');
  exp.splits_opt = exp_cmd->add_option("--splits", exp.splits, "two_seasons,one_season,last_matchweeks[:n]")
                       ->delimiter(',');
  exp.selections_opt = exp_cmd->add_option("--selections", exp.selections, "all,rfe,correlation")
                           ->delimiter(',');
  exp.tune_opt = exp_cmd->add_flag("--tune", exp.tune, "grid-search hyperparameters per cell");
  exp.folds_opt = exp_cmd->add_option("--folds", exp.folds, "time-series folds for tuning");
  exp.randomized_opt =
      exp_cmd->add_option("--randomized", exp.randomized, "sample this many grid points instead");

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "choose a feature subset");
  add_common(*sel_cmd, sel.common);
  add_k(*sel_cmd, sel.common);
  sel_cmd->add_option("--method", sel.method, "all, rfe or correlation")
      ->check(CLI::IsMember({"all", "rfe", "correlation"}));
  sel_cmd->add_option("--split", sel.split, "select on the training part of this split");
  sel_cmd->add_option("--estimator", sel.estimator, "model behind RFE (default random_forest)");
  sel_cmd->add_option("--out", sel.out, "subset JSON path");
  sel_cmd->add_option("--correlation-csv", sel.correlation_csv, "also write the correlation matrix");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "fit one model and write a model snapshot");
  add_common(*train_cmd, tr.common);
  train_cmd->add_option("--model", tr.model, "random_forest, knn, svm or gradient_boost");
  train_cmd->add_option("--set", tr.set, "hyperparameter override name=value (repeatable)");
  train_cmd->add_option("--features", tr.features, "subset JSON written by select");
  train_cmd->add_option("--split", tr.split, "train on the training part of this split");
  auto* before_season =
      train_cmd->add_option("--before-season", tr.before_season, "train only on rows before ...");
  auto* before_week =
      train_cmd->add_option("--before-matchweek", tr.before_matchweek, "... this matchweek");
  before_season->needs(before_week);
  before_week->needs(before_season);
  train_cmd->add_option("--out", tr.out, "model snapshot path")->required();

  ForecastArgs fc;
  auto* fc_cmd = app.add_subcommand("forecast", "price one matchweek from season-average features");
  add_common(*fc_cmd, fc.common);
  add_margin(*fc_cmd, fc.common);
  fc_cmd->add_option("--model", fc.model, "model snapshot")->required();
  fc_cmd->add_option("--season", fc.season, "season to forecast")->required();
  fc_cmd->add_option("--matchweek", fc.matchweek, "matchweek to forecast")->required();
  fc_cmd->add_option("--out", fc.out, "output prefix for .csv and .json");

  BacktestArgs bt;
  auto* bt_cmd = app.add_subcommand("backtest", "flat-stake argmax betting against a book");
  bt_cmd->add_option("--forecast", bt.forecast, "odds sheet JSON from forecast")->required();
  bt_cmd->add_option("--book", bt.book, "bookmaker odds CSV")->required();
  bt_cmd->add_option("--stake", bt.stake, "stake per bet");
  bt_cmd->add_option("--out", bt.out, "report JSON path");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "render the results table of a bundle or cell");
  rep_cmd->add_option("input", rep.input, "bundle directory, bundle.json or cell JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest);
    if (*exp_cmd) return run_experiment_cmd(exp);
    if (*sel_cmd) return run_select(sel);
    if (*train_cmd) return run_train(tr);
    if (*fc_cmd) return run_forecast(fc);
    if (*bt_cmd) return run_backtest(bt);
    if (*rep_cmd) return run_report(rep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_input_error() ? kExitInput : kExitRuntime;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: InvalidFormat: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: Io: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
