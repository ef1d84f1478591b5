#include "oddsmith/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "oddsmith/error.hpp"
#include "oddsmith/parallel.hpp"

namespace oddsmith {
namespace {

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

std::string_view impute_name(ImputeStrategy s) {
  switch (s) {
    case ImputeStrategy::Mean: return "mean";
    case ImputeStrategy::Median: return "median";
    case ImputeStrategy::Mode: return "mode";
  }
  return "mean";
}

ImputeStrategy parse_impute(std::string_view s) {
  if (s == "mean") return ImputeStrategy::Mean;
  if (s == "median") return ImputeStrategy::Median;
  if (s == "mode") return ImputeStrategy::Mode;
  bad_config("unknown imputation strategy '" + std::string(s) + "'");
}

Json split_to_json(const SplitSpec& s) {
  Json out;
  switch (s.variant) {
    case SplitVariant::TwoSeasons: out["variant"] = "two_seasons"; break;
    case SplitVariant::OneSeason: out["variant"] = "one_season"; break;
    case SplitVariant::LastNMatchweeks:
      out["variant"] = "last_matchweeks";
      out["matchweeks"] = s.matchweeks;
      break;
  }
  out["test_fraction"] = s.test_fraction;
  return out;
}

SplitSpec split_from_json(const Json& j) {
  SplitSpec s;
  const std::string variant = j.is_string() ? j.get<std::string>() : j.at("variant").get<std::string>();
  if (variant == "two_seasons") {
    s.variant = SplitVariant::TwoSeasons;
  } else if (variant == "one_season") {
    s.variant = SplitVariant::OneSeason;
  } else if (variant == "last_matchweeks") {
    s.variant = SplitVariant::LastNMatchweeks;
  } else {
    bad_config("unknown split variant '" + variant + "'");
  }
  if (j.is_object()) {
    s.matchweeks = j.value("matchweeks", s.matchweeks);
    s.test_fraction = j.value("test_fraction", s.test_fraction);
  }
  return s;
}

Dataset training_view(const Dataset& data, const FeatureSubset& subset) {
  return data.select_features(subset.names);
}

}  // namespace

Hyperparams ExperimentConfig::params_for(ModelKind kind) const {
  for (const auto& hp : hyperparams) {
    if (kind_of(hp) == kind) return with_seed(hp, seed);
  }
  return with_seed(default_hyperparams(kind), seed);
}

void ExperimentConfig::validate() const {
  if (data.empty()) bad_config("no data path given");
  if (splits.empty()) bad_config("no splits configured");
  if (models.empty()) bad_config("no models configured");
  if (selections.empty()) bad_config("no feature selections configured");
  if (k < 1) bad_config("k must be >= 1");
  if (folds < 2) bad_config("folds must be >= 2");
  if (!(margin >= 0.0 && margin < 1.0)) bad_config("margin must lie in [0, 1)");
  for (const auto& s : splits) {
    if (!(s.test_fraction > 0.0 && s.test_fraction < 1.0)) bad_config("test_fraction must lie in (0, 1)");
    if (s.variant == SplitVariant::LastNMatchweeks && s.matchweeks < 1) {
      bad_config("matchweek window must be >= 1");
    }
  }
  try {
    for (const auto& hp : hyperparams) oddsmith::validate(hp);
    oddsmith::validate(rfe_estimator);
  } catch (const Error& e) {
    bad_config(e.what());
  }
}

Json to_json(const ExperimentConfig& c) {
  Json splits = Json::array();
  for (const auto& s : c.splits) splits.push_back(split_to_json(s));
  Json models = Json::array();
  for (const auto m : c.models) models.push_back(to_string(m));
  Json hps = Json::object();
  for (const auto kind : kAllModelKinds) {
    Json hp = to_json(c.params_for(kind));
    hp.erase("kind");
    hps[std::string(to_string(kind))] = hp;
  }
  Json selections = Json::array();
  for (const auto s : c.selections) selections.push_back(to_string(s));
  return {{"data", c.data.string()},
          {"stats", c.stats},
          {"impute", impute_name(c.impute)},
          {"exclude", c.exclude},
          {"splits", splits},
          {"models", models},
          {"hyperparams", hps},
          {"selections", selections},
          {"k", c.k},
          {"rfe_estimator", to_json(with_seed(c.rfe_estimator, c.seed))},
          {"tune", c.tune},
          {"folds", c.folds},
          {"randomized", c.randomized ? Json{{"n_samples", c.randomized->n_samples},
                                             {"seed", c.randomized->seed}}
                                      : Json(nullptr)},
          {"margin", c.margin},
          {"seed", c.seed},
          {"output", c.output.string()}};
}

ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig c) {
  if (!j.is_object()) bad_config("configuration must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "data") c.data = value.get<std::string>();
      else if (key == "stats") c.stats = value.get<std::vector<std::string>>();
      else if (key == "impute") c.impute = parse_impute(value.get<std::string>());
      else if (key == "exclude") c.exclude = value.get<std::vector<std::string>>();
      else if (key == "splits") {
        c.splits.clear();
        for (const auto& s : value) c.splits.push_back(split_from_json(s));
      } else if (key == "models") {
        c.models.clear();
        for (const auto& m : value) c.models.push_back(parse_model_kind(m.get<std::string>()));
      } else if (key == "hyperparams") {
        for (const auto& [name, params] : value.items()) {
          const auto kind = parse_model_kind(name);
          auto hp = hyperparams_from_json(kind, params);
          std::erase_if(c.hyperparams, [&](const Hyperparams& h) { return kind_of(h) == kind; });
          c.hyperparams.push_back(std::move(hp));
        }
      } else if (key == "selections") {
        c.selections.clear();
        for (const auto& s : value) c.selections.push_back(parse_selection_method(s.get<std::string>()));
      } else if (key == "k") c.k = value.get<std::size_t>();
      else if (key == "rfe_estimator") c.rfe_estimator = hyperparams_from_json(value);
      else if (key == "tune") c.tune = value.get<bool>();
      else if (key == "folds") c.folds = value.get<int>();
      else if (key == "randomized") {
        if (value.is_null()) {
          c.randomized.reset();
        } else {
          c.randomized = Randomized{value.value("n_samples", std::size_t{10}),
                                    value.value("seed", std::uint64_t{0})};
        }
      } else if (key == "margin") c.margin = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "output") c.output = value.get<std::string>();
      else bad_config("unknown configuration key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    bad_config(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    bad_config(e.what());
  }
  return c;
}

std::string CellResult::id() const {
  return split.label() + "__" + std::string(to_string(selection)) + "__" + std::string(to_string(model));
}

Json to_json(const CellResult& cell) {
  Json out{{"id", cell.id()},
           {"model", to_string(cell.model)},
           {"split", cell.split.label()},
           {"selection", to_string(cell.selection)},
           {"features", cell.features},
           {"hyperparams", to_json(cell.hyperparams)},
           {"train_rows", cell.train_rows},
           {"test_rows", cell.test_rows},
           {"report", to_json(cell.report)}};
  if (cell.search) {
    Json table = Json::array();
    for (const auto& row : cell.search->table) {
      table.push_back({{"hyperparams", to_json(row.hp)},
                       {"mean_accuracy", row.mean_accuracy},
                       {"fold_accuracies", row.fold_accuracies}});
    }
    out["search"] = table;
  }
  return out;
}

Dataset prepare_dataset(const ExperimentConfig& config, std::vector<std::string>* warnings) {
  if (config.data.extension() == ".json") return dataset_from_json(read_json_file(config.data));
  auto loaded = load_csv(config.data, config.stats);
  if (warnings) *warnings = std::move(loaded.warnings);
  auto records = impute(prune_columns(std::move(loaded.records)), config.impute);
  EncodeOptions options;
  options.excluded_features = config.exclude;
  return encode(records, options);
}

FeatureSubset select_features(const ExperimentConfig& config, SelectionMethod method,
                              const Dataset& train) {
  switch (method) {
    case SelectionMethod::All:
      return all_features(train);
    case SelectionMethod::Correlation:
      return select_by_correlation(train, config.k);
    case SelectionMethod::Rfe: {
      const auto hp = with_seed(config.rfe_estimator, config.seed);
      if (needs_normalized_input(kind_of(hp))) return rfe(hp, normalize(train).first, config.k);
      return rfe(hp, train, config.k);
    }
  }
  return all_features(train);
}

CellResult run_cell(const ExperimentConfig& config, ModelKind model, const SplitSpec& split,
                    const FeatureSubset& subset, const TrainTest& data) {
  CellResult cell{model, split, subset.method, subset.names, config.params_for(model), 0, 0, {}, std::nullopt};
  Dataset train_set = training_view(data.train, subset);
  Dataset test_set = training_view(data.test, subset);
  if (needs_normalized_input(model)) {
    auto [scaled, params] = normalize(train_set);
    train_set = std::move(scaled);
    test_set = apply_normalization(test_set, params);
  }
  if (config.tune) {
    const SearchMode mode = config.randomized ? SearchMode{*config.randomized} : SearchMode{Exhaustive{}};
    auto result = grid_search(cell.hyperparams, default_grid(model), train_set, config.folds, mode);
    cell.hyperparams = result.best;
    cell.search = std::move(result);
  }
  const auto fitted = train(cell.hyperparams, train_set);
  cell.train_rows = train_set.rows();
  cell.test_rows = test_set.rows();
  cell.report = report(test_set.y, predict_all(fitted, test_set));
  return cell;
}

ExperimentBundle run_experiment(const ExperimentConfig& config, const Dataset& dataset) {
  config.validate();

  struct SplitWork {
    TrainTest data;
    std::vector<FeatureSubset> subsets;
  };
  std::vector<SplitWork> work(config.splits.size());
  for (std::size_t s = 0; s < config.splits.size(); ++s) {
    work[s].data = split(dataset, config.splits[s]);
    work[s].subsets.resize(config.selections.size());
  }

  // Feature subsets first (each RFE run parallelizes internally), then cells.
  const std::size_t n_sel = config.selections.size();
  parallel_for(config.splits.size() * n_sel, [&](std::size_t i) {
    auto& w = work[i / n_sel];
    w.subsets[i % n_sel] = select_features(config, config.selections[i % n_sel], w.data.train);
  });

  const std::size_t n_models = config.models.size();
  const std::size_t per_split = n_sel * n_models;
  ExperimentBundle bundle{to_json(config), std::vector<CellResult>(config.splits.size() * per_split)};
  parallel_for(bundle.cells.size(), [&](std::size_t i) {
    const std::size_t s = i / per_split;
    const std::size_t sel = (i % per_split) / n_models;
    const std::size_t m = i % n_models;
    bundle.cells[i] = run_cell(config, config.models[m], config.splits[s], work[s].subsets[sel], work[s].data);
  });
  return bundle;
}

std::string render_table(const Json& cells) {
  std::ostringstream out;
  char line[160];
  std::vector<std::string> models;
  for (const auto& c : cells) {
    const auto m = c.at("model").get<std::string>();
    if (std::find(models.begin(), models.end(), m) == models.end()) models.push_back(m);
  }
  for (const auto& model : models) {
    out << model << '\n';
    std::snprintf(line, sizeof line, "%-36s %8s %6s %10s %8s %8s\n", "Cell", "Accuracy", "Class",
                  "Precision", "Recall", "F-1");
    out << line;
    for (const auto& c : cells) {
      if (c.at("model") != model) continue;
      const auto& r = c.at("report");
      const std::string label = c.at("split").get<std::string>() + " / " + c.at("selection").get<std::string>();
      for (const auto& pc : r.at("per_class")) {
        const int cls = pc.at("class").get<int>();
        if (cls == 0) {
          std::snprintf(line, sizeof line, "%-36s %8.2f", label.c_str(), r.at("accuracy").get<double>());
        } else {
          std::snprintf(line, sizeof line, "%-36s %8s", "", "");
        }
        out << line;
        std::snprintf(line, sizeof line, " %6d %10.2f %8.2f %8.2f\n", cls,
                      pc.at("precision").get<double>(), pc.at("recall").get<double>(),
                      pc.at("f1").get<double>());
        out << line;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string render_table(const std::vector<CellResult>& cells) {
  Json j = Json::array();
  for (const auto& c : cells) j.push_back(to_json(c));
  return render_table(j);
}

void write_bundle(const ExperimentBundle& bundle, const std::filesystem::path& dir) {
  Json cells = Json::array();
  for (const auto& cell : bundle.cells) {
    Json j = to_json(cell);
    write_json_file(dir / "cells" / (cell.id() + ".json"), j);
    cells.push_back(std::move(j));
  }
  write_json_file(dir / "config.json", bundle.config);
  write_file_atomic(dir / "table.txt", render_table(cells));
  write_json_file(dir / "bundle.json", Json{{"format", "oddsmith-bundle"},
                                            {"version", 1},
                                            {"config", bundle.config},
                                            {"cells", cells}});
}

}  // namespace oddsmith
