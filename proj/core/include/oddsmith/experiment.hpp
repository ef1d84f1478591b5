#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/featsel.hpp"
#include "oddsmith/metrics.hpp"
#include "oddsmith/models.hpp"
#include "oddsmith/search.hpp"
#include "oddsmith/serialize.hpp"

namespace oddsmith {

/// Everything an experiment run depends on. Every field has a default, and
/// to_json/experiment_config_from_json round-trip the resolved values.
struct ExperimentConfig {
  std::filesystem::path data;  // match CSV or dataset snapshot JSON
  /// Statistic roster; an empty list keeps every numeric column.
  std::vector<std::string> stats = default_stat_roster();
  ImputeStrategy impute = ImputeStrategy::Mean;
  std::vector<std::string> exclude = {"gf", "ga"};

  std::vector<SplitSpec> splits = {SplitSpec::two_seasons(), SplitSpec::one_season(),
                                   SplitSpec::last_matchweeks(10)};
  std::vector<ModelKind> models = {kAllModelKinds.begin(), kAllModelKinds.end()};
  std::vector<Hyperparams> hyperparams = {RandomForestParams{}, KnnParams{}, SvmParams{},
                                          GradientBoostParams{}};
  std::vector<SelectionMethod> selections = {SelectionMethod::All, SelectionMethod::Rfe,
                                             SelectionMethod::Correlation};
  std::size_t k = 10;
  /// Estimator behind RFE, shared by every model.
  Hyperparams rfe_estimator = RandomForestParams{100, 12, 1, 0, true, 0};

  bool tune = false;
  int folds = 3;
  std::optional<Randomized> randomized;  // exhaustive search when empty

  double margin = 0.05;
  std::uint64_t seed = 42;
  std::filesystem::path output = "oddsmith-out";

  /// Hyperparameters for `kind`, with the run seed applied.
  Hyperparams params_for(ModelKind kind) const;
  /// Throws InvalidConfig on the first problem found.
  void validate() const;
};

Json to_json(const ExperimentConfig& config);
/// Fields missing from `j` keep the values in `base`.
ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig base = {});

struct CellResult {
  ModelKind model;
  SplitSpec split;
  SelectionMethod selection;
  std::vector<std::string> features;
  Hyperparams hyperparams;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  EvalReport report;
  std::optional<SearchResult> search;

  std::string id() const;  // e.g. "two_seasons__rfe__svm"
};

Json to_json(const CellResult& cell);

struct ExperimentBundle {
  Json config;
  std::vector<CellResult> cells;
};

/// Prepared design matrix: load/parse, prune, impute, encode.
Dataset prepare_dataset(const ExperimentConfig& config, std::vector<std::string>* warnings = nullptr);

/// The feature subset a selection method yields on a training set.
FeatureSubset select_features(const ExperimentConfig& config, SelectionMethod method,
                              const Dataset& train);

/// Fits one model on one split and subset and scores it on the held-out tail.
CellResult run_cell(const ExperimentConfig& config, ModelKind model, const SplitSpec& split,
                    const FeatureSubset& subset, const TrainTest& data);

/// Runs the configured splits x subsets x models matrix. Cells are computed
/// in parallel and returned in (split, selection, model) order.
ExperimentBundle run_experiment(const ExperimentConfig& config, const Dataset& dataset);

/// Combined plain-text table, one block per model: Accuracy | Class |
/// Precision | Recall | F-1 for every split and subset.
std::string render_table(const std::vector<CellResult>& cells);
/// Same layout, from cell JSON as written to the bundle.
std::string render_table(const Json& cells);

/// Writes cells/<id>.json, table.txt, config.json and bundle.json under dir.
void write_bundle(const ExperimentBundle& bundle, const std::filesystem::path& dir);

}  // namespace oddsmith
