#include "oddsmith/search.hpp"

#include <algorithm>
#include <numeric>

#include "oddsmith/error.hpp"
#include "oddsmith/metrics.hpp"
#include "oddsmith/parallel.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {

std::vector<Hyperparams> expand_grid(const Hyperparams& base, const ParamGrid& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty parameter grid");
  std::vector<Hyperparams> points{base};
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw Error(ErrorCode::InvalidConfig, "no values for '" + name + "'");
    std::vector<Hyperparams> next;
    next.reserve(points.size() * values.size());
    for (const auto& p : points) {
      for (const double v : values) next.push_back(with_param(p, name, v));
    }
    points = std::move(next);
  }
  return points;
}

std::vector<Fold> time_series_folds(const Dataset& data, int folds) {
  if (folds < 2) throw Error(ErrorCode::InvalidConfig, "folds must be >= 2");
  std::size_t fixtures = 0;
  for (const auto& m : data.meta) fixtures = std::max(fixtures, m.fixture + 1);
  const auto blocks = static_cast<std::size_t>(folds) + 1;
  if (fixtures < blocks) {
    throw Error(ErrorCode::InsufficientData, std::to_string(fixtures) + " fixtures cannot fill " +
                                                 std::to_string(blocks) + " chronological blocks");
  }

  // Fixture ids may be sparse after a split; rank them first.
  std::vector<std::size_t> ids;
  for (const auto& m : data.meta) ids.push_back(m.fixture);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < blocks) {
    throw Error(ErrorCode::InsufficientData, std::to_string(ids.size()) + " fixtures cannot fill " +
                                                 std::to_string(blocks) + " chronological blocks");
  }
  auto block_of = [&](std::size_t fixture) {
    const auto rank = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), fixture) - ids.begin());
    return rank * blocks / ids.size();
  };

  std::vector<Fold> out(static_cast<std::size_t>(folds));
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const std::size_t b = block_of(data.meta[r].fixture);
    for (std::size_t f = 0; f < out.size(); ++f) {
      if (b <= f) {
        out[f].train.push_back(r);
      } else if (b == f + 1) {
        out[f].validate.push_back(r);
      }
    }
  }
  return out;
}

SearchResult grid_search(const Hyperparams& base, const ParamGrid& grid, const Dataset& train,
                         int folds, const SearchMode& mode) {
  const auto points = expand_grid(base, grid);
  const auto cv = time_series_folds(train, folds);

  std::vector<std::size_t> chosen(points.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (const auto* r = std::get_if<Randomized>(&mode)) {
    const std::size_t n = std::min(r->n_samples, points.size());
    Rng rng(r->seed);
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(chosen[i], chosen[i + rng.index(chosen.size() - i)]);
    }
    chosen.resize(n);
    std::sort(chosen.begin(), chosen.end());
  }
  if (chosen.empty()) throw Error(ErrorCode::InvalidConfig, "randomized search with zero samples");

  std::vector<SearchRow> table(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t i) {
    auto& row = table[i];
    row.hp = points[chosen[i]];
    for (const auto& fold : cv) {
      const auto fit_rows = train.select_rows(fold.train);
      const auto val_rows = train.select_rows(fold.validate);
      const auto model = oddsmith::train(row.hp, fit_rows);
      row.fold_accuracies.push_back(accuracy(val_rows.y, predict_all(model, val_rows)));
    }
    row.mean_accuracy = std::accumulate(row.fold_accuracies.begin(), row.fold_accuracies.end(), 0.0) /
                        static_cast<double>(row.fold_accuracies.size());
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].mean_accuracy > table[best].mean_accuracy) best = i;
  }
  return {table[best].hp, std::move(table)};
}

SearchResult grid_search(ModelKind kind, const ParamGrid& grid, const Dataset& train, int folds,
                         const SearchMode& mode) {
  return grid_search(default_hyperparams(kind), grid, train, folds, mode);
}

ParamGrid default_grid(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomForest:
      return {{"n_trees", {100, 300}}, {"max_depth", {6, 12}}, {"min_samples_leaf", {1, 5}}};
    case ModelKind::Knn:
      return {{"k", {5, 15, 25, 35}}};
    case ModelKind::Svm:
      return {{"c", {0.1, 1.0, 10.0}}, {"learning_rate", {0.01, 0.1}}};
    case ModelKind::GradientBoost:
      return {{"n_rounds", {50, 100}}, {"max_depth", {2, 3, 4}}, {"learning_rate", {0.05, 0.1}}};
  }
  return {};
}

}  // namespace oddsmith
