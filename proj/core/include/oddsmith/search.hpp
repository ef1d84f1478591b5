#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/models.hpp"

namespace oddsmith {

/// Parameter name -> candidate values, in the order the grid is enumerated
/// (the last parameter varies fastest).
using ParamGrid = std::vector<std::pair<std::string, std::vector<double>>>;

struct Exhaustive {};
struct Randomized {
  std::size_t n_samples = 10;
  std::uint64_t seed = 0;
};
using SearchMode = std::variant<Exhaustive, Randomized>;

struct SearchRow {
  Hyperparams hp;
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct SearchResult {
  Hyperparams best;
  std::vector<SearchRow> table;  // in grid order
};

/// Every grid point applied on top of `base`, in enumeration order.
std::vector<Hyperparams> expand_grid(const Hyperparams& base, const ParamGrid& grid);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validate;
};

/// Forward-chaining folds over fixture-aligned chronological blocks: the
/// rows are cut into folds + 1 blocks and fold i trains on blocks 0..i and
/// validates on block i + 1. Throws InsufficientData when there are fewer
/// fixtures than blocks.
std::vector<Fold> time_series_folds(const Dataset& data, int folds);

/// Cross-validated search. The best point has the highest mean validation
/// accuracy; ties go to the point earliest in the grid. Randomized mode
/// evaluates min(n_samples, |grid|) distinct points.
SearchResult grid_search(const Hyperparams& base, const ParamGrid& grid, const Dataset& train,
                         int folds, const SearchMode& mode = Exhaustive{});
SearchResult grid_search(ModelKind kind, const ParamGrid& grid, const Dataset& train, int folds,
                         const SearchMode& mode = Exhaustive{});

/// Shipped default grid per model kind.
ParamGrid default_grid(ModelKind kind);

}  // namespace oddsmith
