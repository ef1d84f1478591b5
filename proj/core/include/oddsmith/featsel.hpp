#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/matrix.hpp"
#include "oddsmith/models.hpp"

namespace oddsmith {

enum class SelectionMethod { All, Rfe, Correlation };

std::string_view to_string(SelectionMethod method) noexcept;
SelectionMethod parse_selection_method(std::string_view name);

struct FeatureSubset {
  SelectionMethod method = SelectionMethod::All;
  std::vector<std::string> names;
  std::size_t k = 0;
  std::vector<std::string> eliminated;  // RFE removal order, first removed first
  std::vector<double> scores;           // |r| per selected name (correlation only)

  friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;
};

FeatureSubset all_features(const Dataset& data);

/// Recursive feature elimination: retrain on the surviving features and drop
/// the one with the lowest importance (the later one on ties) until k remain.
/// Throws KOutOfRange unless 1 <= k <= feature count.
FeatureSubset rfe(const Hyperparams& hp, const Dataset& train, std::size_t k);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Matrix values;

  friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;
};

/// Pearson r over two columns; 0 when either column is constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// Pairwise Pearson coefficients of every feature, plus the ordinal class
/// label as a final "result" column when requested. Constant columns
/// correlate 0 with everything and 1 with themselves. Throws TooFewRows for
/// fewer than two rows.
CorrelationMatrix correlation_matrix(const Dataset& data, bool include_target);

/// Top-k features by |r| against the class code (0 draw, 1 win, 2 loss).
/// The coding is ordinal only by convention, so the ranking is a heuristic.
/// Ties are broken by feature name. Throws KOutOfRange.
FeatureSubset select_by_correlation(const Dataset& data, std::size_t k);

std::string correlation_csv(const CorrelationMatrix& matrix);

}  // namespace oddsmith
