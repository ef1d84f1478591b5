#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oddsmith/matrix.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {

/// Binary tree stored as a flat node array; node 0 is the root. A row goes
/// left when row[feature] <= threshold. Thresholds are training values, so
/// predictions are unchanged by any strictly increasing feature transform.
struct Tree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;       // classification leaves
    double value = 0.0;  // regression leaves

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  std::vector<Node> nodes;

  const Node& leaf_for(std::span<const double> row) const;
  std::size_t depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Row indices sorted by value, one ordering per column. Computed once per
/// training matrix and shared by every tree grown on it.
class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& X);
  const std::vector<std::uint32_t>& order(std::size_t feature) const { return orders_[feature]; }
  std::size_t features() const noexcept { return orders_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> orders_;
};

struct GrowthLimits {
  int max_depth = 1 << 20;
  double min_samples_leaf = 1.0;  // in units of sample weight
  int max_features = 0;           // 0 or >= d means every feature
};

/// Gini-impurity CART classification tree. `weights[i]` is the multiplicity
/// of row i (bootstrap counts); rows with weight 0 are left out. Each
/// split's weighted impurity decrease divided by the total weight is added
/// to `importance[feature]`. `rng` is only drawn from when max_features
/// restricts the candidates.
Tree grow_classification_tree(const Matrix& X, std::span<const int> y,
                              std::span<const double> weights, const SortedColumns& sorted,
                              const GrowthLimits& limits, Rng& rng,
                              std::vector<double>& importance);

/// Second-order regression tree: split gain
/// 0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)), leaf value
/// -scale * G/(H+l). Splits need strictly positive gain. Gains of accepted
/// splits are added to `importance[feature]`.
Tree grow_gradient_tree(const Matrix& X, std::span<const double> gradients,
                        std::span<const double> hessians, const SortedColumns& sorted,
                        int max_depth, double l2_lambda, double scale,
                        std::vector<double>& importance);

}  // namespace oddsmith
