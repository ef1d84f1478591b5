#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddsmith/models.hpp"
#include "oddsmith/parallel.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {

ForestState fit_forest(const RandomForestParams& hp, const Matrix& X, std::span<const int> y) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const SortedColumns sorted(X);

  GrowthLimits limits;
  limits.max_depth = hp.max_depth;
  limits.min_samples_leaf = hp.min_samples_leaf;
  limits.max_features =
      hp.max_features > 0
          ? hp.max_features
          : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));

  const auto n_trees = static_cast<std::size_t>(hp.n_trees);
  std::vector<Tree> trees(n_trees);
  std::vector<std::vector<double>> per_tree(n_trees, std::vector<double>(d, 0.0));

  parallel_for(n_trees, [&](std::size_t t) {
    Rng rng(mix_seed(hp.seed, t));
    std::vector<double> weights(n, 1.0);
    if (hp.bootstrap) {
      std::fill(weights.begin(), weights.end(), 0.0);
      for (std::size_t draw = 0; draw < n; ++draw) weights[rng.index(n)] += 1.0;
    }
    trees[t] = grow_classification_tree(X, y, weights, sorted, limits, rng, per_tree[t]);
  });

  ForestState state;
  state.trees = std::move(trees);
  state.importance.assign(d, 0.0);
  for (auto& imp : per_tree) {
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total <= 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) state.importance[j] += imp[j] / total;
  }
  for (auto& v : state.importance) v /= static_cast<double>(n_trees);
  return state;
}

}  // namespace oddsmith
