#include <algorithm>
#include <cmath>

#include "oddsmith/models.hpp"

namespace oddsmith {

BoostState fit_boost(const GradientBoostParams& hp, const Matrix& X, std::span<const int> y) {
  const std::size_t n = X.rows();
  const SortedColumns sorted(X);

  BoostState state;
  state.importance.assign(X.cols(), 0.0);

  std::array<double, 3> freq{};
  for (const int label : y) freq[label] += 1.0;
  for (int c = 0; c < 3; ++c) {
    state.base_score[c] = std::log(std::max(freq[c] / static_cast<double>(n), 1e-12));
  }

  std::vector<std::array<double, 3>> logits(n, state.base_score);
  auto training_loss = [&] {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += softmax_loss::value(logits[i], y[i]);
    return loss / static_cast<double>(n);
  };
  state.loss_history.push_back(training_loss());

  std::array<std::vector<double>, 3> grad;
  std::array<std::vector<double>, 3> hess;
  for (int c = 0; c < 3; ++c) {
    grad[c].resize(n);
    hess[c].resize(n);
  }

  for (int round = 0; round < hp.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = softmax_loss::gradient(logits[i], y[i]);
      const auto h = softmax_loss::hessian_diagonal(logits[i]);
      for (int c = 0; c < 3; ++c) {
        grad[c][i] = g[c];
        hess[c][i] = h[c];
      }
    }
    std::array<Tree, 3> trees;
    for (int c = 0; c < 3; ++c) {
      trees[c] = grow_gradient_tree(X, grad[c], hess[c], sorted, hp.max_depth, hp.l2_lambda,
                                    hp.learning_rate, state.importance);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = X.row(i);
      for (int c = 0; c < 3; ++c) logits[i][c] += trees[c].leaf_for(row).value;
    }
    state.rounds.push_back(std::move(trees));
    state.loss_history.push_back(training_loss());
  }
  return state;
}

}  // namespace oddsmith
