#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddsmith/models.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {
namespace {

// One-vs-rest binary problem in the form
//   J(w, b) = lambda/2 |w|^2 + mean_i max(0, 1 - s_i (w.x_i + b)),
// lambda = 1 / (C n), minimized by shuffled stochastic subgradient steps
// with step size lr / (1 + lr * lambda * t). Subgradient steps do not always
// descend, so the iterate kept is the best one seen at an epoch boundary.
struct BinaryHinge {
  const Matrix& X;
  std::span<const std::size_t> rows;
  std::vector<double> sign;
  double lambda;

  double objective(std::span<const double> w, double b) const {
    double loss = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto x = X.row(rows[i]);
      const double margin = sign[i] * (std::inner_product(w.begin(), w.end(), x.begin(), 0.0) + b);
      loss += std::max(0.0, 1.0 - margin);
    }
    const double norm2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    return 0.5 * lambda * norm2 + loss / static_cast<double>(rows.size());
  }
};

LinearOvr fit_ovr(const SvmParams& hp, const Matrix& X, std::span<const int> y,
                  std::span<const std::size_t> rows, std::uint64_t seed,
                  std::vector<double>* history) {
  const std::size_t d = X.cols();
  const std::size_t n = rows.size();
  const double lambda = 1.0 / (hp.c * static_cast<double>(n));

  LinearOvr model{Matrix(3, d), {}};
  if (history) history->assign(static_cast<std::size_t>(hp.epochs), 0.0);

  for (int c = 0; c < 3; ++c) {
    BinaryHinge problem{X, rows, std::vector<double>(n), lambda};
    for (std::size_t i = 0; i < n; ++i) problem.sign[i] = y[rows[i]] == c ? 1.0 : -1.0;

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> best_w = w;
    double best_b = 0.0;
    double best = problem.objective(w, b);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 0;

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
      rng.shuffle(std::span<std::size_t>(order));
      for (const auto i : order) {
        const double eta = hp.learning_rate / (1.0 + hp.learning_rate * lambda * static_cast<double>(t));
        ++t;
        const auto x = X.row(rows[i]);
        const double s = problem.sign[i];
        const double margin = s * (std::inner_product(w.begin(), w.end(), x.begin(), 0.0) + b);
        const double shrink = 1.0 - eta * lambda;
        for (auto& wj : w) wj *= shrink;
        if (margin < 1.0) {
          for (std::size_t j = 0; j < d; ++j) w[j] += eta * s * x[j];
          b += eta * s;
        }
      }
      const double value = problem.objective(w, b);
      if (value < best) {
        best = value;
        best_w = w;
        best_b = b;
      }
      if (history) (*history)[epoch] += best / 3.0;
    }
    std::copy(best_w.begin(), best_w.end(), model.weights.row(c).begin());
    model.bias[c] = best_b;
  }
  return model;
}

}  // namespace

SvmState fit_svm(const SvmParams& hp, const Matrix& X, std::span<const int> y) {
  const std::size_t n = X.rows();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  SvmState state;
  state.model = fit_ovr(hp, X, y, all, hp.seed, &state.objective_history);

  for (int r = 0; r < hp.replicas; ++r) {
    Rng rng(mix_seed(hp.seed, 1000 + static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng.index(n);
    state.replicas.push_back(fit_ovr(hp, X, y, sample, mix_seed(hp.seed, 2000 + r), nullptr));
  }
  return state;
}

}  // namespace oddsmith
