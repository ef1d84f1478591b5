#include "oddsmith/tree.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace oddsmith {

const Tree::Node& Tree::leaf_for(std::span<const double> row) const {
  const Node* node = &nodes.front();
  while (!node->is_leaf()) {
    node = &nodes[row[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[nodes[i].left] = level[i] + 1;
      level[nodes[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

SortedColumns::SortedColumns(const Matrix& X) : orders_(X.cols()) {
  for (std::size_t f = 0; f < X.cols(); ++f) {
    auto& order = orders_[f];
    order.resize(X.rows());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return X(a, f) < X(b, f); });
  }
}

namespace {

struct ClassAcc {
  std::array<double, 3> counts{};
  double weight = 0.0;

  void add(double w, int label) {
    counts[label] += w;
    weight += w;
  }
  ClassAcc minus(const ClassAcc& other) const {
    ClassAcc out;
    for (int k = 0; k < 3; ++k) out.counts[k] = counts[k] - other.counts[k];
    out.weight = weight - other.weight;
    return out;
  }
};

// Gini classification: score = sum(c^2)/W - W is the negated weighted
// impurity, so gain = score(L) + score(R) - score(P) is the impurity decrease.
struct GiniPolicy {
  using Acc = ClassAcc;
  std::span<const int> y;
  std::span<const double> weights;

  void add(Acc& acc, std::uint32_t row) const { acc.add(weights[row], y[row]); }
  static double score(const Acc& a) {
    if (a.weight <= 0.0) return 0.0;
    double sq = 0.0;
    for (const double c : a.counts) sq += c * c;
    return sq / a.weight - a.weight;
  }
  static bool splittable(const Acc& a) {
    return std::count_if(a.counts.begin(), a.counts.end(), [](double c) { return c > 0.0; }) > 1;
  }
  // Any valid split of an impure node is taken, even a zero-gain one, so a
  // fully grown tree separates every consistent training set.
  static bool accept(double) { return true; }
  static void fill_leaf(const Acc& a, Tree::Node& node) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (a.counts[k] > a.counts[best]) best = k;
    }
    node.label = best;
  }
  double weight(const Acc& a) const { return a.weight; }
};

struct GradAcc {
  double g = 0.0;
  double h = 0.0;
  double n = 0.0;

  GradAcc minus(const GradAcc& other) const { return {g - other.g, h - other.h, n - other.n}; }
};

struct NewtonPolicy {
  using Acc = GradAcc;
  std::span<const double> gradients;
  std::span<const double> hessians;
  double lambda;
  double scale;

  void add(Acc& acc, std::uint32_t row) const {
    acc.g += gradients[row];
    acc.h += hessians[row];
    acc.n += 1.0;
  }
  double score(const Acc& a) const {
    const double denom = a.h + lambda;
    return denom > 0.0 ? 0.5 * a.g * a.g / denom : 0.0;
  }
  static bool splittable(const Acc& a) { return a.n >= 2.0; }
  static bool accept(double gain) { return gain > 1e-12; }
  void fill_leaf(const Acc& a, Tree::Node& node) const {
    const double denom = a.h + lambda;
    node.value = denom > 0.0 ? -scale * a.g / denom : 0.0;
  }
  static double weight(const Acc& a) { return a.n; }
};

struct Pending {
  int node;
  std::size_t begin;
  std::size_t end;
  int depth;
};

template <typename Policy>
Tree grow(const Matrix& X, const SortedColumns& sorted, std::span<const double> include,
          const Policy& policy, const GrowthLimits& limits, Rng* rng,
          std::vector<double>& importance, double importance_norm) {
  using Acc = typename Policy::Acc;
  const std::size_t d = X.cols();

  // Per-feature row orderings restricted to included rows. Every node
  // occupies the same [begin, end) slice of each ordering.
  std::vector<std::vector<std::uint32_t>> orders(d);
  for (std::size_t f = 0; f < d; ++f) {
    const auto& full = sorted.order(f);
    orders[f].reserve(full.size());
    for (const auto r : full) {
      if (include.empty() || include[r] > 0.0) orders[f].push_back(r);
    }
  }
  const std::size_t n = d > 0 ? orders[0].size() : 0;

  std::vector<std::size_t> candidates(d);
  std::iota(candidates.begin(), candidates.end(), 0);
  const std::size_t mtry =
      limits.max_features <= 0 ? d : std::min<std::size_t>(limits.max_features, d);

  std::vector<std::uint8_t> goes_left(X.rows(), 0);
  std::vector<std::uint32_t> scratch;

  Tree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack{{0, 0, n, 0}};

  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();

    Acc total{};
    if (d > 0) {
      for (std::size_t i = job.begin; i < job.end; ++i) policy.add(total, orders[0][i]);
    }
    policy.fill_leaf(total, tree.nodes[job.node]);

    if (d == 0 || job.depth >= limits.max_depth || !Policy::splittable(total) ||
        policy.weight(total) < 2.0 * limits.min_samples_leaf) {
      continue;
    }

    if (mtry < d) rng->shuffle(std::span<std::size_t>(candidates));

    const double parent_score = policy.score(total);
    double best_gain = -std::numeric_limits<double>::infinity();
    std::size_t best_feature = d;
    double best_threshold = 0.0;

    for (std::size_t ci = 0; ci < d; ++ci) {
      // Beyond the first mtry candidates, keep looking only until some
      // valid split exists.
      if (ci >= mtry && best_feature != d) break;
      const std::size_t f = candidates[ci];
      const auto& order = orders[f];
      Acc left{};
      for (std::size_t i = job.begin; i + 1 < job.end; ++i) {
        const auto row = order[i];
        policy.add(left, row);
        const double v = X(row, f);
        const double next = X(order[i + 1], f);
        if (!(v < next)) continue;
        const Acc right = total.minus(left);
        if (policy.weight(left) < limits.min_samples_leaf ||
            policy.weight(right) < limits.min_samples_leaf) {
          continue;
        }
        const double gain = policy.score(left) + policy.score(right) - parent_score;
        if (Policy::accept(gain) && gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = v;
        }
      }
    }
    if (best_feature == d) continue;

    for (std::size_t i = job.begin; i < job.end; ++i) {
      const auto row = orders[best_feature][i];
      goes_left[row] = X(row, best_feature) <= best_threshold ? 1 : 0;
    }
    std::size_t mid = job.begin;
    for (std::size_t f = 0; f < d; ++f) {
      auto& order = orders[f];
      scratch.clear();
      std::size_t write = job.begin;
      for (std::size_t i = job.begin; i < job.end; ++i) {
        const auto row = order[i];
        if (goes_left[row]) {
          order[write++] = row;
        } else {
          scratch.push_back(row);
        }
      }
      std::copy(scratch.begin(), scratch.end(), order.begin() + static_cast<std::ptrdiff_t>(write));
      mid = write;
    }

    importance[best_feature] += std::max(best_gain, 0.0) / importance_norm;

    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[job.node];
    node.feature = static_cast<int>(best_feature);
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = left_id + 1;
    // Right child first on the stack so the left subtree is grown first.
    stack.push_back({left_id + 1, mid, job.end, job.depth + 1});
    stack.push_back({left_id, job.begin, mid, job.depth + 1});
  }
  return tree;
}

}  // namespace

Tree grow_classification_tree(const Matrix& X, std::span<const int> y,
                              std::span<const double> weights, const SortedColumns& sorted,
                              const GrowthLimits& limits, Rng& rng,
                              std::vector<double>& importance) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const GiniPolicy policy{y, weights};
  return grow(X, sorted, weights, policy, limits, &rng, importance, total > 0.0 ? total : 1.0);
}

Tree grow_gradient_tree(const Matrix& X, std::span<const double> gradients,
                        std::span<const double> hessians, const SortedColumns& sorted,
                        int max_depth, double l2_lambda, double scale,
                        std::vector<double>& importance) {
  const NewtonPolicy policy{gradients, hessians, l2_lambda, scale};
  GrowthLimits limits;
  limits.max_depth = max_depth;
  limits.min_samples_leaf = 1.0;
  return grow(X, sorted, {}, policy, limits, nullptr, importance, 1.0);
}

}  // namespace oddsmith
