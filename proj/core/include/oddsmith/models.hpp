#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oddsmith/dataset.hpp"
#include "oddsmith/matrix.hpp"
#include "oddsmith/tree.hpp"

namespace oddsmith {

enum class ModelKind { RandomForest, Knn, Svm, GradientBoost };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {
    ModelKind::RandomForest, ModelKind::Knn, ModelKind::Svm, ModelKind::GradientBoost};

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts the names produced by to_string (random_forest, knn, svm,
/// gradient_boost); throws InvalidConfig otherwise.
ModelKind parse_model_kind(std::string_view name);

/// Knn and Svm expect min-max normalized features.
constexpr bool needs_normalized_input(ModelKind kind) noexcept {
  return kind == ModelKind::Knn || kind == ModelKind::Svm;
}

struct RandomForestParams {
  int n_trees = 500;
  int max_depth = 12;
  int min_samples_leaf = 1;
  int max_features = 0;  // 0 = floor(sqrt(d))
  bool bootstrap = true;
  std::uint64_t seed = 0;

  friend bool operator==(const RandomForestParams&, const RandomForestParams&) = default;
};

enum class DistanceMetric { Euclidean };

struct KnnParams {
  int k = 15;
  DistanceMetric metric = DistanceMetric::Euclidean;

  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

struct SvmParams {
  double c = 1.0;
  int epochs = 200;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  int replicas = 0;  // bootstrap replicas trained only to report vote counts

  friend bool operator==(const SvmParams&, const SvmParams&) = default;
};

struct GradientBoostParams {
  int n_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double l2_lambda = 1.0;
  std::uint64_t seed = 0;  // the booster draws no random numbers; kept for a uniform config surface

  friend bool operator==(const GradientBoostParams&, const GradientBoostParams&) = default;
};

using Hyperparams = std::variant<RandomForestParams, KnnParams, SvmParams, GradientBoostParams>;

ModelKind kind_of(const Hyperparams& hp) noexcept;
Hyperparams default_hyperparams(ModelKind kind);
/// Throws InvalidHyperparams when a count is below 1 or a rate is out of range.
void validate(const Hyperparams& hp);
/// Returns a copy with one named parameter overridden (grid search uses this);
/// integer parameters are rounded. Throws InvalidConfig for unknown names.
Hyperparams with_param(Hyperparams hp, std::string_view name, double value);
/// Replaces the seed of kinds that have one.
Hyperparams with_seed(Hyperparams hp, std::uint64_t seed);

/// Class probabilities indexed by class code: [draw, home win, away win].
struct ProbTriple {
  std::array<double, 3> p{};

  double draw() const noexcept { return p[0]; }
  double home() const noexcept { return p[1]; }
  double away() const noexcept { return p[2]; }
  double operator[](std::size_t c) const noexcept { return p[c]; }

  /// Index of the largest probability; the lowest class code wins ties.
  int argmax() const noexcept;
  /// Every entry in [0, 1] and the sum within `tol` of 1.
  bool valid(double tol = 1e-9) const noexcept;

  friend bool operator==(const ProbTriple&, const ProbTriple&) = default;
};

ProbTriple softmax(std::array<double, 3> scores) noexcept;

using VoteCounts = std::array<int, 3>;

struct ForestState {
  std::vector<Tree> trees;
  std::vector<double> importance;  // mean impurity decrease, sums to 1 when any split exists

  friend bool operator==(const ForestState&, const ForestState&) = default;
};

struct KnnState {
  Matrix X;
  std::vector<int> y;

  friend bool operator==(const KnnState&, const KnnState&) = default;
};

struct LinearOvr {
  Matrix weights;  // 3 x d
  std::array<double, 3> bias{};

  std::array<double, 3> decision(std::span<const double> row) const;
  friend bool operator==(const LinearOvr&, const LinearOvr&) = default;
};

struct SvmState {
  LinearOvr model;
  std::vector<LinearOvr> replicas;
  /// Mean regularized hinge objective of each epoch, averaged over the
  /// three one-vs-rest problems.
  std::vector<double> objective_history;

  friend bool operator==(const SvmState&, const SvmState&) = default;
};

struct BoostState {
  std::array<double, 3> base_score{};       // log class priors
  std::vector<std::array<Tree, 3>> rounds;  // leaf values already scaled by the learning rate
  std::vector<double> importance;           // total split gain per feature
  std::vector<double> loss_history;         // training log-loss before round 0 and after each round

  friend bool operator==(const BoostState&, const BoostState&) = default;
};

using ModelState = std::variant<ForestState, KnnState, SvmState, BoostState>;

class TrainedModel {
 public:
  TrainedModel(Hyperparams hp, std::vector<std::string> feature_names, ModelState state,
               std::optional<NormalizationParams> normalization = std::nullopt);

  ModelKind kind() const noexcept { return kind_of(hp_); }
  const Hyperparams& hyperparams() const noexcept { return hp_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const ModelState& state() const noexcept { return state_; }
  /// Parameters of the normalization the training data went through, which
  /// raw rows must receive before prediction.
  const std::optional<NormalizationParams>& normalization() const noexcept { return normalization_; }

  /// Throws FeatureMismatch when the row length differs from feature_names.
  ProbTriple predict_proba(std::span<const double> row) const;
  int predict(std::span<const double> row) const;
  /// Raw ensemble counts behind the probabilities: tree votes, neighbor
  /// votes, or bootstrap replica votes. nullopt for the booster and for an
  /// Svm trained without replicas.
  std::optional<VoteCounts> vote_counts(std::span<const double> row) const;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  void check_row(std::span<const double> row) const;

  Hyperparams hp_;
  std::vector<std::string> feature_names_;
  ModelState state_;
  std::optional<NormalizationParams> normalization_;
};

/// Fits the model selected by the hyperparameter variant. Deterministic in
/// (hp, data). Knn and Svm demand a normalized dataset.
TrainedModel train(const Hyperparams& hp, const Dataset& data);

/// Row-aligned prediction helpers: the dataset's feature names must equal the
/// model's (FeatureMismatch otherwise).
ProbTriple predict_proba(const TrainedModel& model, const Dataset& data, std::size_t row);
int predict(const TrainedModel& model, const Dataset& data, std::size_t row);
std::vector<int> predict_all(const TrainedModel& model, const Dataset& data);

struct FeatureScore {
  std::string feature;
  double score = 0.0;

  friend bool operator==(const FeatureScore&, const FeatureScore&) = default;
};

/// Importance per feature, sorted by descending score (stable on ties).
/// Forest: mean impurity decrease. Booster: total split gain. Svm: mean
/// absolute one-vs-rest weight. Knn: permutation importance on the stored
/// training set (mean accuracy drop over `kKnnPermutationRepeats` shuffles,
/// floored at 0).
std::vector<FeatureScore> feature_importance(const TrainedModel& model);

inline constexpr int kKnnPermutationRepeats = 5;
inline constexpr std::uint64_t kKnnPermutationSeed = 0x5eed;

namespace softmax_loss {

/// Cross-entropy of softmax(logits) against `label`.
double value(const std::array<double, 3>& logits, int label) noexcept;
/// d loss / d logit_k = p_k - [k == label].
std::array<double, 3> gradient(const std::array<double, 3>& logits, int label) noexcept;
/// Diagonal of the Hessian: p_k (1 - p_k).
std::array<double, 3> hessian_diagonal(const std::array<double, 3>& logits) noexcept;

}  // namespace softmax_loss

// Per-kind trainers, exposed for tests and benchmarks.
ForestState fit_forest(const RandomForestParams& hp, const Matrix& X, std::span<const int> y);
SvmState fit_svm(const SvmParams& hp, const Matrix& X, std::span<const int> y);
BoostState fit_boost(const GradientBoostParams& hp, const Matrix& X, std::span<const int> y);

/// Indices of the k nearest training rows, ordered by (distance, index).
std::vector<std::size_t> nearest_neighbors(const Matrix& train, std::span<const double> query,
                                           std::size_t k);

}  // namespace oddsmith
