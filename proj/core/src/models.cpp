#include "oddsmith/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oddsmith/error.hpp"
#include "oddsmith/random.hpp"

namespace oddsmith {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::RandomForest: return "random_forest";
    case ModelKind::Knn: return "knn";
    case ModelKind::Svm: return "svm";
    case ModelKind::GradientBoost: return "gradient_boost";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto kind : kAllModelKinds) {
    if (to_string(kind) == name) return kind;
  }
  if (name == "rf") return ModelKind::RandomForest;
  if (name == "xgb" || name == "gb") return ModelKind::GradientBoost;
  throw Error(ErrorCode::InvalidConfig, "unknown model kind '" + std::string(name) + "'");
}

ModelKind kind_of(const Hyperparams& hp) noexcept { return static_cast<ModelKind>(hp.index()); }

Hyperparams default_hyperparams(ModelKind kind) {
  switch (kind) {
    case ModelKind::RandomForest: return RandomForestParams{};
    case ModelKind::Knn: return KnnParams{};
    case ModelKind::Svm: return SvmParams{};
    case ModelKind::GradientBoost: return GradientBoostParams{};
  }
  return RandomForestParams{};
}

namespace {

[[noreturn]] void bad_param(const std::string& what) {
  throw Error(ErrorCode::InvalidHyperparams, what);
}

struct Validator {
  void operator()(const RandomForestParams& p) const {
    if (p.n_trees < 1) bad_param("n_trees must be >= 1");
    if (p.max_depth < 1) bad_param("max_depth must be >= 1");
    if (p.min_samples_leaf < 1) bad_param("min_samples_leaf must be >= 1");
    if (p.max_features < 0) bad_param("max_features must be >= 0 (0 = sqrt)");
  }
  void operator()(const KnnParams& p) const {
    if (p.k < 1) bad_param("k must be >= 1");
  }
  void operator()(const SvmParams& p) const {
    if (!(p.c > 0.0) || !std::isfinite(p.c)) bad_param("c must be positive");
    if (p.epochs < 1) bad_param("epochs must be >= 1");
    if (!(p.learning_rate > 0.0) || !std::isfinite(p.learning_rate)) {
      bad_param("learning_rate must be positive");
    }
    if (p.replicas < 0) bad_param("replicas must be >= 0");
  }
  void operator()(const GradientBoostParams& p) const {
    if (p.n_rounds < 1) bad_param("n_rounds must be >= 1");
    if (p.max_depth < 1) bad_param("max_depth must be >= 1");
    if (!(p.learning_rate >= 0.0 && p.learning_rate <= 1.0)) {
      bad_param("learning_rate must lie in [0, 1]");
    }
    if (!(p.l2_lambda >= 0.0) || !std::isfinite(p.l2_lambda)) bad_param("l2_lambda must be >= 0");
  }
};

int as_int(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace

void validate(const Hyperparams& hp) { std::visit(Validator{}, hp); }

Hyperparams with_param(Hyperparams hp, std::string_view name, double value) {
  auto unknown = [&] {
    return Error(ErrorCode::InvalidConfig, "parameter '" + std::string(name) + "' does not apply to " +
                                               std::string(to_string(kind_of(hp))));
  };
  if (name == "seed") return with_seed(std::move(hp), static_cast<std::uint64_t>(value));
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RandomForestParams>) {
          if (name == "n_trees") p.n_trees = as_int(value);
          else if (name == "max_depth") p.max_depth = as_int(value);
          else if (name == "min_samples_leaf") p.min_samples_leaf = as_int(value);
          else if (name == "max_features") p.max_features = as_int(value);
          else if (name == "bootstrap") p.bootstrap = value != 0.0;
          else throw unknown();
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          if (name == "k") p.k = as_int(value);
          else throw unknown();
        } else if constexpr (std::is_same_v<P, SvmParams>) {
          if (name == "c") p.c = value;
          else if (name == "epochs") p.epochs = as_int(value);
          else if (name == "learning_rate") p.learning_rate = value;
          else if (name == "replicas") p.replicas = as_int(value);
          else throw unknown();
        } else {
          if (name == "n_rounds") p.n_rounds = as_int(value);
          else if (name == "max_depth") p.max_depth = as_int(value);
          else if (name == "learning_rate") p.learning_rate = value;
          else if (name == "l2_lambda") p.l2_lambda = value;
          else throw unknown();
        }
      },
      hp);
  return hp;
}

Hyperparams with_seed(Hyperparams hp, std::uint64_t seed) {
  std::visit(
      [&](auto& p) {
        if constexpr (requires { p.seed; }) p.seed = seed;
      },
      hp);
  return hp;
}

int ProbTriple::argmax() const noexcept {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (p[k] > p[best]) best = k;
  }
  return best;
}

bool ProbTriple::valid(double tol) const noexcept {
  double sum = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

ProbTriple softmax(std::array<double, 3> scores) noexcept {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  ProbTriple out;
  for (int k = 0; k < 3; ++k) out.p[k] = scores[k] / sum;
  return out;
}

namespace softmax_loss {

double value(const std::array<double, 3>& logits, int label) noexcept {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double z : logits) sum += std::exp(z - top);
  return top + std::log(sum) - logits[label];
}

std::array<double, 3> gradient(const std::array<double, 3>& logits, int label) noexcept {
  auto g = softmax(logits).p;
  g[label] -= 1.0;
  return g;
}

std::array<double, 3> hessian_diagonal(const std::array<double, 3>& logits) noexcept {
  auto h = softmax(logits).p;
  for (auto& v : h) v = v * (1.0 - v);
  return h;
}

}  // namespace softmax_loss

std::array<double, 3> LinearOvr::decision(std::span<const double> row) const {
  std::array<double, 3> out = bias;
  for (int c = 0; c < 3; ++c) {
    const auto w = weights.row(c);
    for (std::size_t j = 0; j < row.size(); ++j) out[c] += w[j] * row[j];
  }
  return out;
}

TrainedModel::TrainedModel(Hyperparams hp, std::vector<std::string> feature_names, ModelState state,
                           std::optional<NormalizationParams> normalization)
    : hp_(std::move(hp)),
      feature_names_(std::move(feature_names)),
      state_(std::move(state)),
      normalization_(std::move(normalization)) {
  if (hp_.index() != state_.index()) {
    throw Error(ErrorCode::InvalidFormat, "fitted state does not match the model kind");
  }
}

void TrainedModel::check_row(std::span<const double> row) const {
  if (row.size() != feature_names_.size()) {
    throw Error(ErrorCode::FeatureMismatch, "row has " + std::to_string(row.size()) +
                                                " values, model expects " +
                                                std::to_string(feature_names_.size()));
  }
}

namespace {

VoteCounts knn_votes(const KnnState& s, int k, std::span<const double> row) {
  VoteCounts votes{};
  for (const auto i : nearest_neighbors(s.X, row, static_cast<std::size_t>(k))) ++votes[s.y[i]];
  return votes;
}

VoteCounts forest_votes(const ForestState& s, std::span<const double> row) {
  VoteCounts votes{};
  for (const auto& tree : s.trees) ++votes[tree.leaf_for(row).label];
  return votes;
}

ProbTriple fractions(const VoteCounts& votes) {
  const double total = votes[0] + votes[1] + votes[2];
  ProbTriple out;
  for (int c = 0; c < 3; ++c) out.p[c] = votes[c] / total;
  return out;
}

int argmax3(const std::array<double, 3>& v) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

}  // namespace

ProbTriple TrainedModel::predict_proba(std::span<const double> row) const {
  check_row(row);
  return std::visit(
      [&](const auto& s) -> ProbTriple {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ForestState>) {
          return fractions(forest_votes(s, row));
        } else if constexpr (std::is_same_v<S, KnnState>) {
          return fractions(knn_votes(s, std::get<KnnParams>(hp_).k, row));
        } else if constexpr (std::is_same_v<S, SvmState>) {
          return softmax(s.model.decision(row));
        } else {
          std::array<double, 3> scores = s.base_score;
          for (const auto& round : s.rounds) {
            for (int c = 0; c < 3; ++c) scores[c] += round[c].leaf_for(row).value;
          }
          return softmax(scores);
        }
      },
      state_);
}

int TrainedModel::predict(std::span<const double> row) const { return predict_proba(row).argmax(); }

std::optional<VoteCounts> TrainedModel::vote_counts(std::span<const double> row) const {
  check_row(row);
  if (const auto* s = std::get_if<ForestState>(&state_)) return forest_votes(*s, row);
  if (const auto* s = std::get_if<KnnState>(&state_)) {
    return knn_votes(*s, std::get<KnnParams>(hp_).k, row);
  }
  if (const auto* s = std::get_if<SvmState>(&state_); s && !s->replicas.empty()) {
    VoteCounts votes{};
    for (const auto& replica : s->replicas) ++votes[argmax3(replica.decision(row))];
    return votes;
  }
  return std::nullopt;
}

TrainedModel train(const Hyperparams& hp, const Dataset& data) {
  validate(hp);
  if (data.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  for (const double v : data.X.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteFeature, "training matrix holds " + std::to_string(v));
  }
  for (const int label : data.y) {
    if (label < 0 || label >= kNumClasses) throw Error(ErrorCode::UnknownLabel, std::to_string(label));
  }
  const ModelKind kind = kind_of(hp);
  if (needs_normalized_input(kind) && !data.normalization) {
    throw Error(ErrorCode::NotNormalized,
                std::string(to_string(kind)) + " must be trained on the normalized dataset");
  }

  ModelState state = std::visit(
      [&](const auto& p) -> ModelState {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RandomForestParams>) {
          return fit_forest(p, data.X, data.y);
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          if (static_cast<std::size_t>(p.k) > data.rows()) {
            throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(p.k) + " exceeds " +
                                                  std::to_string(data.rows()) + " training rows");
          }
          return KnnState{data.X, data.y};
        } else if constexpr (std::is_same_v<P, SvmParams>) {
          return fit_svm(p, data.X, data.y);
        } else {
          return fit_boost(p, data.X, data.y);
        }
      },
      hp);
  return TrainedModel(hp, data.feature_names, std::move(state), data.normalization);
}

namespace {

void check_alignment(const TrainedModel& model, const Dataset& data) {
  if (model.feature_names() != data.feature_names) {
    throw Error(ErrorCode::FeatureMismatch, "dataset features differ from the model's");
  }
}

}  // namespace

ProbTriple predict_proba(const TrainedModel& model, const Dataset& data, std::size_t row) {
  check_alignment(model, data);
  return model.predict_proba(data.X.row(row));
}

int predict(const TrainedModel& model, const Dataset& data, std::size_t row) {
  return predict_proba(model, data, row).argmax();
}

std::vector<int> predict_all(const TrainedModel& model, const Dataset& data) {
  check_alignment(model, data);
  std::vector<int> out(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) out[r] = model.predict(data.X.row(r));
  return out;
}

namespace {

std::vector<double> knn_permutation_importance(const KnnState& s, int k) {
  const std::size_t n = s.X.rows();
  const std::size_t d = s.X.cols();
  const auto kk = static_cast<std::size_t>(k);

  // Squared distances between every query (a training row) and every
  // reference row. A permuted column only changes one term of each sum.
  std::vector<double> base(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        const double diff = s.X(i, f) - s.X(j, f);
        acc += diff * diff;
      }
      base[i * n + j] = acc;
    }
  }

  std::vector<std::pair<double, std::size_t>> cand(n);
  auto accuracy = [&](std::size_t feature, std::span<const double> column) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double dist = base[i * n + j];
        if (feature < d) {
          const double before = s.X(i, feature) - s.X(j, feature);
          const double after = column[i] - s.X(j, feature);
          dist += after * after - before * before;
        }
        cand[j] = {dist, j};
      }
      std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk - 1), cand.end());
      VoteCounts votes{};
      for (std::size_t m = 0; m < kk; ++m) ++votes[s.y[cand[m].second]];
      int best = 0;
      for (int c = 1; c < 3; ++c) {
        if (votes[c] > votes[best]) best = c;
      }
      if (best == s.y[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
  };

  const double baseline = accuracy(d, {});
  std::vector<double> scores(d, 0.0);
  for (std::size_t f = 0; f < d; ++f) {
    auto column = s.X.column(f);
    const auto original = column;
    double drop = 0.0;
    for (int r = 0; r < kKnnPermutationRepeats; ++r) {
      column = original;
      Rng rng(mix_seed(kKnnPermutationSeed, f * kKnnPermutationRepeats + r));
      rng.shuffle(std::span<double>(column));
      drop += baseline - (column == original ? baseline : accuracy(f, column));
    }
    scores[f] = std::max(0.0, drop / kKnnPermutationRepeats);
  }
  return scores;
}

}  // namespace

std::vector<FeatureScore> feature_importance(const TrainedModel& model) {
  const std::vector<double> raw = std::visit(
      [&](const auto& s) -> std::vector<double> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ForestState> || std::is_same_v<S, BoostState>) {
          return s.importance;
        } else if constexpr (std::is_same_v<S, KnnState>) {
          return knn_permutation_importance(s, std::get<KnnParams>(model.hyperparams()).k);
        } else {
          const auto& w = s.model.weights;
          std::vector<double> out(w.cols(), 0.0);
          for (std::size_t j = 0; j < w.cols(); ++j) {
            for (std::size_t c = 0; c < w.rows(); ++c) out[j] += std::abs(w(c, j));
            out[j] /= static_cast<double>(w.rows());
          }
          return out;
        }
      },
      model.state());

  std::vector<FeatureScore> scores;
  scores.reserve(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    scores.push_back({model.feature_names()[j], std::max(0.0, raw[j])});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.score > b.score; });
  return scores;
}

}  // namespace oddsmith
