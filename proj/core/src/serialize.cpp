#include "oddsmith/serialize.hpp"

#include <fstream>
#include <sstream>

#include "oddsmith/error.hpp"

namespace oddsmith {
namespace {

[[noreturn]] void bad_format(const std::string& what) { throw Error(ErrorCode::InvalidFormat, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad_format(std::string("missing field '") + name + "'");
  return j.at(name);
}

void check_header(const Json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", "") != format) {
    bad_format(std::string("not an ") + format + " document");
  }
  const int stored = field(j, "version").get<int>();
  if (stored != version) {
    throw Error(ErrorCode::VersionMismatch, std::string(format) + " version " +
                                                std::to_string(stored) + ", expected " +
                                                std::to_string(version));
  }
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_rows(const Json& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto values = rows[r].get<std::vector<double>>();
    if (values.size() != cols) bad_format("ragged matrix row " + std::to_string(r));
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

Json tree_to_json(const Tree& tree) {
  Json feature = Json::array(), threshold = Json::array(), left = Json::array(),
       right = Json::array(), label = Json::array(), value = Json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    label.push_back(n.label);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"label", label},         {"value", value}};
}

Tree tree_from_json(const Json& j) {
  const auto feature = field(j, "feature").get<std::vector<int>>();
  const auto threshold = field(j, "threshold").get<std::vector<double>>();
  const auto left = field(j, "left").get<std::vector<int>>();
  const auto right = field(j, "right").get<std::vector<int>>();
  const auto label = field(j, "label").get<std::vector<int>>();
  const auto value = field(j, "value").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
      label.size() != n || value.size() != n) {
    bad_format("tree arrays differ in length");
  }
  Tree t;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node = {feature[i], threshold[i], left[i], right[i], label[i], value[i]};
    if (!node.is_leaf()) {
      const auto ok = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
      if (!ok(node.left) || !ok(node.right)) bad_format("tree child index out of range");
    }
  }
  return t;
}

Json linear_to_json(const LinearOvr& m) {
  return {{"weights", matrix_rows(m.weights)}, {"bias", m.bias}};
}

LinearOvr linear_from_json(const Json& j, std::size_t d) {
  LinearOvr m;
  m.weights = matrix_from_rows(field(j, "weights"), d);
  if (m.weights.rows() != 3) bad_format("linear model needs 3 weight rows");
  m.bias = field(j, "bias").get<std::array<double, 3>>();
  return m;
}


}  // namespace

Json to_json(const EncodingMaps& maps) {
  Json teams = Json::object();
  // Listed by code so the snapshot reads in first-appearance order.
  std::vector<std::pair<int, std::string>> by_code;
  for (const auto& [name, code] : maps.team_code) by_code.emplace_back(code, name);
  std::sort(by_code.begin(), by_code.end());
  for (const auto& [code, name] : by_code) teams[name] = code;
  return {{"venue", {{"Home", 1}, {"Away", 0}}},
          {"result", {{"W", 1}, {"D", 0}, {"L", 2}}},
          {"team", teams}};
}

EncodingMaps encoding_maps_from_json(const Json& j) {
  EncodingMaps maps;
  for (const auto& [name, code] : field(j, "team").items()) maps.team_code[name] = code.get<int>();
  return maps;
}

Json to_json(const NormalizationParams& params) {
  return {{"min", params.min}, {"max", params.max}};
}

NormalizationParams normalization_from_json(const Json& j) {
  NormalizationParams p{field(j, "min").get<std::vector<double>>(),
                        field(j, "max").get<std::vector<double>>()};
  if (p.min.size() != p.max.size()) bad_format("normalization min/max lengths differ");
  return p;
}

Json to_json(const Dataset& data) {
  Json meta = Json::array();
  for (const auto& m : data.meta) {
    meta.push_back({{"date", format_date(m.date)},
                    {"season", m.season},
                    {"matchweek", m.matchweek},
                    {"team", m.team},
                    {"opponent", m.opponent},
                    {"fixture", m.fixture}});
  }
  return {{"format", "oddsmith-dataset"},
          {"version", kDatasetFormatVersion},
          {"rows", data.rows()},
          {"feature_names", data.feature_names},
          {"descriptor_features", data.descriptor_features},
          {"X", matrix_rows(data.X)},
          {"y", data.y},
          {"meta", meta},
          {"encoders", to_json(data.encoders)},
          {"normalization", data.normalization ? to_json(*data.normalization) : Json(nullptr)}};
}

Dataset dataset_from_json(const Json& j) {
  check_header(j, "oddsmith-dataset", kDatasetFormatVersion);
  Dataset d;
  d.feature_names = field(j, "feature_names").get<std::vector<std::string>>();
  d.descriptor_features = field(j, "descriptor_features").get<std::size_t>();
  d.X = matrix_from_rows(field(j, "X"), d.feature_names.size());
  d.y = field(j, "y").get<std::vector<int>>();
  if (d.y.size() != d.X.rows()) bad_format("label count differs from row count");
  for (const auto& m : field(j, "meta")) {
    const auto date = parse_date(field(m, "date").get<std::string>());
    if (!date) bad_format("bad date in meta");
    d.meta.push_back({*date, field(m, "season").get<std::string>(), field(m, "matchweek").get<int>(),
                      field(m, "team").get<int>(), field(m, "opponent").get<int>(),
                      field(m, "fixture").get<std::size_t>()});
  }
  if (d.meta.size() != d.y.size()) bad_format("meta count differs from row count");
  d.encoders = encoding_maps_from_json(field(j, "encoders"));
  if (j.contains("normalization") && !j.at("normalization").is_null()) {
    d.normalization = normalization_from_json(j.at("normalization"));
  }
  return d;
}

Json to_json(const Hyperparams& hp) {
  Json out{{"kind", to_string(kind_of(hp))}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RandomForestParams>) {
          out["n_trees"] = p.n_trees;
          out["max_depth"] = p.max_depth;
          out["min_samples_leaf"] = p.min_samples_leaf;
          out["max_features"] = p.max_features;
          out["bootstrap"] = p.bootstrap;
          out["seed"] = p.seed;
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          out["k"] = p.k;
          out["metric"] = "euclidean";
        } else if constexpr (std::is_same_v<P, SvmParams>) {
          out["c"] = p.c;
          out["epochs"] = p.epochs;
          out["learning_rate"] = p.learning_rate;
          out["replicas"] = p.replicas;
          out["seed"] = p.seed;
        } else {
          out["n_rounds"] = p.n_rounds;
          out["max_depth"] = p.max_depth;
          out["learning_rate"] = p.learning_rate;
          out["l2_lambda"] = p.l2_lambda;
          out["seed"] = p.seed;
        }
      },
      hp);
  return out;
}

Hyperparams hyperparams_from_json(ModelKind kind, const Json& params) {
  Hyperparams hp = default_hyperparams(kind);
  if (!params.is_object()) bad_format("hyperparameters must be an object");
  for (const auto& [name, value] : params.items()) {
    if (name == "kind") continue;
    if (name == "metric") {
      if (value != "euclidean") bad_format("only the euclidean metric is supported");
      continue;
    }
    if (name == "seed") {
      hp = with_seed(std::move(hp), value.get<std::uint64_t>());
      continue;
    }
    if (value.is_boolean()) {
      hp = with_param(std::move(hp), name, value.get<bool>() ? 1.0 : 0.0);
    } else if (value.is_number()) {
      hp = with_param(std::move(hp), name, value.get<double>());
    } else {
      bad_format("hyperparameter '" + name + "' must be numeric");
    }
  }
  return hp;
}

Hyperparams hyperparams_from_json(const Json& j) {
  return hyperparams_from_json(parse_model_kind(field(j, "kind").get<std::string>()), j);
}

Json to_json(const TrainedModel& model) {
  Json state = std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ForestState>) {
          Json trees = Json::array();
          for (const auto& t : s.trees) trees.push_back(tree_to_json(t));
          return {{"trees", trees}, {"importance", s.importance}};
        } else if constexpr (std::is_same_v<S, KnnState>) {
          return {{"X", matrix_rows(s.X)}, {"y", s.y}};
        } else if constexpr (std::is_same_v<S, SvmState>) {
          Json replicas = Json::array();
          for (const auto& r : s.replicas) replicas.push_back(linear_to_json(r));
          return {{"model", linear_to_json(s.model)},
                  {"replicas", replicas},
                  {"objective_history", s.objective_history}};
        } else {
          Json rounds = Json::array();
          for (const auto& r : s.rounds) {
            rounds.push_back(Json::array({tree_to_json(r[0]), tree_to_json(r[1]), tree_to_json(r[2])}));
          }
          return {{"base_score", s.base_score},
                  {"rounds", rounds},
                  {"importance", s.importance},
                  {"loss_history", s.loss_history}};
        }
      },
      model.state());
  return {{"format", "oddsmith-model"},
          {"version", kModelFormatVersion},
          {"kind", to_string(model.kind())},
          {"hyperparams", to_json(model.hyperparams())},
          {"feature_names", model.feature_names()},
          {"normalization",
           model.normalization() ? to_json(*model.normalization()) : Json(nullptr)},
          {"state", state}};
}

TrainedModel model_from_json(const Json& j) {
  check_header(j, "oddsmith-model", kModelFormatVersion);
  const ModelKind kind = parse_model_kind(field(j, "kind").get<std::string>());
  const Hyperparams hp = hyperparams_from_json(kind, field(j, "hyperparams"));
  validate(hp);
  auto names = field(j, "feature_names").get<std::vector<std::string>>();
  const std::size_t d = names.size();
  std::optional<NormalizationParams> norm;
  if (j.contains("normalization") && !j.at("normalization").is_null()) {
    norm = normalization_from_json(j.at("normalization"));
    if (norm->min.size() != d) bad_format("normalization width differs from feature count");
  }

  const Json& s = field(j, "state");
  ModelState state;
  switch (kind) {
    case ModelKind::RandomForest: {
      ForestState f;
      for (const auto& t : field(s, "trees")) f.trees.push_back(tree_from_json(t));
      f.importance = field(s, "importance").get<std::vector<double>>();
      if (f.trees.empty()) bad_format("forest without trees");
      state = std::move(f);
      break;
    }
    case ModelKind::Knn: {
      KnnState k;
      k.X = matrix_from_rows(field(s, "X"), d);
      k.y = field(s, "y").get<std::vector<int>>();
      if (k.y.size() != k.X.rows()) bad_format("knn label count differs from row count");
      state = std::move(k);
      break;
    }
    case ModelKind::Svm: {
      SvmState v;
      v.model = linear_from_json(field(s, "model"), d);
      for (const auto& r : field(s, "replicas")) v.replicas.push_back(linear_from_json(r, d));
      v.objective_history = field(s, "objective_history").get<std::vector<double>>();
      state = std::move(v);
      break;
    }
    case ModelKind::GradientBoost: {
      BoostState b;
      b.base_score = field(s, "base_score").get<std::array<double, 3>>();
      for (const auto& r : field(s, "rounds")) {
        if (r.size() != 3) bad_format("boosting round needs 3 trees");
        b.rounds.push_back({tree_from_json(r[0]), tree_from_json(r[1]), tree_from_json(r[2])});
      }
      b.importance = field(s, "importance").get<std::vector<double>>();
      b.loss_history = field(s, "loss_history").get<std::vector<double>>();
      state = std::move(b);
      break;
    }
  }
  // Split features must index into the feature list.
  auto check_tree = [&](const Tree& t) {
    for (const auto& n : t.nodes) {
      if (n.feature >= static_cast<int>(d)) bad_format("tree splits on feature out of range");
    }
  };
  if (const auto* f = std::get_if<ForestState>(&state)) {
    for (const auto& t : f->trees) check_tree(t);
  } else if (const auto* b = std::get_if<BoostState>(&state)) {
    for (const auto& r : b->rounds) {
      for (const auto& t : r) check_tree(t);
    }
  }
  return TrainedModel(hp, std::move(names), std::move(state), std::move(norm));
}

Json to_json(const EvalReport& r) {
  Json per_class = Json::array();
  for (int c = 0; c < 3; ++c) {
    const auto& s = r.per_class[c];
    per_class.push_back({{"class", c},
                         {"precision", s.precision},
                         {"recall", s.recall},
                         {"f1", s.f1},
                         {"support", s.support}});
  }
  auto avg = [](const AverageScores& a) {
    return Json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
  };
  Json confusion = Json::array();
  for (const auto& row : r.confusion.counts) confusion.push_back(row);
  return {{"accuracy", r.accuracy},   {"confusion", confusion},  {"per_class", per_class},
          {"micro", avg(r.micro)},    {"macro", avg(r.macro)},   {"weighted", avg(r.weighted)}};
}

Json to_json(const FeatureSubset& s) {
  Json out{{"method", to_string(s.method)}, {"k", s.k}, {"names", s.names}};
  if (!s.eliminated.empty()) out["eliminated"] = s.eliminated;
  if (!s.scores.empty()) out["scores"] = s.scores;
  return out;
}

FeatureSubset feature_subset_from_json(const Json& j) {
  FeatureSubset s;
  s.method = parse_selection_method(field(j, "method").get<std::string>());
  s.names = field(j, "names").get<std::vector<std::string>>();
  s.k = j.value("k", s.names.size());
  if (j.contains("eliminated")) s.eliminated = j.at("eliminated").get<std::vector<std::string>>();
  if (j.contains("scores")) s.scores = j.at("scores").get<std::vector<double>>();
  return s;
}

Json to_json(const CorrelationMatrix& m) {
  return {{"labels", m.labels}, {"values", matrix_rows(m.values)}};
}

Json to_json(const BacktestReport& r) {
  Json per_outcome = Json::array();
  for (int c = 0; c < 3; ++c) {
    const auto& t = r.per_outcome[c];
    per_outcome.push_back({{"class", c},
                           {"outcome", outcome_label(c)},
                           {"bets", t.bets},
                           {"wins", t.wins},
                           {"losses", t.losses}});
  }
  return {{"n_bets", r.n_bets},
          {"staked", r.staked},
          {"returned", r.returned},
          {"roi", r.roi},
          {"per_outcome", per_outcome}};
}

Json to_json(const ProbTriple& p) {
  return {{"p_draw", p.draw()}, {"p_home", p.home()}, {"p_away", p.away()}};
}

Json to_json(const OddsTriple& o) { return {{"1", o.home}, {"X", o.draw}, {"2", o.away}}; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad_format(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace oddsmith
