#include "oddsmith/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "oddsmith/error.hpp"

namespace oddsmith {

std::string_view to_string(SelectionMethod method) noexcept {
  switch (method) {
    case SelectionMethod::All: return "all";
    case SelectionMethod::Rfe: return "rfe";
    case SelectionMethod::Correlation: return "correlation";
  }
  return "unknown";
}

SelectionMethod parse_selection_method(std::string_view name) {
  for (const auto m : {SelectionMethod::All, SelectionMethod::Rfe, SelectionMethod::Correlation}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown selection method '" + std::string(name) + "'");
}

FeatureSubset all_features(const Dataset& data) {
  FeatureSubset s;
  s.method = SelectionMethod::All;
  s.names = data.feature_names;
  s.k = s.names.size();
  return s;
}

namespace {

void check_k(std::size_t k, std::size_t d) {
  if (k < 1 || k > d) {
    throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(k) + " with " + std::to_string(d) +
                                            " features");
  }
}

}  // namespace

FeatureSubset rfe(const Hyperparams& hp, const Dataset& train, std::size_t k) {
  check_k(k, train.features());
  FeatureSubset s;
  s.method = SelectionMethod::Rfe;
  s.k = k;
  s.names = train.feature_names;

  while (s.names.size() > k) {
    const auto model = oddsmith::train(hp, train.select_features(s.names));
    const auto ranked = feature_importance(model);
    std::size_t victim = 0;
    double lowest = 0.0;
    for (std::size_t j = 0; j < s.names.size(); ++j) {
      const auto it = std::find_if(ranked.begin(), ranked.end(),
                                   [&](const FeatureScore& f) { return f.feature == s.names[j]; });
      if (j == 0 || it->score <= lowest) {
        lowest = it->score;
        victim = j;
      }
    }
    s.eliminated.push_back(s.names[victim]);
    s.names.erase(s.names.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const Dataset& data, bool include_target) {
  if (data.rows() < 2) throw Error(ErrorCode::TooFewRows, std::to_string(data.rows()) + " row(s)");

  std::vector<std::vector<double>> columns;
  CorrelationMatrix out;
  for (std::size_t c = 0; c < data.features(); ++c) {
    columns.push_back(data.X.column(c));
    out.labels.push_back(data.feature_names[c]);
  }
  if (include_target) {
    columns.emplace_back(data.y.begin(), data.y.end());
    out.labels.emplace_back("result");
  }

  const std::size_t m = columns.size();
  out.values = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    out.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r = pearson(columns[i], columns[j]);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

FeatureSubset select_by_correlation(const Dataset& data, std::size_t k) {
  check_k(k, data.features());
  if (data.rows() < 2) throw Error(ErrorCode::TooFewRows, std::to_string(data.rows()) + " row(s)");
  const std::vector<double> target(data.y.begin(), data.y.end());

  std::vector<std::pair<double, std::string>> ranked;
  for (std::size_t c = 0; c < data.features(); ++c) {
    ranked.emplace_back(std::abs(pearson(data.X.column(c), target)), data.feature_names[c]);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  FeatureSubset s;
  s.method = SelectionMethod::Correlation;
  s.k = k;
  for (std::size_t i = 0; i < k; ++i) {
    s.scores.push_back(ranked[i].first);
    s.names.push_back(ranked[i].second);
  }
  return s;
}

std::string correlation_csv(const CorrelationMatrix& matrix) {
  std::ostringstream out;
  auto quoted = [](const std::string& s) {
    return s.find_first_of(",\"") == std::string::npos ? s : "\"" + s + "\"";
  };
  out << "feature";
  for (const auto& l : matrix.labels) out << ',' << quoted(l);
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    out << quoted(matrix.labels[i]);
    for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.6f", matrix.values(i, j));
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace oddsmith
