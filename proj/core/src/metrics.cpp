#include "oddsmith/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "oddsmith/error.hpp"

namespace oddsmith {

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (const auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  return counts[0][0] + counts[1][1] + counts[2][2];
}

std::size_t ConfusionMatrix::support(int cls) const noexcept {
  const auto& row = counts[cls];
  return row[0] + row[1] + row[2];
}

std::size_t ConfusionMatrix::predicted(int cls) const noexcept {
  return counts[0][cls] + counts[1][cls] + counts[2][cls];
}

namespace {

void check_lengths(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " true labels vs " +
                                               std::to_string(y_pred.size()) + " predictions");
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true, y_pred);
  if (y_true.empty()) throw Error(ErrorCode::Empty, "no labels");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) correct += y_true[i] == y_pred[i] ? 1 : 0;
  return ratio(correct, y_true.size());
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true, y_pred);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if (t < 0 || t > 2 || p < 0 || p > 2) {
      throw Error(ErrorCode::UnknownLabel, "position " + std::to_string(i) + ": (" +
                                               std::to_string(t) + ", " + std::to_string(p) + ")");
    }
    ++cm.counts[t][p];
  }
  return cm;
}

EvalReport report(std::span<const int> y_true, std::span<const int> y_pred) {
  EvalReport r;
  r.confusion = confusion(y_true, y_pred);
  const auto& cm = r.confusion;
  const std::size_t n = cm.total();
  r.accuracy = ratio(cm.trace(), n);

  for (int c = 0; c < 3; ++c) {
    auto& s = r.per_class[c];
    s.support = cm.support(c);
    s.precision = ratio(cm.counts[c][c], cm.predicted(c));
    s.recall = ratio(cm.counts[c][c], s.support);
    s.f1 = harmonic(s.precision, s.recall);
    r.macro.precision += s.precision / 3.0;
    r.macro.recall += s.recall / 3.0;
    r.macro.f1 += s.f1 / 3.0;
    const double w = ratio(s.support, n);
    r.weighted.precision += w * s.precision;
    r.weighted.recall += w * s.recall;
    r.weighted.f1 += w * s.f1;
  }
  // Single-label multiclass: pooled TP = trace, pooled FP = pooled FN = n - trace.
  r.micro.precision = r.accuracy;
  r.micro.recall = r.accuracy;
  r.micro.f1 = harmonic(r.micro.precision, r.micro.recall);
  return r;
}

std::string render_report(const EvalReport& report, const std::string& title) {
  std::ostringstream out;
  char line[128];
  if (!title.empty()) out << title << '\n';
  std::snprintf(line, sizeof line, "Accuracy %.2f\n", report.accuracy);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %9s %9s %9s %9s\n", "Class", "Precision", "Recall",
                "F-1", "Support");
  out << line;
  for (int c = 0; c < 3; ++c) {
    const auto& s = report.per_class[c];
    std::snprintf(line, sizeof line, "%-14d %9.2f %9.2f %9.2f %9zu\n", c, s.precision, s.recall,
                  s.f1, s.support);
    out << line;
  }
  const std::size_t n = report.confusion.total();
  const std::pair<const char*, const AverageScores*> rows[] = {
      {"micro avg", &report.micro}, {"macro avg", &report.macro}, {"weighted avg", &report.weighted}};
  for (const auto& [name, avg] : rows) {
    std::snprintf(line, sizeof line, "%-14s %9.2f %9.2f %9.2f %9zu\n", name, avg->precision,
                  avg->recall, avg->f1, n);
    out << line;
  }
  return out.str();
}

}  // namespace oddsmith
