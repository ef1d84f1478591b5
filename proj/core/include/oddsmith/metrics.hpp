#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

namespace oddsmith {

/// counts[i][j]: instances of true class i predicted as class j.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, 3>, 3> counts{};

  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t support(int cls) const noexcept;    // row sum
  std::size_t predicted(int cls) const noexcept;  // column sum

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

struct AverageScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const AverageScores&, const AverageScores&) = default;
};

struct EvalReport {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::array<ClassScores, 3> per_class{};
  AverageScores micro;
  AverageScores macro;
  AverageScores weighted;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Throws LengthMismatch for unequal lengths and Empty for no labels.
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// Throws LengthMismatch, or UnknownLabel for a label outside {0, 1, 2}.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

/// Zero-denominator precision, recall and F1 are reported as 0.
EvalReport report(std::span<const int> y_true, std::span<const int> y_pred);

/// Plain-text table: accuracy, then one row per class with precision,
/// recall, F-1 and support at two decimals, then the three averages.
std::string render_report(const EvalReport& report, const std::string& title = {});

}  // namespace oddsmith
