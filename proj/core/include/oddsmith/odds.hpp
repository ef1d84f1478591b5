#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "oddsmith/models.hpp"

namespace oddsmith {

/// Decimal odds for a 1x2 market.
struct OddsTriple {
  double home = 1.0;  // "1", class 1
  double draw = 1.0;  // "X", class 0
  double away = 1.0;  // "2", class 2

  /// Odds for a class code.
  double for_class(int cls) const;

  friend bool operator==(const OddsTriple&, const OddsTriple&) = default;
};

/// Market label for a class code: 1 -> "1", 0 -> "X", 2 -> "2".
std::string_view outcome_label(int cls);

struct OddsPolicy {
  double epsilon = 1e-4;  // probability floor; caps odds at 1/epsilon
};

/// Bookmaker margin (overround), 0.05 = 5%.
class Margin {
 public:
  /// Throws InvalidMargin unless 0 <= m < 1.
  explicit Margin(double m);
  double value() const noexcept { return m_; }

 private:
  double m_;
};

/// Fair odds 1/p with p floored at the policy's epsilon. Throws
/// NonPositiveAfterClip for p <= 0 and InvalidProbability for p > 1.
double prob_to_odds(double p, const OddsPolicy& policy = {});

/// 1/odds. Throws OddsBelowOne for odds < 1.
double implied_prob(double odds);

/// Implied probabilities p_i (1 + m) before any clipping, indexed by class
/// code. Throws InvalidProbTriple for an invalid triple.
std::array<double, 3> implied_book(const ProbTriple& probs, const Margin& margin);

/// Scales each probability by (1 + m) and inverts. Implied probabilities are
/// clipped to [epsilon, 1], which floors odds at 1 and caps them at 1/epsilon.
/// Throws InvalidProbTriple for an invalid triple.
OddsTriple make_book(const ProbTriple& probs, const Margin& margin, const OddsPolicy& policy = {});

/// Sum of the implied probabilities 1/odds (1 + overround).
double book_sum(const OddsTriple& odds);

struct FlatStakeArgmax {
  double stake = 1.0;
};

struct OutcomeTally {
  std::size_t bets = 0;
  std::size_t wins = 0;
  std::size_t losses = 0;

  friend bool operator==(const OutcomeTally&, const OutcomeTally&) = default;
};

struct BacktestReport {
  std::size_t n_bets = 0;
  double staked = 0.0;
  double returned = 0.0;
  double roi = 0.0;  // (returned - staked) / staked, 0 when nothing was staked
  std::array<OutcomeTally, 3> per_outcome{};  // indexed by the class bet on

  friend bool operator==(const BacktestReport&, const BacktestReport&) = default;
};

/// Stakes on the model's most likely class of every fixture at the book's
/// price. Throws LengthMismatch, InvalidStake or UnknownLabel.
BacktestReport backtest(std::span<const ProbTriple> model_probs, std::span<const int> actuals,
                        std::span<const OddsTriple> book, const FlatStakeArgmax& strategy);

}  // namespace oddsmith
