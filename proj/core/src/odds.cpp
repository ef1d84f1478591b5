#include "oddsmith/odds.hpp"

#include <algorithm>
#include <cmath>

#include "oddsmith/error.hpp"

namespace oddsmith {

double OddsTriple::for_class(int cls) const {
  switch (cls) {
    case 0: return draw;
    case 1: return home;
    case 2: return away;
    default: throw Error(ErrorCode::UnknownLabel, std::to_string(cls));
  }
}

std::string_view outcome_label(int cls) {
  switch (cls) {
    case 0: return "X";
    case 1: return "1";
    case 2: return "2";
    default: throw Error(ErrorCode::UnknownLabel, std::to_string(cls));
  }
}

Margin::Margin(double m) : m_(m) {
  if (!(m >= 0.0 && m < 1.0)) throw Error(ErrorCode::InvalidMargin, std::to_string(m));
}

double prob_to_odds(double p, const OddsPolicy& policy) {
  if (!(p > 0.0)) throw Error(ErrorCode::NonPositiveAfterClip, std::to_string(p));
  if (p > 1.0) throw Error(ErrorCode::InvalidProbability, std::to_string(p));
  return 1.0 / std::max(p, policy.epsilon);
}

double implied_prob(double odds) {
  if (!(odds >= 1.0)) throw Error(ErrorCode::OddsBelowOne, std::to_string(odds));
  return 1.0 / odds;
}

std::array<double, 3> implied_book(const ProbTriple& probs, const Margin& margin) {
  if (!probs.valid()) {
    throw Error(ErrorCode::InvalidProbTriple, "(" + std::to_string(probs[0]) + ", " +
                                                  std::to_string(probs[1]) + ", " +
                                                  std::to_string(probs[2]) + ")");
  }
  const double scale = 1.0 + margin.value();
  return {probs[0] * scale, probs[1] * scale, probs[2] * scale};
}

OddsTriple make_book(const ProbTriple& probs, const Margin& margin, const OddsPolicy& policy) {
  const auto implied = implied_book(probs, margin);
  auto leg = [&](int cls) { return 1.0 / std::clamp(implied[cls], policy.epsilon, 1.0); };
  return {leg(1), leg(0), leg(2)};
}

double book_sum(const OddsTriple& odds) { return 1.0 / odds.home + 1.0 / odds.draw + 1.0 / odds.away; }

BacktestReport backtest(std::span<const ProbTriple> model_probs, std::span<const int> actuals,
                        std::span<const OddsTriple> book, const FlatStakeArgmax& strategy) {
  if (model_probs.size() != actuals.size() || model_probs.size() != book.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(model_probs.size()) + " forecasts, " + std::to_string(actuals.size()) +
                    " results, " + std::to_string(book.size()) + " prices");
  }
  if (!(strategy.stake > 0.0) || !std::isfinite(strategy.stake)) {
    throw Error(ErrorCode::InvalidStake, std::to_string(strategy.stake));
  }

  BacktestReport r;
  for (std::size_t i = 0; i < model_probs.size(); ++i) {
    const int pick = model_probs[i].argmax();
    const double price = book[i].for_class(pick);
    if (actuals[i] < 0 || actuals[i] > 2) throw Error(ErrorCode::UnknownLabel, std::to_string(actuals[i]));
    auto& tally = r.per_outcome[pick];
    ++tally.bets;
    ++r.n_bets;
    r.staked += strategy.stake;
    if (pick == actuals[i]) {
      ++tally.wins;
      r.returned += strategy.stake * price;
    } else {
      ++tally.losses;
    }
  }
  r.roi = r.staked > 0.0 ? (r.returned - r.staked) / r.staked : 0.0;
  return r;
}

}  // namespace oddsmith
