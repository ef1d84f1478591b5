#include <gtest/gtest.h>

#include <cmath>

#include "oddsmith/odds.hpp"
#include "support.hpp"

using namespace oddsmith;

namespace {

ProbTriple random_triple(Rng& rng) {
  const double a = rng.uniform() + 1e-3, b = rng.uniform() + 1e-3, c = rng.uniform() + 1e-3;
  const double s = a + b + c;
  return ProbTriple{{a / s, b / s, c / s}};
}

}  // namespace

TEST(ProbToOdds, Examples) {
  EXPECT_EQ(prob_to_odds(0.5), 2.0);
  EXPECT_EQ(prob_to_odds(1.0), 1.0);
  EXPECT_EQ(prob_to_odds(1e-9), 10000.0);
  EXPECT_ODDSMITH_ERROR(prob_to_odds(0.0), ErrorCode::NonPositiveAfterClip);
  EXPECT_ODDSMITH_ERROR(prob_to_odds(-0.1), ErrorCode::NonPositiveAfterClip);
  EXPECT_ODDSMITH_ERROR(prob_to_odds(1.5), ErrorCode::InvalidProbability);
  EXPECT_EQ(prob_to_odds(0.001, OddsPolicy{0.01}), 100.0);
}

TEST(ImpliedProb, ExamplesAndRoundTrip) {
  EXPECT_EQ(implied_prob(2.0), 0.5);
  EXPECT_EQ(implied_prob(1.0), 1.0);
  EXPECT_ODDSMITH_ERROR(implied_prob(0.99), ErrorCode::OddsBelowOne);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double odds = rng.uniform(1.01, 1000.0);
    EXPECT_NEAR(prob_to_odds(implied_prob(odds)), odds, 1e-12 * odds);
    const double p = rng.uniform(1e-4, 1.0);
    EXPECT_NEAR(implied_prob(prob_to_odds(p)), p, 1e-15);
  }
}

TEST(MakeBook, WorkedExample) {
  const auto book = make_book(ProbTriple{{0.3, 0.5, 0.2}}, Margin(0.05));
  EXPECT_NEAR(book.home, 1.904762, 1e-6);
  EXPECT_NEAR(book.draw, 3.174603, 1e-6);
  EXPECT_NEAR(book.away, 4.761905, 1e-6);
  EXPECT_NEAR(book_sum(book), 1.05, 1e-9);
}

TEST(MakeBook, FairBookAndClipping) {
  const auto fair = make_book(ProbTriple{{0.25, 0.45, 0.30}}, Margin(0.0));
  EXPECT_NEAR(fair.draw, 4.0, 1e-12);
  EXPECT_NEAR(book_sum(fair), 1.0, 1e-12);

  const auto certain = make_book(ProbTriple{{0.0, 1.0, 0.0}}, Margin(0.0));
  EXPECT_EQ(certain.home, 1.0);
  EXPECT_EQ(certain.draw, 10000.0);
  EXPECT_EQ(certain.away, 10000.0);

  // 0.98 * 1.05 exceeds 1: the home leg is floored at odds 1.0.
  const auto heavy = make_book(ProbTriple{{0.01, 0.98, 0.01}}, Margin(0.05));
  EXPECT_EQ(heavy.home, 1.0);

  EXPECT_ODDSMITH_ERROR(make_book(ProbTriple{{0.5, 0.5, 0.5}}, Margin(0.05)), ErrorCode::InvalidProbTriple);
  EXPECT_ODDSMITH_ERROR(Margin(1.0), ErrorCode::InvalidMargin);
  EXPECT_ODDSMITH_ERROR(Margin(-0.01), ErrorCode::InvalidMargin);
}

TEST(MakeBook, MarginIdentityAndMonotonicity) {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_triple(rng);
    const Margin m(rng.uniform(0.0, 0.3));
    const auto implied = implied_book(p, m);
    EXPECT_NEAR(implied[0] + implied[1] + implied[2], 1.0 + m.value(), 1e-9);
    const auto book = make_book(p, m);
    bool clipped = false;
    for (const double q : implied) clipped = clipped || q > 1.0 || q < 1e-4;
    if (!clipped) EXPECT_NEAR(book_sum(book), 1.0 + m.value(), 1e-9);
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(book.for_class(a), 1.0);
      for (int b = 0; b < 3; ++b) {
        if (p[a] > p[b] && !clipped) EXPECT_LT(book.for_class(a), book.for_class(b));
      }
    }
  }
}

TEST(OddsTriple, ClassMapping) {
  const OddsTriple o{1.5, 3.0, 6.0};
  EXPECT_EQ(o.for_class(1), 1.5);
  EXPECT_EQ(o.for_class(0), 3.0);
  EXPECT_EQ(o.for_class(2), 6.0);
  EXPECT_EQ(outcome_label(1), "1");
  EXPECT_EQ(outcome_label(0), "X");
  EXPECT_EQ(outcome_label(2), "2");
}

TEST(Backtest, AlwaysRightAndAlwaysWrong) {
  std::vector<ProbTriple> probs(10, ProbTriple{{0.1, 0.8, 0.1}});
  std::vector<OddsTriple> book(10, OddsTriple{2.0, 2.0, 2.0});
  const auto right = backtest(probs, std::vector<int>(10, 1), book, {1.0});
  EXPECT_EQ(right.staked, 10.0);
  EXPECT_EQ(right.returned, 20.0);
  EXPECT_EQ(right.roi, 1.0);
  EXPECT_EQ(right.per_outcome[1].wins, 10u);

  const auto wrong = backtest(probs, std::vector<int>(10, 2), book, {1.0});
  EXPECT_EQ(wrong.returned, 0.0);
  EXPECT_EQ(wrong.roi, -1.0);
  EXPECT_EQ(wrong.per_outcome[1].losses, 10u);

  EXPECT_ODDSMITH_ERROR(backtest(probs, std::vector<int>(9, 1), book, {1.0}), ErrorCode::LengthMismatch);
  EXPECT_ODDSMITH_ERROR(backtest(probs, std::vector<int>(10, 1), book, {0.0}), ErrorCode::InvalidStake);
}

TEST(Backtest, MatchesLedgerOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ProbTriple> probs;
    std::vector<int> actual;
    std::vector<OddsTriple> book;
    for (int i = 0; i < 20; ++i) {
      probs.push_back(random_triple(rng));
      actual.push_back(static_cast<int>(rng.index(3)));
      book.push_back({rng.uniform(1.1, 6.0), rng.uniform(2.5, 5.0), rng.uniform(1.1, 9.0)});
    }
    const double stake = rng.uniform(0.5, 10.0);

    // Spreadsheet ledger: one line per fixture.
    double staked = 0, returned = 0;
    std::size_t wins[3] = {0, 0, 0}, bets[3] = {0, 0, 0};
    for (std::size_t i = 0; i < probs.size(); ++i) {
      int pick = 0;
      if (probs[i][1] > probs[i][pick]) pick = 1;
      if (probs[i][2] > probs[i][pick]) pick = 2;
      const double price = pick == 1 ? book[i].home : pick == 0 ? book[i].draw : book[i].away;
      staked += stake;
      ++bets[pick];
      if (pick == actual[i]) {
        returned += stake * price;
        ++wins[pick];
      }
    }
    const auto r = backtest(probs, actual, book, {stake});
    EXPECT_EQ(r.n_bets, 20u);
    EXPECT_NEAR(r.staked, staked, 1e-9);
    EXPECT_NEAR(r.returned, returned, 1e-9);
    EXPECT_NEAR(r.roi, (returned - staked) / staked, 1e-12);
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(r.per_outcome[c].bets, bets[c]);
      EXPECT_EQ(r.per_outcome[c].wins, wins[c]);
      EXPECT_EQ(r.per_outcome[c].losses, bets[c] - wins[c]);
    }
  }
}

TEST(Backtest, BookmakerExpectation) {
  // Expected ROI of a flat bet when outcomes follow the book's own implied
  // probabilities, computed exactly by weighting every possible result.
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    ProbTriple p = random_triple(rng);
    const Margin m(rng.uniform(0.01, 0.2));
    if (implied_book(p, m)[p.argmax()] > 1.0) continue;
    const auto book = make_book(p, m);
    const double total = book_sum(book);
    double expected = 0.0;
    for (int outcome = 0; outcome < 3; ++outcome) {
      const double q = implied_prob(book.for_class(outcome)) / total;
      const auto r = backtest(std::vector<ProbTriple>{p}, std::vector<int>{outcome},
                              std::vector<OddsTriple>{book}, {1.0});
      expected += q * r.roi;
    }
    EXPECT_NEAR(expected, -m.value() / (1.0 + m.value()), 1e-9);
  }
}
