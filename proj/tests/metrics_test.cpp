#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rankgap/errors.hpp"
#include "rankgap/metrics.hpp"

namespace rankgap {
namespace {

ScoreSet four_point() { return ScoreSet({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}); }

TEST(ThresholdStats, StrictCountsAtPositiveScore) {
  const auto t = threshold_stats(four_point(), 0.35, false);
  EXPECT_EQ(t.tp, 1u);
  EXPECT_EQ(t.fp, 1u);
  EXPECT_EQ(t.tn, 1u);
  EXPECT_EQ(t.fn, 1u);
  EXPECT_DOUBLE_EQ(*t.tpr, 0.5);
  EXPECT_DOUBLE_EQ(*t.fpr, 0.5);
  EXPECT_DOUBLE_EQ(t.firing_rate, 0.5);
}

TEST(ThresholdStats, InclusiveCountsAtPositiveScore) {
  const auto t = threshold_stats(four_point(), 0.35, true);
  EXPECT_EQ(t.tp, 2u);
  EXPECT_EQ(t.fp, 1u);
  EXPECT_DOUBLE_EQ(*t.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.firing_rate, 0.75);
}

TEST(ThresholdStats, NothingFiresAboveMaximum) {
  const auto t = threshold_stats(four_point(), 1.0, true);
  EXPECT_EQ(t.tp, 0u);
  EXPECT_EQ(t.fp, 0u);
  EXPECT_DOUBLE_EQ(t.firing_rate, 0.0);
  EXPECT_FALSE(t.precision.has_value());
}

TEST(ThresholdStats, RatesAbsentForMissingClass) {
  const ScoreSet only_neg({0.2, 0.3}, {0, 0});
  const auto t = threshold_stats(only_neg, 0.25, false);
  EXPECT_FALSE(t.tpr.has_value());
  ASSERT_TRUE(t.fpr.has_value());
  EXPECT_DOUBLE_EQ(*t.fpr, 0.5);
}

TEST(Auroc, HandExamples) {
  EXPECT_DOUBLE_EQ(auroc(four_point()), 0.75);
  EXPECT_DOUBLE_EQ(auroc(ScoreSet({0.1, 0.2, 0.7, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(auroc(ScoreSet({0.1, 0.2, 0.7, 0.9}, {1, 1, 0, 0})), 0.0);
}

TEST(Auroc, TiesEarnHalfCredit) {
  EXPECT_DOUBLE_EQ(auroc(ScoreSet({0.5, 0.5}, {1, 0})), 0.5);
}

TEST(Auroc, SingleClassIsUndefined) {
  EXPECT_THROW(auroc(ScoreSet({0.1, 0.2}, {1, 1})), UndefinedMetricError);
  EXPECT_THROW(auroc(ScoreSet({0.1, 0.2}, {0, 0})), UndefinedMetricError);
}

TEST(Auprc, HandExamples) {
  EXPECT_NEAR(auprc(four_point()), 5.0 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(auprc(ScoreSet({0.1, 0.2, 0.7, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(auprc(ScoreSet({0.1, 0.2}, {1, 0})), 0.5);
  EXPECT_THROW(auprc(ScoreSet({0.1, 0.2}, {0, 0})), UndefinedMetricError);
}

TEST(Reparam, AurocHandExamples) {
  EXPECT_DOUBLE_EQ(auroc_reparam(four_point()), 0.75);
  EXPECT_DOUBLE_EQ(auroc_reparam(ScoreSet({0.1, 0.2, 0.7, 0.9}, {0, 0, 1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(auroc_reparam(ScoreSet({0.1, 0.2, 0.7, 0.9}, {1, 1, 0, 0})), 0.0);
}

TEST(Reparam, AuprcBothForms) {
  const auto f = auprc_reparam(four_point());
  EXPECT_NEAR(f.mean_precision, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(f.bayes_form, 1.0 - 0.5 * ((0.5 / 0.75 + 0.0 / 0.25) / 2.0), 1e-15);
  EXPECT_TRUE(f.agrees());

  const auto single = auprc_reparam(ScoreSet({0.1, 0.2}, {1, 0}));
  EXPECT_NEAR(single.bayes_form, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(auprc_reparam(ScoreSet({0.1, 0.2, 0.7, 0.9}, {0, 0, 1, 1})).bayes_form, 1.0);
}

TEST(Reparam, RejectsTies) {
  const ScoreSet tied({0.3, 0.3, 0.6}, {1, 0, 1});
  EXPECT_THROW(auroc_reparam(tied), TieError);
  EXPECT_THROW(auprc_reparam(tied), TieError);
}

TEST(Curves, RocContainsStrictPoint) {
  const Curve roc = roc_curve(four_point());
  ASSERT_EQ(roc.size(), 6u);  // 4 distinct scores + 2 boundaries
  bool found = false;
  for (const auto& p : roc) {
    if (p.threshold == 0.35) {
      found = true;
      EXPECT_DOUBLE_EQ(*p.tpr, 0.5);
      EXPECT_DOUBLE_EQ(*p.fpr, 0.5);
    }
  }
  EXPECT_TRUE(found);
  EXPECT_DOUBLE_EQ(*roc.front().tpr, 1.0);
  EXPECT_DOUBLE_EQ(*roc.front().fpr, 1.0);
  EXPECT_DOUBLE_EQ(*roc.back().tpr, 0.0);
  EXPECT_DOUBLE_EQ(*roc.back().fpr, 0.0);
  for (std::size_t i = 1; i < roc.size(); ++i) {
    EXPECT_LE(*roc[i].tpr, *roc[i - 1].tpr);
    EXPECT_LE(*roc[i].fpr, *roc[i - 1].fpr);
  }
}

TEST(Curves, RocNeedsBothClasses) {
  EXPECT_THROW(roc_curve(ScoreSet({0.2, 0.4}, {1, 1})), UndefinedMetricError);
}

TEST(Curves, PrSinglePositive) {
  const Curve pr = pr_curve(ScoreSet({0.3}, {1}));
  ASSERT_EQ(pr.size(), 3u);
  EXPECT_DOUBLE_EQ(pr[1].threshold, 0.3);
  EXPECT_EQ(pr[1].tp, 1u);
  EXPECT_DOUBLE_EQ(*pr[1].precision, 1.0);
  EXPECT_FALSE(pr.back().precision.has_value());
}

TEST(Curves, PrUsesInclusiveCounts) {
  const Curve pr = pr_curve(four_point());
  // Thresholds 0, 0.1, 0.35, 0.4, 0.8, 1.
  EXPECT_DOUBLE_EQ(pr[2].threshold, 0.35);
  EXPECT_DOUBLE_EQ(*pr[2].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*pr[4].precision, 1.0);
}

// Property: both reparametrized forms are exact identities on strict sets.
TEST(Properties, ReparamIdentities) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_real_distribution<double> prev(0.01, 0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const ScoreSet s = oracle::to_score_set(oracle::random_strict_set(rng, size(rng), prev(rng)));
    EXPECT_NEAR(auroc_reparam(s), auroc(s), 1e-12);
    const auto f = auprc_reparam(s);
    EXPECT_LT(f.precision_residual, 1e-12);
    EXPECT_LT(f.bayes_residual, 1e-12);
  }
}

TEST(Properties, MatchesBruteForceOraclesWithTies) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> grid(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> s;
    std::vector<std::uint8_t> y;
    const int n = 2 + trial % 30;
    for (int i = 0; i < n; ++i) {
      s.push_back(grid(rng) / 10.0);  // coarse grid forces ties
      y.push_back(i % 3 == 0 ? 1 : static_cast<std::uint8_t>(grid(rng) > 6));
    }
    y[1] = 0;
    const ScoreSet set(s, y);
    EXPECT_NEAR(auroc(set), oracle::pairwise_auroc(s, y), 1e-12);
    EXPECT_NEAR(auprc(set), oracle::rank_by_rank_ap(s, y), 1e-12);
  }
}

TEST(Properties, MonotoneTransformInvariance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = oracle::random_strict_set(rng, 50, 0.2);
    std::vector<double> squashed;
    for (double v : r.scores) squashed.push_back(std::pow(v, 3.0));
    const ScoreSet a(r.scores, r.labels);
    const ScoreSet b(squashed, r.labels);
    EXPECT_NEAR(auroc(a), auroc(b), 1e-12);
    EXPECT_NEAR(auprc(a), auprc(b), 1e-12);
  }
}

TEST(Properties, LabelFlipComplementsAuroc) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = oracle::random_strict_set(rng, 40, 0.3);
    const double before = auroc(ScoreSet(r.scores, r.labels));
    for (auto& l : r.labels) l = 1 - l;
    EXPECT_NEAR(auroc(ScoreSet(r.scores, r.labels)), 1.0 - before, 1e-12);
  }
}

}  // namespace
}  // namespace rankgap
