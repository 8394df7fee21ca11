#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rankgap/score_set.hpp"

namespace rankgap {

// Confusion counts and rates at one decision threshold. Rates whose
// denominator is zero are absent.
struct ThresholdStats {
  double threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> precision;
  double firing_rate = 0.0;
};

// Decision rule is `score > threshold`, or `score >= threshold` when inclusive.
ThresholdStats threshold_stats(const ScoreSet& s, double threshold, bool inclusive);

// Probability that a random positive outranks a random negative; ties earn
// half credit. Throws UndefinedMetricError if either class is empty.
double auroc(const ScoreSet& s);

// Average precision: mean over positives of the inclusive-threshold precision
// at each positive's score. Throws UndefinedMetricError if there are no
// positives.
double auprc(const ScoreSet& s);

// 1 - mean over positives of the strict-threshold FPR at the positive's score.
// Requires a strict set with both classes present.
double auroc_reparam(const ScoreSet& s);

// The two expectation forms of AUPRC over the positive-score distribution.
struct AuprcForms {
  // E[Prec(t)] with t drawn from the positive scores.
  double mean_precision = 0.0;
  // 1 - P(y=0) * E[FPR(t) / FR(t)], inclusive thresholds.
  double bayes_form = 0.0;
  // |form - auprc(s)| for each form.
  double precision_residual = 0.0;
  double bayes_residual = 0.0;

  bool agrees(double tolerance = 1e-12) const {
    return precision_residual < tolerance && bayes_residual < tolerance;
  }
};

// Requires a strict set with at least one positive.
AuprcForms auprc_reparam(const ScoreSet& s);

// Threshold sweep for plotting. Points are ordered by increasing threshold:
// a leading "fire on everything" point at threshold 0, one point per distinct
// score, and a trailing "fire on nothing" point at threshold 1.
using Curve = std::vector<ThresholdStats>;

// Strict comparison (`score > threshold`). Requires both classes.
Curve roc_curve(const ScoreSet& s);
// Inclusive comparison (`score >= threshold`). Requires at least one positive.
Curve pr_curve(const ScoreSet& s);

}  // namespace rankgap
