#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankgap/mistakes.hpp"
#include "rankgap/score_set.hpp"

namespace rankgap {

struct GroupMetrics {
  GroupId group = 0;
  std::size_t n = 0;
  std::size_t num_positive = 0;
  double prevalence = 0.0;
  std::optional<double> auroc;  // absent when the group lacks a class
  std::optional<double> auprc;  // absent when the group has no positives

  bool flagged() const { return !auroc || !auprc; }
  std::optional<double> metric(Metric m) const { return m == Metric::kAuroc ? auroc : auprc; }
};

using GroupMetricMap = std::map<GroupId, GroupMetrics>;

// Metrics on each group's restriction. Groups missing a class are flagged
// rather than rejected. Throws DataError if the set has no group tags.
GroupMetricMap per_group_metrics(const ScoreSet& s);

// Metric of the higher-prevalence group minus that of the lower-prevalence
// group. Requires exactly two groups with distinct prevalences and the metric
// defined on both.
double signed_gap(const GroupMetricMap& metrics, Metric metric);

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

// Pearson correlation of average ranks. Two-sided p-value by exhaustive
// permutation for n <= 8, otherwise from the t distribution with n-2 degrees
// of freedom. Throws UndefinedMetricError if either input is constant.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// Linear interpolation between order statistics (q in [0, 100]).
double percentile(std::vector<double> values, double q);

struct BandPoint {
  double lo = 0.0;
  double mean = 0.0;
  double hi = 0.0;
};

// values[step][seed] -> per-step percentile band. Requires >= 2 seeds per step.
std::vector<BandPoint> percentile_band(const std::vector<std::vector<double>>& values,
                                       double lo = 5.0, double hi = 95.0);

// One hyperparameter-sweep run: overall metrics on validation data, per-group
// metrics on test data.
struct RunRecord {
  std::string dataset;
  std::string run_id;
  std::string split_id;
  std::uint64_t seed = 0;
  double val_auroc = 0.0;
  double val_auprc = 0.0;
  GroupId group_a = 0;
  GroupId group_b = 1;
  double prevalence_a = 0.0;
  double prevalence_b = 0.0;
  double test_auroc_a = 0.0;
  double test_auroc_b = 0.0;
  double test_auprc_a = 0.0;
  double test_auprc_b = 0.0;
  double group_weight = 1.0;
  std::string hparams;
};

struct SplitCorrelation {
  std::string split_id;
  std::size_t runs = 0;
  SpearmanResult gap_vs_auprc;  // rho(AUROC gap, overall AUPRC)
  SpearmanResult gap_vs_auroc;  // rho(AUROC gap, overall AUROC)
  double difference = 0.0;      // gap_vs_auprc.rho - gap_vs_auroc.rho
};

struct SweepSummary {
  std::string dataset;
  GroupId high_group = 0;
  GroupId low_group = 0;
  double prevalence_ratio = 1.0;  // high / low, from mean stated prevalences
  std::vector<SplitCorrelation> splits;
  double mean_difference = 0.0;
  // 95% t-interval over split-level differences; needs >= 2 splits.
  std::optional<std::pair<double, double>> ci95;
};

// Signed test AUROC gap of one record given which group has higher prevalence.
double auroc_gap(const RunRecord& r, GroupId high_group);

// Records of one dataset. Splits appear in order of first occurrence.
// Throws DataError on mixed datasets, fewer than 3 runs in a split, or equal
// group prevalences; UndefinedMetricError (naming the column) when a
// correlation is undefined.
SweepSummary sweep_correlations(const std::vector<RunRecord>& records);

// Partitions by dataset (order of first occurrence) and summarizes each.
std::vector<SweepSummary> sweep_by_dataset(const std::vector<RunRecord>& records);

// Spearman correlation of (prevalence ratio, correlation difference) pairs
// across datasets. Requires >= 3 datasets.
SpearmanResult meta_correlation(const std::vector<std::pair<double, double>>& points);

}  // namespace rankgap
