#include "rankgap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "rankgap/errors.hpp"
#include "rankgap/metrics.hpp"

namespace rankgap {

GroupMetricMap per_group_metrics(const ScoreSet& s) {
  if (!s.has_groups()) throw DataError("score set carries no group tags");
  GroupMetricMap out;
  for (GroupId id : s.group_ids()) {
    const ScoreSet part = s.restrict_to_group(id);
    GroupMetrics g;
    g.group = id;
    g.n = part.size();
    g.num_positive = part.num_positive();
    g.prevalence = part.prevalence();
    if (part.num_positive() > 0 && part.num_negative() > 0) g.auroc = auroc(part);
    if (part.num_positive() > 0) g.auprc = auprc(part);
    out.emplace(id, g);
  }
  return out;
}

double signed_gap(const GroupMetricMap& metrics, Metric metric) {
  if (metrics.size() != 2) {
    throw DataError("signed gap needs exactly two groups, got " + std::to_string(metrics.size()));
  }
  const GroupMetrics& a = metrics.begin()->second;
  const GroupMetrics& b = std::next(metrics.begin())->second;
  if (a.prevalence == b.prevalence) {
    throw DataError("signed gap needs distinct group prevalences");
  }
  const GroupMetrics& high = a.prevalence > b.prevalence ? a : b;
  const GroupMetrics& low = a.prevalence > b.prevalence ? b : a;
  const auto hv = high.metric(metric);
  const auto lv = low.metric(metric);
  if (!hv || !lv) {
    throw UndefinedMetricError(std::string(to_string(metric)) + " is undefined for group " +
                               std::to_string(!hv ? high.group : low.group));
  }
  return *hv - *lv;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && values[order[end]] == values[order[begin]]) ++end;
    const double rank = 0.5 * static_cast<double>(begin + 1 + end);
    for (std::size_t k = begin; k < end; ++k) ranks[order[k]] = rank;
    begin = end;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double t_two_sided(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double permutation_two_sided(std::span<const double> rx, std::vector<double> ry, double rho) {
  std::sort(ry.begin(), ry.end());
  std::size_t hits = 0;
  std::size_t total = 0;
  do {
    ++total;
    if (std::abs(pearson(rx, ry)) >= std::abs(rho) - 1e-12) ++hits;
  } while (std::next_permutation(ry.begin(), ry.end()));
  // next_permutation skips duplicate arrangements of tied ranks; each distinct
  // arrangement stands for the same number of raw permutations.
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman inputs differ in length");
  if (x.size() < 3) throw DataError("spearman needs at least 3 pairs");
  if (is_constant(x) || is_constant(y)) {
    throw UndefinedMetricError("spearman correlation is undefined for a constant input");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  SpearmanResult r;
  r.rho = pearson(rx, ry);
  r.p_value = x.size() <= 8 ? permutation_two_sided(rx, ry, r.rho) : t_two_sided(r.rho, x.size());
  return r;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q / 100.0;
  const auto below = static_cast<std::size_t>(std::floor(h));
  const std::size_t above = std::min(below + 1, values.size() - 1);
  return values[below] + (h - static_cast<double>(below)) * (values[above] - values[below]);
}

std::vector<BandPoint> percentile_band(const std::vector<std::vector<double>>& values, double lo,
                                       double hi) {
  std::vector<BandPoint> band;
  band.reserve(values.size());
  for (std::size_t step = 0; step < values.size(); ++step) {
    const auto& v = values[step];
    if (v.size() < 2) {
      throw DataError("percentile band needs at least 2 seeds (step " + std::to_string(step) + ")");
    }
    BandPoint p;
    p.lo = percentile(v, lo);
    p.hi = percentile(v, hi);
    p.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    band.push_back(p);
  }
  return band;
}

double auroc_gap(const RunRecord& r, GroupId high_group) {
  return high_group == r.group_a ? r.test_auroc_a - r.test_auroc_b : r.test_auroc_b - r.test_auroc_a;
}

SweepSummary sweep_correlations(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DataError("sweep has no run records");
  SweepSummary summary;
  summary.dataset = records.front().dataset;
  double prev_a = 0.0;
  double prev_b = 0.0;
  for (const auto& r : records) {
    if (r.dataset != summary.dataset) {
      throw DataError("sweep_correlations expects one dataset, saw '" + summary.dataset +
                      "' and '" + r.dataset + "'");
    }
    if (r.group_a != records.front().group_a || r.group_b != records.front().group_b) {
      throw DataError("dataset '" + summary.dataset + "' mixes group ids across records");
    }
    prev_a += r.prevalence_a;
    prev_b += r.prevalence_b;
  }
  if (prev_a == prev_b) {
    throw DataError("dataset '" + summary.dataset + "' has equal group prevalences");
  }
  const auto& first = records.front();
  summary.high_group = prev_a > prev_b ? first.group_a : first.group_b;
  summary.low_group = prev_a > prev_b ? first.group_b : first.group_a;
  summary.prevalence_ratio = std::max(prev_a, prev_b) / std::min(prev_a, prev_b);

  std::vector<std::string> split_order;
  std::map<std::string, std::vector<const RunRecord*>> by_split;
  for (const auto& r : records) {
    auto [it, inserted] = by_split.try_emplace(r.split_id);
    if (inserted) split_order.push_back(r.split_id);
    it->second.push_back(&r);
  }

  std::vector<double> differences;
  for (const auto& split : split_order) {
    const auto& runs = by_split[split];
    if (runs.size() < 3) {
      throw DataError("split '" + split + "' of dataset '" + summary.dataset + "' has " +
                      std::to_string(runs.size()) + " runs; at least 3 are required");
    }
    std::vector<double> gap;
    std::vector<double> val_auprc;
    std::vector<double> val_auroc;
    for (const RunRecord* r : runs) {
      gap.push_back(auroc_gap(*r, summary.high_group));
      val_auprc.push_back(r->val_auprc);
      val_auroc.push_back(r->val_auroc);
    }
    const std::string where = " in split '" + split + "' of dataset '" + summary.dataset + "'";
    if (is_constant(gap)) {
      throw UndefinedMetricError("spearman undefined: AUROC gap (test_auroc_a - test_auroc_b) is constant" + where);
    }
    if (is_constant(val_auprc)) throw UndefinedMetricError("spearman undefined: column val_auprc is constant" + where);
    if (is_constant(val_auroc)) throw UndefinedMetricError("spearman undefined: column val_auroc is constant" + where);
    SplitCorrelation c;
    c.split_id = split;
    c.runs = runs.size();
    c.gap_vs_auprc = spearman(gap, val_auprc);
    c.gap_vs_auroc = spearman(gap, val_auroc);
    c.difference = c.gap_vs_auprc.rho - c.gap_vs_auroc.rho;
    differences.push_back(c.difference);
    summary.splits.push_back(c);
  }

  const double k = static_cast<double>(differences.size());
  summary.mean_difference = std::accumulate(differences.begin(), differences.end(), 0.0) / k;
  if (differences.size() >= 2) {
    double ss = 0.0;
    for (double d : differences) ss += (d - summary.mean_difference) * (d - summary.mean_difference);
    const double sd = std::sqrt(ss / (k - 1.0));
    boost::math::students_t dist(k - 1.0);
    const double half = boost::math::quantile(dist, 0.975) * sd / std::sqrt(k);
    summary.ci95 = std::pair{summary.mean_difference - half, summary.mean_difference + half};
  }
  return summary;
}

std::vector<SweepSummary> sweep_by_dataset(const std::vector<RunRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRecord>> by_dataset;
  for (const auto& r : records) {
    auto [it, inserted] = by_dataset.try_emplace(r.dataset);
    if (inserted) order.push_back(r.dataset);
    it->second.push_back(r);
  }
  std::vector<SweepSummary> out;
  for (const auto& name : order) out.push_back(sweep_correlations(by_dataset[name]));
  return out;
}

SpearmanResult meta_correlation(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    throw DataError("meta correlation needs at least 3 datasets, got " +
                    std::to_string(points.size()));
  }
  std::vector<double> ratio;
  std::vector<double> difference;
  for (const auto& [r, d] : points) {
    ratio.push_back(r);
    difference.push_back(d);
  }
  return spearman(ratio, difference);
}

}  // namespace rankgap
