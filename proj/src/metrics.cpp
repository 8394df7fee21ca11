#include "rankgap/metrics.hpp"

#include <cmath>
#include <cstdint>

#include "exact_sum.hpp"
#include "rankgap/errors.hpp"

namespace rankgap {
namespace {

void require_both_classes(const ScoreSet& s, const char* metric) {
  if (s.num_positive() == 0 || s.num_negative() == 0) {
    throw UndefinedMetricError(std::string(metric) + " is undefined: score set has " +
                               std::to_string(s.num_positive()) + " positives and " +
                               std::to_string(s.num_negative()) + " negatives");
  }
}

void require_positive(const ScoreSet& s, const char* metric) {
  if (s.num_positive() == 0) {
    throw UndefinedMetricError(std::string(metric) + " is undefined: score set has no positives");
  }
}

ThresholdStats finish_stats(const ScoreSet& s, double threshold, std::size_t tp, std::size_t fp) {
  ThresholdStats t;
  t.threshold = threshold;
  t.tp = tp;
  t.fp = fp;
  t.fn = s.num_positive() - tp;
  t.tn = s.num_negative() - fp;
  if (s.num_positive() > 0) t.tpr = static_cast<double>(tp) / static_cast<double>(s.num_positive());
  if (s.num_negative() > 0) t.fpr = static_cast<double>(fp) / static_cast<double>(s.num_negative());
  if (tp + fp > 0) t.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  t.firing_rate = static_cast<double>(tp + fp) / static_cast<double>(s.size());
  return t;
}

// Walks the descending order one tie block at a time, calling
// fn(block_begin, block_end, tp, fp) with counts that include the block.
template <typename Fn>
void for_each_descending_block(const ScoreSet& s, Fn&& fn) {
  const auto& order = s.ascending_order();
  const auto scores = s.scores();
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t end = order.size();
  while (end > 0) {
    std::size_t begin = end - 1;
    while (begin > 0 && scores[order[begin - 1]] == scores[order[end - 1]]) --begin;
    for (std::size_t k = begin; k < end; ++k) {
      if (s.positive(order[k])) ++tp; else ++fp;
    }
    fn(begin, end, tp, fp);
    end = begin;
  }
}

}  // namespace

ThresholdStats threshold_stats(const ScoreSet& s, double threshold, bool inclusive) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  const auto scores = s.scores();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool fires = inclusive ? scores[i] >= threshold : scores[i] > threshold;
    if (!fires) continue;
    if (s.positive(i)) ++tp; else ++fp;
  }
  return finish_stats(s, threshold, tp, fp);
}

double auroc(const ScoreSet& s) {
  require_both_classes(s, "AUROC");
  const auto& order = s.ascending_order();
  const auto scores = s.scores();
  // Twice the Mann-Whitney U statistic, kept as an exact integer.
  std::uint64_t twice_u = 0;
  std::uint64_t neg_below = 0;
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && scores[order[end]] == scores[order[begin]]) ++end;
    std::uint64_t pos_block = 0;
    std::uint64_t neg_block = 0;
    for (std::size_t k = begin; k < end; ++k) {
      if (s.positive(order[k])) ++pos_block; else ++neg_block;
    }
    twice_u += pos_block * (2 * neg_below + neg_block);
    neg_below += neg_block;
    begin = end;
  }
  const double pairs = static_cast<double>(s.num_positive()) * static_cast<double>(s.num_negative());
  return static_cast<double>(twice_u) / (2.0 * pairs);
}

double auprc(const ScoreSet& s) {
  require_positive(s, "AUPRC");
  detail::ExactSum sum;
  const auto& order = s.ascending_order();
  for_each_descending_block(s, [&](std::size_t begin, std::size_t end, std::size_t tp, std::size_t fp) {
    std::size_t pos_block = 0;
    for (std::size_t k = begin; k < end; ++k) pos_block += s.positive(order[k]) ? 1 : 0;
    if (pos_block == 0) return;
    sum.add(static_cast<double>(pos_block) * static_cast<double>(tp) / static_cast<double>(tp + fp));
  });
  return sum.value() / static_cast<double>(s.num_positive());
}

double auroc_reparam(const ScoreSet& s) {
  require_both_classes(s, "AUROC");
  s.require_strict();
  const auto& order = s.ascending_order();
  const double nn = static_cast<double>(s.num_negative());
  std::size_t neg_above = s.num_negative();
  double fpr_sum = 0.0;
  for (std::size_t idx : order) {
    if (s.positive(idx)) {
      fpr_sum += static_cast<double>(neg_above) / nn;
    } else {
      --neg_above;
    }
  }
  return 1.0 - fpr_sum / static_cast<double>(s.num_positive());
}

AuprcForms auprc_reparam(const ScoreSet& s) {
  require_positive(s, "AUPRC");
  s.require_strict();
  const auto& order = s.ascending_order();
  const double n = static_cast<double>(s.size());
  const double nn = static_cast<double>(s.num_negative());
  double precision_sum = 0.0;
  double ratio_sum = 0.0;
  for_each_descending_block(s, [&](std::size_t begin, std::size_t, std::size_t tp, std::size_t fp) {
    if (!s.positive(order[begin])) return;
    precision_sum += static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (s.num_negative() > 0) {
      const double fpr = static_cast<double>(fp) / nn;
      const double firing_rate = static_cast<double>(tp + fp) / n;
      ratio_sum += fpr / firing_rate;
    }
  });
  const double np = static_cast<double>(s.num_positive());
  AuprcForms forms;
  forms.mean_precision = precision_sum / np;
  forms.bayes_form = 1.0 - (nn / n) * (ratio_sum / np);
  const double reference = auprc(s);
  forms.precision_residual = std::abs(forms.mean_precision - reference);
  forms.bayes_residual = std::abs(forms.bayes_form - reference);
  return forms;
}

namespace {

Curve sweep_curve(const ScoreSet& s, bool inclusive) {
  Curve curve;
  curve.push_back(finish_stats(s, 0.0, s.num_positive(), s.num_negative()));
  const auto& order = s.ascending_order();
  const auto scores = s.scores();
  // Ascending sweep: `below_*` counts samples strictly below the current block.
  std::size_t pos_below = 0;
  std::size_t neg_below = 0;
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && scores[order[end]] == scores[order[begin]]) ++end;
    std::size_t pos_block = 0;
    std::size_t neg_block = 0;
    for (std::size_t k = begin; k < end; ++k) {
      if (s.positive(order[k])) ++pos_block; else ++neg_block;
    }
    std::size_t tp = s.num_positive() - pos_below;
    std::size_t fp = s.num_negative() - neg_below;
    if (!inclusive) {
      tp -= pos_block;
      fp -= neg_block;
    }
    curve.push_back(finish_stats(s, scores[order[begin]], tp, fp));
    pos_below += pos_block;
    neg_below += neg_block;
    begin = end;
  }
  curve.push_back(finish_stats(s, 1.0, 0, 0));
  return curve;
}

}  // namespace

Curve roc_curve(const ScoreSet& s) {
  require_both_classes(s, "ROC curve");
  return sweep_curve(s, false);
}

Curve pr_curve(const ScoreSet& s) {
  require_positive(s, "PR curve");
  return sweep_curve(s, true);
}

}  // namespace rankgap
