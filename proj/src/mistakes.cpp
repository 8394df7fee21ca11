#include "rankgap/mistakes.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "rankgap/errors.hpp"
#include "rankgap/metrics.hpp"

namespace rankgap {

const char* to_string(Objective objective) {
  return objective == Objective::kAuroc ? "AUROC" : "AUPRC";
}

Objective parse_objective(const char* text) {
  std::string upper(text ? text : "");
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "AUROC") return Objective::kAuroc;
  if (upper == "AUPRC") return Objective::kAuprc;
  throw ConfigError("unknown objective '" + std::string(text ? text : "") +
                    "' (expected AUROC or AUPRC)");
}

namespace {

void require_current(const ScoreSet& s, const MistakeRecord& m) {
  const auto& order = s.ascending_order();
  const bool adjacent = m.low_index + 1 < order.size() && order[m.low_index] == m.low_sample &&
                        order[m.low_index + 1] == m.high_sample;
  if (!adjacent || s.score(m.low_sample) != m.low_score ||
      s.score(m.high_sample) != m.high_score || !s.positive(m.low_sample) ||
      s.positive(m.high_sample)) {
    throw DataError("stale mistake at ascending position " + std::to_string(m.low_index) +
                    ": pair is no longer an adjacent (positive, negative) pair");
  }
}

ScoreSet swap_scores(const ScoreSet& s, const MistakeRecord& m) {
  std::vector<double> scores(s.scores().begin(), s.scores().end());
  std::swap(scores[m.low_sample], scores[m.high_sample]);
  return s.with_scores(std::move(scores));
}

}  // namespace

std::vector<MistakeRecord> enumerate_mistakes(const ScoreSet& s) {
  if (s.num_positive() == 0 || s.num_negative() == 0) {
    throw UndefinedMetricError("mistakes are undefined for a single-class score set");
  }
  s.require_strict();
  const auto& order = s.ascending_order();
  const double base_auroc = auroc(s);
  const double base_auprc = auprc(s);
  std::vector<MistakeRecord> mistakes;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const std::size_t lo = order[k];
    const std::size_t hi = order[k + 1];
    if (!s.positive(lo) || s.positive(hi)) continue;
    MistakeRecord m;
    m.low_index = k;
    m.low_sample = lo;
    m.high_sample = hi;
    m.low_score = s.score(lo);
    m.high_score = s.score(hi);
    m.low_group = s.group(lo);
    m.high_group = s.group(hi);
    const ScoreSet fixed = swap_scores(s, m);
    m.delta_auroc = auroc(fixed) - base_auroc;
    m.delta_auprc = auprc(fixed) - base_auprc;
    mistakes.push_back(m);
  }
  return mistakes;
}

ScoreSet fix_mistake(const ScoreSet& s, const MistakeRecord& m) {
  s.require_strict();
  require_current(s, m);
  return swap_scores(s, m);
}

MetricDeltas mistake_deltas(const ScoreSet& s, const MistakeRecord& m) {
  const ScoreSet fixed = fix_mistake(s, m);
  return {auroc(fixed) - auroc(s), auprc(fixed) - auprc(s)};
}

MistakeRecord best_mistake(const std::vector<MistakeRecord>& mistakes, Objective objective,
                           Rng& rng) {
  if (mistakes.empty()) throw DataError("no mistakes to choose from");
  if (objective == Objective::kAuprc) {
    return *std::max_element(mistakes.begin(), mistakes.end(),
                             [](const MistakeRecord& a, const MistakeRecord& b) {
                               return a.high_score < b.high_score;
                             });
  }
  std::uniform_int_distribution<std::size_t> pick(0, mistakes.size() - 1);
  return mistakes[pick(rng)];
}

MistakeRecord best_mistake(const ScoreSet& s, Objective objective, Rng& rng) {
  return best_mistake(enumerate_mistakes(s), objective, rng);
}

}  // namespace rankgap
