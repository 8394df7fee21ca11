#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rankgap/random.hpp"
#include "rankgap/score_set.hpp"

namespace rankgap {

// Metric selector; also the objective of an optimization run.
enum class Metric { kAuroc, kAuprc };
using Objective = Metric;

const char* to_string(Objective objective);
// Accepts "AUROC"/"AUPRC" case-insensitively; throws ConfigError otherwise.
Objective parse_objective(const char* text);

// An incorrectly ranked adjacent pair: in ascending score order, a positive at
// position `low_index` immediately followed by a negative.
struct MistakeRecord {
  std::size_t low_index = 0;    // 0-based ascending position of the positive
  std::size_t low_sample = 0;   // sample index of the positive
  std::size_t high_sample = 0;  // sample index of the negative
  double low_score = 0.0;
  double high_score = 0.0;
  std::optional<GroupId> low_group;
  std::optional<GroupId> high_group;
  double delta_auroc = 0.0;
  double delta_auprc = 0.0;
};

struct MetricDeltas {
  double auroc = 0.0;
  double auprc = 0.0;
};

// All mistakes of a strict score set with both classes, ascending by
// low_index, each with exact deltas. Throws TieError on tied scores.
std::vector<MistakeRecord> enumerate_mistakes(const ScoreSet& s);

// Exchanges the scores of the pair's two samples. Labels and groups stay with
// their samples. Throws DataError if `m` is not a current mistake of `s`.
ScoreSet fix_mistake(const ScoreSet& s, const MistakeRecord& m);

// metric(fix_mistake(s, m)) - metric(s) for both metrics.
MetricDeltas mistake_deltas(const ScoreSet& s, const MistakeRecord& m);

// AUPRC: the mistake with the highest scores. This is usually, but not always,
// the largest AUPRC gain.
// AUROC: a uniformly random mistake, since every AUROC gain is equal.
// Throws DataError if there are no mistakes.
MistakeRecord best_mistake(const ScoreSet& s, Objective objective, Rng& rng);
// Same, choosing from an already enumerated list.
MistakeRecord best_mistake(const std::vector<MistakeRecord>& mistakes, Objective objective,
                           Rng& rng);

}  // namespace rankgap
