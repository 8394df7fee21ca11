#include "rankgap/optimizer.hpp"

#include <algorithm>
#include <cctype>

#include "rankgap/errors.hpp"
#include "rankgap/metrics.hpp"
#include "rankgap/permutation.hpp"

namespace rankgap {

const char* to_string(Procedure procedure) {
  switch (procedure) {
    case Procedure::kRandomNoise: return "M1";
    case Procedure::kFixMistakes: return "M2";
    case Procedure::kPermuteNearby: return "M3";
  }
  return "?";
}

Procedure parse_procedure(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "m1" || lower == "noise") return Procedure::kRandomNoise;
  if (lower == "m2" || lower == "fix_mistakes") return Procedure::kFixMistakes;
  if (lower == "m3" || lower == "permute") return Procedure::kPermuteNearby;
  throw ConfigError("unknown procedure '" + text + "' (expected M1, M2 or M3)");
}

OptimizerConfig OptimizerConfig::defaults(Procedure procedure, Objective objective) {
  OptimizerConfig cfg;
  cfg.procedure = procedure;
  cfg.objective = objective;
  switch (procedure) {
    case Procedure::kRandomNoise:
      cfg.steps = 50;
      cfg.candidates_per_step = 100;
      break;
    case Procedure::kFixMistakes:
      cfg.steps = 50;
      break;
    case Procedure::kPermuteNearby:
      cfg.steps = 25;
      cfg.candidates_per_step = 20;
      cfg.gamma = 3;
      break;
  }
  return cfg;
}

void OptimizerConfig::validate() const {
  if (procedure != Procedure::kFixMistakes && candidates_per_step == 0) {
    throw ConfigError("optimizer.candidates_per_step must be positive");
  }
  if (procedure == Procedure::kRandomNoise && !(delta_max >= 0.0)) {
    throw ConfigError("optimizer.delta_max must be non-negative");
  }
  if (procedure == Procedure::kPermuteNearby) {
    if (gamma < 1) throw ConfigError("optimizer.gamma must be at least 1");
    if (gamma > BandedPermutationSampler::kMaxGamma) {
      throw ConfigError("optimizer.gamma must be at most " +
                        std::to_string(BandedPermutationSampler::kMaxGamma));
    }
  }
}

double objective_value(const ScoreSet& s, Objective objective) {
  return objective == Objective::kAuroc ? auroc(s) : auprc(s);
}

CandidateStep step_random_noise(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng) {
  CandidateStep best{s, 0, objective_value(s, cfg.objective), 0};
  std::uniform_real_distribution<double> noise(-cfg.delta_max, cfg.delta_max);
  const auto base = s.scores();
  std::vector<double> scores(base.size());
  for (std::size_t k = 1; k <= cfg.candidates_per_step; ++k) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      scores[i] = std::clamp(base[i] + noise(rng), kNoiseFloor, 1.0 - kNoiseFloor);
    }
    ScoreSet candidate = s.with_scores(scores);
    const double value = objective_value(candidate, cfg.objective);
    if (value > best.objective_value) best = {std::move(candidate), k, value, 0};
  }
  return best;
}

std::optional<FixStep> step_fix_mistake(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng) {
  const auto mistakes = enumerate_mistakes(s);
  if (mistakes.empty()) return std::nullopt;
  const MistakeRecord chosen = best_mistake(mistakes, cfg.objective, rng);
  return FixStep{fix_mistake(s, chosen), chosen};
}

namespace {

CandidateStep permute_with(const ScoreSet& s, const OptimizerConfig& cfg,
                           const BandedPermutationSampler& sampler, Rng& rng) {
  CandidateStep best{s, 0, objective_value(s, cfg.objective), 0};
  const auto& order = s.ascending_order();
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = s.score(order[i]);
  std::vector<double> scores(order.size());
  for (std::size_t k = 1; k <= cfg.candidates_per_step; ++k) {
    const std::vector<std::size_t> perm = sampler.sample(rng);
    std::size_t displacement = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      scores[order[i]] = sorted[perm[i]];
      displacement = std::max(displacement, perm[i] > i ? perm[i] - i : i - perm[i]);
    }
    ScoreSet candidate = s.with_scores(scores);
    const double value = objective_value(candidate, cfg.objective);
    if (value > best.objective_value) best = {std::move(candidate), k, value, displacement};
  }
  return best;
}

StepRecord record_step(std::size_t step, const ScoreSet& s, std::string change) {
  StepRecord r;
  r.step = step;
  r.auroc = auroc(s);
  r.auprc = auprc(s);
  if (s.has_groups()) {
    for (const auto& [id, g] : per_group_metrics(s)) r.groups[id] = GroupPoint{g.auroc, g.auprc};
  }
  r.change = std::move(change);
  return r;
}

}  // namespace

CandidateStep step_permute_nearby(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng) {
  cfg.validate();
  const BandedPermutationSampler sampler(s.size(), cfg.gamma);
  return permute_with(s, cfg, sampler, rng);
}

Trajectory run_optimizer(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng) {
  cfg.validate();
  Trajectory t{{}, false, s};
  t.steps.push_back(record_step(0, s, "initial"));
  std::optional<BandedPermutationSampler> sampler;
  if (cfg.procedure == Procedure::kPermuteNearby) sampler.emplace(s.size(), cfg.gamma);

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    switch (cfg.procedure) {
      case Procedure::kRandomNoise: {
        CandidateStep next = step_random_noise(t.final_scores, cfg, rng);
        t.final_scores = std::move(next.scores);
        t.steps.push_back(record_step(step, t.final_scores, "noise:" + std::to_string(next.candidate)));
        break;
      }
      case Procedure::kFixMistakes: {
        auto next = step_fix_mistake(t.final_scores, cfg, rng);
        if (!next) {
          t.converged = true;
          return t;
        }
        t.final_scores = std::move(next->scores);
        StepRecord r = record_step(step, t.final_scores,
                                   "mistake:" + std::to_string(next->mistake.low_index + 1));
        r.mistake = next->mistake;
        t.steps.push_back(std::move(r));
        break;
      }
      case Procedure::kPermuteNearby: {
        CandidateStep next = permute_with(t.final_scores, cfg, *sampler, rng);
        t.final_scores = std::move(next.scores);
        t.steps.push_back(record_step(step, t.final_scores, "perm:" + std::to_string(next.candidate)));
        break;
      }
    }
  }
  if (cfg.procedure == Procedure::kFixMistakes && enumerate_mistakes(t.final_scores).empty()) {
    t.converged = true;
  }
  return t;
}

}  // namespace rankgap
