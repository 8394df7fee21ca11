#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankgap/analysis.hpp"
#include "rankgap/mistakes.hpp"
#include "rankgap/random.hpp"
#include "rankgap/score_set.hpp"

namespace rankgap {

// Metric-greedy procedures that simulate optimizing a model for one metric.
enum class Procedure {
  kRandomNoise,   // M1: best of K uniform perturbations of all scores
  kFixMistakes,   // M2: fix one atomic mistake per step
  kPermuteNearby  // M3: best of K displacement-bounded score permutations
};

const char* to_string(Procedure procedure);
// Accepts "M1"/"M2"/"M3" or "noise"/"fix_mistakes"/"permute".
Procedure parse_procedure(const std::string& text);

struct OptimizerConfig {
  Procedure procedure = Procedure::kFixMistakes;
  Objective objective = Objective::kAuprc;
  std::size_t steps = 50;
  // M1 draws this many noise vectors per step; M3 this many permutations.
  // The incumbent scores always compete as an extra candidate.
  std::size_t candidates_per_step = 20;
  double delta_max = 0.05;  // M1 noise half-width
  std::size_t gamma = 3;    // M3 maximum displacement
  std::uint64_t seed = 0;

  // Defaults per procedure: M1 100 candidates, M3 20 candidates and gamma 3.
  static OptimizerConfig defaults(Procedure procedure, Objective objective);
  void validate() const;
};

// M1 scores are clamped into [kNoiseFloor, 1 - kNoiseFloor].
inline constexpr double kNoiseFloor = 1e-9;

struct CandidateStep {
  ScoreSet scores;
  std::size_t candidate = 0;  // 0 means the incumbent was kept
  double objective_value = 0.0;
  std::size_t max_displacement = 0;  // M3 only
};

struct FixStep {
  ScoreSet scores;
  MistakeRecord mistake;
};

double objective_value(const ScoreSet& s, Objective objective);

CandidateStep step_random_noise(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng);
// nullopt when the set has no mistakes left (converged).
std::optional<FixStep> step_fix_mistake(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng);
CandidateStep step_permute_nearby(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng);

struct GroupPoint {
  std::optional<double> auroc;
  std::optional<double> auprc;
};

struct StepRecord {
  std::size_t step = 0;
  double auroc = 0.0;
  double auprc = 0.0;
  std::map<GroupId, GroupPoint> groups;
  // Identity of the applied change: "initial", "mistake:<pos>",
  // "noise:<k>" or "perm:<k>".
  std::string change;
  std::optional<MistakeRecord> mistake;  // M2 only
};

struct Trajectory {
  std::vector<StepRecord> steps;  // steps[0] is the unmodified dataset
  bool converged = false;         // M2 ran out of mistakes
  ScoreSet final_scores;
};

// Applies cfg.steps steps (fewer if M2 converges), recording overall and
// per-group metrics after each. Requires both classes in `s`.
Trajectory run_optimizer(const ScoreSet& s, const OptimizerConfig& cfg, Rng& rng);

}  // namespace rankgap
