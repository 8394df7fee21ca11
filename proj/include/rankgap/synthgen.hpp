#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rankgap/random.hpp"
#include "rankgap/score_set.hpp"

namespace rankgap {

// Generated scores live on this grid so that they serialize exactly at nine
// decimal digits.
inline constexpr double kScoreResolution = 1e-9;

struct SynthConfig {
  std::size_t n_total = 0;
  double prevalence = 0.0;
  double target_auroc = 0.0;
  bool rescale_to_prevalence = false;
  std::uint64_t seed = 0;

  // round(n_total * prevalence)
  std::size_t num_positive() const;
  // Throws ConfigError naming the first violated constraint.
  void validate() const;
};

struct GroupConfig {
  GroupId id = 0;
  std::size_t n = 0;
  double prevalence = 0.0;
  double target_auroc = 0.0;
};

struct GroupSpec {
  std::vector<GroupConfig> groups;
  // Rescales each group's scores to that group's prevalence.
  bool rescale_to_prevalence = false;

  void validate() const;
};

// Scores whose expected AUROC equals cfg.target_auroc.
//
// Positive scores are uniform on (0,1). Sorting them yields N_P + 1 windows;
// window i has i positives below it and receives probability
// Binomial(N_P, 1 - A).pmf(i), so a negative drawn from it sits above a
// fraction of positives with expectation 1 - A. Each negative picks a window
// from these weights and is uniform inside it. With rescale_to_prevalence the
// scores are then rescaled to mean cfg.prevalence. Results are snapped to the
// kScoreResolution grid; a draw that collides on the grid is redrawn.
// The generator state is taken from `rng`; cfg.seed is not consulted.
ScoreSet sample_target_auroc(const SynthConfig& cfg, Rng& rng);

struct RescaleResult {
  ScoreSet scores;
  double factor = 1.0;
};

// Moves the mean score to `target` with a monotone linear map: s -> c*s when
// the target is below the current mean, otherwise 1-s -> c*(1-s). Throws
// ConfigError if target is outside (0,1), and DataError if the map would
// leave (0,1) or merge distinct scores in double precision.
RescaleResult rescale_mean_to(const ScoreSet& s, double target);
// rescale_mean_to(s, s.prevalence())
RescaleResult rescale_mean_to_prevalence(const ScoreSet& s);

// Score distribution for calibrated sampling.
struct ScoreDistribution {
  enum class Kind { kConstant, kUniform, kBeta };
  Kind kind = Kind::kUniform;
  // kConstant: a = value. kUniform: [a, b]. kBeta: shape parameters (a, b).
  double a = 0.0;
  double b = 1.0;

  static ScoreDistribution constant(double value) { return {Kind::kConstant, value, value}; }
  static ScoreDistribution uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
  static ScoreDistribution beta(double alpha, double beta) { return {Kind::kBeta, alpha, beta}; }
  // "constant:0.3", "uniform:0:1", "beta:2:5"
  static ScoreDistribution parse(const std::string& text);

  void validate() const;
};

// Scores from `dist`, labels Bernoulli(score): calibrated by construction.
ScoreSet sample_calibrated(std::size_t n, const ScoreDistribution& dist, Rng& rng);

// Per-group sample_target_auroc, concatenated with group tags. Scores are
// distinct across the whole dataset.
ScoreSet build_group_dataset(const GroupSpec& spec, Rng& rng);

}  // namespace rankgap
