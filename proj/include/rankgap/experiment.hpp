#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankgap/analysis.hpp"
#include "rankgap/optimizer.hpp"
#include "rankgap/synthgen.hpp"

namespace rankgap {

// Experiment configuration: an INI-style key-value document with sections
// [synth] or [groups], [optimizer], [seeds] and [output]. See
// docs/config.md for the schema.
struct ExperimentConfig {
  std::optional<SynthConfig> synth;
  std::optional<GroupSpec> groups;
  std::optional<OptimizerConfig> optimizer;
  // M1 noise widths; one experiment arm each. Holds optimizer->delta_max
  // when a single value is given.
  std::vector<double> delta_grid;
  std::vector<std::uint64_t> seeds;
  std::string scores_path;      // may contain {seed}
  std::string trajectory_path;  // may contain {arm}
  std::string band_path;        // may contain {arm}
};

// Throws ConfigError listing every schema violation found.
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& source);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Replaces {seed} and {arm} placeholders.
std::string expand_path(const std::string& pattern, std::optional<std::uint64_t> seed,
                        const std::string& arm);

// The configured dataset drawn from `rng`.
ScoreSet make_dataset(const ExperimentConfig& cfg, Rng& rng);

struct SynthResult {
  std::uint64_t seed = 0;
  ScoreSet scores;
};

// One dataset per configured seed, each from a generator seeded with it.
std::vector<SynthResult> run_synth(const ExperimentConfig& cfg);

struct SeedRun {
  std::uint64_t seed = 0;
  Trajectory trajectory;
};

struct ArmResult {
  std::string label;  // empty unless M1 sweeps several delta values
  OptimizerConfig optimizer;
  std::vector<SeedRun> runs;  // in configured seed order
};

// Builds the dataset and runs the optimizer for every (arm, seed). Seeds are
// distributed over `jobs` worker threads; results do not depend on `jobs`.
std::vector<ArmResult> run_optimize(const ExperimentConfig& cfg, unsigned jobs);

// Long format: seed,step,scope,metric,value with scope "overall" or
// "group:<id>". Undefined per-group metrics are written as NA.
void write_trajectory_csv(const std::vector<SeedRun>& runs, std::ostream& out);

// step,scope,metric,p05,mean,p95 across seeds. Runs that stopped early
// (converged) hold their final value. Requires >= 2 seeds.
void write_band_csv(const std::vector<SeedRun>& runs, std::ostream& out);

}  // namespace rankgap
