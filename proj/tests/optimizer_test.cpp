#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "rankgap/errors.hpp"
#include "rankgap/metrics.hpp"
#include "rankgap/optimizer.hpp"
#include "rankgap/random.hpp"
#include "rankgap/synthgen.hpp"

namespace rankgap {
namespace {

ScoreSet two_groups(std::uint64_t seed) {
  Rng rng(seed);
  return build_group_dataset({{{1, 200, 0.05, 0.85}, {2, 200, 0.01, 0.85}}, true}, rng);
}

TEST(OptimizerConfig, Defaults) {
  const auto m1 = OptimizerConfig::defaults(Procedure::kRandomNoise, Objective::kAuprc);
  EXPECT_EQ(m1.candidates_per_step, 100u);
  EXPECT_EQ(m1.steps, 50u);
  const auto m2 = OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuroc);
  EXPECT_EQ(m2.steps, 50u);
  const auto m3 = OptimizerConfig::defaults(Procedure::kPermuteNearby, Objective::kAuprc);
  EXPECT_EQ(m3.candidates_per_step, 20u);
  EXPECT_EQ(m3.gamma, 3u);
  EXPECT_EQ(m3.steps, 25u);
}

TEST(OptimizerConfig, ParseProcedure) {
  EXPECT_EQ(parse_procedure("M1"), Procedure::kRandomNoise);
  EXPECT_EQ(parse_procedure("fix_mistakes"), Procedure::kFixMistakes);
  EXPECT_EQ(parse_procedure("m3"), Procedure::kPermuteNearby);
  EXPECT_THROW(parse_procedure("anneal"), ConfigError);
}

TEST(OptimizerConfig, Validation) {
  auto cfg = OptimizerConfig::defaults(Procedure::kPermuteNearby, Objective::kAuprc);
  cfg.gamma = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = OptimizerConfig::defaults(Procedure::kRandomNoise, Objective::kAuprc);
  cfg.delta_max = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.delta_max = 0.1;
  cfg.candidates_per_step = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(RandomNoise, NeverLowersObjectiveAndStaysInRange) {
  Rng data(1);
  const ScoreSet s = sample_target_auroc({300, 0.1, 0.7}, data);
  auto cfg = OptimizerConfig::defaults(Procedure::kRandomNoise, Objective::kAuroc);
  cfg.delta_max = 0.2;
  Rng rng(2);
  double prev = auroc(s);
  ScoreSet cur = s;
  for (int i = 0; i < 10; ++i) {
    const auto step = step_random_noise(cur, cfg, rng);
    EXPECT_GE(step.objective_value, prev);
    for (double v : step.scores.scores()) {
      EXPECT_GE(v, kNoiseFloor);
      EXPECT_LE(v, 1.0 - kNoiseFloor);
    }
    prev = step.objective_value;
    cur = step.scores;
  }
}

TEST(RandomNoise, ZeroWidthKeepsIncumbent) {
  const ScoreSet s({0.2, 0.4, 0.6}, {0, 1, 0});
  auto cfg = OptimizerConfig::defaults(Procedure::kRandomNoise, Objective::kAuprc);
  cfg.delta_max = 0.0;
  Rng rng(0);
  const auto step = step_random_noise(s, cfg, rng);
  EXPECT_EQ(step.candidate, 0u);
}

TEST(FixMistakes, ConvergesOnPerfectRanking) {
  const ScoreSet s({0.1, 0.2, 0.3}, {0, 0, 1});
  Rng rng(0);
  const auto cfg = OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuprc);
  EXPECT_FALSE(step_fix_mistake(s, cfg, rng).has_value());
  const Trajectory t = run_optimizer(s, cfg, rng);
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].change, "initial");
}

TEST(FixMistakes, AurocRisesByOneUnitPerStep) {
  const ScoreSet s = two_groups(3);
  auto cfg = OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuroc);
  cfg.steps = 30;
  Rng rng(4);
  const Trajectory t = run_optimizer(s, cfg, rng);
  ASSERT_EQ(t.steps.size(), 31u);
  const double unit = 1.0 / (static_cast<double>(s.num_positive()) * s.num_negative());
  for (std::size_t i = 1; i < t.steps.size(); ++i) {
    EXPECT_NEAR(t.steps[i].auroc - t.steps[i - 1].auroc, unit, 1e-12);
    ASSERT_TRUE(t.steps[i].mistake.has_value());
    EXPECT_EQ(t.steps[i].change, "mistake:" + std::to_string(t.steps[i].mistake->low_index + 1));
  }
}

TEST(FixMistakes, AuprcPicksHighestPair) {
  const ScoreSet s = two_groups(5);
  auto cfg = OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuprc);
  Rng rng(6);
  const auto mistakes = enumerate_mistakes(s);
  const auto step = step_fix_mistake(s, cfg, rng);
  ASSERT_TRUE(step.has_value());
  EXPECT_EQ(step->mistake.low_index, mistakes.back().low_index);
  EXPECT_NEAR(auprc(step->scores) - auprc(s), mistakes.back().delta_auprc, 1e-12);
}

TEST(PermuteNearby, KeepsScoreMultisetAndBand) {
  const ScoreSet s = two_groups(7);
  auto cfg = OptimizerConfig::defaults(Procedure::kPermuteNearby, Objective::kAuprc);
  Rng rng(8);
  const auto step = step_permute_nearby(s, cfg, rng);
  std::vector<double> a(s.scores().begin(), s.scores().end());
  std::vector<double> b(step.scores.scores().begin(), step.scores.scores().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_LE(step.max_displacement, 3u);
  EXPECT_GE(step.objective_value, auprc(s));
}

TEST(RunOptimizer, RecordsGroupsAndIsDeterministic) {
  const ScoreSet s = two_groups(9);
  const auto cfg = OptimizerConfig::defaults(Procedure::kPermuteNearby, Objective::kAuprc);
  Rng a(10);
  Rng b(10);
  const Trajectory x = run_optimizer(s, cfg, a);
  const Trajectory y = run_optimizer(s, cfg, b);
  ASSERT_EQ(x.steps.size(), 26u);
  for (std::size_t i = 0; i < x.steps.size(); ++i) {
    EXPECT_EQ(x.steps[i].auprc, y.steps[i].auprc);
    EXPECT_EQ(x.steps[i].change, y.steps[i].change);
    EXPECT_EQ(x.steps[i].groups.size(), 2u);
    if (i > 0) {
      EXPECT_GE(x.steps[i].auprc, x.steps[i - 1].auprc);
    }
  }
}

TEST(RunOptimizer, ZeroStepsRecordsOnlyInitialState) {
  const ScoreSet s = two_groups(11);
  auto cfg = OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuprc);
  cfg.steps = 0;
  Rng rng(0);
  const Trajectory t = run_optimizer(s, cfg, rng);
  EXPECT_EQ(t.steps.size(), 1u);
  EXPECT_FALSE(t.converged);
}

TEST(RunOptimizer, SingleClassIsUndefined) {
  const ScoreSet s({0.1, 0.2}, {1, 1});
  Rng rng(0);
  EXPECT_THROW(run_optimizer(s, OptimizerConfig::defaults(Procedure::kFixMistakes, Objective::kAuprc), rng),
               UndefinedMetricError);
}

}  // namespace
}  // namespace rankgap
