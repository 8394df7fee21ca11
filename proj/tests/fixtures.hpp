#pragma once

// Shared test fixtures: hand-worked Spearman cases and generated sweep records.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rankgap/analysis.hpp"

namespace rankgap::fixture {

struct SpearmanCase {
  std::vector<double> x;
  std::vector<double> y;
  double rho;
};

// Untied cases use rho = 1 - 6 D / (n (n^2 - 1)) with D the summed squared rank
// differences; tied cases use Pearson on average ranks, sxy / sqrt(sxx syy).
inline std::vector<SpearmanCase> spearman_cases() {
  auto rd = [](double d, double n) { return 1.0 - 6.0 * d / (n * (n * n - 1.0)); };
  return {
      {{1, 2, 3, 4}, {1, 3, 2, 4}, rd(2, 4)},  // 0.8
      {{1, 2, 3}, {3, 2, 1}, rd(8, 3)},
      {{1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}, rd(4, 5)},
      {{1, 2, 3, 4, 5}, {5, 3, 1, 2, 4}, rd(26, 5)},
      {{1, 2, 3, 4}, {2, 4, 3, 1}, rd(14, 4)},
      {{1, 2, 3, 4, 5, 6, 7}, {1, 4, 3, 2, 7, 6, 5}, rd(16, 7)},
      {{1, 2, 3, 4, 5, 6}, {6, 2, 5, 3, 1, 4}, rd(50, 6)},
      {{1, 2, 3, 4, 5, 6, 7, 8}, {1, 6, 8, 2, 7, 5, 4, 3}, rd(84, 8)},
      {{1, 2, 3, 4, 5, 6}, {5, 4, 6, 2, 3, 1}, rd(62, 6)},
      {{1, 2, 3, 4, 5}, {1, 5, 4, 2, 3}, rd(18, 5)},
      {{1, 2, 3, 4, 5}, {4, 3, 2, 5, 1}, rd(28, 5)},
      {{1, 2, 3, 4, 5, 6, 7}, {5, 4, 7, 2, 6, 1, 3}, rd(82, 7)},
      {{1, 2, 3, 4, 5, 6, 7}, {6, 7, 2, 3, 4, 1, 5}, rd(82, 7)},
      {{1, 2, 3, 4, 5, 6, 7, 8}, {5, 3, 1, 6, 4, 7, 2, 8}, rd(52, 8)},
      {{1, 2, 3, 4, 5}, {1, 4, 5, 3, 2}, rd(18, 5)},
      {{1, 2, 3, 4, 5, 6}, {4, 1, 5, 3, 6, 2}, rd(32, 6)},
      {{1, 2, 2, 3}, {1, 2, 3, 4}, 4.5 / std::sqrt(4.5 * 5.0)},
      {{1, 1, 2, 2, 3}, {3, 1, 2, 2, 5}, 5.0 / std::sqrt(9.0 * 9.5)},
      {{4, 1, 3, 3, 2, 5}, {1, 1, 2, 3, 3, 4}, 6.75 / std::sqrt(17.0 * 16.5)},
      {{0.5, 0.1, 0.9, 0.3}, {10, 20, 30, 20}, 1.5 / std::sqrt(5.0 * 4.5)},
  };
}

struct SweepShape {
  std::string dataset = "synthetic";
  std::size_t splits = 20;
  std::size_t runs = 50;
  double prevalence_high = 0.10;
  double prevalence_low = 0.02;
  // Pearson correlation of the latent normals behind gap and val_auprc.
  double coupling = 0.0;
  // Puts the high-prevalence group in column b instead of a.
  bool high_in_b = false;
};

// Run records whose AUROC gap and val_auprc are bivariate normal with the given
// coupling; val_auroc is independent of both. For Pearson r the population
// Spearman rho is (6/pi) asin(r/2).
inline std::vector<RunRecord> planted_sweep(const SweepShape& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<RunRecord> out;
  const double r = shape.coupling;
  for (std::size_t split = 0; split < shape.splits; ++split) {
    for (std::size_t run = 0; run < shape.runs; ++run) {
      const double latent = z(rng);
      const double gap = 0.02 * (r * latent + std::sqrt(1.0 - r * r) * z(rng));
      RunRecord rec;
      rec.dataset = shape.dataset;
      rec.run_id = "r" + std::to_string(run);
      rec.split_id = "s" + std::to_string(split);
      rec.seed = split;
      rec.val_auprc = 0.40 + 0.03 * latent;
      rec.val_auroc = 0.80 + 0.01 * z(rng);
      rec.group_a = 0;
      rec.group_b = 1;
      rec.prevalence_a = shape.high_in_b ? shape.prevalence_low : shape.prevalence_high;
      rec.prevalence_b = shape.high_in_b ? shape.prevalence_high : shape.prevalence_low;
      const double base = 0.78 + 0.01 * z(rng);
      rec.test_auroc_a = shape.high_in_b ? base : base + gap;
      rec.test_auroc_b = shape.high_in_b ? base + gap : base;
      rec.test_auprc_a = 0.3;
      rec.test_auprc_b = 0.1;
      rec.hparams = "depth=" + std::to_string(run % 5);
      out.push_back(rec);
    }
  }
  return out;
}

inline double spearman_of_pearson(double r) { return 6.0 / std::numbers::pi * std::asin(r / 2.0); }

}  // namespace rankgap::fixture
