#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "rankgap/errors.hpp"
#include "rankgap/permutation.hpp"
#include "rankgap/random.hpp"

namespace rankgap {
namespace {

std::vector<std::vector<std::size_t>> enumerate_banded(std::size_t n, std::size_t gamma) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const std::size_t d = p[i] > i ? p[i] - i : i - p[i];
      ok = d <= gamma;
    }
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

TEST(BandedPermutation, CountMatchesEnumeration) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t g = 1; g <= 3; ++g) {
      const BandedPermutationSampler sampler(n, g);
      const double expected = static_cast<double>(enumerate_banded(n, g).size());
      EXPECT_NEAR(std::exp(sampler.log_count()), expected, 1e-9 * expected) << n << "," << g;
    }
  }
}

TEST(BandedPermutation, GammaOneCountsAreFibonacci) {
  EXPECT_NEAR(std::exp(BandedPermutationSampler(10, 1).log_count()), 89.0, 1e-9);
  EXPECT_NEAR(std::exp(BandedPermutationSampler(20, 1).log_count()), 10946.0, 1e-6);
}

TEST(BandedPermutation, SamplesRespectBand) {
  Rng rng(3);
  const BandedPermutationSampler sampler(300, 3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto w = sampler.sample(rng);
    ASSERT_EQ(w.size(), 300u);
    std::set<std::size_t> seen(w.begin(), w.end());
    EXPECT_EQ(seen.size(), 300u);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t d = w[i] > i ? w[i] - i : i - w[i];
      EXPECT_LE(d, 3u);
    }
  }
}

// Chi-square goodness of fit against the uniform distribution over all
// admissible permutations.
TEST(BandedPermutation, UniformOverAdmissibleSet) {
  const std::size_t n = 6;
  const std::size_t gamma = 2;
  const auto all = enumerate_banded(n, gamma);
  const BandedPermutationSampler sampler(n, gamma);
  Rng rng(77);
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 200 * static_cast<int>(all.size());
  for (int i = 0; i < draws; ++i) ++counts[sampler.sample(rng)];
  EXPECT_EQ(counts.size(), all.size());
  const double expected = static_cast<double>(draws) / static_cast<double>(all.size());
  double chi2 = 0.0;
  for (const auto& p : all) {
    const double d = counts[p] - expected;
    chi2 += d * d / expected;
  }
  // df = |all| - 1; mean df, sd sqrt(2 df). Bound at mean + 6 sd.
  const double df = static_cast<double>(all.size() - 1);
  EXPECT_LT(chi2, df + 6.0 * std::sqrt(2.0 * df));
}

TEST(BandedPermutation, RejectsBadParameters) {
  EXPECT_THROW(BandedPermutationSampler(10, 0), ConfigError);
  EXPECT_THROW(BandedPermutationSampler(0, 2), ConfigError);
  EXPECT_THROW(BandedPermutationSampler(10, BandedPermutationSampler::kMaxGamma + 1), ConfigError);
}

TEST(BandedPermutation, GammaLargerThanSizeIsUnrestricted) {
  const BandedPermutationSampler sampler(4, 6);
  EXPECT_NEAR(std::exp(sampler.log_count()), 24.0, 1e-9);
}

}  // namespace
}  // namespace rankgap
