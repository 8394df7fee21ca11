#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rankgap/random.hpp"

namespace rankgap {

// Uniform sampler over permutations w of {0, ..., n-1} with |w[i] - i| <= gamma.
//
// A transfer-matrix count runs over positions; the state is the set of
// already-used values inside the window [i - gamma, i + gamma]. Sampling walks
// forward choosing each value with probability proportional to the number of
// completions it leaves, which makes every admissible permutation equally
// likely. Memory is n * 2^(2 gamma + 1) doubles.
class BandedPermutationSampler {
 public:
  // Throws ConfigError for gamma == 0, gamma > kMaxGamma, or n == 0.
  BandedPermutationSampler(std::size_t n, std::size_t gamma);

  static constexpr std::size_t kMaxGamma = 8;

  std::size_t size() const noexcept { return n_; }
  std::size_t gamma() const noexcept { return gamma_; }

  // Natural log of the number of admissible permutations.
  double log_count() const noexcept { return log_count_; }

  std::vector<std::size_t> sample(Rng& rng) const;

 private:
  using Mask = std::uint32_t;

  Mask initial_mask() const;
  // State at position i+1 after taking window bit `bit` at position i;
  // kInvalid when the bit is used or the choice strands a value.
  Mask advance(std::size_t position, Mask mask, std::size_t bit) const;

  static constexpr Mask kInvalid = ~Mask{0};

  std::size_t n_;
  std::size_t gamma_;
  std::size_t width_;
  // weights_[i][mask]: completions from position i in state mask, scaled per layer.
  std::vector<std::vector<double>> weights_;
  double log_count_ = 0.0;
};

}  // namespace rankgap
