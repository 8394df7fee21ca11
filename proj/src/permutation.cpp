#include "rankgap/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankgap/errors.hpp"

namespace rankgap {

// Bit b of a mask at position i stands for value i - gamma + b. Values outside
// [0, n) are marked used so they can never be chosen.
BandedPermutationSampler::BandedPermutationSampler(std::size_t n, std::size_t gamma)
    : n_(n), gamma_(gamma), width_(2 * gamma + 1) {
  if (n == 0) throw ConfigError("permutation size must be positive");
  if (gamma == 0) throw ConfigError("gamma must be at least 1");
  if (gamma > kMaxGamma) {
    throw ConfigError("gamma must be at most " + std::to_string(kMaxGamma) + ", got " +
                      std::to_string(gamma));
  }
  const std::size_t states = std::size_t{1} << width_;
  weights_.assign(n_ + 1, std::vector<double>(states, 0.0));
  std::fill(weights_[n_].begin(), weights_[n_].end(), 1.0);
  double log_scale = 0.0;
  for (std::size_t i = n_; i-- > 0;) {
    auto& layer = weights_[i];
    const auto& next = weights_[i + 1];
    double peak = 0.0;
    for (Mask mask = 0; mask < states; ++mask) {
      double total = 0.0;
      for (std::size_t bit = 0; bit < width_; ++bit) {
        const Mask to = advance(i, mask, bit);
        if (to != kInvalid) total += next[to];
      }
      layer[mask] = total;
      peak = std::max(peak, total);
    }
    if (peak > 0.0) {
      for (double& w : layer) w /= peak;
      log_scale += std::log(peak);
    }
  }
  log_count_ = std::log(weights_[0][initial_mask()]) + log_scale;
}

BandedPermutationSampler::Mask BandedPermutationSampler::initial_mask() const {
  Mask mask = 0;
  for (std::size_t bit = 0; bit < width_; ++bit) {
    const auto value = static_cast<long long>(bit) - static_cast<long long>(gamma_);
    if (value < 0 || value >= static_cast<long long>(n_)) mask |= Mask{1} << bit;
  }
  return mask;
}

BandedPermutationSampler::Mask BandedPermutationSampler::advance(std::size_t position, Mask mask,
                                                                 std::size_t bit) const {
  if (mask & (Mask{1} << bit)) return kInvalid;
  mask |= Mask{1} << bit;
  // The lowest window value leaves the window after this position.
  if (!(mask & Mask{1})) return kInvalid;
  mask >>= 1;
  const std::size_t entering = position + 1 + gamma_;
  if (entering >= n_) mask |= Mask{1} << (width_ - 1);
  return mask;
}

std::vector<std::size_t> BandedPermutationSampler::sample(Rng& rng) const {
  std::vector<std::size_t> perm(n_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> option_weight(width_);
  Mask mask = initial_mask();
  for (std::size_t i = 0; i < n_; ++i) {
    double total = 0.0;
    for (std::size_t bit = 0; bit < width_; ++bit) {
      const Mask to = advance(i, mask, bit);
      option_weight[bit] = to == kInvalid ? 0.0 : weights_[i + 1][to];
      total += option_weight[bit];
    }
    double u = unit(rng) * total;
    std::size_t chosen = width_;
    for (std::size_t bit = 0; bit < width_; ++bit) {
      if (option_weight[bit] <= 0.0) continue;
      chosen = bit;
      if (u < option_weight[bit]) break;
      u -= option_weight[bit];
    }
    perm[i] = i + chosen - gamma_;
    mask = advance(i, mask, chosen);
  }
  return perm;
}

}  // namespace rankgap
