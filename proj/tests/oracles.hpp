#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// sorted sweeps so they can check them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "rankgap/score_set.hpp"

namespace rankgap::oracle {

// O(N_P * N_N) pairwise comparison, half credit for ties.
inline double pairwise_auroc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// For each positive, precision among all samples scoring at least as high.
// Precisions are accumulated exactly in 2^-100 fixed point (each lies in
// [1/N, 1], so N < 2^47 keeps every term an integer count of that unit).
inline double rank_by_rank_ap(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  __int128 total = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    ++positives;
    std::size_t tp = 0;
    std::size_t fired = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] >= s[i]) {
        ++fired;
        tp += y[j];
      }
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(fired);
    total += static_cast<__int128>(std::ldexp(precision, 100));
  }
  return std::ldexp(static_cast<double>(total), -100) / static_cast<double>(positives);
}

// Ascending positions k where the (k, k+1) pair is labelled (1, 0).
inline std::vector<std::size_t> scan_mistakes(const std::vector<double>& s,
                                              const std::vector<std::uint8_t>& y) {
  std::vector<std::size_t> idx(s.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    if (y[idx[k]] == 1 && y[idx[k + 1]] == 0) out.push_back(k);
  }
  return out;
}

struct RandomSet {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::vector<GroupId> groups;
};

// Distinct scores in (0,1) with at least one sample of each class.
inline RandomSet random_strict_set(std::mt19937_64& rng, std::size_t n, double prevalence,
                                   std::size_t num_groups = 0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution positive(prevalence);
  std::uniform_int_distribution<GroupId> group(0, num_groups == 0 ? 0 : static_cast<GroupId>(num_groups - 1));
  RandomSet r;
  std::set<double> seen;
  while (r.scores.size() < n) {
    const double s = unit(rng);
    if (s <= 0.0 || !seen.insert(s).second) continue;
    r.scores.push_back(s);
    r.labels.push_back(positive(rng) ? 1 : 0);
    if (num_groups > 0) r.groups.push_back(group(rng));
  }
  r.labels[0] = 1;
  r.labels[1] = 0;
  return r;
}

inline ScoreSet to_score_set(const RandomSet& r) {
  if (r.groups.empty()) return ScoreSet(r.scores, r.labels);
  return ScoreSet(r.scores, r.labels, r.groups);
}

// Scores listed in ascending order with the given labels: 0.1, 0.2, ...
inline ScoreSet ascending(const std::vector<std::uint8_t>& labels) {
  std::vector<double> s;
  for (std::size_t i = 0; i < labels.size(); ++i) s.push_back(0.1 * static_cast<double>(i + 1) / (1.0 + 0.1 * labels.size()));
  return ScoreSet(s, labels);
}

}  // namespace rankgap::oracle
