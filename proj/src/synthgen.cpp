#include "rankgap/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rankgap/errors.hpp"

namespace rankgap {
namespace {

constexpr std::int64_t kGridTicks = 1'000'000'000;  // 1 / kScoreResolution

std::string describe(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

void check_group_params(const std::string& who, const char* n_key, std::size_t n, double prevalence,
                        double target_auroc) {
  std::vector<std::string> problems;
  if (n == 0) problems.push_back(std::string(n_key) + " must be positive");
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    problems.push_back("prevalence must lie in (0,1), got " + describe(prevalence));
  }
  if (!(target_auroc >= 0.5 && target_auroc <= 1.0)) {
    problems.push_back("target_auroc must lie in [0.5,1], got " + describe(target_auroc));
  }
  if (problems.empty()) {
    const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * prevalence));
    if (n_pos < 1) problems.push_back(std::string(n_key) + " * prevalence rounds to zero positives");
    if (n_pos >= n) problems.push_back(std::string(n_key) + " * prevalence leaves no negatives");
  }
  if (!problems.empty()) {
    std::string what = who + ": " + problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) what += "; " + problems[i];
    throw ConfigError(what);
  }
  if (n >= static_cast<std::size_t>(kGridTicks / 1000)) {
    throw ConfigError(who + ": n is too large for the score grid");
  }
}

std::vector<double> binomial_pmf(std::size_t trials, double p) {
  std::vector<double> pmf(trials + 1, 0.0);
  if (p <= 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double n = static_cast<double>(trials);
  for (std::size_t i = 0; i <= trials; ++i) {
    const double k = static_cast<double>(i);
    const double log_pmf = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) +
                           k * std::log(p) + (n - k) * std::log1p(-p);
    pmf[i] = std::exp(log_pmf);
  }
  return pmf;
}

// Uniform grid tick strictly inside (lo, hi).
std::int64_t draw_tick(std::int64_t lo, std::int64_t hi, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> dist(lo + 1, hi - 1);
  return dist(rng);
}

struct Sample {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

Sample sample_group(std::size_t n_pos, std::size_t n_neg, double target_auroc, Rng& rng) {
  std::unordered_set<std::int64_t> taken;
  std::vector<std::int64_t> positives;
  positives.reserve(n_pos);
  while (positives.size() < n_pos) {
    const std::int64_t tick = draw_tick(0, kGridTicks, rng);
    if (taken.insert(tick).second) positives.push_back(tick);
  }
  std::vector<std::int64_t> bounds(positives);
  std::sort(bounds.begin(), bounds.end());
  bounds.insert(bounds.begin(), 0);
  bounds.push_back(kGridTicks);

  const std::vector<double> weights = binomial_pmf(n_pos, 1.0 - target_auroc);
  std::discrete_distribution<std::size_t> window(weights.begin(), weights.end());
  std::vector<std::int64_t> negatives;
  negatives.reserve(n_neg);
  while (negatives.size() < n_neg) {
    const std::size_t w = window(rng);
    if (bounds[w + 1] - bounds[w] < 2) continue;
    const std::int64_t tick = draw_tick(bounds[w], bounds[w + 1], rng);
    if (taken.insert(tick).second) negatives.push_back(tick);
  }

  std::vector<std::pair<std::int64_t, std::uint8_t>> rows;
  rows.reserve(n_pos + n_neg);
  for (auto t : positives) rows.emplace_back(t, 1);
  for (auto t : negatives) rows.emplace_back(t, 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  Sample out;
  for (const auto& [tick, label] : rows) {
    out.scores.push_back(static_cast<double>(tick) / kGridTicks);
    out.labels.push_back(label);
  }
  return out;
}

// Optionally rescales a fresh sample, then snaps it to the score grid. Returns
// false, leaving `taken` untouched, if a snapped score is already taken.
bool place_on_grid(Sample& sample, bool rescale, std::unordered_set<std::int64_t>& taken) {
  if (rescale) {
    const RescaleResult rescaled = rescale_mean_to_prevalence(ScoreSet(sample.scores, sample.labels));
    sample.scores.assign(rescaled.scores.scores().begin(), rescaled.scores.scores().end());
  }
  std::vector<std::int64_t> ticks;
  std::unordered_set<std::int64_t> local;
  for (double s : sample.scores) {
    const std::int64_t tick = std::llround(s / kScoreResolution);
    if (tick <= 0 || tick >= kGridTicks) return false;
    if (taken.count(tick) || !local.insert(tick).second) return false;
    ticks.push_back(tick);
  }
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    sample.scores[i] = static_cast<double>(ticks[i]) / kGridTicks;
  }
  taken.insert(ticks.begin(), ticks.end());
  return true;
}

constexpr int kMaxRedraws = 1000;

Sample sample_placed(std::size_t n_pos, std::size_t n_neg, double target_auroc, bool rescale,
                     Rng& rng, std::unordered_set<std::int64_t>& taken) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Sample sample = sample_group(n_pos, n_neg, target_auroc, rng);
    if (place_on_grid(sample, rescale, taken)) return sample;
  }
  throw DataError("could not draw distinct grid scores after " + std::to_string(kMaxRedraws) +
                  " attempts");
}

}  // namespace

std::size_t SynthConfig::num_positive() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n_total) * prevalence));
}

void SynthConfig::validate() const { check_group_params("synth", "n_total", n_total, prevalence, target_auroc); }

void GroupSpec::validate() const {
  if (groups.size() < 2) throw ConfigError("groups: at least two groups are required");
  std::set<GroupId> seen;
  for (const auto& g : groups) {
    const std::string who = "group " + std::to_string(g.id);
    if (!seen.insert(g.id).second) throw ConfigError(who + ": duplicate group id");
    check_group_params(who, "n", g.n, g.prevalence, g.target_auroc);
  }
}

ScoreSet sample_target_auroc(const SynthConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n_pos = cfg.num_positive();
  std::unordered_set<std::int64_t> taken;
  Sample sample = sample_placed(n_pos, cfg.n_total - n_pos, cfg.target_auroc,
                                cfg.rescale_to_prevalence, rng, taken);
  return ScoreSet(std::move(sample.scores), std::move(sample.labels));
}

RescaleResult rescale_mean_to(const ScoreSet& s, double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw ConfigError("rescale target mean must lie in (0,1), got " + describe(target));
  }
  const auto scores = s.scores();
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  std::vector<double> mapped;
  mapped.reserve(scores.size());
  double factor = 1.0;
  if (target <= mean) {
    factor = target / mean;
    for (double v : scores) mapped.push_back(v * factor);
  } else {
    factor = (1.0 - target) / (1.0 - mean);
    for (double v : scores) mapped.push_back(1.0 - (1.0 - v) * factor);
  }
  for (double v : mapped) {
    if (!(v > 0.0 && v < 1.0)) {
      throw DataError("rescale factor " + describe(factor) + " pushes a score out of (0,1)");
    }
  }
  ScoreSet result = s.with_scores(std::move(mapped));
  if (s.is_strict() && !result.is_strict()) {
    throw DataError("rescale factor " + describe(factor) + " merges distinct scores");
  }
  return {std::move(result), factor};
}

RescaleResult rescale_mean_to_prevalence(const ScoreSet& s) {
  return rescale_mean_to(s, s.prevalence());
}

ScoreDistribution ScoreDistribution::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  auto number = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad score distribution '" + text + "'");
    }
  };
  ScoreDistribution d;
  if (!parts.empty() && parts[0] == "constant" && parts.size() == 2) {
    d = constant(number(1));
  } else if (!parts.empty() && parts[0] == "uniform" && parts.size() == 3) {
    d = uniform(number(1), number(2));
  } else if (!parts.empty() && parts[0] == "beta" && parts.size() == 3) {
    d = beta(number(1), number(2));
  } else {
    throw ConfigError("bad score distribution '" + text +
                      "' (expected constant:v, uniform:lo:hi or beta:a:b)");
  }
  d.validate();
  return d;
}

void ScoreDistribution::validate() const {
  switch (kind) {
    case Kind::kConstant:
      if (!(a > 0.0 && a < 1.0)) throw ConfigError("constant score must lie in (0,1)");
      break;
    case Kind::kUniform:
      if (!(a >= 0.0 && b <= 1.0 && a < b)) {
        throw ConfigError("uniform bounds must satisfy 0 <= lo < hi <= 1");
      }
      break;
    case Kind::kBeta:
      if (!(a > 0.0 && b > 0.0)) throw ConfigError("beta shape parameters must be positive");
      break;
  }
}

ScoreSet sample_calibrated(std::size_t n, const ScoreDistribution& dist, Rng& rng) {
  if (n == 0) throw ConfigError("calibrated sample size must be positive");
  dist.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(dist.a, dist.b);
  std::gamma_distribution<double> gamma_a(dist.a, 1.0);
  std::gamma_distribution<double> gamma_b(dist.b, 1.0);
  auto draw = [&]() {
    for (;;) {
      double s = dist.a;
      if (dist.kind == ScoreDistribution::Kind::kUniform) {
        s = uniform(rng);
      } else if (dist.kind == ScoreDistribution::Kind::kBeta) {
        const double x = gamma_a(rng);
        const double y = gamma_b(rng);
        s = x / (x + y);
      }
      if (s > 0.0 && s < 1.0) return s;
    }
  };
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = draw();
    labels[i] = unit(rng) < scores[i] ? 1 : 0;
  }
  return ScoreSet(std::move(scores), std::move(labels));
}

ScoreSet build_group_dataset(const GroupSpec& spec, Rng& rng) {
  spec.validate();
  std::unordered_set<std::int64_t> taken;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::vector<GroupId> groups;
  for (const auto& g : spec.groups) {
    const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(g.n) * g.prevalence));
    Sample sample = sample_placed(n_pos, g.n - n_pos, g.target_auroc, spec.rescale_to_prevalence,
                                  rng, taken);
    scores.insert(scores.end(), sample.scores.begin(), sample.scores.end());
    labels.insert(labels.end(), sample.labels.begin(), sample.labels.end());
    groups.insert(groups.end(), sample.scores.size(), g.id);
  }
  return ScoreSet(std::move(scores), std::move(labels), std::move(groups));
}

}  // namespace rankgap
