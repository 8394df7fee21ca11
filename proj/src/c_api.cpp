#include "rankgap/rankgap.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "rankgap/analysis.hpp"
#include "rankgap/errors.hpp"
#include "rankgap/experiment.hpp"
#include "rankgap/io.hpp"
#include "rankgap/metrics.hpp"
#include "rankgap/mistakes.hpp"
#include "rankgap/optimizer.hpp"
#include "rankgap/synthgen.hpp"

struct rg_score_set {
  rankgap::ScoreSet set;
};
struct rg_rng {
  rankgap::Rng engine;
};
struct rg_curve {
  rankgap::Curve points;
};
struct rg_mistake_list {
  std::vector<rankgap::MistakeRecord> mistakes;
};
struct rg_trajectory {
  rankgap::Trajectory trajectory;
};
struct rg_experiment {
  rankgap::ExperimentConfig config;
};

namespace {

using json = nlohmann::json;

thread_local std::string g_last_error;
thread_local std::optional<std::pair<std::size_t, std::size_t>> g_last_tie;

rg_status fail(rg_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
rg_status guarded(Fn&& fn) {
  g_last_tie.reset();
  try {
    fn();
    return RG_OK;
  } catch (const rankgap::TieError& e) {
    g_last_tie = std::pair{e.first(), e.second()};
    return fail(RG_ERROR_DATA, e.what());
  } catch (const rankgap::Error& e) {
    return fail(static_cast<rg_status>(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(RG_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(RG_ERROR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw rankgap::ConfigError(message);
}

char* to_c_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rankgap::Metric to_metric(rg_metric m) {
  switch (m) {
    case RG_METRIC_AUROC: return rankgap::Metric::kAuroc;
    case RG_METRIC_AUPRC: return rankgap::Metric::kAuprc;
  }
  throw rankgap::ConfigError("unknown metric");
}

rankgap::Procedure to_procedure(rg_procedure p) {
  switch (p) {
    case RG_PROCEDURE_RANDOM_NOISE: return rankgap::Procedure::kRandomNoise;
    case RG_PROCEDURE_FIX_MISTAKES: return rankgap::Procedure::kFixMistakes;
    case RG_PROCEDURE_PERMUTE_NEARBY: return rankgap::Procedure::kPermuteNearby;
  }
  throw rankgap::ConfigError("unknown procedure");
}

rankgap::OptimizerConfig to_optimizer(const rg_optimizer_config& c) {
  rankgap::OptimizerConfig cfg;
  cfg.procedure = to_procedure(c.procedure);
  cfg.objective = to_metric(c.objective);
  cfg.steps = c.steps;
  cfg.candidates_per_step = c.candidates_per_step;
  cfg.delta_max = c.delta_max;
  cfg.gamma = c.gamma;
  cfg.validate();
  return cfg;
}

void fill(const rankgap::ThresholdStats& t, rg_threshold_stats* out) {
  out->threshold = t.threshold;
  out->tp = t.tp;
  out->fp = t.fp;
  out->tn = t.tn;
  out->fn = t.fn;
  out->has_tpr = t.tpr.has_value();
  out->has_fpr = t.fpr.has_value();
  out->has_precision = t.precision.has_value();
  out->tpr = t.tpr.value_or(0.0);
  out->fpr = t.fpr.value_or(0.0);
  out->precision = t.precision.value_or(0.0);
  out->firing_rate = t.firing_rate;
}

void fill(const rankgap::MistakeRecord& m, rg_mistake* out) {
  out->low_index = m.low_index;
  out->low_sample = m.low_sample;
  out->high_sample = m.high_sample;
  out->low_score = m.low_score;
  out->high_score = m.high_score;
  out->has_groups = m.low_group.has_value();
  out->low_group = m.low_group.value_or(0);
  out->high_group = m.high_group.value_or(0);
  out->delta_auroc = m.delta_auroc;
  out->delta_auprc = m.delta_auprc;
}

rankgap::MistakeRecord to_record(const rg_mistake& m) {
  rankgap::MistakeRecord r;
  r.low_index = m.low_index;
  r.low_sample = m.low_sample;
  r.high_sample = m.high_sample;
  r.low_score = m.low_score;
  r.high_score = m.high_score;
  if (m.has_groups) {
    r.low_group = m.low_group;
    r.high_group = m.high_group;
  }
  r.delta_auroc = m.delta_auroc;
  r.delta_auprc = m.delta_auprc;
  return r;
}

void fill(const rankgap::GroupMetrics& g, rg_group_metrics* out) {
  out->group = g.group;
  out->n = g.n;
  out->num_positive = g.num_positive;
  out->prevalence = g.prevalence;
  out->has_auroc = g.auroc.has_value();
  out->has_auprc = g.auprc.has_value();
  out->auroc = g.auroc.value_or(0.0);
  out->auprc = g.auprc.value_or(0.0);
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json group_json(const rankgap::GroupMetricMap& groups) {
  json out = json::array();
  for (const auto& [id, g] : groups) {
    out.push_back({{"group", id},
                   {"n", g.n},
                   {"num_positive", g.num_positive},
                   {"prevalence", g.prevalence},
                   {"auroc", optional_number(g.auroc)},
                   {"auprc", optional_number(g.auprc)},
                   {"flagged", g.flagged()}});
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rankgap::DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw rankgap::DataError("failed writing '" + path + "'");
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Summary statistics of one optimizer arm for the CLI report.
json arm_summary(const rankgap::ArmResult& arm) {
  using rankgap::Metric;
  json out;
  out["label"] = arm.label;
  out["procedure"] = rankgap::to_string(arm.optimizer.procedure);
  out["objective"] = rankgap::to_string(arm.optimizer.objective);
  out["steps"] = arm.optimizer.steps;
  out["candidates_per_step"] = arm.optimizer.candidates_per_step;
  out["delta_max"] = arm.optimizer.delta_max;
  out["gamma"] = arm.optimizer.gamma;
  out["seeds"] = arm.runs.size();

  std::vector<double> initial_auroc, final_auroc, initial_auprc, final_auprc;
  std::vector<double> gap0, gap_final, gap_auprc_final;
  std::size_t low_decreased = 0;
  std::size_t fixed = 0;
  std::size_t fixed_high = 0;
  std::size_t fixed_low = 0;
  bool two_groups = true;
  for (const auto& run : arm.runs) {
    const auto& steps = run.trajectory.steps;
    initial_auroc.push_back(steps.front().auroc);
    initial_auprc.push_back(steps.front().auprc);
    final_auroc.push_back(steps.back().auroc);
    final_auprc.push_back(steps.back().auprc);
    const auto groups = run.trajectory.final_scores.has_groups()
                            ? rankgap::per_group_metrics(run.trajectory.final_scores)
                            : rankgap::GroupMetricMap{};
    if (groups.size() != 2) {
      two_groups = false;
      continue;
    }
    const auto& a = groups.begin()->second;
    const auto& b = std::next(groups.begin())->second;
    if (a.prevalence == b.prevalence) {
      two_groups = false;
      continue;
    }
    const rankgap::GroupId high = a.prevalence > b.prevalence ? a.group : b.group;
    const rankgap::GroupId low = a.prevalence > b.prevalence ? b.group : a.group;
    auto at = [&](const rankgap::StepRecord& r, rankgap::GroupId g, Metric m) {
      const auto& p = r.groups.at(g);
      return m == Metric::kAuroc ? p.auroc : p.auprc;
    };
    const auto h0 = at(steps.front(), high, Metric::kAuroc);
    const auto l0 = at(steps.front(), low, Metric::kAuroc);
    const auto h1 = at(steps.back(), high, Metric::kAuroc);
    const auto l1 = at(steps.back(), low, Metric::kAuroc);
    if (h0 && l0 && h1 && l1) {
      gap0.push_back(*h0 - *l0);
      gap_final.push_back(*h1 - *l1);
      if (*l1 < *l0) ++low_decreased;
    }
    const auto hp = at(steps.back(), high, Metric::kAuprc);
    const auto lp = at(steps.back(), low, Metric::kAuprc);
    if (hp && lp) gap_auprc_final.push_back(*hp - *lp);
    for (const auto& s : steps) {
      if (!s.mistake) continue;
      ++fixed;
      if (s.mistake->low_group == high && s.mistake->high_group == high) ++fixed_high;
      if (s.mistake->low_group == low && s.mistake->high_group == low) ++fixed_low;
    }
  }
  out["mean_initial_auroc"] = mean(initial_auroc);
  out["mean_final_auroc"] = mean(final_auroc);
  out["mean_initial_auprc"] = mean(initial_auprc);
  out["mean_final_auprc"] = mean(final_auprc);
  if (two_groups && !gap_final.empty()) {
    std::size_t positive = 0;
    std::vector<double> abs_gap;
    for (double g : gap_final) {
      positive += g > 0.0 ? 1 : 0;
      abs_gap.push_back(std::abs(g));
    }
    json gaps;
    gaps["mean_initial_auroc_gap"] = mean(gap0);
    gaps["mean_final_auroc_gap"] = mean(gap_final);
    gaps["mean_final_abs_auroc_gap"] = mean(abs_gap);
    gaps["fraction_final_auroc_gap_positive"] =
        static_cast<double>(positive) / static_cast<double>(gap_final.size());
    gaps["fraction_low_group_auroc_decreased"] =
        static_cast<double>(low_decreased) / static_cast<double>(gap_final.size());
    gaps["mean_final_auprc_gap"] = mean(gap_auprc_final);
    if (fixed > 0) {
      gaps["mistakes_fixed"] = fixed;
      gaps["fraction_fixed_within_high_group"] = static_cast<double>(fixed_high) / static_cast<double>(fixed);
      gaps["fraction_fixed_within_low_group"] = static_cast<double>(fixed_low) / static_cast<double>(fixed);
    }
    out["two_group"] = gaps;
  }
  return out;
}

}  // namespace

extern "C" {

const char* rg_version(void) { return "1.0.0"; }
const char* rg_last_error(void) { return g_last_error.c_str(); }

int rg_last_error_tie(size_t* first, size_t* second) {
  if (!g_last_tie) return 0;
  if (first) *first = g_last_tie->first;
  if (second) *second = g_last_tie->second;
  return 1;
}

void rg_string_free(char* s) { std::free(s); }

rg_status rg_rng_create(uint64_t seed, rg_rng** out) {
  return guarded([&] {
    require(out != nullptr, "rg_rng_create: out is NULL");
    *out = new rg_rng{rankgap::make_rng(seed)};
  });
}

void rg_rng_destroy(rg_rng* rng) { delete rng; }

rg_status rg_score_set_create(const double* scores, const int* labels, const uint32_t* groups,
                              size_t n, rg_score_set** out) {
  return guarded([&] {
    require(out != nullptr, "rg_score_set_create: out is NULL");
    require(n == 0 || (scores && labels), "rg_score_set_create: scores/labels are NULL");
    std::vector<double> s(scores, scores + n);
    std::vector<std::uint8_t> l(n);
    for (size_t i = 0; i < n; ++i) {
      if (labels[i] != 0 && labels[i] != 1) {
        throw rankgap::DataError("label at sample " + std::to_string(i) + " is not 0 or 1");
      }
      l[i] = static_cast<std::uint8_t>(labels[i]);
    }
    std::optional<std::vector<rankgap::GroupId>> g;
    if (groups) g.emplace(groups, groups + n);
    *out = new rg_score_set{rankgap::ScoreSet(std::move(s), std::move(l), std::move(g))};
  });
}

rg_status rg_score_set_read_csv(const char* path, rg_score_set** out) {
  return guarded([&] {
    require(path && out, "rg_score_set_read_csv: NULL argument");
    *out = new rg_score_set{rankgap::read_score_csv(path)};
  });
}

rg_status rg_score_set_write_csv(const rg_score_set* set, const char* path) {
  return guarded([&] {
    require(set && path, "rg_score_set_write_csv: NULL argument");
    rankgap::write_score_csv(set->set, std::filesystem::path(path));
  });
}

void rg_score_set_destroy(rg_score_set* set) { delete set; }

size_t rg_score_set_size(const rg_score_set* set) { return set ? set->set.size() : 0; }
size_t rg_score_set_num_positive(const rg_score_set* set) {
  return set ? set->set.num_positive() : 0;
}
int rg_score_set_has_groups(const rg_score_set* set) { return set && set->set.has_groups(); }

rg_status rg_score_set_sample(const rg_score_set* set, size_t index, double* score, int* label,
                              uint32_t* group) {
  return guarded([&] {
    require(set != nullptr, "rg_score_set_sample: set is NULL");
    if (index >= set->set.size()) throw rankgap::ConfigError("sample index out of range");
    if (score) *score = set->set.score(index);
    if (label) *label = set->set.positive(index) ? 1 : 0;
    if (group) *group = set->set.group(index).value_or(0);
  });
}

int rg_score_set_find_tie(const rg_score_set* set, size_t* first, size_t* second) {
  if (!set) return 0;
  const auto tie = set->set.find_tie();
  if (!tie) return 0;
  if (first) *first = tie->first;
  if (second) *second = tie->second;
  return 1;
}

rg_status rg_threshold_stats_at(const rg_score_set* set, double threshold, int inclusive,
                                rg_threshold_stats* out) {
  return guarded([&] {
    require(set && out, "rg_threshold_stats_at: NULL argument");
    fill(rankgap::threshold_stats(set->set, threshold, inclusive != 0), out);
  });
}

rg_status rg_auroc(const rg_score_set* set, double* out) {
  return guarded([&] {
    require(set && out, "rg_auroc: NULL argument");
    *out = rankgap::auroc(set->set);
  });
}

rg_status rg_auprc(const rg_score_set* set, double* out) {
  return guarded([&] {
    require(set && out, "rg_auprc: NULL argument");
    *out = rankgap::auprc(set->set);
  });
}

rg_status rg_auroc_reparam(const rg_score_set* set, double* out) {
  return guarded([&] {
    require(set && out, "rg_auroc_reparam: NULL argument");
    *out = rankgap::auroc_reparam(set->set);
  });
}

rg_status rg_auprc_reparam(const rg_score_set* set, rg_auprc_forms* out) {
  return guarded([&] {
    require(set && out, "rg_auprc_reparam: NULL argument");
    const auto f = rankgap::auprc_reparam(set->set);
    *out = {f.mean_precision, f.bayes_form, f.precision_residual, f.bayes_residual};
  });
}

rg_status rg_roc_curve(const rg_score_set* set, rg_curve** out) {
  return guarded([&] {
    require(set && out, "rg_roc_curve: NULL argument");
    *out = new rg_curve{rankgap::roc_curve(set->set)};
  });
}

rg_status rg_pr_curve(const rg_score_set* set, rg_curve** out) {
  return guarded([&] {
    require(set && out, "rg_pr_curve: NULL argument");
    *out = new rg_curve{rankgap::pr_curve(set->set)};
  });
}

size_t rg_curve_size(const rg_curve* curve) { return curve ? curve->points.size() : 0; }

rg_status rg_curve_point(const rg_curve* curve, size_t index, rg_threshold_stats* out) {
  return guarded([&] {
    require(curve && out, "rg_curve_point: NULL argument");
    if (index >= curve->points.size()) throw rankgap::ConfigError("curve index out of range");
    fill(curve->points[index], out);
  });
}

void rg_curve_destroy(rg_curve* curve) { delete curve; }

rg_status rg_per_group_metrics(const rg_score_set* set, rg_group_metrics* out, size_t capacity,
                               size_t* count) {
  return guarded([&] {
    require(set && count, "rg_per_group_metrics: NULL argument");
    const auto groups = rankgap::per_group_metrics(set->set);
    *count = groups.size();
    size_t i = 0;
    for (const auto& [id, g] : groups) {
      if (i >= capacity || !out) break;
      fill(g, &out[i++]);
    }
  });
}

rg_status rg_signed_gap(const rg_score_set* set, rg_metric metric, double* out) {
  return guarded([&] {
    require(set && out, "rg_signed_gap: NULL argument");
    *out = rankgap::signed_gap(rankgap::per_group_metrics(set->set), to_metric(metric));
  });
}

rg_status rg_spearman(const double* x, const double* y, size_t n, double* rho, double* p_value) {
  return guarded([&] {
    require(x && y && rho, "rg_spearman: NULL argument");
    const auto r = rankgap::spearman(std::span(x, n), std::span(y, n));
    *rho = r.rho;
    if (p_value) *p_value = r.p_value;
  });
}

rg_status rg_percentile(const double* values, size_t n, double q, double* out) {
  return guarded([&] {
    require(values && out, "rg_percentile: NULL argument");
    *out = rankgap::percentile(std::vector<double>(values, values + n), q);
  });
}

rg_status rg_mistakes_enumerate(const rg_score_set* set, rg_mistake_list** out) {
  return guarded([&] {
    require(set && out, "rg_mistakes_enumerate: NULL argument");
    *out = new rg_mistake_list{rankgap::enumerate_mistakes(set->set)};
  });
}

size_t rg_mistake_list_size(const rg_mistake_list* list) { return list ? list->mistakes.size() : 0; }

rg_status rg_mistake_list_get(const rg_mistake_list* list, size_t index, rg_mistake* out) {
  return guarded([&] {
    require(list && out, "rg_mistake_list_get: NULL argument");
    if (index >= list->mistakes.size()) throw rankgap::ConfigError("mistake index out of range");
    fill(list->mistakes[index], out);
  });
}

void rg_mistake_list_destroy(rg_mistake_list* list) { delete list; }

rg_status rg_mistake_fix(const rg_score_set* set, const rg_mistake* mistake, rg_score_set** out) {
  return guarded([&] {
    require(set && mistake && out, "rg_mistake_fix: NULL argument");
    *out = new rg_score_set{rankgap::fix_mistake(set->set, to_record(*mistake))};
  });
}

rg_status rg_best_mistake(const rg_score_set* set, rg_metric objective, rg_rng* rng,
                          rg_mistake* out) {
  return guarded([&] {
    require(set && rng && out, "rg_best_mistake: NULL argument");
    fill(rankgap::best_mistake(set->set, to_metric(objective), rng->engine), out);
  });
}

rg_status rg_sample_target_auroc(const rg_synth_config* cfg, rg_rng* rng, rg_score_set** out) {
  return guarded([&] {
    require(cfg && rng && out, "rg_sample_target_auroc: NULL argument");
    rankgap::SynthConfig c;
    c.n_total = cfg->n_total;
    c.prevalence = cfg->prevalence;
    c.target_auroc = cfg->target_auroc;
    c.rescale_to_prevalence = cfg->rescale_to_prevalence != 0;
    *out = new rg_score_set{rankgap::sample_target_auroc(c, rng->engine)};
  });
}

rg_status rg_build_group_dataset(const rg_group_config* groups, size_t count,
                                 int rescale_to_prevalence, rg_rng* rng, rg_score_set** out) {
  return guarded([&] {
    require(groups && rng && out, "rg_build_group_dataset: NULL argument");
    rankgap::GroupSpec spec;
    spec.rescale_to_prevalence = rescale_to_prevalence != 0;
    for (size_t i = 0; i < count; ++i) {
      spec.groups.push_back({groups[i].id, groups[i].n, groups[i].prevalence, groups[i].target_auroc});
    }
    *out = new rg_score_set{rankgap::build_group_dataset(spec, rng->engine)};
  });
}

rg_status rg_sample_calibrated(size_t n, const char* distribution, rg_rng* rng, rg_score_set** out) {
  return guarded([&] {
    require(distribution && rng && out, "rg_sample_calibrated: NULL argument");
    const auto dist = rankgap::ScoreDistribution::parse(distribution);
    *out = new rg_score_set{rankgap::sample_calibrated(n, dist, rng->engine)};
  });
}

rg_status rg_rescale_to_prevalence(const rg_score_set* set, rg_score_set** out, double* factor) {
  return guarded([&] {
    require(set && out, "rg_rescale_to_prevalence: NULL argument");
    auto result = rankgap::rescale_mean_to_prevalence(set->set);
    if (factor) *factor = result.factor;
    *out = new rg_score_set{std::move(result.scores)};
  });
}

rg_status rg_optimizer_defaults(rg_procedure procedure, rg_metric objective,
                                rg_optimizer_config* out) {
  return guarded([&] {
    require(out != nullptr, "rg_optimizer_defaults: out is NULL");
    const auto c = rankgap::OptimizerConfig::defaults(to_procedure(procedure), to_metric(objective));
    *out = {procedure, objective, c.steps, c.candidates_per_step, c.delta_max, c.gamma};
  });
}

rg_status rg_optimizer_step(const rg_score_set* set, const rg_optimizer_config* cfg, rg_rng* rng,
                            rg_score_set** out) {
  bool converged = false;
  const rg_status status = guarded([&] {
    require(set && cfg && rng && out, "rg_optimizer_step: NULL argument");
    *out = nullptr;
    const auto c = to_optimizer(*cfg);
    switch (c.procedure) {
      case rankgap::Procedure::kRandomNoise:
        *out = new rg_score_set{rankgap::step_random_noise(set->set, c, rng->engine).scores};
        break;
      case rankgap::Procedure::kFixMistakes: {
        auto step = rankgap::step_fix_mistake(set->set, c, rng->engine);
        if (!step) {
          converged = true;
          return;
        }
        *out = new rg_score_set{std::move(step->scores)};
        break;
      }
      case rankgap::Procedure::kPermuteNearby:
        *out = new rg_score_set{rankgap::step_permute_nearby(set->set, c, rng->engine).scores};
        break;
    }
  });
  return status == RG_OK && converged ? RG_CONVERGED : status;
}

rg_status rg_optimizer_run(const rg_score_set* set, const rg_optimizer_config* cfg, rg_rng* rng,
                           rg_trajectory** out) {
  return guarded([&] {
    require(set && cfg && rng && out, "rg_optimizer_run: NULL argument");
    *out = new rg_trajectory{rankgap::run_optimizer(set->set, to_optimizer(*cfg), rng->engine)};
  });
}

size_t rg_trajectory_size(const rg_trajectory* t) { return t ? t->trajectory.steps.size() : 0; }
int rg_trajectory_converged(const rg_trajectory* t) { return t && t->trajectory.converged; }

rg_status rg_trajectory_step(const rg_trajectory* t, size_t step, rg_step_summary* out) {
  return guarded([&] {
    require(t && out, "rg_trajectory_step: NULL argument");
    if (step >= t->trajectory.steps.size()) throw rankgap::ConfigError("step out of range");
    const auto& r = t->trajectory.steps[step];
    *out = {};
    out->step = r.step;
    out->auroc = r.auroc;
    out->auprc = r.auprc;
    out->num_groups = r.groups.size();
    out->has_mistake = r.mistake.has_value();
    if (r.mistake) fill(*r.mistake, &out->mistake);
  });
}

rg_status rg_trajectory_group(const rg_trajectory* t, size_t step, uint32_t group,
                              rg_group_metrics* out) {
  return guarded([&] {
    require(t && out, "rg_trajectory_group: NULL argument");
    if (step >= t->trajectory.steps.size()) throw rankgap::ConfigError("step out of range");
    const auto& groups = t->trajectory.steps[step].groups;
    auto it = groups.find(group);
    if (it == groups.end()) throw rankgap::ConfigError("no such group " + std::to_string(group));
    *out = {};
    out->group = group;
    out->has_auroc = it->second.auroc.has_value();
    out->has_auprc = it->second.auprc.has_value();
    out->auroc = it->second.auroc.value_or(0.0);
    out->auprc = it->second.auprc.value_or(0.0);
  });
}

rg_status rg_trajectory_final_scores(const rg_trajectory* t, rg_score_set** out) {
  return guarded([&] {
    require(t && out, "rg_trajectory_final_scores: NULL argument");
    *out = new rg_score_set{t->trajectory.final_scores};
  });
}

void rg_trajectory_destroy(rg_trajectory* t) { delete t; }

rg_status rg_experiment_load(const char* path, rg_experiment** out) {
  return guarded([&] {
    require(path && out, "rg_experiment_load: NULL argument");
    *out = new rg_experiment{rankgap::load_experiment_config(path)};
  });
}

void rg_experiment_destroy(rg_experiment* exp) { delete exp; }

size_t rg_experiment_num_seeds(const rg_experiment* exp) {
  return exp ? exp->config.seeds.size() : 0;
}

rg_status rg_experiment_synth(const rg_experiment* exp, const char* scores_path, char** summary_json) {
  return guarded([&] {
    require(exp != nullptr, "rg_experiment_synth: exp is NULL");
    const auto& cfg = exp->config;
    const std::string pattern = scores_path ? scores_path : cfg.scores_path;
    if (pattern.empty()) throw rankgap::ConfigError("no output path for scores ([output] scores)");
    if (cfg.seeds.size() > 1 && pattern.find("{seed}") == std::string::npos) {
      throw rankgap::ConfigError("scores path must contain {seed} when several seeds are configured");
    }
    json summary = json::array();
    for (const auto& result : rankgap::run_synth(cfg)) {
      const std::string path = rankgap::expand_path(pattern, result.seed, "");
      std::ostringstream csv;
      rankgap::write_score_csv(result.scores, csv);
      write_file(path, csv.str());
      json entry = {{"seed", result.seed},
                    {"path", path},
                    {"n", result.scores.size()},
                    {"num_positive", result.scores.num_positive()},
                    {"auroc", rankgap::auroc(result.scores)},
                    {"auprc", rankgap::auprc(result.scores)}};
      if (result.scores.has_groups()) entry["groups"] = group_json(rankgap::per_group_metrics(result.scores));
      summary.push_back(entry);
    }
    if (summary_json) *summary_json = to_c_string(summary.dump(2));
  });
}

rg_status rg_experiment_optimize(const rg_experiment* exp, const char* trajectory_path,
                                 const char* band_path, unsigned jobs, char** summary_json) {
  return guarded([&] {
    require(exp != nullptr, "rg_experiment_optimize: exp is NULL");
    const auto& cfg = exp->config;
    const std::string traj_pattern = trajectory_path ? trajectory_path : cfg.trajectory_path;
    const std::string band_pattern = band_path ? band_path : cfg.band_path;
    if (traj_pattern.empty()) throw rankgap::ConfigError("no output path for the trajectory ([output] trajectory)");
    if (cfg.delta_grid.size() > 1) {
      if (traj_pattern.find("{arm}") == std::string::npos ||
          (!band_pattern.empty() && band_pattern.find("{arm}") == std::string::npos)) {
        throw rankgap::ConfigError("output paths must contain {arm} for a delta_max grid");
      }
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const auto arms = rankgap::run_optimize(cfg, jobs);
    json summary = json::array();
    for (const auto& arm : arms) {
      json entry = arm_summary(arm);
      const std::string traj_file = rankgap::expand_path(traj_pattern, std::nullopt, arm.label);
      std::ostringstream traj;
      rankgap::write_trajectory_csv(arm.runs, traj);
      write_file(traj_file, traj.str());
      entry["trajectory_path"] = traj_file;
      if (!band_pattern.empty() && arm.runs.size() >= 2) {
        const std::string band_file = rankgap::expand_path(band_pattern, std::nullopt, arm.label);
        std::ostringstream band;
        rankgap::write_band_csv(arm.runs, band);
        write_file(band_file, band.str());
        entry["band_path"] = band_file;
      } else {
        entry["band_path"] = nullptr;
      }
      summary.push_back(entry);
    }
    if (summary_json) *summary_json = to_c_string(summary.dump(2));
  });
}

rg_status rg_sweep_analyze(const char* path, char** summary_json) {
  return guarded([&] {
    require(path && summary_json, "rg_sweep_analyze: NULL argument");
    const auto records = rankgap::read_run_records(path);
    const auto summaries = rankgap::sweep_by_dataset(records);
    json datasets = json::array();
    std::vector<std::pair<double, double>> meta_points;
    for (const auto& s : summaries) {
      json splits = json::array();
      for (const auto& c : s.splits) {
        splits.push_back({{"split_id", c.split_id},
                          {"runs", c.runs},
                          {"rho_gap_vs_auprc", c.gap_vs_auprc.rho},
                          {"p_gap_vs_auprc", c.gap_vs_auprc.p_value},
                          {"rho_gap_vs_auroc", c.gap_vs_auroc.rho},
                          {"p_gap_vs_auroc", c.gap_vs_auroc.p_value},
                          {"difference", c.difference}});
      }
      json ci = nullptr;
      if (s.ci95) ci = json::array({s.ci95->first, s.ci95->second});
      datasets.push_back({{"dataset", s.dataset},
                          {"high_group", s.high_group},
                          {"low_group", s.low_group},
                          {"prevalence_ratio", s.prevalence_ratio},
                          {"splits", splits},
                          {"mean_difference", s.mean_difference},
                          {"ci95", ci},
                          {"ci_method", "t-interval over split-level differences"}});
      meta_points.emplace_back(s.prevalence_ratio, s.mean_difference);
    }
    json out = {{"datasets", datasets}, {"meta", nullptr}};
    if (meta_points.size() >= 3) {
      const auto m = rankgap::meta_correlation(meta_points);
      out["meta"] = {{"datasets", meta_points.size()}, {"rho", m.rho}, {"p_value", m.p_value}};
    }
    *summary_json = to_c_string(out.dump(2));
  });
}

}  // extern "C"
