#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankgap/rankgap.h"

namespace {

namespace fs = std::filesystem;

struct SetDeleter {
  void operator()(rg_score_set* s) const { rg_score_set_destroy(s); }
};
struct RngDeleter {
  void operator()(rg_rng* r) const { rg_rng_destroy(r); }
};
using SetPtr = std::unique_ptr<rg_score_set, SetDeleter>;
using RngPtr = std::unique_ptr<rg_rng, RngDeleter>;

SetPtr make_set(const std::vector<double>& scores, const std::vector<int>& labels,
                const uint32_t* groups = nullptr) {
  rg_score_set* s = nullptr;
  EXPECT_EQ(rg_score_set_create(scores.data(), labels.data(), groups, scores.size(), &s), RG_OK)
      << rg_last_error();
  return SetPtr(s);
}

RngPtr make_rng(uint64_t seed) {
  rg_rng* r = nullptr;
  EXPECT_EQ(rg_rng_create(seed, &r), RG_OK);
  return RngPtr(r);
}

fs::path fixture(const char* name) { return fs::path(RANKGAP_FIXTURE_DIR) / name; }

TEST(CApi, FourPointMetrics) {
  const auto s = make_set({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1});
  double v = 0.0;
  ASSERT_EQ(rg_auroc(s.get(), &v), RG_OK);
  EXPECT_DOUBLE_EQ(v, 0.75);
  ASSERT_EQ(rg_auprc(s.get(), &v), RG_OK);
  EXPECT_NEAR(v, 5.0 / 6.0, 1e-15);
  ASSERT_EQ(rg_auroc_reparam(s.get(), &v), RG_OK);
  EXPECT_NEAR(v, 0.75, 1e-12);
  rg_auprc_forms forms{};
  ASSERT_EQ(rg_auprc_reparam(s.get(), &forms), RG_OK);
  EXPECT_NEAR(forms.mean_precision, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(forms.bayes_form, 5.0 / 6.0, 1e-12);
}

TEST(CApi, InvalidInputsReportStatus) {
  rg_score_set* s = nullptr;
  const double scores[] = {0.5, 1.5};
  const int labels[] = {0, 1};
  EXPECT_EQ(rg_score_set_create(scores, labels, nullptr, 2, &s), RG_ERROR_DATA);
  EXPECT_EQ(s, nullptr);
  EXPECT_NE(std::string(rg_last_error()), "");
  EXPECT_EQ(rg_score_set_create(nullptr, labels, nullptr, 2, &s), RG_ERROR_CONFIG);

  const auto single = make_set({0.2, 0.4}, {1, 1});
  double v = 0.0;
  EXPECT_EQ(rg_auroc(single.get(), &v), RG_ERROR_UNDEFINED);

  const auto tied = make_set({0.2, 0.5, 0.2}, {1, 0, 0});
  rg_mistake_list* list = nullptr;
  EXPECT_EQ(rg_mistakes_enumerate(tied.get(), &list), RG_ERROR_DATA);
  size_t a = 9, b = 9;
  ASSERT_EQ(rg_last_error_tie(&a, &b), 1);
  EXPECT_EQ(a, 0u);
  EXPECT_EQ(b, 2u);
}

TEST(CApi, MistakesAndFix) {
  const auto s = make_set({0.1, 0.2, 0.3, 0.4}, {1, 0, 1, 0});
  rg_mistake_list* list = nullptr;
  ASSERT_EQ(rg_mistakes_enumerate(s.get(), &list), RG_OK);
  ASSERT_EQ(rg_mistake_list_size(list), 2u);
  rg_mistake m{};
  ASSERT_EQ(rg_mistake_list_get(list, 1, &m), RG_OK);
  EXPECT_EQ(m.low_index, 2u);
  EXPECT_DOUBLE_EQ(m.delta_auroc, 0.25);
  EXPECT_NEAR(m.delta_auprc, 0.25, 1e-15);
  EXPECT_EQ(rg_mistake_list_get(list, 2, &m), RG_ERROR_CONFIG);
  ASSERT_EQ(rg_mistake_list_get(list, 1, &m), RG_OK);
  rg_mistake_list_destroy(list);

  rg_score_set* fixed = nullptr;
  ASSERT_EQ(rg_mistake_fix(s.get(), &m, &fixed), RG_OK);
  double v = 0.0;
  ASSERT_EQ(rg_auprc(fixed, &v), RG_OK);
  EXPECT_DOUBLE_EQ(v, 0.75);
  rg_score_set* again = nullptr;
  EXPECT_EQ(rg_mistake_fix(fixed, &m, &again), RG_ERROR_DATA);
  rg_score_set_destroy(fixed);
}

TEST(CApi, GroupsAndGap) {
  const uint32_t groups[] = {1, 1, 1, 2, 2, 2, 2};
  const auto s = make_set({0.1, 0.5, 0.9, 0.2, 0.6, 0.7, 0.3}, {0, 1, 1, 1, 0, 1, 0}, groups);
  EXPECT_EQ(rg_score_set_has_groups(s.get()), 1);
  size_t count = 0;
  rg_group_metrics out[4]{};
  ASSERT_EQ(rg_per_group_metrics(s.get(), out, 4, &count), RG_OK);
  ASSERT_EQ(count, 2u);
  EXPECT_EQ(out[0].group, 1u);
  EXPECT_DOUBLE_EQ(out[0].auroc, 1.0);
  EXPECT_DOUBLE_EQ(out[1].auroc, 0.5);
  double gap = 0.0;
  ASSERT_EQ(rg_signed_gap(s.get(), RG_METRIC_AUROC, &gap), RG_OK);
  EXPECT_DOUBLE_EQ(gap, 0.5);
}

TEST(CApi, SpearmanAndPercentile) {
  const double x[] = {1, 2, 3, 4, 5};
  const double y[] = {2, 1, 4, 3, 5};
  double rho = 0.0, p = 0.0;
  ASSERT_EQ(rg_spearman(x, y, 5, &rho, &p), RG_OK);
  EXPECT_NEAR(rho, 0.8, 1e-12);
  EXPECT_GT(p, 0.0);
  EXPECT_LE(p, 1.0);
  double q = 0.0;
  ASSERT_EQ(rg_percentile(x, 5, 50.0, &q), RG_OK);
  EXPECT_DOUBLE_EQ(q, 3.0);
}

TEST(CApi, SynthAndOptimizerAreDeterministic) {
  const rg_group_config groups[] = {{1, 200, 0.05, 0.85}, {2, 200, 0.01, 0.85}};
  std::vector<double> first;
  for (int rep = 0; rep < 2; ++rep) {
    auto rng = make_rng(42);
    rg_score_set* s = nullptr;
    ASSERT_EQ(rg_build_group_dataset(groups, 2, 1, rng.get(), &s), RG_OK) << rg_last_error();
    EXPECT_EQ(rg_score_set_size(s), 400u);
    EXPECT_EQ(rg_score_set_num_positive(s), 12u);
    rg_optimizer_config cfg{};
    ASSERT_EQ(rg_optimizer_defaults(RG_PROCEDURE_FIX_MISTAKES, RG_METRIC_AUPRC, &cfg), RG_OK);
    cfg.steps = 10;
    rg_trajectory* t = nullptr;
    ASSERT_EQ(rg_optimizer_run(s, &cfg, rng.get(), &t), RG_OK);
    ASSERT_EQ(rg_trajectory_size(t), 11u);
    std::vector<double> values;
    for (size_t i = 0; i < rg_trajectory_size(t); ++i) {
      rg_step_summary step{};
      ASSERT_EQ(rg_trajectory_step(t, i, &step), RG_OK);
      EXPECT_EQ(step.num_groups, 2u);
      EXPECT_EQ(step.has_mistake, i > 0 ? 1 : 0);
      values.push_back(step.auprc);
      rg_group_metrics g{};
      ASSERT_EQ(rg_trajectory_group(t, i, 2, &g), RG_OK);
      values.push_back(g.auroc);
    }
    EXPECT_EQ(rg_trajectory_group(t, 0, 9, nullptr), RG_ERROR_CONFIG);
    if (rep == 0) {
      first = values;
    } else {
      EXPECT_EQ(first, values);
    }
    rg_trajectory_destroy(t);
    rg_score_set_destroy(s);
  }
}

TEST(CApi, OptimizerStepReportsConvergence) {
  const auto s = make_set({0.1, 0.2, 0.3}, {0, 0, 1});
  auto rng = make_rng(0);
  rg_optimizer_config cfg{};
  ASSERT_EQ(rg_optimizer_defaults(RG_PROCEDURE_FIX_MISTAKES, RG_METRIC_AUROC, &cfg), RG_OK);
  rg_score_set* out = nullptr;
  EXPECT_EQ(rg_optimizer_step(s.get(), &cfg, rng.get(), &out), RG_CONVERGED);
  EXPECT_EQ(out, nullptr);
  cfg.gamma = 0;
  cfg.procedure = RG_PROCEDURE_PERMUTE_NEARBY;
  EXPECT_EQ(rg_optimizer_step(s.get(), &cfg, rng.get(), &out), RG_ERROR_CONFIG);
}

TEST(CApi, CsvRoundTripAndRescale) {
  rg_score_set* s = nullptr;
  ASSERT_EQ(rg_score_set_read_csv(fixture("grouped.csv").c_str(), &s), RG_OK) << rg_last_error();
  const fs::path out = fs::temp_directory_path() / "rankgap_c_api_roundtrip.csv";
  ASSERT_EQ(rg_score_set_write_csv(s, out.c_str()), RG_OK);
  rg_score_set* back = nullptr;
  ASSERT_EQ(rg_score_set_read_csv(out.c_str(), &back), RG_OK);
  ASSERT_EQ(rg_score_set_size(back), rg_score_set_size(s));
  for (size_t i = 0; i < rg_score_set_size(s); ++i) {
    double a = 0, b = 0;
    int la = 0, lb = 0;
    uint32_t ga = 0, gb = 0;
    ASSERT_EQ(rg_score_set_sample(s, i, &a, &la, &ga), RG_OK);
    ASSERT_EQ(rg_score_set_sample(back, i, &b, &lb, &gb), RG_OK);
    EXPECT_EQ(a, b);
    EXPECT_EQ(la, lb);
    EXPECT_EQ(ga, gb);
  }
  rg_score_set* scaled = nullptr;
  double factor = 0.0;
  ASSERT_EQ(rg_rescale_to_prevalence(s, &scaled, &factor), RG_OK);
  EXPECT_GT(factor, 0.0);
  rg_score_set_destroy(scaled);
  rg_score_set_destroy(back);
  rg_score_set_destroy(s);
  fs::remove(out);

  rg_score_set* missing = nullptr;
  EXPECT_EQ(rg_score_set_read_csv("/nonexistent/rankgap.csv", &missing), RG_ERROR_DATA);
}

TEST(CApi, CalibratedSampling) {
  auto rng = make_rng(5);
  rg_score_set* s = nullptr;
  ASSERT_EQ(rg_sample_calibrated(5000, "uniform:0.1:0.3", rng.get(), &s), RG_OK);
  EXPECT_EQ(rg_score_set_size(s), 5000u);
  rg_score_set_destroy(s);
  EXPECT_EQ(rg_sample_calibrated(10, "normal:0:1", rng.get(), &s), RG_ERROR_CONFIG);
}

TEST(CApi, SweepAnalyzeReturnsJson) {
  char* json = nullptr;
  ASSERT_EQ(rg_sweep_analyze(fixture("sweep_runs.csv").c_str(), &json), RG_OK) << rg_last_error();
  const auto doc = nlohmann::json::parse(json);
  rg_string_free(json);
  EXPECT_TRUE(doc.contains("datasets"));
  EXPECT_EQ(rg_sweep_analyze("/nonexistent/runs.csv", &json), RG_ERROR_DATA);
}

TEST(CApi, ExperimentLoadErrors) {
  rg_experiment* e = nullptr;
  EXPECT_EQ(rg_experiment_load("/nonexistent/exp.cfg", &e), RG_ERROR_CONFIG);
  EXPECT_EQ(e, nullptr);
  EXPECT_NE(std::string(rg_version()), "");
}

}  // namespace
