/* rankgap C API.
 *
 * Every function returns an rg_status. On failure a description is available
 * from rg_last_error() on the calling thread until the next failing call.
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function. Strings returned through char** are released with
 * rg_string_free. Sample indices are 0-based.
 */
#ifndef RANKGAP_RANKGAP_H
#define RANKGAP_RANKGAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(RANKGAP_BUILDING)
#define RG_API __attribute__((visibility("default")))
#else
#define RG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as the rankgap CLI exit codes. */
typedef enum rg_status {
  RG_OK = 0,
  RG_ERROR_INTERNAL = 1,
  RG_ERROR_CONFIG = 2,    /* usage, argument or configuration error */
  RG_ERROR_DATA = 3,      /* malformed input, tied scores, stale mistake */
  RG_ERROR_UNDEFINED = 4, /* metric undefined (e.g. single-class input) */
  RG_CONVERGED = 5        /* optimizer step: no mistakes left; not an error */
} rg_status;

typedef enum rg_metric { RG_METRIC_AUROC = 0, RG_METRIC_AUPRC = 1 } rg_metric;

typedef enum rg_procedure {
  RG_PROCEDURE_RANDOM_NOISE = 1,  /* M1 */
  RG_PROCEDURE_FIX_MISTAKES = 2,  /* M2 */
  RG_PROCEDURE_PERMUTE_NEARBY = 3 /* M3 */
} rg_procedure;

typedef struct rg_score_set rg_score_set;
typedef struct rg_rng rg_rng;
typedef struct rg_curve rg_curve;
typedef struct rg_mistake_list rg_mistake_list;
typedef struct rg_trajectory rg_trajectory;
typedef struct rg_experiment rg_experiment;

RG_API const char* rg_version(void);
RG_API const char* rg_last_error(void);
/* Sample indices of the tied pair behind the last RG_ERROR_DATA caused by tied
 * scores; returns 0 if the last error was not a tie. */
RG_API int rg_last_error_tie(size_t* first, size_t* second);
RG_API void rg_string_free(char* s);

/* ---- random generators ---------------------------------------------------- */

RG_API rg_status rg_rng_create(uint64_t seed, rg_rng** out);
RG_API void rg_rng_destroy(rg_rng* rng);

/* ---- score sets ------------------------------------------------------------ */

/* groups may be NULL for a single-group set. */
RG_API rg_status rg_score_set_create(const double* scores, const int* labels,
                                     const uint32_t* groups, size_t n, rg_score_set** out);
RG_API rg_status rg_score_set_read_csv(const char* path, rg_score_set** out);
RG_API rg_status rg_score_set_write_csv(const rg_score_set* set, const char* path);
RG_API void rg_score_set_destroy(rg_score_set* set);

RG_API size_t rg_score_set_size(const rg_score_set* set);
RG_API size_t rg_score_set_num_positive(const rg_score_set* set);
RG_API int rg_score_set_has_groups(const rg_score_set* set);
/* group may be NULL; it is set to 0 when the set has no groups. */
RG_API rg_status rg_score_set_sample(const rg_score_set* set, size_t index, double* score,
                                     int* label, uint32_t* group);
/* Returns 1 and the first tied pair, or 0 when all scores are distinct. */
RG_API int rg_score_set_find_tie(const rg_score_set* set, size_t* first, size_t* second);

/* ---- metrics --------------------------------------------------------------- */

typedef struct rg_threshold_stats {
  double threshold;
  size_t tp, fp, tn, fn;
  int has_tpr, has_fpr, has_precision;
  double tpr, fpr, precision;
  double firing_rate;
} rg_threshold_stats;

typedef struct rg_auprc_forms {
  double mean_precision;
  double bayes_form;
  double precision_residual;
  double bayes_residual;
} rg_auprc_forms;

RG_API rg_status rg_threshold_stats_at(const rg_score_set* set, double threshold, int inclusive,
                                       rg_threshold_stats* out);
RG_API rg_status rg_auroc(const rg_score_set* set, double* out);
RG_API rg_status rg_auprc(const rg_score_set* set, double* out);
RG_API rg_status rg_auroc_reparam(const rg_score_set* set, double* out);
RG_API rg_status rg_auprc_reparam(const rg_score_set* set, rg_auprc_forms* out);

RG_API rg_status rg_roc_curve(const rg_score_set* set, rg_curve** out);
RG_API rg_status rg_pr_curve(const rg_score_set* set, rg_curve** out);
RG_API size_t rg_curve_size(const rg_curve* curve);
RG_API rg_status rg_curve_point(const rg_curve* curve, size_t index, rg_threshold_stats* out);
RG_API void rg_curve_destroy(rg_curve* curve);

/* ---- per-group analysis ---------------------------------------------------- */

typedef struct rg_group_metrics {
  uint32_t group;
  size_t n;
  size_t num_positive;
  double prevalence;
  int has_auroc, has_auprc;
  double auroc, auprc;
} rg_group_metrics;

/* Writes up to `capacity` entries (ascending group id) and sets *count to the
 * number of groups. */
RG_API rg_status rg_per_group_metrics(const rg_score_set* set, rg_group_metrics* out,
                                      size_t capacity, size_t* count);
RG_API rg_status rg_signed_gap(const rg_score_set* set, rg_metric metric, double* out);

RG_API rg_status rg_spearman(const double* x, const double* y, size_t n, double* rho,
                             double* p_value);
RG_API rg_status rg_percentile(const double* values, size_t n, double q, double* out);

/* ---- mistakes -------------------------------------------------------------- */

typedef struct rg_mistake {
  size_t low_index; /* 0-based ascending position of the positive */
  size_t low_sample, high_sample;
  double low_score, high_score;
  int has_groups;
  uint32_t low_group, high_group;
  double delta_auroc, delta_auprc;
} rg_mistake;

RG_API rg_status rg_mistakes_enumerate(const rg_score_set* set, rg_mistake_list** out);
RG_API size_t rg_mistake_list_size(const rg_mistake_list* list);
RG_API rg_status rg_mistake_list_get(const rg_mistake_list* list, size_t index, rg_mistake* out);
RG_API void rg_mistake_list_destroy(rg_mistake_list* list);
RG_API rg_status rg_mistake_fix(const rg_score_set* set, const rg_mistake* mistake,
                                rg_score_set** out);
RG_API rg_status rg_best_mistake(const rg_score_set* set, rg_metric objective, rg_rng* rng,
                                 rg_mistake* out);

/* ---- synthetic data -------------------------------------------------------- */

typedef struct rg_synth_config {
  size_t n_total;
  double prevalence;
  double target_auroc;
  int rescale_to_prevalence;
} rg_synth_config;

typedef struct rg_group_config {
  uint32_t id;
  size_t n;
  double prevalence;
  double target_auroc;
} rg_group_config;

RG_API rg_status rg_sample_target_auroc(const rg_synth_config* cfg, rg_rng* rng,
                                        rg_score_set** out);
RG_API rg_status rg_build_group_dataset(const rg_group_config* groups, size_t count,
                                        int rescale_to_prevalence, rg_rng* rng,
                                        rg_score_set** out);
/* distribution: "constant:v", "uniform:lo:hi" or "beta:a:b". */
RG_API rg_status rg_sample_calibrated(size_t n, const char* distribution, rg_rng* rng,
                                      rg_score_set** out);
RG_API rg_status rg_rescale_to_prevalence(const rg_score_set* set, rg_score_set** out,
                                          double* factor);

/* ---- optimizer ------------------------------------------------------------- */

typedef struct rg_optimizer_config {
  rg_procedure procedure;
  rg_metric objective;
  size_t steps;
  size_t candidates_per_step;
  double delta_max;
  size_t gamma;
} rg_optimizer_config;

/* Default settings for a procedure (M1: 100 candidates; M3: 20
 * candidates, gamma 3, 25 steps; M1/M2: 50 steps). */
RG_API rg_status rg_optimizer_defaults(rg_procedure procedure, rg_metric objective,
                                       rg_optimizer_config* out);
/* One optimizer step. Returns RG_CONVERGED (and leaves *out NULL) when M2 has
 * no mistakes left. */
RG_API rg_status rg_optimizer_step(const rg_score_set* set, const rg_optimizer_config* cfg,
                                   rg_rng* rng, rg_score_set** out);
RG_API rg_status rg_optimizer_run(const rg_score_set* set, const rg_optimizer_config* cfg,
                                  rg_rng* rng, rg_trajectory** out);

typedef struct rg_step_summary {
  size_t step;
  double auroc, auprc;
  size_t num_groups;
  int has_mistake;
  rg_mistake mistake; /* valid when has_mistake */
} rg_step_summary;

RG_API size_t rg_trajectory_size(const rg_trajectory* t);
RG_API int rg_trajectory_converged(const rg_trajectory* t);
RG_API rg_status rg_trajectory_step(const rg_trajectory* t, size_t step, rg_step_summary* out);
/* Per-group metrics at a step; has_auroc/has_auprc flag undefined values. */
RG_API rg_status rg_trajectory_group(const rg_trajectory* t, size_t step, uint32_t group,
                                     rg_group_metrics* out);
RG_API rg_status rg_trajectory_final_scores(const rg_trajectory* t, rg_score_set** out);
RG_API void rg_trajectory_destroy(rg_trajectory* t);

/* ---- experiments driven by config files ------------------------------------ */

RG_API rg_status rg_experiment_load(const char* path, rg_experiment** out);
RG_API void rg_experiment_destroy(rg_experiment* exp);
RG_API size_t rg_experiment_num_seeds(const rg_experiment* exp);

/* Writes one score CSV per seed. scores_path overrides [output] scores when
 * non-NULL and may contain {seed}. *summary_json receives a JSON array with
 * per-seed file, joint AUROC/AUPRC and per-group metrics. */
RG_API rg_status rg_experiment_synth(const rg_experiment* exp, const char* scores_path,
                                     char** summary_json);

/* Runs every (arm, seed), writes the long-format trajectory CSV and the
 * percentile band CSV. Non-NULL paths override [output]. jobs = 0 picks the
 * hardware concurrency. *summary_json receives per-arm final statistics. */
RG_API rg_status rg_experiment_optimize(const rg_experiment* exp, const char* trajectory_path,
                                        const char* band_path, unsigned jobs,
                                        char** summary_json);

/* ---- sweep analysis -------------------------------------------------------- */

/* Reads a run-record CSV and returns the per-dataset sweep summaries (and the
 * meta correlation when >= 3 datasets are present) as JSON. */
RG_API rg_status rg_sweep_analyze(const char* path, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* RANKGAP_RANKGAP_H */
