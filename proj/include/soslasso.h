/* C interface to the sparse overlapping sets lasso library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions that can fail return a sos_status; on failure sos_last_error()
 * holds a thread-local description. Buffers are caller-allocated; the size
 * contracts are stated next to each getter.
 */
#ifndef SOSLASSO_H
#define SOSLASSO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sos_status {
  SOS_OK = 0,
  SOS_ERR_INDEX_OUT_OF_RANGE,
  SOS_ERR_EMPTY_GROUP,
  SOS_ERR_DUPLICATE_WITHIN_GROUP,
  SOS_ERR_GEOMETRY_MISMATCH,
  SOS_ERR_DIMENSION_MISMATCH,
  SOS_ERR_OVERLAPPING_GROUPS,
  SOS_ERR_UNCOVERED_SUPPORT,
  SOS_ERR_NO_CONVERGENCE,
  SOS_ERR_BAD_LABELS,
  SOS_ERR_UNEQUAL_SAMPLE_SIZES,
  SOS_ERR_TOO_FEW_SAMPLES,
  SOS_ERR_SHAPE_MISMATCH,
  SOS_ERR_SINGULAR_RESTRICTION,
  SOS_ERR_NONPOSITIVE_KAPPA,
  SOS_ERR_GENERATOR_INFEASIBLE,
  SOS_ERR_INVALID_ARGUMENT,
  SOS_ERR_PARSE,
  SOS_ERR_IO,
  SOS_ERR_UNKNOWN
} sos_status;

const char* sos_version(void);
const char* sos_status_name(int status);
/* Thread-local message describing the most recent failure on this thread. */
const char* sos_last_error(void);

/* Penalty modes: the full penalty, the group term alone (latent overlapping
 * group lasso), or the l1 term alone (lasso). */
#define SOS_MODE_SOSLASSO 0
#define SOS_MODE_GROUP_ONLY 1
#define SOS_MODE_L1_ONLY 2

#define SOS_LOSS_SQUARED 0
#define SOS_LOSS_LOGISTIC 1

#define SOS_METHOD_LASSO 0
#define SOS_METHOD_GLASSO_LATENT 1
#define SOS_METHOD_SOSLASSO 2

#define SOS_SWEEP_NOISE 0
#define SOS_SWEEP_ALPHA 1

#define SOS_PROFILE_PAPER 0
#define SOS_PROFILE_DESK 1

#define SOS_STEP_FIXED 0
#define SOS_STEP_BACKTRACKING 1

/* ---------------------------------------------------------------- groups */

typedef struct sos_groups sos_groups;

/* Group g holds members[offsets[g] .. offsets[g+1]); offsets has n_groups+1
 * entries. Members may be unsorted; duplicates within a group are an error. */
sos_status sos_groups_create(int32_t p, int32_t n_groups, const int32_t* members,
                             const int32_t* offsets, sos_groups** out);
sos_status sos_groups_chain(int32_t p, int32_t block, int32_t shift, sos_groups** out);
/* Accepts {"p":int,"groups":[[int,...],...]} or {"chain":{"p":..,"B":..,"shift":..}}. */
sos_status sos_groups_parse_json(const char* text, sos_groups** out);
void sos_groups_free(sos_groups* gs);

int32_t sos_groups_dim(const sos_groups* gs);
int32_t sos_groups_count(const sos_groups* gs);
int32_t sos_groups_max_size(const sos_groups* gs);
int32_t sos_groups_size(const sos_groups* gs, int32_t g);
/* buffer must hold sos_groups_size(gs, g) entries. */
sos_status sos_groups_members(const sos_groups* gs, int32_t g, int32_t* buffer);
int64_t sos_groups_total_duplicated(const sos_groups* gs);

/* --------------------------------------------------------------- penalty */

/* Closed form for pairwise-disjoint groups covering the support of x. */
sos_status sos_eval_disjoint(const sos_groups* gs, const double* x, int mode, double alpha,
                             double* value);
/* Near-optimal decomposition value for overlapping groups; residual is the
 * feasibility gap of the returned decomposition. */
sos_status sos_eval_overlapping(const sos_groups* gs, const double* x, int mode, double alpha,
                                double tol, double* value, double* residual);
/* max over groups of ||u_G||_2 / 2. */
sos_status sos_dual_norm_bound(const sos_groups* gs, const double* u, double* value);
/* argmin_w 1/2||w - v||^2 + step (alpha ||w||_2 + ||w||_1), mode-adjusted. */
sos_status sos_prox_group(const double* v, int32_t len, double step, double alpha, int mode,
                          double* out);

/* -------------------------------------------------------------- problems */

typedef struct sos_problem sos_problem;

sos_status sos_problem_create(int loss_kind, sos_problem** out);
/* design is row-major n x p; logistic responses must be exactly +-1. */
sos_status sos_problem_add_task(sos_problem* problem, int32_t n, int32_t p,
                                const double* design_rowmajor, const double* response);
void sos_problem_free(sos_problem* problem);

int32_t sos_problem_tasks(const sos_problem* problem);
int32_t sos_problem_dim(const sos_problem* problem);
int32_t sos_problem_rows(const sos_problem* problem, int32_t task);
sos_status sos_problem_get_design(const sos_problem* problem, int32_t task,
                                  double* rowmajor_out);
sos_status sos_problem_get_response(const sos_problem* problem, int32_t task, double* out);

/* ---------------------------------------------------------------- solver */

typedef struct sos_solver_options {
  int32_t max_iters;
  double rel_obj_tol;
  double stationarity_tol;
  int32_t step_rule; /* SOS_STEP_* */
  int32_t restart;   /* nonzero enables adaptive restart */
  int32_t mode;      /* SOS_MODE_* */
  double alpha;      /* l2 weight of the penalty */
} sos_solver_options;

void sos_solver_options_init(sos_solver_options* options);

typedef struct sos_fit_result sos_fit_result;

/* warm_start may be NULL; otherwise it holds tasks * total_duplicated values. */
sos_status sos_fit(const sos_problem* problem, const sos_groups* gs, double lambda,
                   const sos_solver_options* options, const double* warm_start,
                   sos_fit_result** out);
void sos_fit_result_free(sos_fit_result* result);

int sos_fit_converged(const sos_fit_result* result);
int32_t sos_fit_iterations(const sos_fit_result* result);
double sos_fit_objective(const sos_fit_result* result);
double sos_fit_stationarity(const sos_fit_result* result);
double sos_fit_lambda(const sos_fit_result* result);
/* buffer holds p * tasks values, column-major (task columns contiguous). */
sos_status sos_fit_coefficients(const sos_fit_result* result, double* colmajor);
int32_t sos_fit_dup_dim(const sos_fit_result* result);
sos_status sos_fit_dup_solution(const sos_fit_result* result, double* out);
int32_t sos_fit_selected_count(const sos_fit_result* result);
sos_status sos_fit_selected_groups(const sos_fit_result* result, int32_t* out);
int32_t sos_fit_trace_length(const sos_fit_result* result);
sos_status sos_fit_trace(const sos_fit_result* result, double* out);

/* Smallest lambda making the zero vector stationary for the given penalty. */
sos_status sos_lambda_max(const sos_problem* problem, const sos_groups* gs, int mode,
                          double alpha, double* out);
/* count log-spaced values from lambda_max down to min_ratio * lambda_max;
 * writes at most count values and stores the actual count. */
sos_status sos_lambda_grid(double lambda_max, int32_t count, double min_ratio, double* out,
                           int32_t* written);

typedef struct sos_path_result sos_path_result;

sos_status sos_path(const sos_problem* problem, const sos_groups* gs, const double* lambdas,
                    int32_t count, const sos_solver_options* options, sos_path_result** out);
void sos_path_result_free(sos_path_result* result);
int32_t sos_path_length(const sos_path_result* result);
sos_status sos_path_point(const sos_path_result* result, int32_t index, double* lambda,
                          double* objective, int32_t* nnz, int32_t* selected_groups,
                          int32_t* converged);
sos_status sos_path_coefficients(const sos_path_result* result, int32_t index,
                                 double* colmajor);

/* mean_errors holds count values (mean held-out loss per lambda). */
sos_status sos_cross_validate(const sos_problem* problem, const sos_groups* gs,
                              const double* lambdas, int32_t count, int32_t folds,
                              const sos_solver_options* options, uint64_t seed,
                              double* mean_errors, double* best_lambda);

/* Mean squared difference over len entries. */
sos_status sos_mse(const double* a, const double* b, int64_t len, double* out);

/* ---------------------------------------------------------------- theory */

double sos_compatibility_bound(int32_t max_group, double alpha, int32_t active);

typedef struct sos_bound_params {
  int32_t groups;
  int32_t max_group;
  int32_t tasks;
  int32_t n;
  int32_t active;
  double alpha;
  double sigma;
  double sigma_m;
  double kappa;
} sos_bound_params;

sos_status sos_lambda_rule(const sos_bound_params* params, double* out);
sos_status sos_theorem_bound(const sos_bound_params* params, double* out);

/* Restricted curvature of the squared loss on a support given as coordinates
 * in [0, tasks * p); singular restrictions report kappa 0 with the flag set. */
sos_status sos_estimate_rsc(const sos_problem* problem, int32_t dim_per_task,
                            const int32_t* support, int32_t support_len, int32_t trials,
                            uint64_t seed, double* kappa, int32_t* singular);
sos_status sos_chi2_max_mc(int32_t m, int32_t d, double c, int32_t trials, uint64_t seed,
                           int32_t threads, double* empirical, double* analytic_lower,
                           double* std_error);
sos_status sos_max_group_singular(const sos_problem* problem, const sos_groups* gs,
                                  double* out);
sos_status sos_lipschitz_estimate(const sos_problem* problem, const sos_groups* gs,
                                  double* out);

typedef struct sos_check_report sos_check_report;

/* suite is one of: norm, decompose, dual, compat, chi2, lambda, theorem. */
sos_status sos_check_run(const char* suite, int32_t trials, uint64_t seed, int32_t threads,
                         sos_check_report** out);
void sos_check_report_free(sos_check_report* report);
int sos_check_passed(const sos_check_report* report);
/* Owned by the report handle; valid until the report is freed. */
const char* sos_check_report_json(const sos_check_report* report);

/* ------------------------------------------------------------- benchmark */

typedef struct sos_bench_config {
  int32_t p;
  int32_t block;
  int32_t shift;
  int32_t tasks;
  int32_t n;
  int32_t k_active;
  double alpha;
  double sigma;
  double design_variance; /* 0 means 1/n */
  double coeff_low;
  double coeff_high;
  int32_t n_lambdas;
  double lambda_min_ratio;
  int32_t trials;
  uint64_t seed;
  int32_t threads;
  sos_solver_options solver;
} sos_bench_config;

sos_status sos_bench_config_init(int profile, sos_bench_config* config);

typedef struct sos_truth sos_truth;

sos_status sos_gen_truth(const sos_bench_config* config, uint64_t seed, sos_truth** out);
void sos_truth_free(sos_truth* truth);
int32_t sos_truth_dim(const sos_truth* truth);
int32_t sos_truth_tasks(const sos_truth* truth);
sos_status sos_truth_matrix(const sos_truth* truth, double* colmajor);
int32_t sos_truth_active_count(const sos_truth* truth);
sos_status sos_truth_active_groups(const sos_truth* truth, int32_t* out);

sos_status sos_gen_problem(const sos_truth* truth, const sos_bench_config* config,
                           uint64_t seed, sos_problem** out);

typedef struct sos_bench_report sos_bench_report;

sos_status sos_bench_run(const sos_bench_config* config, int sweep_kind, const double* values,
                         int32_t n_values, const int32_t* methods, int32_t n_methods,
                         sos_bench_report** out);
void sos_bench_report_free(sos_bench_report* report);
/* Strings owned by the report handle. */
const char* sos_bench_report_csv(const sos_bench_report* report);
const char* sos_bench_report_summary_json(const sos_bench_report* report);

typedef struct sos_scaling_result sos_scaling_result;

sos_status sos_scaling_study(const sos_bench_config* config, const int32_t* n_list,
                             int32_t count, int32_t trials, uint64_t seed,
                             sos_scaling_result** out);
void sos_scaling_result_free(sos_scaling_result* result);
int32_t sos_scaling_rows(const sos_scaling_result* result);
sos_status sos_scaling_row(const sos_scaling_result* result, int32_t index, int32_t* n,
                           double* mean_sq_error, double* mean_bound);
double sos_scaling_slope(const sos_scaling_result* result);

#ifdef __cplusplus
}
#endif

#endif /* SOSLASSO_H */
