#include "soslasso.h"

#include <cstring>
#include <json.hpp>
#include <string>
#include <vector>

#include "soslasso/bench.hpp"
#include "soslasso/theory.hpp"

using soslasso::BenchConfig;
using soslasso::BenchReport;
using soslasso::Error;
using soslasso::ErrorCode;
using soslasso::FitResult;
using soslasso::GroupSet;
using soslasso::LiftedSpace;
using soslasso::LossKind;
using soslasso::Method;
using soslasso::MultitaskProblem;
using soslasso::PenaltyConfig;
using soslasso::PenaltyMode;
using soslasso::ScalingResult;
using soslasso::SolverConfig;
using soslasso::StepRule;
using soslasso::SuiteReport;
using soslasso::SweepKind;
using soslasso::TruthDraw;

struct sos_groups {
  GroupSet gs;
};
struct sos_problem {
  MultitaskProblem problem;
};
struct sos_fit_result {
  FitResult result;
};
struct sos_path_result {
  std::vector<FitResult> fits;
};
struct sos_check_report {
  SuiteReport report;
  std::string json;
};
struct sos_truth {
  TruthDraw draw;
};
struct sos_bench_report {
  std::string csv;
  std::string summary;
};
struct sos_scaling_result {
  ScalingResult result;
};

namespace {

thread_local std::string t_last_error;

sos_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::none: return SOS_OK;
    case ErrorCode::index_out_of_range: return SOS_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::empty_group: return SOS_ERR_EMPTY_GROUP;
    case ErrorCode::duplicate_within_group: return SOS_ERR_DUPLICATE_WITHIN_GROUP;
    case ErrorCode::geometry_mismatch: return SOS_ERR_GEOMETRY_MISMATCH;
    case ErrorCode::dimension_mismatch: return SOS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::overlapping_groups: return SOS_ERR_OVERLAPPING_GROUPS;
    case ErrorCode::uncovered_support: return SOS_ERR_UNCOVERED_SUPPORT;
    case ErrorCode::no_convergence: return SOS_ERR_NO_CONVERGENCE;
    case ErrorCode::bad_labels: return SOS_ERR_BAD_LABELS;
    case ErrorCode::unequal_sample_sizes: return SOS_ERR_UNEQUAL_SAMPLE_SIZES;
    case ErrorCode::too_few_samples: return SOS_ERR_TOO_FEW_SAMPLES;
    case ErrorCode::shape_mismatch: return SOS_ERR_SHAPE_MISMATCH;
    case ErrorCode::singular_restriction: return SOS_ERR_SINGULAR_RESTRICTION;
    case ErrorCode::nonpositive_kappa: return SOS_ERR_NONPOSITIVE_KAPPA;
    case ErrorCode::generator_infeasible: return SOS_ERR_GENERATOR_INFEASIBLE;
    case ErrorCode::invalid_argument: return SOS_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse_error: return SOS_ERR_PARSE;
    case ErrorCode::io_error: return SOS_ERR_IO;
  }
  return SOS_ERR_UNKNOWN;
}

template <typename Body>
sos_status guarded(Body&& body) {
  try {
    body();
    return SOS_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SOS_ERR_UNKNOWN;
  } catch (...) {
    t_last_error = "unknown failure";
    return SOS_ERR_UNKNOWN;
  }
}

sos_status invalid(const char* message) {
  t_last_error = message;
  return SOS_ERR_INVALID_ARGUMENT;
}

PenaltyMode to_mode(int mode) {
  switch (mode) {
    case SOS_MODE_SOSLASSO: return PenaltyMode::soslasso;
    case SOS_MODE_GROUP_ONLY: return PenaltyMode::group_only;
    case SOS_MODE_L1_ONLY: return PenaltyMode::l1_only;
  }
  throw Error(ErrorCode::invalid_argument, "unknown penalty mode");
}

PenaltyConfig to_penalty(int mode, double alpha) {
  PenaltyConfig cfg;
  cfg.mode = to_mode(mode);
  cfg.alpha = alpha;
  return cfg;
}

SolverConfig to_solver(const sos_solver_options* options) {
  SolverConfig cfg;
  if (!options) return cfg;
  cfg.max_iters = options->max_iters;
  cfg.rel_obj_tol = options->rel_obj_tol;
  cfg.stationarity_tol = options->stationarity_tol;
  cfg.step_rule = options->step_rule == SOS_STEP_BACKTRACKING ? StepRule::backtracking
                                                              : StepRule::fixed_lipschitz;
  cfg.restart = options->restart != 0;
  cfg.penalty = to_penalty(options->mode, options->alpha);
  return cfg;
}

BenchConfig to_bench(const sos_bench_config* config) {
  if (!config) throw Error(ErrorCode::invalid_argument, "null benchmark config");
  BenchConfig cfg;
  cfg.p = config->p;
  cfg.block = config->block;
  cfg.shift = config->shift;
  cfg.tasks = config->tasks;
  cfg.n = config->n;
  cfg.k_active = config->k_active;
  cfg.alpha = config->alpha;
  cfg.sigma = config->sigma;
  cfg.design_variance = config->design_variance;
  cfg.coeff_low = config->coeff_low;
  cfg.coeff_high = config->coeff_high;
  cfg.n_lambdas = config->n_lambdas;
  cfg.lambda_min_ratio = config->lambda_min_ratio;
  cfg.trials = config->trials;
  cfg.seed = config->seed;
  cfg.threads = config->threads;
  cfg.solver = to_solver(&config->solver);
  return cfg;
}

LiftedSpace lifted_for(const sos_problem* problem, const sos_groups* gs) {
  return soslasso::make_lifted(gs->gs, problem->problem.tasks());
}

}  // namespace

extern "C" {

const char* sos_version(void) { return "0.1.0"; }

const char* sos_status_name(int status) {
  switch (status) {
    case SOS_OK: return "ok";
    case SOS_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
    case SOS_ERR_EMPTY_GROUP: return "empty_group";
    case SOS_ERR_DUPLICATE_WITHIN_GROUP: return "duplicate_within_group";
    case SOS_ERR_GEOMETRY_MISMATCH: return "geometry_mismatch";
    case SOS_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case SOS_ERR_OVERLAPPING_GROUPS: return "overlapping_groups";
    case SOS_ERR_UNCOVERED_SUPPORT: return "uncovered_support";
    case SOS_ERR_NO_CONVERGENCE: return "no_convergence";
    case SOS_ERR_BAD_LABELS: return "bad_labels";
    case SOS_ERR_UNEQUAL_SAMPLE_SIZES: return "unequal_sample_sizes";
    case SOS_ERR_TOO_FEW_SAMPLES: return "too_few_samples";
    case SOS_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case SOS_ERR_SINGULAR_RESTRICTION: return "singular_restriction";
    case SOS_ERR_NONPOSITIVE_KAPPA: return "nonpositive_kappa";
    case SOS_ERR_GENERATOR_INFEASIBLE: return "generator_infeasible";
    case SOS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SOS_ERR_PARSE: return "parse_error";
    case SOS_ERR_IO: return "io_error";
  }
  return "unknown";
}

const char* sos_last_error(void) { return t_last_error.c_str(); }

/* groups ------------------------------------------------------------------ */

sos_status sos_groups_create(int32_t p, int32_t n_groups, const int32_t* members,
                             const int32_t* offsets, sos_groups** out) {
  if (!members || !offsets || !out) return invalid("sos_groups_create: null argument");
  return guarded([&] {
    std::vector<std::vector<int>> raw(static_cast<std::size_t>(n_groups));
    for (int32_t g = 0; g < n_groups; ++g)
      raw[static_cast<std::size_t>(g)].assign(members + offsets[g], members + offsets[g + 1]);
    *out = new sos_groups{GroupSet(std::move(raw), p)};
  });
}

sos_status sos_groups_chain(int32_t p, int32_t block, int32_t shift, sos_groups** out) {
  if (!out) return invalid("sos_groups_chain: null output");
  return guarded([&] { *out = new sos_groups{GroupSet::chain(p, block, shift)}; });
}

sos_status sos_groups_parse_json(const char* text, sos_groups** out) {
  if (!text || !out) return invalid("sos_groups_parse_json: null argument");
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::parse_error, std::string("groups json: ") + e.what());
    }
    if (doc.contains("chain")) {
      const auto& chain = doc.at("chain");
      *out = new sos_groups{GroupSet::chain(chain.at("p").get<int>(), chain.at("B").get<int>(),
                                            chain.at("shift").get<int>())};
      return;
    }
    if (!doc.contains("p") || !doc.contains("groups"))
      throw Error(ErrorCode::parse_error, "groups json: expected p and groups, or chain");
    std::vector<std::vector<int>> raw;
    for (const auto& group : doc.at("groups")) raw.push_back(group.get<std::vector<int>>());
    *out = new sos_groups{GroupSet(std::move(raw), doc.at("p").get<int>())};
  });
}

void sos_groups_free(sos_groups* gs) { delete gs; }

int32_t sos_groups_dim(const sos_groups* gs) { return gs ? gs->gs.dim() : 0; }
int32_t sos_groups_count(const sos_groups* gs) { return gs ? gs->gs.count() : 0; }
int32_t sos_groups_max_size(const sos_groups* gs) { return gs ? gs->gs.max_size() : 0; }

int32_t sos_groups_size(const sos_groups* gs, int32_t g) {
  if (!gs || g < 0 || g >= gs->gs.count()) return 0;
  return static_cast<int32_t>(gs->gs.group(g).size());
}

sos_status sos_groups_members(const sos_groups* gs, int32_t g, int32_t* buffer) {
  if (!gs || !buffer) return invalid("sos_groups_members: null argument");
  if (g < 0 || g >= gs->gs.count()) return invalid("sos_groups_members: group out of range");
  const auto& members = gs->gs.group(g);
  std::copy(members.begin(), members.end(), buffer);
  return SOS_OK;
}

int64_t sos_groups_total_duplicated(const sos_groups* gs) {
  return gs ? gs->gs.total_duplicated() : 0;
}

/* penalty ----------------------------------------------------------------- */

sos_status sos_eval_disjoint(const sos_groups* gs, const double* x, int mode, double alpha,
                             double* value) {
  if (!gs || !x || !value) return invalid("sos_eval_disjoint: null argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> vx(x, gs->gs.dim());
    *value = soslasso::eval_disjoint(vx, gs->gs, to_penalty(mode, alpha));
  });
}

sos_status sos_eval_overlapping(const sos_groups* gs, const double* x, int mode, double alpha,
                                double tol, double* value, double* residual) {
  if (!gs || !x || !value) return invalid("sos_eval_overlapping: null argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> vx(x, gs->gs.dim());
    const auto dec = soslasso::eval_overlapping(vx, gs->gs, to_penalty(mode, alpha), tol);
    *value = dec.value;
    if (residual) *residual = dec.residual;
  });
}

sos_status sos_dual_norm_bound(const sos_groups* gs, const double* u, double* value) {
  if (!gs || !u || !value) return invalid("sos_dual_norm_bound: null argument");
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> vu(u, gs->gs.dim());
    *value = soslasso::dual_norm_bound(vu, gs->gs);
  });
}

sos_status sos_prox_group(const double* v, int32_t len, double step, double alpha, int mode,
                          double* out) {
  if (!v || !out || len < 0) return invalid("sos_prox_group: bad argument");
  return guarded([&] { soslasso::prox_group(v, len, step, alpha, to_mode(mode), out); });
}

/* problems ---------------------------------------------------------------- */

sos_status sos_problem_create(int loss_kind, sos_problem** out) {
  if (!out) return invalid("sos_problem_create: null output");
  if (loss_kind != SOS_LOSS_SQUARED && loss_kind != SOS_LOSS_LOGISTIC)
    return invalid("sos_problem_create: unknown loss kind");
  *out = new sos_problem;
  (*out)->problem.loss = loss_kind == SOS_LOSS_SQUARED ? LossKind::squared : LossKind::logistic;
  return SOS_OK;
}

sos_status sos_problem_add_task(sos_problem* problem, int32_t n, int32_t p,
                                const double* design_rowmajor, const double* response) {
  if (!problem || !design_rowmajor || !response)
    return invalid("sos_problem_add_task: null argument");
  return guarded([&] {
    Eigen::MatrixXd design(n, p);
    for (int32_t r = 0; r < n; ++r)
      for (int32_t c = 0; c < p; ++c) design(r, c) = design_rowmajor[r * p + c];
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(response, n);
    problem->problem.add_task(std::move(design), std::move(y));
  });
}

void sos_problem_free(sos_problem* problem) { delete problem; }

int32_t sos_problem_tasks(const sos_problem* problem) {
  return problem ? problem->problem.tasks() : 0;
}
int32_t sos_problem_dim(const sos_problem* problem) {
  return problem ? problem->problem.dim() : 0;
}
int32_t sos_problem_rows(const sos_problem* problem, int32_t task) {
  if (!problem || task < 0 || task >= problem->problem.tasks()) return 0;
  return problem->problem.rows(task);
}

sos_status sos_problem_get_design(const sos_problem* problem, int32_t task,
                                  double* rowmajor_out) {
  if (!problem || !rowmajor_out) return invalid("sos_problem_get_design: null argument");
  if (task < 0 || task >= problem->problem.tasks())
    return invalid("sos_problem_get_design: task out of range");
  const auto& design = problem->problem.designs[static_cast<std::size_t>(task)];
  for (int r = 0; r < design.rows(); ++r)
    for (int c = 0; c < design.cols(); ++c) rowmajor_out[r * design.cols() + c] = design(r, c);
  return SOS_OK;
}

sos_status sos_problem_get_response(const sos_problem* problem, int32_t task, double* out) {
  if (!problem || !out) return invalid("sos_problem_get_response: null argument");
  if (task < 0 || task >= problem->problem.tasks())
    return invalid("sos_problem_get_response: task out of range");
  const auto& response = problem->problem.responses[static_cast<std::size_t>(task)];
  std::memcpy(out, response.data(), sizeof(double) * static_cast<std::size_t>(response.size()));
  return SOS_OK;
}

/* solver ------------------------------------------------------------------ */

void sos_solver_options_init(sos_solver_options* options) {
  if (!options) return;
  const SolverConfig defaults;
  options->max_iters = defaults.max_iters;
  options->rel_obj_tol = defaults.rel_obj_tol;
  options->stationarity_tol = defaults.stationarity_tol;
  options->step_rule = SOS_STEP_FIXED;
  options->restart = 1;
  options->mode = SOS_MODE_SOSLASSO;
  options->alpha = 1.0;
}

sos_status sos_fit(const sos_problem* problem, const sos_groups* gs, double lambda,
                   const sos_solver_options* options, const double* warm_start,
                   sos_fit_result** out) {
  if (!problem || !gs || !out) return invalid("sos_fit: null argument");
  return guarded([&] {
    const LiftedSpace space = lifted_for(problem, gs);
    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    if (warm_start) {
      warm = Eigen::Map<const Eigen::VectorXd>(warm_start, space.dup_dim());
      warm_ptr = &warm;
    }
    *out = new sos_fit_result{
        soslasso::fit(problem->problem, space, lambda, to_solver(options), warm_ptr)};
  });
}

void sos_fit_result_free(sos_fit_result* result) { delete result; }

int sos_fit_converged(const sos_fit_result* result) {
  return result && result->result.converged ? 1 : 0;
}
int32_t sos_fit_iterations(const sos_fit_result* result) {
  return result ? result->result.iterations : 0;
}
double sos_fit_objective(const sos_fit_result* result) {
  return result ? result->result.objective() : 0.0;
}
double sos_fit_stationarity(const sos_fit_result* result) {
  return result ? result->result.stationarity_residual : 0.0;
}
double sos_fit_lambda(const sos_fit_result* result) {
  return result ? result->result.lambda : 0.0;
}

sos_status sos_fit_coefficients(const sos_fit_result* result, double* colmajor) {
  if (!result || !colmajor) return invalid("sos_fit_coefficients: null argument");
  std::memcpy(colmajor, result->result.x_hat.data(),
              sizeof(double) * static_cast<std::size_t>(result->result.x_hat.size()));
  return SOS_OK;
}

int32_t sos_fit_dup_dim(const sos_fit_result* result) {
  return result ? static_cast<int32_t>(result->result.w_dup.size()) : 0;
}

sos_status sos_fit_dup_solution(const sos_fit_result* result, double* out) {
  if (!result || !out) return invalid("sos_fit_dup_solution: null argument");
  std::memcpy(out, result->result.w_dup.data(),
              sizeof(double) * static_cast<std::size_t>(result->result.w_dup.size()));
  return SOS_OK;
}

int32_t sos_fit_selected_count(const sos_fit_result* result) {
  return result ? static_cast<int32_t>(result->result.selected_groups.size()) : 0;
}

sos_status sos_fit_selected_groups(const sos_fit_result* result, int32_t* out) {
  if (!result || !out) return invalid("sos_fit_selected_groups: null argument");
  std::copy(result->result.selected_groups.begin(), result->result.selected_groups.end(), out);
  return SOS_OK;
}

int32_t sos_fit_trace_length(const sos_fit_result* result) {
  return result ? static_cast<int32_t>(result->result.objective_trace.size()) : 0;
}

sos_status sos_fit_trace(const sos_fit_result* result, double* out) {
  if (!result || !out) return invalid("sos_fit_trace: null argument");
  std::copy(result->result.objective_trace.begin(), result->result.objective_trace.end(), out);
  return SOS_OK;
}

sos_status sos_lambda_max(const sos_problem* problem, const sos_groups* gs, int mode,
                          double alpha, double* out) {
  if (!problem || !gs || !out) return invalid("sos_lambda_max: null argument");
  return guarded([&] {
    const LiftedSpace space = lifted_for(problem, gs);
    *out = soslasso::lambda_max(problem->problem, space, to_penalty(mode, alpha));
  });
}

sos_status sos_lambda_grid(double lambda_max, int32_t count, double min_ratio, double* out,
                           int32_t* written) {
  if (!out) return invalid("sos_lambda_grid: null output");
  return guarded([&] {
    const auto grid = soslasso::lambda_grid(lambda_max, count, min_ratio);
    std::copy(grid.begin(), grid.end(), out);
    if (written) *written = static_cast<int32_t>(grid.size());
  });
}

sos_status sos_path(const sos_problem* problem, const sos_groups* gs, const double* lambdas,
                    int32_t count, const sos_solver_options* options, sos_path_result** out) {
  if (!problem || !gs || !lambdas || !out) return invalid("sos_path: null argument");
  return guarded([&] {
    const LiftedSpace space = lifted_for(problem, gs);
    const std::vector<double> grid(lambdas, lambdas + count);
    *out =
        new sos_path_result{soslasso::reg_path(problem->problem, space, grid, to_solver(options))};
  });
}

void sos_path_result_free(sos_path_result* result) { delete result; }

int32_t sos_path_length(const sos_path_result* result) {
  return result ? static_cast<int32_t>(result->fits.size()) : 0;
}

sos_status sos_path_point(const sos_path_result* result, int32_t index, double* lambda,
                          double* objective, int32_t* nnz, int32_t* selected_groups,
                          int32_t* converged) {
  if (!result) return invalid("sos_path_point: null result");
  if (index < 0 || index >= static_cast<int32_t>(result->fits.size()))
    return invalid("sos_path_point: index out of range");
  const FitResult& fit = result->fits[static_cast<std::size_t>(index)];
  if (lambda) *lambda = fit.lambda;
  if (objective) *objective = fit.objective_trace.empty() ? 0.0 : fit.objective();
  if (nnz) {
    int32_t count = 0;
    for (int i = 0; i < fit.x_hat.size(); ++i)
      if (fit.x_hat.data()[i] != 0.0) ++count;
    *nnz = count;
  }
  if (selected_groups) *selected_groups = static_cast<int32_t>(fit.selected_groups.size());
  if (converged) *converged = fit.converged ? 1 : 0;
  return SOS_OK;
}

sos_status sos_path_coefficients(const sos_path_result* result, int32_t index,
                                 double* colmajor) {
  if (!result || !colmajor) return invalid("sos_path_coefficients: null argument");
  if (index < 0 || index >= static_cast<int32_t>(result->fits.size()))
    return invalid("sos_path_coefficients: index out of range");
  const auto& x_hat = result->fits[static_cast<std::size_t>(index)].x_hat;
  std::memcpy(colmajor, x_hat.data(), sizeof(double) * static_cast<std::size_t>(x_hat.size()));
  return SOS_OK;
}

sos_status sos_cross_validate(const sos_problem* problem, const sos_groups* gs,
                              const double* lambdas, int32_t count, int32_t folds,
                              const sos_solver_options* options, uint64_t seed,
                              double* mean_errors, double* best_lambda) {
  if (!problem || !gs || !lambdas) return invalid("sos_cross_validate: null argument");
  return guarded([&] {
    const std::vector<double> grid(lambdas, lambdas + count);
    const auto cv =
        soslasso::cross_validate(problem->problem, gs->gs, grid, folds, to_solver(options), seed);
    if (mean_errors)
      for (std::size_t i = 0; i < cv.cv_table.size(); ++i) mean_errors[i] = cv.cv_table[i].second;
    if (best_lambda) *best_lambda = cv.best_lambda;
  });
}

sos_status sos_mse(const double* a, const double* b, int64_t len, double* out) {
  if (!a || !b || !out || len <= 0) return invalid("sos_mse: bad argument");
  double sum = 0.0;
  for (int64_t i = 0; i < len; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  *out = sum / static_cast<double>(len);
  return SOS_OK;
}

/* theory ------------------------------------------------------------------ */

double sos_compatibility_bound(int32_t max_group, double alpha, int32_t active) {
  try {
    return soslasso::compatibility_bound(max_group, alpha, active);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return -1.0;
  }
}

static soslasso::BoundParams to_bound_params(const sos_bound_params* params) {
  if (!params) throw Error(ErrorCode::invalid_argument, "null bound params");
  soslasso::BoundParams out;
  out.groups = params->groups;
  out.max_group = params->max_group;
  out.tasks = params->tasks;
  out.n = params->n;
  out.active = params->active;
  out.alpha = params->alpha;
  out.sigma = params->sigma;
  out.sigma_m = params->sigma_m;
  out.kappa = params->kappa;
  return out;
}

sos_status sos_lambda_rule(const sos_bound_params* params, double* out) {
  if (!out) return invalid("sos_lambda_rule: null output");
  return guarded([&] { *out = soslasso::lambda_rule(to_bound_params(params)); });
}

sos_status sos_theorem_bound(const sos_bound_params* params, double* out) {
  if (!out) return invalid("sos_theorem_bound: null output");
  return guarded([&] { *out = soslasso::theorem_bound(to_bound_params(params)); });
}

sos_status sos_estimate_rsc(const sos_problem* problem, int32_t dim_per_task,
                            const int32_t* support, int32_t support_len, int32_t trials,
                            uint64_t seed, double* kappa, int32_t* singular) {
  if (!problem || !kappa) return invalid("sos_estimate_rsc: null argument");
  return guarded([&] {
    std::vector<int> coords;
    if (support) coords.assign(support, support + support_len);
    const auto rsc = soslasso::estimate_rsc(problem->problem, dim_per_task, coords, trials, seed);
    *kappa = rsc.kappa;
    if (singular) *singular = rsc.singular ? 1 : 0;
  });
}

sos_status sos_chi2_max_mc(int32_t m, int32_t d, double c, int32_t trials, uint64_t seed,
                           int32_t threads, double* empirical, double* analytic_lower,
                           double* std_error) {
  if (!empirical) return invalid("sos_chi2_max_mc: null output");
  return guarded([&] {
    const auto res = soslasso::chi2_max_mc(m, d, c, trials, seed, threads);
    *empirical = res.empirical;
    if (analytic_lower) *analytic_lower = res.analytic_lower;
    if (std_error) *std_error = res.std_error;
  });
}

sos_status sos_max_group_singular(const sos_problem* problem, const sos_groups* gs,
                                  double* out) {
  if (!problem || !gs || !out) return invalid("sos_max_group_singular: null argument");
  return guarded([&] { *out = soslasso::max_group_singular(problem->problem, gs->gs); });
}

sos_status sos_lipschitz_estimate(const sos_problem* problem, const sos_groups* gs,
                                  double* out) {
  if (!problem || !gs || !out) return invalid("sos_lipschitz_estimate: null argument");
  return guarded([&] { *out = soslasso::lipschitz_estimate(problem->problem, gs->gs); });
}

sos_status sos_check_run(const char* suite, int32_t trials, uint64_t seed, int32_t threads,
                         sos_check_report** out) {
  if (!suite || !out) return invalid("sos_check_run: null argument");
  return guarded([&] {
    auto* report = new sos_check_report{soslasso::run_suite(suite, trials, seed, threads), {}};
    report->json = report->report.to_json();
    *out = report;
  });
}

void sos_check_report_free(sos_check_report* report) { delete report; }

int sos_check_passed(const sos_check_report* report) {
  return report && report->report.passed ? 1 : 0;
}

const char* sos_check_report_json(const sos_check_report* report) {
  return report ? report->json.c_str() : "";
}

/* benchmark --------------------------------------------------------------- */

sos_status sos_bench_config_init(int profile, sos_bench_config* config) {
  if (!config) return invalid("sos_bench_config_init: null config");
  const BenchConfig cfg =
      profile == SOS_PROFILE_DESK ? soslasso::desk_profile() : soslasso::paper_profile();
  config->p = cfg.p;
  config->block = cfg.block;
  config->shift = cfg.shift;
  config->tasks = cfg.tasks;
  config->n = cfg.n;
  config->k_active = cfg.k_active;
  config->alpha = cfg.alpha;
  config->sigma = cfg.sigma;
  config->design_variance = cfg.design_variance;
  config->coeff_low = cfg.coeff_low;
  config->coeff_high = cfg.coeff_high;
  config->n_lambdas = cfg.n_lambdas;
  config->lambda_min_ratio = cfg.lambda_min_ratio;
  config->trials = cfg.trials;
  config->seed = cfg.seed;
  config->threads = cfg.threads;
  sos_solver_options_init(&config->solver);
  return SOS_OK;
}

sos_status sos_gen_truth(const sos_bench_config* config, uint64_t seed, sos_truth** out) {
  if (!out) return invalid("sos_gen_truth: null output");
  return guarded([&] { *out = new sos_truth{soslasso::gen_truth(to_bench(config), seed)}; });
}

void sos_truth_free(sos_truth* truth) { delete truth; }

int32_t sos_truth_dim(const sos_truth* truth) {
  return truth ? static_cast<int32_t>(truth->draw.truth.rows()) : 0;
}
int32_t sos_truth_tasks(const sos_truth* truth) {
  return truth ? static_cast<int32_t>(truth->draw.truth.cols()) : 0;
}

sos_status sos_truth_matrix(const sos_truth* truth, double* colmajor) {
  if (!truth || !colmajor) return invalid("sos_truth_matrix: null argument");
  std::memcpy(colmajor, truth->draw.truth.data(),
              sizeof(double) * static_cast<std::size_t>(truth->draw.truth.size()));
  return SOS_OK;
}

int32_t sos_truth_active_count(const sos_truth* truth) {
  return truth ? static_cast<int32_t>(truth->draw.active_groups.size()) : 0;
}

sos_status sos_truth_active_groups(const sos_truth* truth, int32_t* out) {
  if (!truth || !out) return invalid("sos_truth_active_groups: null argument");
  std::copy(truth->draw.active_groups.begin(), truth->draw.active_groups.end(), out);
  return SOS_OK;
}

sos_status sos_gen_problem(const sos_truth* truth, const sos_bench_config* config, uint64_t seed,
                           sos_problem** out) {
  if (!truth || !out) return invalid("sos_gen_problem: null argument");
  return guarded([&] {
    auto* problem = new sos_problem;
    problem->problem = soslasso::gen_measurements(truth->draw.truth, to_bench(config), seed);
    *out = problem;
  });
}

sos_status sos_bench_run(const sos_bench_config* config, int sweep_kind, const double* values,
                         int32_t n_values, const int32_t* methods, int32_t n_methods,
                         sos_bench_report** out) {
  if (!values || !methods || !out) return invalid("sos_bench_run: null argument");
  return guarded([&] {
    std::vector<Method> method_list;
    for (int32_t i = 0; i < n_methods; ++i) {
      switch (methods[i]) {
        case SOS_METHOD_LASSO: method_list.push_back(Method::lasso); break;
        case SOS_METHOD_GLASSO_LATENT: method_list.push_back(Method::glasso_latent); break;
        case SOS_METHOD_SOSLASSO: method_list.push_back(Method::soslasso); break;
        default: throw Error(ErrorCode::invalid_argument, "unknown benchmark method");
      }
    }
    const SweepKind sweep = sweep_kind == SOS_SWEEP_ALPHA ? SweepKind::alpha : SweepKind::noise;
    const BenchReport report = soslasso::run_sweep(
        to_bench(config), sweep, std::vector<double>(values, values + n_values), method_list);
    *out = new sos_bench_report{report.to_csv(), report.summary_json()};
  });
}

void sos_bench_report_free(sos_bench_report* report) { delete report; }

const char* sos_bench_report_csv(const sos_bench_report* report) {
  return report ? report->csv.c_str() : "";
}

const char* sos_bench_report_summary_json(const sos_bench_report* report) {
  return report ? report->summary.c_str() : "";
}

sos_status sos_scaling_study(const sos_bench_config* config, const int32_t* n_list,
                             int32_t count, int32_t trials, uint64_t seed,
                             sos_scaling_result** out) {
  if (!n_list || !out) return invalid("sos_scaling_study: null argument");
  return guarded([&] {
    const std::vector<int> ns(n_list, n_list + count);
    *out = new sos_scaling_result{soslasso::scaling_study(to_bench(config), ns, trials, seed)};
  });
}

void sos_scaling_result_free(sos_scaling_result* result) { delete result; }

int32_t sos_scaling_rows(const sos_scaling_result* result) {
  return result ? static_cast<int32_t>(result->result.rows.size()) : 0;
}

sos_status sos_scaling_row(const sos_scaling_result* result, int32_t index, int32_t* n,
                           double* mean_sq_error, double* mean_bound) {
  if (!result) return invalid("sos_scaling_row: null result");
  if (index < 0 || index >= static_cast<int32_t>(result->result.rows.size()))
    return invalid("sos_scaling_row: index out of range");
  const auto& row = result->result.rows[static_cast<std::size_t>(index)];
  if (n) *n = row.n;
  if (mean_sq_error) *mean_sq_error = row.mean_sq_error;
  if (mean_bound) *mean_bound = row.mean_bound;
  return SOS_OK;
}

double sos_scaling_slope(const sos_scaling_result* result) {
  return result ? result->result.slope : 0.0;
}

}  // extern "C"
