#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "soslasso.h"

namespace {

sos_bench_config tiny_bench() {
  sos_bench_config cfg;
  REQUIRE(sos_bench_config_init(SOS_PROFILE_DESK, &cfg) == SOS_OK);
  cfg.p = 22;
  cfg.block = 6;
  cfg.shift = 4;
  cfg.tasks = 2;
  cfg.n = 20;
  cfg.k_active = 2;
  cfg.alpha = 0.5;
  cfg.sigma = 0.1;
  cfg.trials = 2;
  cfg.n_lambdas = 6;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sos_version()) == "0.1.0");
  CHECK(std::string(sos_status_name(SOS_OK)) == "ok");
  CHECK(std::string(sos_status_name(SOS_ERR_GEOMETRY_MISMATCH)) == "geometry_mismatch");
}

TEST_CASE("groups through the C surface") {
  sos_groups* gs = nullptr;
  REQUIRE(sos_groups_chain(14, 6, 4, &gs) == SOS_OK);
  CHECK(sos_groups_dim(gs) == 14);
  CHECK(sos_groups_count(gs) == 3);
  CHECK(sos_groups_max_size(gs) == 6);
  CHECK(sos_groups_total_duplicated(gs) == 18);
  std::vector<int32_t> members(6);
  REQUIRE(sos_groups_members(gs, 1, members.data()) == SOS_OK);
  CHECK(members[0] == 4);
  CHECK(members[5] == 9);
  sos_groups_free(gs);

  // invalid geometry maps to the right code and leaves a message
  gs = nullptr;
  CHECK(sos_groups_chain(15, 6, 4, &gs) == SOS_ERR_GEOMETRY_MISMATCH);
  CHECK(std::strlen(sos_last_error()) > 0);

  const int32_t raw_members[] = {0, 1, 1, 2};
  const int32_t offsets[] = {0, 2, 4};
  REQUIRE(sos_groups_create(3, 2, raw_members, offsets, &gs) == SOS_OK);
  CHECK(sos_groups_count(gs) == 2);
  sos_groups_free(gs);

  const int32_t dup_members[] = {1, 1};
  const int32_t dup_offsets[] = {0, 2};
  CHECK(sos_groups_create(3, 1, dup_members, dup_offsets, &gs) ==
        SOS_ERR_DUPLICATE_WITHIN_GROUP);

  REQUIRE(sos_groups_parse_json("{\"p\": 3, \"groups\": [[0,1],[1,2]]}", &gs) == SOS_OK);
  CHECK(sos_groups_count(gs) == 2);
  sos_groups_free(gs);

  REQUIRE(sos_groups_parse_json("{\"chain\": {\"p\": 2002, \"B\": 6, \"shift\": 4}}", &gs) ==
          SOS_OK);
  CHECK(sos_groups_count(gs) == 500);
  sos_groups_free(gs);

  CHECK(sos_groups_parse_json("not json", &gs) == SOS_ERR_PARSE);
}

TEST_CASE("penalty evaluation through the C surface") {
  sos_groups* gs = nullptr;
  const int32_t members[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const int32_t offsets[] = {0, 5, 10};
  REQUIRE(sos_groups_create(10, 2, members, offsets, &gs) == SOS_OK);
  double x[10] = {3, 0, 0, 4, 0, 0, 0, 0, 7, 0};
  double value = 0.0;
  REQUIRE(sos_eval_disjoint(gs, x, SOS_MODE_SOSLASSO, 1.0, &value) == SOS_OK);
  CHECK(value == doctest::Approx(26.0).epsilon(1e-12));
  REQUIRE(sos_eval_disjoint(gs, x, SOS_MODE_L1_ONLY, 1.0, &value) == SOS_OK);
  CHECK(value == doctest::Approx(14.0).epsilon(1e-12));
  sos_groups_free(gs);

  REQUIRE(sos_groups_parse_json("{\"p\": 3, \"groups\": [[0,1],[1,2]]}", &gs) == SOS_OK);
  double ox[3] = {1, 1, 0};
  double residual = 0.0;
  REQUIRE(sos_eval_overlapping(gs, ox, SOS_MODE_SOSLASSO, 1.0, 1e-6, &value, &residual) ==
          SOS_OK);
  CHECK(value == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-4));
  CHECK(residual <= 1e-6 * (1.0 + std::sqrt(2.0)));

  double u[3] = {0, 0, 4};
  REQUIRE(sos_dual_norm_bound(gs, u, &value) == SOS_OK);
  CHECK(value == doctest::Approx(2.0));
  sos_groups_free(gs);

  double v[3] = {1.5, -0.2, 0.4};
  double out[3];
  REQUIRE(sos_prox_group(v, 3, 0.0, 1.0, SOS_MODE_SOSLASSO, out) == SOS_OK);
  CHECK(out[0] == 1.5);
}

TEST_CASE("fit and path through the C surface") {
  sos_bench_config cfg = tiny_bench();
  sos_truth* truth = nullptr;
  REQUIRE(sos_gen_truth(&cfg, 9, &truth) == SOS_OK);
  CHECK(sos_truth_dim(truth) == cfg.p);
  CHECK(sos_truth_tasks(truth) == cfg.tasks);
  CHECK(sos_truth_active_count(truth) == cfg.k_active);

  sos_problem* problem = nullptr;
  REQUIRE(sos_gen_problem(truth, &cfg, 9, &problem) == SOS_OK);
  CHECK(sos_problem_tasks(problem) == cfg.tasks);
  CHECK(sos_problem_dim(problem) == cfg.p);
  CHECK(sos_problem_rows(problem, 0) == cfg.n);

  sos_groups* gs = nullptr;
  REQUIRE(sos_groups_chain(cfg.p, cfg.block, cfg.shift, &gs) == SOS_OK);

  sos_solver_options options;
  sos_solver_options_init(&options);
  CHECK(options.max_iters == 5000);
  CHECK(options.stationarity_tol == 1e-6);

  double lmax = 0.0;
  REQUIRE(sos_lambda_max(problem, gs, SOS_MODE_SOSLASSO, 1.0, &lmax) == SOS_OK);
  REQUIRE(lmax > 0.0);

  // a fit above the threshold is exactly zero
  sos_fit_result* fit = nullptr;
  REQUIRE(sos_fit(problem, gs, 1.01 * lmax, &options, nullptr, &fit) == SOS_OK);
  CHECK(sos_fit_converged(fit) == 1);
  const int32_t p = cfg.p, tasks = cfg.tasks;
  std::vector<double> coef(static_cast<std::size_t>(p) * tasks, 1.0);
  REQUIRE(sos_fit_coefficients(fit, coef.data()) == SOS_OK);
  for (double c : coef) CHECK(c == 0.0);
  CHECK(sos_fit_selected_count(fit) == 0);
  CHECK(sos_fit_trace_length(fit) >= 1);
  sos_fit_result_free(fit);

  // below the threshold something is selected
  REQUIRE(sos_fit(problem, gs, 0.3 * lmax, &options, nullptr, &fit) == SOS_OK);
  CHECK(sos_fit_converged(fit) == 1);
  CHECK(sos_fit_selected_count(fit) > 0);
  CHECK(sos_fit_stationarity(fit) <= options.stationarity_tol * 100.0);
  std::vector<int32_t> selected(static_cast<std::size_t>(sos_fit_selected_count(fit)));
  REQUIRE(sos_fit_selected_groups(fit, selected.data()) == SOS_OK);
  sos_fit_result_free(fit);

  // grid and path
  std::vector<double> grid(6);
  int32_t written = 0;
  REQUIRE(sos_lambda_grid(lmax, 6, 1e-2, grid.data(), &written) == SOS_OK);
  REQUIRE(written == 6);
  sos_path_result* path = nullptr;
  REQUIRE(sos_path(problem, gs, grid.data(), written, &options, &path) == SOS_OK);
  REQUIRE(sos_path_length(path) == 6);
  double lambda = 0, objective = 0;
  int32_t nnz = 0, selected_count = 0, converged = 0;
  REQUIRE(sos_path_point(path, 0, &lambda, &objective, &nnz, &selected_count, &converged) ==
          SOS_OK);
  CHECK(lambda == doctest::Approx(lmax));
  CHECK(nnz == 0);
  std::vector<double> point_coef(static_cast<std::size_t>(p) * tasks);
  REQUIRE(sos_path_coefficients(path, 5, point_coef.data()) == SOS_OK);
  sos_path_result_free(path);

  // cross validation smoke
  const double lambdas[] = {0.4 * lmax, 0.2 * lmax, 0.1 * lmax};
  double errors[3];
  double best = 0.0;
  REQUIRE(sos_cross_validate(problem, gs, lambdas, 3, 4, &options, 17, errors, &best) == SOS_OK);
  CHECK((best == lambdas[0] || best == lambdas[1] || best == lambdas[2]));

  double mse_value = 0.0;
  const double a[] = {1.0, 2.0};
  const double b[] = {2.0, 4.0};
  REQUIRE(sos_mse(a, b, 2, &mse_value) == SOS_OK);
  CHECK(mse_value == doctest::Approx(2.5));

  sos_groups_free(gs);
  sos_problem_free(problem);
  sos_truth_free(truth);
}

TEST_CASE("theory helpers through the C surface") {
  CHECK(sos_compatibility_bound(6, 1.0, 1) == doctest::Approx(1.0 + std::sqrt(6.0)));

  sos_bound_params params;
  params.groups = 1;
  params.max_group = 1;
  params.tasks = 1;
  params.n = 1;
  params.active = 1;
  params.alpha = 1.0;
  params.sigma = 1.0;
  params.sigma_m = 1.0;
  params.kappa = 1.0;
  double value = 0.0;
  REQUIRE(sos_lambda_rule(&params, &value) == SOS_OK);
  CHECK(value == doctest::Approx(0.5));
  REQUIRE(sos_theorem_bound(&params, &value) == SOS_OK);
  CHECK(value == doctest::Approx(9.0));
  params.kappa = 0.0;
  CHECK(sos_theorem_bound(&params, &value) == SOS_ERR_NONPOSITIVE_KAPPA);

  double empirical = 0, analytic = 0, se = 0;
  REQUIRE(sos_chi2_max_mc(2, 1, 2.0, 2000, 3, 1, &empirical, &analytic, &se) == SOS_OK);
  CHECK(empirical > 0.8);
  CHECK(empirical < 1.0);

  sos_check_report* report = nullptr;
  REQUIRE(sos_check_run("norm", 10, 1, 1, &report) == SOS_OK);
  CHECK(sos_check_passed(report) == 1);
  CHECK(std::string(sos_check_report_json(report)).find("\"suite\": \"norm\"") !=
        std::string::npos);
  sos_check_report_free(report);
  CHECK(sos_check_run("bogus", 10, 1, 1, &report) == SOS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("benchmark reports are byte identical across runs and threads") {
  const sos_bench_config cfg = tiny_bench();
  const double values[] = {0.05, 0.2};
  const int32_t methods[] = {SOS_METHOD_LASSO, SOS_METHOD_SOSLASSO};

  auto run = [&](int threads) {
    sos_bench_config local = cfg;
    local.threads = threads;
    sos_bench_report* report = nullptr;
    REQUIRE(sos_bench_run(&local, SOS_SWEEP_NOISE, values, 2, methods, 2, &report) == SOS_OK);
    std::pair<std::string, std::string> out{sos_bench_report_csv(report),
                                            sos_bench_report_summary_json(report)};
    sos_bench_report_free(report);
    return out;
  };

  const auto first = run(1);
  const auto second = run(1);
  const auto threaded = run(3);
  CHECK(first.first == second.first);
  CHECK(first.second == second.second);
  CHECK(first.first == threaded.first);
  CHECK(first.second == threaded.second);
  CHECK(first.first.rfind("sweep_value,method,trial,lambda_selected,mse\n", 0) == 0);
}

TEST_CASE("scaling study through the C surface") {
  sos_bench_config cfg = tiny_bench();
  cfg.n = 100;
  cfg.sigma = 0.001;
  sos_scaling_result* result = nullptr;
  const int32_t ns[] = {40, 120};
  REQUIRE(sos_scaling_study(&cfg, ns, 2, 3, 7, &result) == SOS_OK);
  REQUIRE(sos_scaling_rows(result) == 2);
  int32_t n = 0;
  double err = 0, bound = 0;
  REQUIRE(sos_scaling_row(result, 0, &n, &err, &bound) == SOS_OK);
  CHECK(n == 40);
  CHECK(err > 0.0);
  CHECK(sos_scaling_slope(result) < 0.0);
  sos_scaling_result_free(result);
}
