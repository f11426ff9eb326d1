#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "soslasso/rng.hpp"
#include "soslasso/solver.hpp"

using namespace soslasso;

namespace {

MultitaskProblem gaussian_problem(Rng& rng, int tasks, int n, int p, double sigma,
                                  const Eigen::MatrixXd* truth = nullptr) {
  MultitaskProblem problem;
  for (int t = 0; t < tasks; ++t) {
    Eigen::MatrixXd design(n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) design(r, c) = rng.normal() / std::sqrt(double(n));
    Eigen::VectorXd response =
        truth ? Eigen::VectorXd(design * truth->col(t)) : Eigen::VectorXd::Zero(n);
    for (int r = 0; r < n; ++r) response[r] += sigma * rng.normal();
    problem.add_task(std::move(design), std::move(response));
  }
  return problem;
}

GroupSet singletons(int p) {
  std::vector<std::vector<int>> raw;
  for (int j = 0; j < p; ++j) raw.push_back({j});
  return GroupSet(raw, p);
}

bool trace_monotone(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1] + 1e-12 * std::max(1.0, std::abs(trace[i - 1]))) return false;
  return true;
}

}  // namespace

TEST_CASE("unpenalized fit solves least squares") {
  Rng rng(201);
  const int n = 30, p = 6;
  std::vector<int> all(p);
  for (int j = 0; j < p; ++j) all[static_cast<std::size_t>(j)] = j;
  const GroupSet gs({all}, p);
  const LiftedSpace space = make_lifted(gs, 1);
  MultitaskProblem problem = gaussian_problem(rng, 1, n, p, 0.3);

  SolverConfig cfg;
  cfg.stationarity_tol = 1e-9;  // coefficient accuracy scales with the certificate
  const FitResult res = fit(problem, space, 0.0, cfg);
  CHECK(res.converged);
  const Eigen::VectorXd direct =
      oracles::normal_equations(problem.designs[0], problem.responses[0]);
  CHECK((res.x_hat.col(0) - direct).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(trace_monotone(res.objective_trace));
}

TEST_CASE("zero-solution threshold") {
  Rng rng(203);
  const GroupSet gs = GroupSet::chain(12, 4, 2);
  const LiftedSpace space = make_lifted(gs, 2);
  Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(12, 2);
  truth(3, 0) = 1.0;
  truth(4, 1) = -0.5;
  MultitaskProblem problem = gaussian_problem(rng, 2, 20, 12, 0.05, &truth);

  SolverConfig cfg;
  const double lmax = lambda_max(problem, space, cfg.penalty);
  REQUIRE(lmax > 0.0);

  const FitResult above = fit(problem, space, 1.01 * lmax, cfg);
  CHECK(above.converged);
  CHECK(above.x_hat.isZero(0.0));
  CHECK(above.w_dup.isZero(0.0));
  CHECK(above.selected_groups.empty());

  const FitResult at = fit(problem, space, lmax, cfg);
  CHECK(at.x_hat.isZero(0.0));

  const FitResult below = fit(problem, space, 0.5 * lmax, cfg);
  CHECK_FALSE(below.x_hat.isZero(0.0));

  // responses of zero make the threshold zero
  MultitaskProblem silent = gaussian_problem(rng, 2, 10, 12, 0.0);
  CHECK(lambda_max(silent, space, cfg.penalty) == 0.0);
}

TEST_CASE("lambda_max formula for a single covering group") {
  Rng rng(205);
  const int n = 15, p = 5;
  std::vector<int> all(p);
  for (int j = 0; j < p; ++j) all[static_cast<std::size_t>(j)] = j;
  const GroupSet gs({all}, p);
  const LiftedSpace space = make_lifted(gs, 1);
  MultitaskProblem problem = gaussian_problem(rng, 1, n, p, 0.5);

  PenaltyConfig penalty;  // soslasso, alpha 1
  const double got = lambda_max(problem, space, penalty);
  const Eigen::VectorXd correlation =
      problem.designs[0].transpose() * problem.responses[0] / double(n);
  CHECK(got == doctest::Approx(0.5 * correlation.norm()).epsilon(1e-12));
}

TEST_CASE("singleton groups match an independent lasso oracle") {
  Rng rng(207);
  const int n = 25, p = 20;
  const GroupSet gs = singletons(p);
  const LiftedSpace space = make_lifted(gs, 1);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(p, 1);
    for (int j = 0; j < 4; ++j) truth(rng.uniform_int(p), 0) = rng.uniform(-1.0, 1.0);
    MultitaskProblem problem = gaussian_problem(rng, 1, n, p, 0.1, &truth);
    const double lambda = 0.02 + 0.02 * rep;

    SolverConfig cfg;
    const FitResult res = fit(problem, space, lambda, cfg);
    REQUIRE(res.converged);
    const Eigen::VectorXd reference =
        oracles::lasso_ista(problem.designs[0], problem.responses[0], 2.0 * lambda);
    CHECK((res.x_hat.col(0) - reference).lpNorm<Eigen::Infinity>() <= 1e-5);
  }
}

TEST_CASE("group-only mode matches an independent latent group lasso") {
  Rng rng(209);
  const int n = 25, p = 20;
  const GroupSet gs = GroupSet::chain(p, 4, 2);
  const LiftedSpace space = make_lifted(gs, 1);
  const DuplicationMap dm = duplication_map(gs);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(p, 1);
    for (int j : gs.group(2 * rep % gs.count())) truth(j, 0) = rng.uniform(-1.0, 1.0);
    MultitaskProblem problem = gaussian_problem(rng, 1, n, p, 0.1, &truth);
    const double lambda = 0.02 + 0.015 * rep;

    SolverConfig cfg;
    cfg.penalty.mode = PenaltyMode::group_only;
    const FitResult res = fit(problem, space, lambda, cfg);
    REQUIRE(res.converged);

    const Eigen::MatrixXd lifted = lift_design(dm, problem.designs[0]);
    const Eigen::VectorXd w_ref =
        oracles::latent_group_ista(lifted, problem.responses[0], dm.offsets, lambda, 1.0);
    const Eigen::VectorXd x_ref = expand(dm, w_ref);
    CHECK((res.x_hat.col(0) - x_ref).lpNorm<Eigen::Infinity>() <= 1e-5);
  }
}

TEST_CASE("stationarity certificate and monotone traces") {
  Rng rng(211);
  const GroupSet gs = GroupSet::chain(18, 6, 4);
  const LiftedSpace space = make_lifted(gs, 2);
  for (int rep = 0; rep < 6; ++rep) {
    Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(18, 2);
    for (int j : gs.group(rng.uniform_int(gs.count())))
      for (int t = 0; t < 2; ++t)
        if (rng.uniform() < 0.5) truth(j, t) = rng.uniform(-1.0, 1.0);
    MultitaskProblem problem = gaussian_problem(rng, 2, 25, 18, 0.1, &truth);
    SolverConfig cfg;
    const double lmax = lambda_max(problem, space, cfg.penalty);
    const FitResult res = fit(problem, space, 0.15 * lmax, cfg);
    REQUIRE(res.converged);
    CHECK(res.stationarity_residual <= cfg.stationarity_tol * (1.0 + res.w_dup.norm()));
    CHECK(trace_monotone(res.objective_trace));
    CHECK(res.objective_trace.back() <= res.objective_trace.front());

    // the certificate agrees with a recomputation from scratch
    LossOracle oracle(problem, space);
    Eigen::VectorXd grad;
    oracle.value_grad(res.w_dup, grad);
    const double lip = lipschitz_estimate(problem, space.base);
    const Eigen::VectorXd step = res.w_dup - grad / lip;
    const Eigen::VectorXd prox = prox_full(space.dm, cfg.penalty, res.lambda / lip, step);
    CHECK((res.w_dup - prox).norm() <= cfg.stationarity_tol * (1.0 + res.w_dup.norm()));
  }
}

TEST_CASE("solution is invariant to group order") {
  Rng rng(213);
  const int p = 14;
  std::vector<std::vector<int>> raw = {{0, 1, 2, 3, 4, 5}, {4, 5, 6, 7, 8, 9},
                                       {8, 9, 10, 11, 12, 13}};
  const GroupSet forward(raw, p);
  std::vector<std::vector<int>> reversed(raw.rbegin(), raw.rend());
  const GroupSet backward(reversed, p);

  Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(p, 1);
  truth(5, 0) = 0.8;
  truth(6, 0) = -0.4;
  MultitaskProblem problem = gaussian_problem(rng, 1, 30, p, 0.05, &truth);

  SolverConfig cfg;
  const FitResult a = fit(problem, make_lifted(forward, 1), 0.01, cfg);
  const FitResult b = fit(problem, make_lifted(backward, 1), 0.01, cfg);
  CHECK((a.x_hat - b.x_hat).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("regularization path") {
  Rng rng(215);
  const GroupSet gs = GroupSet::chain(12, 4, 2);
  const LiftedSpace space = make_lifted(gs, 1);
  Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(12, 1);
  truth(2, 0) = 1.0;
  truth(3, 0) = -0.7;
  MultitaskProblem problem = gaussian_problem(rng, 1, 30, 12, 0.05, &truth);
  SolverConfig cfg;

  const double lmax = lambda_max(problem, space, cfg.penalty);
  const std::vector<double> lambdas = lambda_grid(lmax, 10, 1e-2);
  REQUIRE(lambdas.size() == 10);
  CHECK(lambdas.front() == doctest::Approx(lmax));
  CHECK(lambdas.back() == doctest::Approx(lmax * 1e-2).epsilon(1e-12));

  const auto path = reg_path(problem, space, lambdas, cfg);
  REQUIRE(path.size() == 10);
  CHECK(path.front().x_hat.isZero(0.0));
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(path[i].converged);
    CHECK(path[i].stationarity_residual <=
          cfg.stationarity_tol * (1.0 + path[i].w_dup.norm()));
    // the value function is nondecreasing in lambda at the solutions
    if (i > 0) CHECK(path[i].objective() <= path[i - 1].objective() + 1e-9);
  }

  // warm-started results agree with cold starts
  for (std::size_t i : {std::size_t{3}, std::size_t{7}}) {
    const FitResult cold = fit(problem, space, lambdas[i], cfg);
    CHECK(std::abs(cold.objective() - path[i].objective()) <=
          10.0 * cfg.rel_obj_tol * std::max(1.0, std::abs(cold.objective())));
  }

  // a single-point path is a single fit
  const auto tiny = reg_path(problem, space, {0.3 * lmax}, cfg);
  const FitResult lone = fit(problem, space, 0.3 * lmax, cfg);
  CHECK(tiny[0].objective() == doctest::Approx(lone.objective()).epsilon(1e-10));

  CHECK_THROWS_AS(reg_path(problem, space, {0.5, 0.5}, cfg), Error);
  CHECK_THROWS_AS(reg_path(problem, space, {0.1, 0.5}, cfg), Error);
}

TEST_CASE("clairvoyant selection") {
  Rng rng(217);
  const GroupSet gs = GroupSet::chain(12, 4, 2);
  const LiftedSpace space = make_lifted(gs, 2);
  Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(12, 2);
  for (int j : gs.group(1))
    for (int t = 0; t < 2; ++t) truth(j, t) = rng.uniform(-1.0, 1.0);
  MultitaskProblem problem = gaussian_problem(rng, 2, 25, 12, 0.1, &truth);
  SolverConfig cfg;

  const double lmax = lambda_max(problem, space, cfg.penalty);
  const auto lambdas = lambda_grid(lmax, 12, 1e-2);
  const auto choice = clairvoyant_select(problem, space, truth, lambdas, cfg);

  // exhaustive evaluation over the same grid
  double best = std::numeric_limits<double>::infinity();
  double best_lambda = lambdas.front();
  for (double lambda : lambdas) {
    const FitResult res = fit(problem, space, lambda, cfg);
    const double err = mse(res.x_hat, truth);
    if (err < best) {
      best = err;
      best_lambda = lambda;
    }
  }
  CHECK(choice.best_lambda == doctest::Approx(best_lambda));
  CHECK(mse(choice.best_fit.x_hat, truth) == doctest::Approx(best).epsilon(1e-6));

  // zero truth selects the largest lambda (the zero fit is exact)
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(12, 2);
  const auto zero_choice = clairvoyant_select(problem, space, zero, lambdas, cfg);
  CHECK(zero_choice.best_lambda == doctest::Approx(lambdas.front()));

  const auto single = clairvoyant_select(problem, space, truth, {0.2 * lmax}, cfg);
  CHECK(single.best_lambda == doctest::Approx(0.2 * lmax));
}

TEST_CASE("cross validation") {
  Rng rng(219);
  const GroupSet gs = GroupSet::chain(8, 4, 2);
  Eigen::MatrixXd truth = Eigen::MatrixXd::Zero(8, 1);
  truth(1, 0) = 1.2;
  MultitaskProblem problem = gaussian_problem(rng, 1, 6, 8, 0.05, &truth);
  SolverConfig cfg;
  const std::vector<double> lambdas = {0.1, 0.05, 0.01};

  // leave-one-out runs and produces one row per lambda
  const auto loo = cross_validate(problem, gs, lambdas, 6, cfg, 5);
  CHECK(loo.cv_table.size() == 3);

  // deterministic for a fixed seed
  const auto again = cross_validate(problem, gs, lambdas, 6, cfg, 5);
  for (std::size_t i = 0; i < loo.cv_table.size(); ++i) {
    CHECK(loo.cv_table[i].first == again.cv_table[i].first);
    CHECK(loo.cv_table[i].second == again.cv_table[i].second);
  }
  CHECK(loo.best_lambda == again.best_lambda);

  CHECK_THROWS_AS(cross_validate(problem, gs, {0.1, 0.1}, 3, cfg, 5), Error);
  try {
    cross_validate(problem, gs, lambdas, 7, cfg, 5);
    FAIL("expected too few samples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_few_samples);
  }
}

TEST_CASE("uncovered coordinates are rejected by the solver") {
  Rng rng(221);
  const GroupSet gs({{0, 1}}, 3);  // coordinate 2 in no group
  const LiftedSpace space = make_lifted(gs, 1);
  MultitaskProblem problem = gaussian_problem(rng, 1, 5, 3, 0.1);
  SolverConfig cfg;
  try {
    fit(problem, space, 0.1, cfg);
    FAIL("expected uncovered support");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::uncovered_support);
  }
}

TEST_CASE("logistic fit with backtracking separates the classes") {
  Rng rng(223);
  const int n = 40, p = 6;
  MultitaskProblem problem;
  problem.loss = LossKind::logistic;
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd labels(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) design(r, c) = rng.normal();
    labels[r] = r % 2 == 0 ? 1.0 : -1.0;
    design(r, 0) = labels[r] * (0.5 + rng.uniform()) + 0.1 * rng.normal();
  }
  problem.add_task(design, labels);

  const GroupSet gs = GroupSet::chain(p, 4, 2);
  const LiftedSpace space = make_lifted(gs, 1);
  SolverConfig cfg;
  cfg.step_rule = StepRule::backtracking;
  const FitResult res = fit(problem, space, 0.01, cfg);
  REQUIRE(res.converged);
  CHECK(trace_monotone(res.objective_trace));
  int correct = 0;
  for (int r = 0; r < n; ++r)
    if (design.row(r).dot(res.x_hat.col(0)) * labels[r] > 0.0) ++correct;
  CHECK(correct >= 35);
}
