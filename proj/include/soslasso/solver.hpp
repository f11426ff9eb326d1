#pragma once

#include <Eigen/Core>
#include <vector>

#include "soslasso/losses.hpp"

namespace soslasso {

enum class StepRule { fixed_lipschitz, backtracking };

struct SolverConfig {
  int max_iters = 5000;
  double rel_obj_tol = 1e-8;
  double stationarity_tol = 1e-6;
  StepRule step_rule = StepRule::fixed_lipschitz;
  bool restart = true;
  PenaltyConfig penalty;

  void validate() const;
};

struct FitResult {
  Eigen::MatrixXd x_hat;               // p x T, column t = expanded coefficients of task t
  Eigen::VectorXd w_dup;               // duplicated solution
  std::vector<double> objective_trace; // accepted iterates, nonincreasing
  double lambda = 0.0;
  double stationarity_residual = 0.0;  // ||w - prox(w - grad/L, lambda/L)||
  int iterations = 0;
  bool converged = false;
  std::vector<int> selected_groups;    // groups with a nonzero duplicated segment

  double objective() const { return objective_trace.back(); }
};

/// Accelerated proximal gradient on loss(w) + lambda * penalty(w) over the
/// duplicated multitask coordinates. Groups must cover every coordinate.
/// Non-convergence is reported through the flag, not an exception.
FitResult fit(const MultitaskProblem& problem, const LiftedSpace& space, double lambda,
              const SolverConfig& cfg, const Eigen::VectorXd* warm_start = nullptr);

/// One fit per lambda (strictly descending), each warm-started from the last.
std::vector<FitResult> reg_path(const MultitaskProblem& problem, const LiftedSpace& space,
                                const std::vector<double>& lambdas, const SolverConfig& cfg);

/// Zero-solution threshold for the configured penalty: any lambda at or above
/// this value makes the zero vector stationary.
double lambda_max(const MultitaskProblem& problem, const LiftedSpace& space,
                  const PenaltyConfig& penalty);

/// count log-spaced values from lmax down to min_ratio * lmax.
std::vector<double> lambda_grid(double lmax, int count, double min_ratio);

struct ClairvoyantResult {
  double best_lambda = 0.0;
  FitResult best_fit;
  std::vector<std::pair<double, double>> mse_table;  // (lambda, mse)
};

/// Picks the lambda minimizing MSE against a known truth; ties go to the
/// larger lambda. A benchmark device, not an estimator.
ClairvoyantResult clairvoyant_select(const MultitaskProblem& problem, const LiftedSpace& space,
                                     const Eigen::MatrixXd& truth,
                                     const std::vector<double>& lambdas,
                                     const SolverConfig& cfg);

struct CrossValidationResult {
  double best_lambda = 0.0;
  std::vector<std::pair<double, double>> cv_table;  // (lambda, mean held-out error)
};

/// Row-wise fold split per task, seeded; mean held-out squared error (or
/// misclassification rate for logistic) per lambda.
CrossValidationResult cross_validate(const MultitaskProblem& problem, const GroupSet& gs,
                                     const std::vector<double>& lambdas, int folds,
                                     const SolverConfig& cfg, std::uint64_t seed);

double mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

}  // namespace soslasso
