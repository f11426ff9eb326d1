#include "soslasso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "soslasso/rng.hpp"

namespace soslasso {

void SolverConfig::validate() const {
  require(max_iters >= 1, ErrorCode::invalid_argument, "solver: max_iters must be >= 1");
  require(rel_obj_tol > 0.0, ErrorCode::invalid_argument, "solver: rel_obj_tol must be positive");
  require(stationarity_tol > 0.0, ErrorCode::invalid_argument,
          "solver: stationarity_tol must be positive");
}

namespace {

struct ProxStep {
  const DuplicationMap* dm;
  const PenaltyConfig* penalty;
  double lambda;

  // z = prox(point - grad / L, lambda / L)
  void operator()(const Eigen::VectorXd& point, const Eigen::VectorXd& grad, double lipschitz,
                  Eigen::VectorXd& z) const {
    const double step = 1.0 / lipschitz;
    z = point - step * grad;
    prox_full(*dm, *penalty, step * lambda, z.data(), z.data());
  }
};

}  // namespace

FitResult fit(const MultitaskProblem& problem, const LiftedSpace& space, double lambda,
              const SolverConfig& cfg, const Eigen::VectorXd* warm_start) {
  cfg.validate();
  cfg.penalty.validate(space.layout.replicated.count());
  require(lambda >= 0.0, ErrorCode::invalid_argument, "fit: lambda must be >= 0");
  require(space.layout.replicated.covers_all(), ErrorCode::uncovered_support,
          "fit: some coordinates belong to no group and would be implicitly unpenalized");

  LossOracle oracle(problem, space);
  const int d = space.dup_dim();

  Eigen::VectorXd w;
  if (warm_start) {
    require(warm_start->size() == d, ErrorCode::dimension_mismatch,
            "fit: warm start length does not match duplicated dimension");
    w = *warm_start;
  } else {
    w = Eigen::VectorXd::Zero(d);
  }

  // Canonical step for the certificate; backtracking may use larger steps for
  // the iteration itself.
  double lip_fixed = std::max(lipschitz_estimate(problem, space.base), 1e-12);
  double lip_iter = cfg.step_rule == StepRule::backtracking ? std::max(lip_fixed / 8.0, 1e-12)
                                                            : lip_fixed;
  const ProxStep prox{&space.dm, &cfg.penalty, lambda};

  FitResult result;
  result.lambda = lambda;

  Eigen::VectorXd grad(d), grad_w(d), y = w, z(d), w_prev(d), cert(d);
  double loss_y = oracle.value_grad(y, grad);
  double obj_w = loss_y + lambda * penalty_value_dup(space.dm, cfg.penalty, w.data());
  result.objective_trace.push_back(obj_w);
  double momentum = 1.0;

  auto certified = [&](double& residual_out) {
    const double loss_grad_w = oracle.value_grad(w, grad_w);
    (void)loss_grad_w;
    prox(w, grad_w, lip_fixed, cert);
    residual_out = (w - cert).norm();
    return residual_out <= cfg.stationarity_tol * (1.0 + w.norm());
  };

  auto backtrack = [&](const Eigen::VectorXd& point, const Eigen::VectorXd& g, double loss_point,
                       double& loss_z_out) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      prox(point, g, lip_iter, z);
      const double loss_z = oracle.value(z);
      if (cfg.step_rule != StepRule::backtracking) {
        loss_z_out = loss_z;
        return;
      }
      const Eigen::VectorXd diff = z - point;
      const double quad = loss_point + g.dot(diff) + 0.5 * lip_iter * diff.squaredNorm();
      if (loss_z <= quad + 1e-12 * std::max(1.0, std::abs(loss_point))) {
        loss_z_out = loss_z;
        return;
      }
      lip_iter *= 2.0;
    }
    loss_z_out = oracle.value(z);
  };

  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    double loss_z;
    backtrack(y, grad, loss_y, loss_z);
    double obj_z = loss_z + lambda * penalty_value_dup(space.dm, cfg.penalty, z.data());

    if (cfg.restart && obj_z > obj_w) {
      // Objective restart: drop momentum and take a plain descent step from w.
      const double loss_w = oracle.value_grad(w, grad_w);
      backtrack(w, grad_w, loss_w, loss_z);
      obj_z = loss_z + lambda * penalty_value_dup(space.dm, cfg.penalty, z.data());
      momentum = 1.0;
    }

    w_prev.swap(w);
    w = z;
    const double rel_change = std::abs(obj_w - obj_z) / std::max(1.0, std::abs(obj_w));
    obj_w = obj_z;
    result.objective_trace.push_back(obj_w);

    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = w + ((momentum - 1.0) / m_next) * (w - w_prev);
    momentum = m_next;

    if (rel_change <= cfg.rel_obj_tol || iter % 20 == 19) {
      double residual;
      if (certified(residual)) {
        result.stationarity_residual = residual;
        result.converged = true;
        ++iter;
        break;
      }
    }
    loss_y = oracle.value_grad(y, grad);
  }
  result.iterations = iter;

  if (!result.converged) {
    double residual;
    result.converged = certified(residual);
    result.stationarity_residual = residual;
  }

  result.w_dup = w;
  const int p = space.layout.dim_per_task;
  Eigen::VectorXd xvec(space.dm.source_dim);
  expand_into(space.dm, w.data(), xvec.data());
  result.x_hat = Eigen::Map<Eigen::MatrixXd>(xvec.data(), p, space.layout.tasks);
  for (int g = 0; g < space.dm.segments(); ++g) {
    const int begin = space.dm.segment_begin(g);
    const int len = space.dm.segment_size(g);
    bool active = false;
    for (int i = begin; i < begin + len && !active; ++i) active = w[i] != 0.0;
    if (active) result.selected_groups.push_back(g);
  }
  return result;
}

namespace {

void validate_descending(const std::vector<double>& lambdas) {
  require(!lambdas.empty(), ErrorCode::invalid_argument, "path: lambda list is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    require(lambdas[i] >= 0.0, ErrorCode::invalid_argument, "path: lambdas must be >= 0");
    require(i == 0 || lambdas[i] < lambdas[i - 1], ErrorCode::invalid_argument,
            "path: lambdas must be strictly descending (duplicates rejected)");
  }
}

}  // namespace

std::vector<FitResult> reg_path(const MultitaskProblem& problem, const LiftedSpace& space,
                                const std::vector<double>& lambdas, const SolverConfig& cfg) {
  validate_descending(lambdas);
  std::vector<FitResult> results;
  results.reserve(lambdas.size());
  const Eigen::VectorXd* warm = nullptr;
  for (double lambda : lambdas) {
    try {
      results.push_back(fit(problem, space, lambda, cfg, warm));
      warm = &results.back().w_dup;
    } catch (const Error&) {
      FitResult failed;
      failed.lambda = lambda;
      failed.converged = false;
      failed.objective_trace.push_back(std::numeric_limits<double>::quiet_NaN());
      results.push_back(std::move(failed));
    }
  }
  return results;
}

double lambda_max(const MultitaskProblem& problem, const LiftedSpace& space,
                  const PenaltyConfig& penalty) {
  LossOracle oracle(problem, space);
  Eigen::VectorXd grad;
  oracle.value_grad(Eigen::VectorXd::Zero(space.dup_dim()), grad);
  return zero_threshold(grad, space.dm, penalty);
}

std::vector<double> lambda_grid(double lmax, int count, double min_ratio) {
  require(count >= 1, ErrorCode::invalid_argument, "lambda_grid: count must be >= 1");
  require(min_ratio > 0.0 && min_ratio < 1.0, ErrorCode::invalid_argument,
          "lambda_grid: min_ratio must be in (0, 1)");
  if (lmax <= 0.0) return {0.0};
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double log_step = std::log(min_ratio) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lmax * std::exp(log_step * i);
  return grid;
}

double mse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  require(estimate.rows() == truth.rows() && estimate.cols() == truth.cols(),
          ErrorCode::shape_mismatch, "mse: shapes differ");
  return (estimate - truth).squaredNorm() /
         static_cast<double>(estimate.rows() * estimate.cols());
}

ClairvoyantResult clairvoyant_select(const MultitaskProblem& problem, const LiftedSpace& space,
                                     const Eigen::MatrixXd& truth,
                                     const std::vector<double>& lambdas,
                                     const SolverConfig& cfg) {
  require(truth.rows() == space.layout.dim_per_task && truth.cols() == space.layout.tasks,
          ErrorCode::shape_mismatch, "clairvoyant_select: truth shape does not match problem");
  auto fits = reg_path(problem, space, lambdas, cfg);
  ClairvoyantResult out;
  out.mse_table.reserve(fits.size());
  int best = -1;
  double best_mse = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    double err = std::numeric_limits<double>::quiet_NaN();
    if (fits[i].x_hat.size() > 0) {
      err = mse(fits[i].x_hat, truth);
      // strict improvement keeps ties at the larger (earlier) lambda
      if (err < best_mse) {
        best_mse = err;
        best = static_cast<int>(i);
      }
    }
    out.mse_table.emplace_back(fits[i].lambda, err);
  }
  require(best >= 0, ErrorCode::no_convergence, "clairvoyant_select: no lambda produced a fit");
  out.best_lambda = fits[static_cast<std::size_t>(best)].lambda;
  out.best_fit = std::move(fits[static_cast<std::size_t>(best)]);
  return out;
}

CrossValidationResult cross_validate(const MultitaskProblem& problem, const GroupSet& gs,
                                     const std::vector<double>& lambdas, int folds,
                                     const SolverConfig& cfg, std::uint64_t seed) {
  validate_descending(lambdas);
  require(folds >= 2, ErrorCode::invalid_argument, "cross_validate: folds must be >= 2");
  for (int t = 0; t < problem.tasks(); ++t)
    require(problem.rows(t) >= folds, ErrorCode::too_few_samples,
            "cross_validate: task " + std::to_string(t) + " has fewer samples than folds");

  // Per-task shuffled row order; row i goes to fold (position mod folds).
  std::vector<std::vector<int>> order(static_cast<std::size_t>(problem.tasks()));
  for (int t = 0; t < problem.tasks(); ++t) {
    const int n = problem.rows(t);
    auto& perm = order[static_cast<std::size_t>(t)];
    perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng rng = Rng::stream(seed, 1000 + static_cast<std::uint64_t>(t));
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
  }

  std::vector<double> fold_mean(lambdas.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    MultitaskProblem train;
    train.loss = problem.loss;
    std::vector<std::vector<int>> held(static_cast<std::size_t>(problem.tasks()));
    for (int t = 0; t < problem.tasks(); ++t) {
      const auto& perm = order[static_cast<std::size_t>(t)];
      std::vector<int> keep;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        if (static_cast<int>(i) % folds == f)
          held[static_cast<std::size_t>(t)].push_back(perm[i]);
        else
          keep.push_back(perm[i]);
      }
      std::sort(keep.begin(), keep.end());
      std::sort(held[static_cast<std::size_t>(t)].begin(), held[static_cast<std::size_t>(t)].end());
      const auto& design = problem.designs[static_cast<std::size_t>(t)];
      const auto& response = problem.responses[static_cast<std::size_t>(t)];
      Eigen::MatrixXd sub(static_cast<int>(keep.size()), design.cols());
      Eigen::VectorXd sub_y(static_cast<int>(keep.size()));
      for (std::size_t i = 0; i < keep.size(); ++i) {
        sub.row(static_cast<int>(i)) = design.row(keep[i]);
        sub_y[static_cast<int>(i)] = response[keep[i]];
      }
      train.add_task(std::move(sub), std::move(sub_y));
    }

    const LiftedSpace space = make_lifted(gs, train.tasks());
    auto fits = reg_path(train, space, lambdas, cfg);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      double err_sum = 0.0;
      int count = 0;
      for (int t = 0; t < problem.tasks(); ++t) {
        const auto& design = problem.designs[static_cast<std::size_t>(t)];
        const auto& response = problem.responses[static_cast<std::size_t>(t)];
        const auto coef = fits[li].x_hat.col(t);
        for (int row : held[static_cast<std::size_t>(t)]) {
          const double pred = design.row(row).dot(coef);
          if (problem.loss == LossKind::squared) {
            const double diff = pred - response[row];
            err_sum += diff * diff;
          } else {
            err_sum += (pred * response[row] > 0.0) ? 0.0 : 1.0;
          }
          ++count;
        }
      }
      fold_mean[li] += err_sum / std::max(count, 1);
    }
  }

  CrossValidationResult out;
  out.cv_table.reserve(lambdas.size());
  int best = 0;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double mean_err = fold_mean[li] / folds;
    out.cv_table.emplace_back(lambdas[li], mean_err);
    if (mean_err < out.cv_table[static_cast<std::size_t>(best)].second) best = static_cast<int>(li);
  }
  out.best_lambda = lambdas[static_cast<std::size_t>(best)];
  return out;
}

}  // namespace soslasso
