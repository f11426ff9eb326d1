#include "soslasso/losses.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "soslasso/rng.hpp"

namespace soslasso {

void MultitaskProblem::add_task(Eigen::MatrixXd design, Eigen::VectorXd response) {
  require(design.rows() >= 1, ErrorCode::invalid_argument, "problem: task needs >= 1 sample");
  require(design.rows() == response.size(), ErrorCode::dimension_mismatch,
          "problem: design rows " + std::to_string(design.rows()) + " != response length " +
              std::to_string(response.size()));
  if (!designs.empty())
    require(design.cols() == designs.front().cols(), ErrorCode::dimension_mismatch,
            "problem: tasks disagree on column count");
  if (loss == LossKind::logistic) {
    for (int i = 0; i < response.size(); ++i)
      require(response[i] == 1.0 || response[i] == -1.0, ErrorCode::bad_labels,
              "problem: logistic responses must be exactly +1 or -1");
  }
  designs.push_back(std::move(design));
  responses.push_back(std::move(response));
}

bool MultitaskProblem::equal_sample_sizes() const {
  for (int t = 1; t < tasks(); ++t)
    if (rows(t) != rows(0)) return false;
  return true;
}

int MultitaskProblem::common_n() const {
  require(tasks() >= 1, ErrorCode::invalid_argument, "problem: no tasks");
  require(equal_sample_sizes(), ErrorCode::unequal_sample_sizes,
          "problem: per-task sample sizes differ");
  return rows(0);
}

LiftedSpace make_lifted(const GroupSet& gs, int tasks) {
  TaskLayout layout = replicate_across_tasks(gs, tasks);
  DuplicationMap dm = duplication_map(layout.replicated);
  DuplicationMap per_task = duplication_map(gs);
  return LiftedSpace{gs, std::move(layout), std::move(dm), std::move(per_task)};
}

LossOracle::LossOracle(const MultitaskProblem& problem, const LiftedSpace& space)
    : problem_(&problem), space_(&space) {
  require(problem.tasks() == space.layout.tasks, ErrorCode::dimension_mismatch,
          "loss: problem task count does not match layout");
  require(problem.dim() == space.layout.dim_per_task, ErrorCode::dimension_mismatch,
          "loss: problem dimension does not match layout");
  xvec_.resize(space.dm.source_dim);
  gvec_.resize(space.dm.source_dim);
  int max_rows = 0;
  for (int t = 0; t < problem.tasks(); ++t) max_rows = std::max(max_rows, problem.rows(t));
  task_buf_.resize(max_rows);
}

double LossOracle::accumulate(const Eigen::VectorXd& w_dup, Eigen::VectorXd* grad) {
  require(w_dup.size() == space_->dup_dim(), ErrorCode::dimension_mismatch,
          "loss: coefficient length does not match duplicated dimension");
  expand_into(space_->dm, w_dup.data(), xvec_.data());
  const int p = space_->layout.dim_per_task;
  double value = 0.0;
  for (int t = 0; t < problem_->tasks(); ++t) {
    const auto& design = problem_->designs[static_cast<std::size_t>(t)];
    const auto& response = problem_->responses[static_cast<std::size_t>(t)];
    const double inv_n = 1.0 / static_cast<double>(design.rows());
    const auto x_t = xvec_.segment(t * p, p);
    auto buf = task_buf_.head(design.rows());
    if (problem_->loss == LossKind::squared) {
      buf.noalias() = design * x_t;
      buf -= response;
      value += 0.5 * inv_n * buf.squaredNorm();
      if (grad) gvec_.segment(t * p, p).noalias() = inv_n * (design.transpose() * buf);
    } else {
      buf.noalias() = design * x_t;
      double task_value = 0.0;
      for (int i = 0; i < buf.size(); ++i) {
        const double a = response[i] * buf[i];
        // log(1 + exp(-a)) without overflow
        task_value += a > 0.0 ? std::log1p(std::exp(-a)) : -a + std::log1p(std::exp(a));
        buf[i] = -response[i] / (1.0 + std::exp(a));  // d/dmargin
      }
      value += inv_n * task_value;
      if (grad) gvec_.segment(t * p, p).noalias() = inv_n * (design.transpose() * buf);
    }
  }
  if (grad) {
    grad->resize(space_->dup_dim());
    scatter_into(space_->dm, gvec_.data(), grad->data());
  }
  return value;
}

double LossOracle::value(const Eigen::VectorXd& w_dup) { return accumulate(w_dup, nullptr); }

double LossOracle::value_grad(const Eigen::VectorXd& w_dup, Eigen::VectorXd& grad) {
  return accumulate(w_dup, &grad);
}

LossEval squared_loss(const MultitaskProblem& problem, const LiftedSpace& space,
                      const Eigen::VectorXd& w_dup) {
  require(problem.loss == LossKind::squared, ErrorCode::invalid_argument,
          "squared_loss: problem is not a squared-loss problem");
  LossOracle oracle(problem, space);
  LossEval eval;
  eval.value = oracle.value_grad(w_dup, eval.grad);
  return eval;
}

LossEval logistic_loss(const MultitaskProblem& problem, const LiftedSpace& space,
                       const Eigen::VectorXd& w_dup) {
  require(problem.loss == LossKind::logistic, ErrorCode::invalid_argument,
          "logistic_loss: problem is not a logistic-loss problem");
  LossOracle oracle(problem, space);
  LossEval eval;
  eval.value = oracle.value_grad(w_dup, eval.grad);
  return eval;
}

namespace {

// Largest eigenvalue of lifted^T lifted by power iteration; returns the
// Frobenius bound if the iteration has not settled within the cap.
double spectral_bound(const Eigen::MatrixXd& lifted) {
  const double frob = lifted.squaredNorm();
  if (frob == 0.0) return 0.0;
  Rng rng(0x50735065ULL);
  Eigen::VectorXd v(lifted.cols());
  for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd next = lifted.transpose() * (lifted * v);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double rayleigh = (lifted * next).squaredNorm();
    if (it > 0 && std::abs(rayleigh - estimate) <= 1e-4 * std::max(rayleigh, 1e-300)) {
      return 1.01 * rayleigh;
    }
    estimate = rayleigh;
    v.swap(next);
  }
  return frob;
}

}  // namespace

double lipschitz_estimate(const MultitaskProblem& problem, const GroupSet& gs) {
  require(problem.dim() == gs.dim(), ErrorCode::dimension_mismatch,
          "lipschitz_estimate: problem dimension does not match groups");
  const DuplicationMap dm = duplication_map(gs);
  double worst = 0.0;
  for (int t = 0; t < problem.tasks(); ++t) {
    const Eigen::MatrixXd lifted = lift_design(dm, problem.designs[static_cast<std::size_t>(t)]);
    const double bound = spectral_bound(lifted) / static_cast<double>(problem.rows(t));
    worst = std::max(worst, bound);
  }
  if (problem.loss == LossKind::logistic) worst *= 0.25;
  return worst;
}

double max_group_singular(const MultitaskProblem& problem, const GroupSet& gs) {
  require(problem.loss == LossKind::squared, ErrorCode::invalid_argument,
          "max_group_singular: squared loss only");
  require(problem.dim() == gs.dim(), ErrorCode::dimension_mismatch,
          "max_group_singular: problem dimension does not match groups");
  double worst = 0.0;
  for (int g = 0; g < gs.count(); ++g) {
    const auto& members = gs.group(g);
    const int b = static_cast<int>(members.size());
    for (int t = 0; t < problem.tasks(); ++t) {
      const auto& design = problem.designs[static_cast<std::size_t>(t)];
      Eigen::MatrixXd cols(design.rows(), b);
      for (int i = 0; i < b; ++i) cols.col(i) = design.col(members[static_cast<std::size_t>(i)]);
      if (b == 1) {
        worst = std::max(worst, cols.col(0).squaredNorm());
      } else {
        Eigen::MatrixXd gram = cols.transpose() * cols;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        worst = std::max(worst, eig.eigenvalues().maxCoeff());
      }
    }
  }
  return worst;
}

}  // namespace soslasso
