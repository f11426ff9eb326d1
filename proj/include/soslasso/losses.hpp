#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "soslasso/groups.hpp"
#include "soslasso/penalty.hpp"

namespace soslasso {

enum class LossKind { squared, logistic };

/// Per-task designs and responses. Designs share the column count; logistic
/// responses must be exactly +-1.
struct MultitaskProblem {
  LossKind loss = LossKind::squared;
  std::vector<Eigen::MatrixXd> designs;
  std::vector<Eigen::VectorXd> responses;
  std::optional<double> noise_sigma;  // metadata only

  int tasks() const { return static_cast<int>(designs.size()); }
  int dim() const { return designs.empty() ? 0 : static_cast<int>(designs.front().cols()); }
  int rows(int t) const { return static_cast<int>(designs[static_cast<std::size_t>(t)].rows()); }

  void add_task(Eigen::MatrixXd design, Eigen::VectorXd response);
  bool equal_sample_sizes() const;
  /// Common per-task sample count; throws UnequalSampleSizes otherwise.
  int common_n() const;
};

struct LossEval {
  double value = 0.0;
  Eigen::VectorXd grad;  // over the duplicated multitask coordinates
};

/// Duplicated multitask coordinate system: groups replicated across tasks,
/// then duplicated so each replicated group owns a contiguous segment.
struct LiftedSpace {
  GroupSet base;            // per-task groups
  TaskLayout layout;
  DuplicationMap dm;        // duplication of the replicated groups, dim T * total_dup
  DuplicationMap per_task;  // duplication of the per-task groups

  int dup_dim() const { return dm.total(); }
};

LiftedSpace make_lifted(const GroupSet& gs, int tasks);

/// Loss evaluator with preallocated buffers; value/gradient over duplicated
/// multitask coordinates. Pure given (problem, space); safe to share const.
class LossOracle {
 public:
  LossOracle(const MultitaskProblem& problem, const LiftedSpace& space);

  double value(const Eigen::VectorXd& w_dup);
  double value_grad(const Eigen::VectorXd& w_dup, Eigen::VectorXd& grad);
  int dup_dim() const { return space_->dup_dim(); }

 private:
  double accumulate(const Eigen::VectorXd& w_dup, Eigen::VectorXd* grad);

  const MultitaskProblem* problem_;
  const LiftedSpace* space_;
  Eigen::VectorXd xvec_;      // expanded coefficients, length T * p
  Eigen::VectorXd gvec_;      // gradient w.r.t. expanded coefficients
  Eigen::VectorXd task_buf_;  // residual / margin scratch, length max n_t
};

LossEval squared_loss(const MultitaskProblem& problem, const LiftedSpace& space,
                      const Eigen::VectorXd& w_dup);
LossEval logistic_loss(const MultitaskProblem& problem, const LiftedSpace& space,
                       const Eigen::VectorXd& w_dup);

/// Upper estimate of the gradient Lipschitz constant over duplicated
/// coordinates: max_t sigma_max(lifted_t^T lifted_t) / n_t via power iteration
/// (relative tolerance 1e-4, inflated by 1.01; Frobenius bound fallback),
/// times 1/4 for the logistic loss.
double lipschitz_estimate(const MultitaskProblem& problem, const GroupSet& gs);

/// max over replicated groups of the largest singular value of Phi_G^T Phi_G
/// for the block-diagonal multitask design; squared loss only.
double max_group_singular(const MultitaskProblem& problem, const GroupSet& gs);

}  // namespace soslasso
