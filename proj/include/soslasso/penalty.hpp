#pragma once

#include <Eigen/Core>
#include <vector>

#include "soslasso/groups.hpp"

namespace soslasso {

/// soslasso: per-group alpha*||w_G||_2 + ||w_G||_1 over the optimal
/// decomposition sum_G w_G = x. group_only keeps only the l2 term (latent
/// overlapping group lasso limit); l1_only keeps only the l1 term (lasso).
enum class PenaltyMode { soslasso, group_only, l1_only };

struct PenaltyConfig {
  PenaltyMode mode = PenaltyMode::soslasso;
  double alpha = 1.0;                    // uniform l2 weight
  std::vector<double> group_alpha;       // optional per-group override

  double alpha_for(int g) const {
    if (group_alpha.empty()) return alpha;
    return group_alpha[static_cast<std::size_t>(g)];
  }
  void validate(int n_groups) const;
};

/// Closed-form penalty for pairwise-disjoint groups covering supp(x):
/// the infimum is attained by restricting x to each group.
double eval_disjoint(const Eigen::VectorXd& x, const GroupSet& gs, const PenaltyConfig& cfg);

/// A near-optimal decomposition of x over the duplicated coordinates.
struct Decomposition {
  Eigen::VectorXd w_dup;
  double value = 0.0;     // sum_G (alpha_G ||w_G||_2 + ||w_G||_1), mode-adjusted
  double residual = 0.0;  // ||expand(w_dup) - x||_2
  int iterations = 0;
};

/// Evaluates the penalty by minimizing
///   rho/2 ||expand(w) - x||^2 + sum_G (alpha_G ||w_G||_2 + ||w_G||_1)
/// with proximal gradient steps, escalating rho until the expansion residual
/// is below tol * (1 + ||x||_2).
Decomposition eval_overlapping(const Eigen::VectorXd& x, const GroupSet& gs,
                               const PenaltyConfig& cfg, double tol = 1e-6);

/// Upper bound on the dual norm: max over groups of ||u_G||_2 / 2, with
/// overlapped coordinates counted in every containing group.
double dual_norm_bound(const Eigen::VectorXd& u, const GroupSet& gs);

/// argmin_w 1/2 ||w - v||^2 + step * (alpha ||w||_2 + ||w||_1).
/// Soft-threshold by step, then shrink the block by step * alpha; the modes
/// keep only their own piece of the composition.
void prox_group(const double* v, int len, double step, double alpha, PenaltyMode mode,
                double* out);
Eigen::VectorXd prox_group(const Eigen::VectorXd& v, double step, double alpha,
                           PenaltyMode mode);

/// Segment-wise prox over a duplicated layout; the penalty is separable there.
void prox_full(const DuplicationMap& dm, const PenaltyConfig& cfg, double step,
               const double* w_in, double* w_out);
Eigen::VectorXd prox_full(const DuplicationMap& dm, const PenaltyConfig& cfg, double step,
                          const Eigen::VectorXd& w);

/// Penalty value of a point in duplicated coordinates (no decomposition solve).
double penalty_value_dup(const DuplicationMap& dm, const PenaltyConfig& cfg, const double* w);

/// Smallest lambda for which the zero vector is a fixed point of the proximal
/// gradient map given the gradient g of the loss at zero. Exact for l1_only
/// and group_only; for soslasso it is the max_G ||g_G|| / (1 + alpha_G) dual
/// bound, which over-covers and therefore still guarantees a zero solution.
double zero_threshold(const Eigen::VectorXd& grad_dup, const DuplicationMap& dm,
                      const PenaltyConfig& cfg);

}  // namespace soslasso
