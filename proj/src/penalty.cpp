#include "soslasso/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace soslasso {

namespace {

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

void check_support_covered(const Eigen::VectorXd& x, const GroupSet& gs) {
  require(x.size() == gs.dim(), ErrorCode::dimension_mismatch,
          "penalty: vector length " + std::to_string(x.size()) + " != group dimension " +
              std::to_string(gs.dim()));
  const auto& coverage = gs.coverage();
  for (int j = 0; j < gs.dim(); ++j) {
    if (x[j] != 0.0 && coverage[static_cast<std::size_t>(j)] == 0)
      raise(ErrorCode::uncovered_support,
            "penalty: coordinate " + std::to_string(j) + " is nonzero but in no group");
  }
}

}  // namespace

void PenaltyConfig::validate(int n_groups) const {
  require(alpha > 0.0, ErrorCode::invalid_argument, "penalty: alpha must be positive");
  if (!group_alpha.empty()) {
    require(static_cast<int>(group_alpha.size()) == n_groups, ErrorCode::dimension_mismatch,
            "penalty: per-group alpha list does not match group count");
    for (double a : group_alpha)
      require(a > 0.0, ErrorCode::invalid_argument, "penalty: per-group alpha must be positive");
  }
}

double eval_disjoint(const Eigen::VectorXd& x, const GroupSet& gs, const PenaltyConfig& cfg) {
  cfg.validate(gs.count());
  require(gs.max_coverage() <= 1, ErrorCode::overlapping_groups,
          "eval_disjoint: groups overlap; use eval_overlapping");
  check_support_covered(x, gs);
  double value = 0.0;
  for (int g = 0; g < gs.count(); ++g) {
    double sq = 0.0, l1 = 0.0;
    for (int j : gs.group(g)) {
      sq += x[j] * x[j];
      l1 += std::abs(x[j]);
    }
    switch (cfg.mode) {
      case PenaltyMode::soslasso: value += cfg.alpha_for(g) * std::sqrt(sq) + l1; break;
      case PenaltyMode::group_only: value += cfg.alpha_for(g) * std::sqrt(sq); break;
      case PenaltyMode::l1_only: value += l1; break;
    }
  }
  return value;
}

double dual_norm_bound(const Eigen::VectorXd& u, const GroupSet& gs) {
  require(u.size() == gs.dim(), ErrorCode::dimension_mismatch,
          "dual_norm_bound: vector length does not match group dimension");
  double best = 0.0;
  for (int g = 0; g < gs.count(); ++g) {
    double sq = 0.0;
    for (int j : gs.group(g)) sq += u[j] * u[j];
    best = std::max(best, 0.5 * std::sqrt(sq));
  }
  return best;
}

void prox_group(const double* v, int len, double step, double alpha, PenaltyMode mode,
                double* out) {
  require(step >= 0.0, ErrorCode::invalid_argument, "prox_group: step must be >= 0");
  if (step == 0.0) {
    std::copy(v, v + len, out);
    return;
  }
  if (mode == PenaltyMode::l1_only) {
    for (int i = 0; i < len; ++i) out[i] = soft(v[i], step);
    return;
  }
  // l1 first (skipped in group_only mode), then the block shrink.
  double sq = 0.0;
  if (mode == PenaltyMode::soslasso) {
    for (int i = 0; i < len; ++i) {
      out[i] = soft(v[i], step);
      sq += out[i] * out[i];
    }
  } else {
    for (int i = 0; i < len; ++i) {
      out[i] = v[i];
      sq += out[i] * out[i];
    }
  }
  const double norm = std::sqrt(sq);
  const double threshold = step * alpha;
  if (norm <= threshold) {
    std::fill(out, out + len, 0.0);
    return;
  }
  const double scale = 1.0 - threshold / norm;
  for (int i = 0; i < len; ++i) out[i] *= scale;
}

Eigen::VectorXd prox_group(const Eigen::VectorXd& v, double step, double alpha,
                           PenaltyMode mode) {
  Eigen::VectorXd out(v.size());
  prox_group(v.data(), static_cast<int>(v.size()), step, alpha, mode, out.data());
  return out;
}

void prox_full(const DuplicationMap& dm, const PenaltyConfig& cfg, double step,
               const double* w_in, double* w_out) {
  for (int g = 0; g < dm.segments(); ++g) {
    const int begin = dm.segment_begin(g);
    prox_group(w_in + begin, dm.segment_size(g), step, cfg.alpha_for(g), cfg.mode,
               w_out + begin);
  }
}

Eigen::VectorXd prox_full(const DuplicationMap& dm, const PenaltyConfig& cfg, double step,
                          const Eigen::VectorXd& w) {
  require(w.size() == dm.total(), ErrorCode::dimension_mismatch,
          "prox_full: vector length does not match duplicated dimension");
  Eigen::VectorXd out(w.size());
  prox_full(dm, cfg, step, w.data(), out.data());
  return out;
}

double penalty_value_dup(const DuplicationMap& dm, const PenaltyConfig& cfg, const double* w) {
  double value = 0.0;
  for (int g = 0; g < dm.segments(); ++g) {
    const int begin = dm.segment_begin(g);
    const int len = dm.segment_size(g);
    double sq = 0.0, l1 = 0.0;
    for (int i = begin; i < begin + len; ++i) {
      sq += w[i] * w[i];
      l1 += std::abs(w[i]);
    }
    switch (cfg.mode) {
      case PenaltyMode::soslasso: value += cfg.alpha_for(g) * std::sqrt(sq) + l1; break;
      case PenaltyMode::group_only: value += cfg.alpha_for(g) * std::sqrt(sq); break;
      case PenaltyMode::l1_only: value += l1; break;
    }
  }
  return value;
}

double zero_threshold(const Eigen::VectorXd& grad_dup, const DuplicationMap& dm,
                      const PenaltyConfig& cfg) {
  require(grad_dup.size() == dm.total(), ErrorCode::dimension_mismatch,
          "zero_threshold: gradient length does not match duplicated dimension");
  double best = 0.0;
  for (int g = 0; g < dm.segments(); ++g) {
    const int begin = dm.segment_begin(g);
    const int len = dm.segment_size(g);
    double sq = 0.0, linf = 0.0;
    for (int i = begin; i < begin + len; ++i) {
      sq += grad_dup[i] * grad_dup[i];
      linf = std::max(linf, std::abs(grad_dup[i]));
    }
    switch (cfg.mode) {
      case PenaltyMode::soslasso: best = std::max(best, std::sqrt(sq) / (1.0 + cfg.alpha_for(g))); break;
      case PenaltyMode::group_only: best = std::max(best, std::sqrt(sq) / cfg.alpha_for(g)); break;
      case PenaltyMode::l1_only: best = std::max(best, linf); break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Penalty evaluation for overlapping groups.
//
// Minimizes rho/2 ||Ew - x||^2 + pen(w) over duplicated coordinates with
// accelerated proximal gradient (function restart), escalating rho tenfold
// until the expansion residual meets the feasibility target and the value has
// stabilized. The quadratic's gradient Lipschitz constant is rho times the
// maximum coverage count, since E^T E is block all-ones per coordinate.
// ---------------------------------------------------------------------------

namespace {

struct EvalWork {
  const DuplicationMap* dm;
  const Eigen::VectorXd* target;
  double rho;

  // F(w) and gradient of the smooth part.
  double smooth_grad(const Eigen::VectorXd& w, Eigen::VectorXd& resid,
                     Eigen::VectorXd& grad) const {
    expand_into(*dm, w.data(), resid.data());
    resid -= *target;
    scatter_into(*dm, resid.data(), grad.data());
    grad *= rho;
    return 0.5 * rho * resid.squaredNorm();
  }

  double objective(const Eigen::VectorXd& w, const PenaltyConfig& cfg,
                   Eigen::VectorXd& resid) const {
    expand_into(*dm, w.data(), resid.data());
    resid -= *target;
    return 0.5 * rho * resid.squaredNorm() + penalty_value_dup(*dm, cfg, w.data());
  }
};

}  // namespace

Decomposition eval_overlapping(const Eigen::VectorXd& x, const GroupSet& gs,
                               const PenaltyConfig& cfg, double tol) {
  cfg.validate(gs.count());
  require(tol > 0.0, ErrorCode::invalid_argument, "eval_overlapping: tol must be positive");
  check_support_covered(x, gs);

  const DuplicationMap dm = duplication_map(gs);
  const int d = dm.total();
  Decomposition result;
  result.w_dup = Eigen::VectorXd::Zero(d);
  if (x.isZero(0.0)) return result;

  // Feasible start: split every coordinate evenly among its groups.
  const auto& coverage = gs.coverage();
  for (int i = 0; i < d; ++i) {
    const int j = dm.origin[static_cast<std::size_t>(i)];
    if (coverage[static_cast<std::size_t>(j)] > 0)
      result.w_dup[i] = x[j] / coverage[static_cast<std::size_t>(j)];
  }

  const double x_norm = x.norm();
  const double feas_target = tol * (1.0 + x_norm);
  const int max_rounds = 16;
  const int inner_cap = 4000;

  EvalWork work{&dm, &x, 1.0};
  Eigen::VectorXd w = result.w_dup;
  Eigen::VectorXd y = w, z(d), w_prev(d), grad(d), resid(x.size()), scratch(x.size());
  double prev_value = std::numeric_limits<double>::infinity();
  int total_iters = 0;

  for (int round = 0; round < max_rounds; ++round) {
    const double lipschitz = work.rho * gs.max_coverage();
    const double step = 1.0 / lipschitz;
    y = w;
    double momentum = 1.0;
    double f_w = work.objective(w, cfg, resid);

    for (int it = 0; it < inner_cap; ++it) {
      ++total_iters;
      work.smooth_grad(y, resid, grad);
      z = y - step * grad;
      prox_full(dm, cfg, step, z.data(), z.data());
      double f_z = work.objective(z, cfg, resid);
      if (f_z > f_w) {
        // Restart momentum and take a plain descent step from w.
        work.smooth_grad(w, resid, grad);
        z = w - step * grad;
        prox_full(dm, cfg, step, z.data(), z.data());
        f_z = work.objective(z, cfg, resid);
        momentum = 1.0;
        y = w;
      }
      w_prev.swap(w);
      w = z;
      const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = w + ((momentum - 1.0) / m_next) * (w - w_prev);
      momentum = m_next;
      f_w = f_z;

      if (it % 25 == 24 || it == inner_cap - 1) {
        work.smooth_grad(w, resid, grad);
        z = w - step * grad;
        prox_full(dm, cfg, step, z.data(), z.data());
        if ((w - z).norm() <= 1e-9 * (1.0 + w.norm())) break;
      }
    }

    expand_into(dm, w.data(), scratch.data());
    const double residual = (scratch - x).norm();
    const double value = penalty_value_dup(dm, cfg, w.data());
    if (residual <= feas_target &&
        std::abs(value - prev_value) <= 0.2 * tol * std::max(1.0, std::abs(value))) {
      result.w_dup = w;
      result.value = value;
      result.residual = residual;
      result.iterations = total_iters;
      return result;
    }
    prev_value = value;
    work.rho *= 10.0;
  }

  expand_into(dm, w.data(), scratch.data());
  raise(ErrorCode::no_convergence,
        "eval_overlapping: feasibility " + std::to_string((scratch - x).norm()) +
            " above target after " + std::to_string(total_iters) + " iterations");
}

}  // namespace soslasso
