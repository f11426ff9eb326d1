#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "soslasso/losses.hpp"

namespace soslasso {

struct BoundParams {
  int groups = 1;        // M
  int max_group = 1;     // B
  int tasks = 1;         // T
  int n = 1;             // per-task samples
  int active = 1;        // k
  double alpha = 1.0;    // within-group nonzero fraction
  double sigma = 0.0;    // noise std
  double sigma_m = 1.0;  // max group singular value of the Gram
  double kappa = 1.0;    // restricted strong convexity constant
};

/// Subspace compatibility bound (1 + sqrt(B * alpha)) * sqrt(k).
double compatibility_bound(int max_group, double alpha, int active);

/// Smallest lambda meeting the error-bound premise:
/// sigma * sigma_m * sqrt((log M + T B) / n) / 2.
double lambda_rule(const BoundParams& params);

/// (9/4) sigma^2 sigma_m^2 (1 + sqrt(T B alpha))^2 k (log M + T B) / (n kappa).
double theorem_bound(const BoundParams& params);

struct RscEstimate {
  double kappa = 0.0;
  bool singular = false;
};

/// Restricted strong convexity constant of the squared loss on the given
/// support (coordinates in [0, T*p)): min eigenvalue of the restricted
/// per-task Gram blocks divided by 2n. Exact via a dense eigensolver for
/// small supports; sampled upper estimate beyond that.
RscEstimate estimate_rsc(const MultitaskProblem& problem, int dim_per_task,
                         const std::vector<int>& support, int trials, std::uint64_t seed);

struct Chi2MaxResult {
  double empirical = 0.0;
  double analytic_lower = 0.0;  // 1 - exp(log M - (c-1)^2 d / 2)
  double std_error = 0.0;
};

/// Monte-Carlo estimate of Pr(max of M chi-square(d) draws <= c^2 d).
Chi2MaxResult chi2_max_mc(int m, int d, double c, int trials, std::uint64_t seed,
                          int threads = 1);

/// Sampled lower bound on the dual norm of the decomposition penalty:
/// feasible points of {h(x) <= 1} generated per group via scaled directions.
double dual_norm_sampled(const Eigen::VectorXd& u, const GroupSet& gs, int samples,
                         std::uint64_t seed);

/// One empirical verification suite; pass/fail plus observed extremes and the
/// analytic reference values it checked against.
struct SuiteReport {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  int violations = 0;
  int evaluated = 0;
  std::vector<std::pair<std::string, double>> observed;
  std::vector<std::pair<std::string, double>> reference;
  std::vector<std::string> notes;

  std::string to_json() const;
};

SuiteReport norm_axiom_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport decomposability_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport dual_bound_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport compatibility_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport chi2_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport lambda_rule_suite(int trials, std::uint64_t seed, int threads = 1);
SuiteReport theorem_suite(int trials, std::uint64_t seed, int threads = 1);

/// Dispatch by name: norm, decompose, dual, compat, chi2, lambda, theorem.
SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed,
                      int threads = 1);

}  // namespace soslasso
