#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soslasso/solver.hpp"

namespace soslasso {

/// Synthetic multitask experiment: chain groups, uniformly chosen active
/// groups with within-group sparsity, Gaussian designs of variance 1/n,
/// additive Gaussian noise.
struct BenchConfig {
  int p = 2002;
  int block = 6;   // B
  int shift = 4;
  int tasks = 20;  // T
  int n = 250;
  int k_active = 20;
  double alpha = 0.2;      // fraction of each active group kept as signal
  double sigma = 0.1;      // noise std
  double design_variance = 0.0;  // per-entry design variance; 0 means 1/n
  double coeff_low = -1.0;
  double coeff_high = 1.0;
  int n_lambdas = 30;
  double lambda_min_ratio = 1e-3;
  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  SolverConfig solver;

  int group_count() const { return (p - block) / shift + 1; }  // M
  GroupSet make_groups() const { return GroupSet::chain(p, block, shift); }
  void validate() const;
};

/// Full-scale profile (slow) and a reduced profile for routine runs.
BenchConfig paper_profile();
BenchConfig desk_profile();

struct TruthDraw {
  Eigen::MatrixXd truth;  // p x T
  std::vector<int> active_groups;
};

/// k_active groups chosen uniformly without replacement; coordinates of the
/// active replicated groups drawn uniform [coeff_low, coeff_high]; within each
/// active group the ceil(alpha * group size) largest-magnitude entries are
/// retained (ties to the lower coordinate), the rest zeroed.
TruthDraw gen_truth(const BenchConfig& cfg, std::uint64_t seed);

/// Per task: design entries i.i.d. normal with variance 1/n drawn row-major,
/// response = design * truth column + N(0, sigma^2) noise.
MultitaskProblem gen_measurements(const Eigen::MatrixXd& truth, const BenchConfig& cfg,
                                  std::uint64_t seed);

enum class Method { lasso, glasso_latent, soslasso };
const char* method_name(Method m);
PenaltyConfig method_penalty(Method m);

enum class SweepKind { noise, alpha };

struct BenchCell {
  double sweep_value = 0.0;
  Method method = Method::soslasso;
  int trial = 0;
  double lambda = 0.0;
  double mse = 0.0;
  bool ok = false;
};

struct BenchSummaryCell {
  double sweep_value = 0.0;
  Method method = Method::soslasso;
  double mean_mse = 0.0;
  double stderr_mse = 0.0;
  int trials = 0;
};

struct BenchReport {
  SweepKind sweep = SweepKind::noise;
  std::vector<double> sweep_values;
  std::vector<Method> methods;
  std::vector<BenchCell> cells;          // ordered by (sweep value, method, trial)
  std::vector<BenchSummaryCell> summary;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  std::string to_csv() const;
  std::string summary_json() const;
  const BenchSummaryCell& cell(int value_index, Method m) const;
};

/// Fresh truth and measurements per (sweep point, trial); clairvoyant lambda
/// per method over its own grid; solver failures flag the cell rather than
/// aborting the sweep.
BenchReport run_sweep(const BenchConfig& cfg, SweepKind sweep,
                      const std::vector<double>& values, const std::vector<Method>& methods);

struct ScalingRow {
  int n = 0;
  double mean_sq_error = 0.0;
  double mean_bound = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope = 0.0;  // log-log slope of mean squared error vs n
  int cells_total = 0;
  int cells_dominated = 0;  // error <= bound
  int cells_skipped = 0;    // singular restricted curvature
};

/// Squared-error scaling in n with lambda from the error-bound rule at each n.
ScalingResult scaling_study(const BenchConfig& cfg, const std::vector<int>& n_list, int trials,
                            std::uint64_t seed);

}  // namespace soslasso
