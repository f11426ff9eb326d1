#include "soslasso/theory.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "soslasso/bench.hpp"
#include "soslasso/parallel.hpp"
#include "soslasso/penalty.hpp"
#include "soslasso/rng.hpp"
#include "soslasso/solver.hpp"

namespace soslasso {

double compatibility_bound(int max_group, double alpha, int active) {
  require(max_group >= 1, ErrorCode::invalid_argument, "compatibility_bound: B >= 1");
  require(alpha > 0.0 && alpha <= 1.0, ErrorCode::invalid_argument,
          "compatibility_bound: alpha in (0, 1]");
  require(active >= 1, ErrorCode::invalid_argument, "compatibility_bound: k >= 1");
  return (1.0 + std::sqrt(max_group * alpha)) * std::sqrt(static_cast<double>(active));
}

double lambda_rule(const BoundParams& params) {
  require(params.n >= 1 && params.groups >= 1 && params.max_group >= 1 && params.tasks >= 1,
          ErrorCode::invalid_argument, "lambda_rule: counts must be >= 1");
  require(params.sigma >= 0.0 && params.sigma_m >= 0.0, ErrorCode::invalid_argument,
          "lambda_rule: sigma and sigma_m must be >= 0");
  const double load = std::log(static_cast<double>(params.groups)) +
                      static_cast<double>(params.tasks) * params.max_group;
  return 0.5 * params.sigma * params.sigma_m * std::sqrt(load / params.n);
}

double theorem_bound(const BoundParams& params) {
  require(params.kappa > 0.0, ErrorCode::nonpositive_kappa,
          "theorem_bound: kappa must be positive");
  require(params.alpha > 0.0 && params.alpha <= 1.0, ErrorCode::invalid_argument,
          "theorem_bound: alpha in (0, 1]");
  const double tba = static_cast<double>(params.tasks) * params.max_group * params.alpha;
  const double load = std::log(static_cast<double>(params.groups)) +
                      static_cast<double>(params.tasks) * params.max_group;
  const double compat = 1.0 + std::sqrt(tba);
  return 2.25 * params.sigma * params.sigma * params.sigma_m * params.sigma_m * compat * compat *
         params.active * load / (params.n * params.kappa);
}

RscEstimate estimate_rsc(const MultitaskProblem& problem, int dim_per_task,
                         const std::vector<int>& support, int trials, std::uint64_t seed) {
  require(problem.loss == LossKind::squared, ErrorCode::invalid_argument,
          "estimate_rsc: squared loss only");
  const int n = problem.common_n();
  const int tasks = problem.tasks();
  require(dim_per_task == problem.dim(), ErrorCode::dimension_mismatch,
          "estimate_rsc: dimension mismatch");

  RscEstimate out;
  if (support.empty()) {
    out.singular = true;
    return out;
  }

  std::vector<std::vector<int>> per_task(static_cast<std::size_t>(tasks));
  for (int c : support) {
    require(c >= 0 && c < tasks * dim_per_task, ErrorCode::index_out_of_range,
            "estimate_rsc: support coordinate out of range");
    per_task[static_cast<std::size_t>(c / dim_per_task)].push_back(c % dim_per_task);
  }

  constexpr int kExactCap = 1024;
  double min_eig = std::numeric_limits<double>::infinity();
  double max_eig = 0.0;
  for (int t = 0; t < tasks; ++t) {
    const auto& cols_idx = per_task[static_cast<std::size_t>(t)];
    if (cols_idx.empty()) continue;
    const auto& design = problem.designs[static_cast<std::size_t>(t)];
    const int s = static_cast<int>(cols_idx.size());
    Eigen::MatrixXd cols(design.rows(), s);
    for (int i = 0; i < s; ++i) cols.col(i) = design.col(cols_idx[static_cast<std::size_t>(i)]);
    if (s <= kExactCap) {
      Eigen::MatrixXd gram = cols.transpose() * cols;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
      max_eig = std::max(max_eig, eig.eigenvalues().maxCoeff());
    } else {
      // Sampled upper estimate of the restricted minimum curvature.
      require(trials >= 1, ErrorCode::invalid_argument,
              "estimate_rsc: sampled estimate needs trials >= 1");
      Rng rng = Rng::stream(seed, 7000 + static_cast<std::uint64_t>(t));
      for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd dir(s);
        for (int i = 0; i < s; ++i) dir[i] = rng.normal();
        const double denom = dir.squaredNorm();
        if (denom == 0.0) continue;
        const double ratio = (cols * dir).squaredNorm() / denom;
        min_eig = std::min(min_eig, ratio);
        max_eig = std::max(max_eig, ratio);
      }
    }
  }

  if (!std::isfinite(min_eig)) {
    out.singular = true;
    return out;
  }
  if (min_eig <= 1e-10 * std::max(1.0, max_eig)) {
    out.singular = true;
    out.kappa = 0.0;
    return out;
  }
  out.kappa = min_eig / (2.0 * n);
  return out;
}

Chi2MaxResult chi2_max_mc(int m, int d, double c, int trials, std::uint64_t seed, int threads) {
  require(m >= 1 && d >= 1, ErrorCode::invalid_argument, "chi2_max_mc: m, d >= 1");
  require(c > 1.0, ErrorCode::invalid_argument, "chi2_max_mc: c must exceed 1");
  require(trials >= 1000, ErrorCode::invalid_argument, "chi2_max_mc: trials must be >= 1000");

  const double cutoff = c * c * static_cast<double>(d);
  std::vector<unsigned char> below(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, threads, [&](int trial) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
    double worst = 0.0;
    for (int i = 0; i < m; ++i) worst = std::max(worst, rng.chi_square(d));
    below[static_cast<std::size_t>(trial)] = worst <= cutoff ? 1 : 0;
  });
  int hits = 0;
  for (unsigned char b : below) hits += b;

  Chi2MaxResult out;
  out.empirical = static_cast<double>(hits) / trials;
  out.analytic_lower =
      1.0 - std::exp(std::log(static_cast<double>(m)) - (c - 1.0) * (c - 1.0) * d / 2.0);
  const double variance = std::max(out.empirical * (1.0 - out.empirical), 1e-12);
  out.std_error = std::sqrt(variance / trials);
  return out;
}

double dual_norm_sampled(const Eigen::VectorXd& u, const GroupSet& gs, int samples,
                         std::uint64_t seed) {
  require(u.size() == gs.dim(), ErrorCode::dimension_mismatch,
          "dual_norm_sampled: vector length does not match groups");
  Rng rng = Rng::stream(seed, 0xD0A1);
  double best = 0.0;
  // Every candidate is a feasible point of {||w||_2 + ||w||_1 <= 1} supported
  // on one group, so each inner product is a valid lower bound on the dual.
  auto feasible_value = [](const Eigen::VectorXd& dir, const Eigen::VectorXd& ug) {
    const double pen = dir.norm() + dir.lpNorm<1>();
    if (pen == 0.0) return 0.0;
    return dir.dot(ug) / pen;
  };
  for (int g = 0; g < gs.count(); ++g) {
    const auto& members = gs.group(g);
    const int b = static_cast<int>(members.size());
    Eigen::VectorXd ug(b);
    for (int i = 0; i < b; ++i) ug[i] = u[members[static_cast<std::size_t>(i)]];
    for (int i = 0; i < b; ++i) best = std::max(best, std::abs(ug[i]) / 2.0);
    best = std::max(best, feasible_value(ug, ug));
    // Soft-thresholded copies of u_G track the shape of the maximizer.
    const double peak = ug.cwiseAbs().maxCoeff();
    for (int step = 1; step <= 9; ++step) {
      const double cut = peak * step / 10.0;
      Eigen::VectorXd dir(b);
      for (int i = 0; i < b; ++i) {
        const double a = std::abs(ug[i]) - cut;
        dir[i] = a > 0.0 ? (ug[i] > 0.0 ? a : -a) : 0.0;
      }
      best = std::max(best, feasible_value(dir, ug));
    }
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd dir(b);
      for (int i = 0; i < b; ++i) dir[i] = std::abs(rng.normal()) * (ug[i] >= 0.0 ? 1.0 : -1.0);
      best = std::max(best, feasible_value(dir, ug));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

std::string SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["trials"] = trials;
  j["seed"] = seed;
  j["passed"] = passed;
  j["violations"] = violations;
  j["evaluated"] = evaluated;
  nlohmann::ordered_json obs = nlohmann::ordered_json::object();
  for (const auto& [key, value] : observed) obs[key] = value;
  j["observed"] = obs;
  nlohmann::ordered_json ref = nlohmann::ordered_json::object();
  for (const auto& [key, value] : reference) ref[key] = value;
  j["reference"] = ref;
  j["notes"] = notes;
  return j.dump(2);
}

namespace {

constexpr double kPropertyTol = 1e-4;

Eigen::VectorXd random_sparse(Rng& rng, int p, double density, double scale) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; ++j)
    if (rng.uniform() < density) x[j] = rng.uniform(-scale, scale);
  return x;
}

double eval_value(const Eigen::VectorXd& x, const GroupSet& gs) {
  return eval_overlapping(x, gs, PenaltyConfig{}, 1e-6).value;
}

}  // namespace

SuiteReport norm_axiom_suite(int trials, std::uint64_t seed, int threads) {
  const GroupSet gs = GroupSet::chain(18, 6, 4);
  struct Slot {
    double hom_err = 0.0;
    double tri_excess = -1.0;
    bool zero_violation = false;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const Eigen::VectorXd x = random_sparse(rng, gs.dim(), 0.5, 2.0);
    const Eigen::VectorXd y = random_sparse(rng, gs.dim(), 0.5, 2.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double gamma = sign * rng.uniform(0.25, 3.0);
    const double hx = eval_value(x, gs);
    const double hy = eval_value(y, gs);
    const double hxy = eval_value(x + y, gs);
    const double hgx = eval_value(gamma * x, gs);
    auto& slot = slots[static_cast<std::size_t>(i)];
    slot.hom_err = std::abs(hgx - std::abs(gamma) * hx) / std::max(std::abs(gamma) * hx, 1e-12);
    slot.tri_excess = (hxy - (hx + hy)) / std::max(hx + hy, 1e-12);
    slot.zero_violation = (!x.isZero(0.0) && hx <= 1e-12) || (x.isZero(0.0) && hx != 0.0);
  });

  SuiteReport report;
  report.suite = "norm";
  report.trials = trials;
  report.seed = seed;
  report.evaluated = trials;
  double max_hom = 0.0, max_tri = -1.0;
  for (const auto& slot : slots) {
    if (slot.hom_err > kPropertyTol || slot.tri_excess > kPropertyTol || slot.zero_violation)
      ++report.violations;
    max_hom = std::max(max_hom, slot.hom_err);
    max_tri = std::max(max_tri, slot.tri_excess);
  }
  report.observed = {{"max_homogeneity_rel_error", max_hom}, {"max_triangle_excess", max_tri}};
  report.reference = {{"rel_tol", kPropertyTol}};
  report.passed = report.violations == 0;
  return report;
}

SuiteReport decomposability_suite(int trials, std::uint64_t seed, int threads) {
  const GroupSet gs = GroupSet::chain(30, 6, 4);  // 7 groups, neighbors overlap by 2
  const int m = gs.count();
  std::vector<double> errors(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    for (;;) {
      const int ka = 1 + (i % 2);
      std::vector<int> a_groups = rng.sample_without_replacement(m, ka);
      if (ka == 2 && a_groups[1] - a_groups[0] < 2) continue;  // active groups disjoint
      // far enough that no group can straddle both supports
      std::vector<int> b_candidates;
      for (int g = 0; g < m; ++g) {
        bool far = true;
        for (int ag : a_groups) far = far && std::abs(g - ag) >= 3;
        if (far) b_candidates.push_back(g);
      }
      if (b_candidates.empty()) continue;
      const int bg = b_candidates[static_cast<std::size_t>(
          rng.uniform_int(static_cast<int>(b_candidates.size())))];

      Eigen::VectorXd a = Eigen::VectorXd::Zero(gs.dim());
      for (int g : a_groups)
        for (int j : gs.group(g))
          if (rng.uniform() < 0.6) a[j] = rng.uniform(-2.0, 2.0);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(gs.dim());
      for (int j : gs.group(bg))
        if (rng.uniform() < 0.6) b[j] = rng.uniform(-2.0, 2.0);
      if (a.isZero(0.0) || b.isZero(0.0)) continue;

      const double ha = eval_value(a, gs);
      const double hb = eval_value(b, gs);
      const double hab = eval_value(a + b, gs);
      errors[static_cast<std::size_t>(i)] = std::abs(hab - (ha + hb)) / (ha + hb);
      return;
    }
  });

  SuiteReport report;
  report.suite = "decompose";
  report.trials = trials;
  report.seed = seed;
  report.evaluated = trials;
  double worst = 0.0;
  for (double e : errors) {
    if (e > kPropertyTol) ++report.violations;
    worst = std::max(worst, e);
  }
  report.observed = {{"max_rel_error", worst}};
  report.reference = {{"rel_tol", kPropertyTol}};
  report.passed = report.violations == 0;
  return report;
}

SuiteReport dual_bound_suite(int trials, std::uint64_t seed, int threads) {
  struct Slot {
    double gap = 0.0;  // bound - sampled dual (should stay >= -1e-6)
  };
  std::vector<Slot> slots(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const int p = 6 + rng.uniform_int(3);  // 6..8
    const int n_groups = 2 + rng.uniform_int(2);
    std::vector<std::vector<int>> raw;
    for (;;) {
      raw.clear();
      std::vector<int> cover(static_cast<std::size_t>(p), 0);
      for (int g = 0; g < n_groups; ++g) {
        const int size = 2 + rng.uniform_int(3);
        raw.push_back(rng.sample_without_replacement(p, size));
        for (int j : raw.back()) ++cover[static_cast<std::size_t>(j)];
      }
      bool overlapping = false;
      for (int c : cover) overlapping = overlapping || c > 1;
      if (overlapping) break;
    }
    const GroupSet gs(raw, p);
    Eigen::VectorXd u(p);
    for (int j = 0; j < p; ++j) u[j] = rng.normal();
    const double sampled = dual_norm_sampled(u, gs, 2000, mix_seed(seed, i, 77));
    slots[static_cast<std::size_t>(i)].gap = dual_norm_bound(u, gs) - sampled;
  });

  SuiteReport report;
  report.suite = "dual";
  report.trials = trials;
  report.seed = seed;
  report.evaluated = trials;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& slot : slots) {
    if (slot.gap < -1e-6) ++report.violations;
    min_gap = std::min(min_gap, slot.gap);
  }
  report.observed = {{"min_gap_bound_minus_dual", min_gap}};
  report.reference = {{"abs_tol", 1e-6}};
  report.passed = report.violations == 0;
  return report;
}

SuiteReport compatibility_suite(int trials, std::uint64_t seed, int threads) {
  const int block = 6, shift = 4, p = 102;
  const GroupSet gs = GroupSet::chain(p, block, shift);
  const int m = gs.count();
  const int k = 4;
  std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    std::vector<int> active;
    for (int attempt = 0;; ++attempt) {
      require(attempt < 1000, ErrorCode::generator_infeasible,
              "compatibility_suite: cannot place disjoint active groups");
      active = rng.sample_without_replacement(m, k);
      bool spaced = true;
      for (std::size_t a = 1; a < active.size(); ++a)
        spaced = spaced && active[a] - active[a - 1] >= 2;
      if (spaced) break;
    }
    const double alpha = rng.uniform(1.0 / block, 1.0);
    const int keep = static_cast<int>(std::ceil(alpha * block));
    // The bound's premise is about the realized nonzero fraction; rounding the
    // count up means the fraction is keep / block, not alpha.
    const double alpha_effective = static_cast<double>(keep) / block;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    for (int g : active) {
      const auto& members = gs.group(g);
      std::vector<std::pair<double, int>> drawn;
      for (int j : members) drawn.emplace_back(rng.uniform(-1.0, 1.0), j);
      std::stable_sort(drawn.begin(), drawn.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.first) != std::abs(b.first)) return std::abs(a.first) > std::abs(b.first);
        return a.second < b.second;
      });
      for (int r = 0; r < keep; ++r) x[drawn[static_cast<std::size_t>(r)].second] =
          drawn[static_cast<std::size_t>(r)].first;
    }
    const double h = eval_value(x, gs);
    ratios[static_cast<std::size_t>(i)] =
        h / (compatibility_bound(block, alpha_effective, k) * x.norm() + 1e-6);
  });

  SuiteReport report;
  report.suite = "compat";
  report.trials = trials;
  report.seed = seed;
  report.evaluated = trials;
  double worst = 0.0;
  for (double r : ratios) {
    if (r > 1.0) ++report.violations;
    worst = std::max(worst, r);
  }
  report.observed = {{"max_ratio_vs_bound", worst}};
  report.reference = {{"bound_ratio", 1.0}};
  report.passed = report.violations == 0;
  return report;
}

SuiteReport chi2_suite(int trials, std::uint64_t seed, int threads) {
  const int effective = std::max(trials, 1000);
  const Chi2MaxResult big = chi2_max_mc(500, 120, 1.5, effective, mix_seed(seed, 1), threads);
  const Chi2MaxResult small = chi2_max_mc(2, 1, 2.0, effective, mix_seed(seed, 2), threads);
  // Pr(chi2_1 <= 4) = erf(sqrt(2)); two independent draws square it.
  const double cdf_ref = std::erf(std::sqrt(2.0));
  const double small_ref = cdf_ref * cdf_ref;

  SuiteReport report;
  report.suite = "chi2";
  report.trials = effective;
  report.seed = seed;
  report.evaluated = 2;
  if (big.empirical < big.analytic_lower - 3.0 * big.std_error) ++report.violations;
  if (small.empirical < small.analytic_lower - 3.0 * small.std_error) ++report.violations;
  if (std::abs(small.empirical - small_ref) > 3.0 * small.std_error + 1e-9) ++report.violations;
  report.observed = {{"empirical_m500_d120", big.empirical},
                     {"empirical_m2_d1", small.empirical},
                     {"std_error_m2_d1", small.std_error}};
  report.reference = {{"analytic_lower_m500_d120", big.analytic_lower},
                      {"analytic_lower_m2_d1", small.analytic_lower},
                      {"cdf_product_m2_d1", small_ref}};
  report.passed = report.violations == 0;
  return report;
}

namespace {

// Realized within-group nonzero fraction after the ceiling in the generator.
double effective_alpha(double alpha, int group_size) {
  return std::ceil(alpha * group_size) / static_cast<double>(group_size);
}

std::vector<int> active_union(const GroupSet& replicated, const std::vector<int>& active) {
  std::vector<int> support;
  for (int g : active) {
    const auto& members = replicated.group(g);
    support.insert(support.end(), members.begin(), members.end());
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return support;
}

}  // namespace

SuiteReport lambda_rule_suite(int trials, std::uint64_t seed, int threads) {
  BenchConfig cfg = desk_profile();
  const GroupSet gs = cfg.make_groups();
  const LiftedSpace space = make_lifted(gs, cfg.tasks);
  const TruthDraw draw = gen_truth(cfg, mix_seed(seed, 1));
  const MultitaskProblem problem = gen_measurements(draw.truth, cfg, mix_seed(seed, 2));
  const double sigma_m = max_group_singular(problem, gs);
  BoundParams params;
  params.groups = cfg.group_count();
  params.max_group = cfg.block;
  params.tasks = cfg.tasks;
  params.n = cfg.n;
  params.active = cfg.k_active;
  params.alpha = cfg.alpha;
  params.sigma = cfg.sigma;
  params.sigma_m = sigma_m;
  const double rule = lambda_rule(params);

  // Redraw the noise and measure the dual bound of the gradient at the truth.
  const int p = cfg.p;
  std::vector<double> duals(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, threads, [&](int i) {
    Rng rng = Rng::stream(seed, 5000 + static_cast<std::uint64_t>(i));
    Eigen::VectorXd grad(cfg.tasks * p);
    for (int t = 0; t < cfg.tasks; ++t) {
      const auto& design = problem.designs[static_cast<std::size_t>(t)];
      Eigen::VectorXd eta(design.rows());
      for (int r = 0; r < eta.size(); ++r) eta[r] = cfg.sigma * rng.normal();
      grad.segment(t * p, p) = design.transpose() * eta / static_cast<double>(design.rows());
    }
    duals[static_cast<std::size_t>(i)] = dual_norm_bound(grad, space.layout.replicated);
  });
  std::vector<double> sorted = duals;
  std::sort(sorted.begin(), sorted.end());
  const int idx99 = std::min(trials - 1, static_cast<int>(std::ceil(0.99 * trials)) - 1);
  const double p99 = sorted[static_cast<std::size_t>(std::max(idx99, 0))];

  SuiteReport report;
  report.suite = "lambda";
  report.trials = trials;
  report.seed = seed;
  report.evaluated = trials;
  if (p99 > rule) ++report.violations;
  report.observed = {{"empirical_p99_dual", p99}, {"empirical_max_dual", sorted.back()}};
  report.reference = {{"lambda_rule", rule}, {"measured_sigma_m", sigma_m}};
  report.passed = report.violations == 0;
  return report;
}

SuiteReport theorem_suite(int trials, std::uint64_t seed, int threads) {
  BenchConfig cfg = desk_profile();
  // At the desk profile's default noise the rule lambda exceeds the zero
  // threshold and the check degenerates to the zero estimator; this noise
  // level keeps the fits nontrivial while the bound still dominates.
  cfg.sigma = 0.01;
  const GroupSet gs = cfg.make_groups();
  const LiftedSpace space = make_lifted(gs, cfg.tasks);

  struct Slot {
    bool skipped = false;
    bool violated = false;
    double margin = 0.0;  // bound / error
  };
  std::vector<Slot> slots(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int i) {
    const std::uint64_t tseed = mix_seed(seed, static_cast<std::uint64_t>(i));
    const TruthDraw draw = gen_truth(cfg, mix_seed(tseed, 1));
    const MultitaskProblem problem = gen_measurements(draw.truth, cfg, mix_seed(tseed, 2));
    auto& slot = slots[static_cast<std::size_t>(i)];

    const std::vector<int> support = active_union(space.layout.replicated, draw.active_groups);
    const RscEstimate rsc = estimate_rsc(problem, cfg.p, support, 0, tseed);
    if (rsc.singular) {
      slot.skipped = true;
      return;
    }
    BoundParams params;
    params.groups = cfg.group_count();
    params.max_group = cfg.block;
    params.tasks = cfg.tasks;
    params.n = cfg.n;
    params.active = cfg.k_active;
    params.alpha = effective_alpha(cfg.alpha, cfg.tasks * cfg.block);
    params.sigma = cfg.sigma;
    params.sigma_m = max_group_singular(problem, gs);
    params.kappa = rsc.kappa;

    SolverConfig solver = cfg.solver;
    const FitResult res = fit(problem, space, lambda_rule(params), solver);
    const double err = (res.x_hat - draw.truth).squaredNorm();
    const double bound = theorem_bound(params);
    slot.violated = err > bound;
    slot.margin = err > 0.0 ? bound / err : std::numeric_limits<double>::infinity();
  });

  SuiteReport report;
  report.suite = "theorem";
  report.trials = trials;
  report.seed = seed;
  double min_margin = std::numeric_limits<double>::infinity();
  int skipped = 0;
  for (const auto& slot : slots) {
    if (slot.skipped) {
      ++skipped;
      continue;
    }
    ++report.evaluated;
    if (slot.violated) ++report.violations;
    min_margin = std::min(min_margin, slot.margin);
  }
  report.observed = {{"min_bound_over_error", min_margin},
                     {"skipped_singular", static_cast<double>(skipped)}};
  report.reference = {{"violation_budget", std::floor(0.01 * trials)}};
  report.passed = report.violations <= static_cast<int>(std::floor(0.01 * trials));
  if (skipped > 0) report.notes.push_back("singular restricted curvature trials were skipped");
  report.notes.push_back(
      "kappa is the exact restricted minimum curvature on the planted support, "
      "not the cone-restricted constant");
  return report;
}

SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed, int threads) {
  if (name == "norm") return norm_axiom_suite(trials, seed, threads);
  if (name == "decompose") return decomposability_suite(trials, seed, threads);
  if (name == "dual") return dual_bound_suite(trials, seed, threads);
  if (name == "compat") return compatibility_suite(trials, seed, threads);
  if (name == "chi2") return chi2_suite(trials, seed, threads);
  if (name == "lambda") return lambda_rule_suite(trials, seed, threads);
  if (name == "theorem") return theorem_suite(trials, seed, threads);
  raise(ErrorCode::invalid_argument, "unknown suite: " + name);
}

}  // namespace soslasso
