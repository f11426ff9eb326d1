#include "soslasso/bench.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "soslasso/format.hpp"
#include "soslasso/parallel.hpp"
#include "soslasso/rng.hpp"
#include "soslasso/theory.hpp"

namespace soslasso {

void BenchConfig::validate() const {
  require(alpha > 0.0 && alpha <= 1.0, ErrorCode::invalid_argument, "bench: alpha in (0, 1]");
  require(sigma >= 0.0, ErrorCode::invalid_argument, "bench: sigma must be >= 0");
  require(n >= 1, ErrorCode::invalid_argument, "bench: n must be >= 1");
  require(tasks >= 1, ErrorCode::invalid_argument, "bench: tasks must be >= 1");
  require(trials >= 1, ErrorCode::invalid_argument, "bench: trials must be >= 1");
  require(coeff_low < coeff_high, ErrorCode::invalid_argument, "bench: empty coefficient range");
  require(n_lambdas >= 1, ErrorCode::invalid_argument, "bench: n_lambdas must be >= 1");
  const int m = group_count();
  require(k_active >= 0 && k_active <= m, ErrorCode::invalid_argument,
          "bench: k_active must lie in [0, M]");
  (void)make_groups();  // validates the chain geometry
}

BenchConfig paper_profile() {
  BenchConfig cfg;  // defaults are the full-scale experiment
  return cfg;
}

BenchConfig desk_profile() {
  BenchConfig cfg;
  cfg.p = 402;
  cfg.block = 6;
  cfg.shift = 4;
  cfg.tasks = 5;
  cfg.n = 80;
  cfg.k_active = 8;
  cfg.alpha = 0.2;
  cfg.sigma = 0.1;
  cfg.trials = 20;
  return cfg;
}

TruthDraw gen_truth(const BenchConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const GroupSet gs = cfg.make_groups();
  const TaskLayout layout = replicate_across_tasks(gs, cfg.tasks);
  const int total = cfg.tasks * cfg.p;

  TruthDraw out;
  out.truth = Eigen::MatrixXd::Zero(cfg.p, cfg.tasks);
  if (cfg.k_active == 0) return out;

  Rng rng = Rng::stream(seed, 0xA11CE);
  out.active_groups = rng.sample_without_replacement(gs.count(), cfg.k_active);

  std::vector<char> in_union(static_cast<std::size_t>(total), 0);
  for (int g : out.active_groups)
    for (int c : layout.replicated.group(g)) in_union[static_cast<std::size_t>(c)] = 1;

  // One draw per coordinate of the active union, in ascending coordinate order.
  std::vector<double> value(static_cast<std::size_t>(total), 0.0);
  for (int c = 0; c < total; ++c)
    if (in_union[static_cast<std::size_t>(c)])
      value[static_cast<std::size_t>(c)] = rng.uniform(cfg.coeff_low, cfg.coeff_high);

  // Retain the top ceil(alpha * size) magnitudes per active group, jointly
  // across tasks; ties break toward the lower coordinate.
  std::vector<char> retained(static_cast<std::size_t>(total), 0);
  for (int g : out.active_groups) {
    const auto& members = layout.replicated.group(g);
    const int keep = static_cast<int>(
        std::ceil(cfg.alpha * static_cast<double>(members.size())));
    std::vector<int> order(members.begin(), members.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = std::abs(value[static_cast<std::size_t>(a)]);
      const double mb = std::abs(value[static_cast<std::size_t>(b)]);
      if (ma != mb) return ma > mb;
      return a < b;
    });
    for (int r = 0; r < keep && r < static_cast<int>(order.size()); ++r)
      retained[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = 1;
  }

  for (int c = 0; c < total; ++c)
    if (retained[static_cast<std::size_t>(c)])
      out.truth(c % cfg.p, c / cfg.p) = value[static_cast<std::size_t>(c)];
  return out;
}

MultitaskProblem gen_measurements(const Eigen::MatrixXd& truth, const BenchConfig& cfg,
                                  std::uint64_t seed) {
  require(truth.rows() == cfg.p && truth.cols() == cfg.tasks, ErrorCode::shape_mismatch,
          "gen_measurements: truth shape does not match config");
  MultitaskProblem problem;
  problem.loss = LossKind::squared;
  problem.noise_sigma = cfg.sigma;
  const double variance =
      cfg.design_variance > 0.0 ? cfg.design_variance : 1.0 / static_cast<double>(cfg.n);
  const double scale = std::sqrt(variance);
  for (int t = 0; t < cfg.tasks; ++t) {
    Rng design_rng = Rng::stream(seed, 0xD, static_cast<std::uint64_t>(t));
    Eigen::MatrixXd design(cfg.n, cfg.p);
    for (int r = 0; r < cfg.n; ++r)
      for (int j = 0; j < cfg.p; ++j) design(r, j) = scale * design_rng.normal();
    Rng noise_rng = Rng::stream(seed, 0xE, static_cast<std::uint64_t>(t));
    Eigen::VectorXd response = design * truth.col(t);
    for (int r = 0; r < cfg.n; ++r) response[r] += cfg.sigma * noise_rng.normal();
    problem.add_task(std::move(design), std::move(response));
  }
  return problem;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::lasso: return "lasso";
    case Method::glasso_latent: return "glasso_latent";
    case Method::soslasso: return "soslasso";
  }
  return "unknown";
}

PenaltyConfig method_penalty(Method m) {
  PenaltyConfig cfg;
  cfg.alpha = 1.0;
  switch (m) {
    case Method::lasso: cfg.mode = PenaltyMode::l1_only; break;
    case Method::glasso_latent: cfg.mode = PenaltyMode::group_only; break;
    case Method::soslasso: cfg.mode = PenaltyMode::soslasso; break;
  }
  return cfg;
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string canonical_config(const BenchConfig& cfg) {
  std::string s;
  s += "p=" + std::to_string(cfg.p);
  s += ";block=" + std::to_string(cfg.block);
  s += ";shift=" + std::to_string(cfg.shift);
  s += ";tasks=" + std::to_string(cfg.tasks);
  s += ";n=" + std::to_string(cfg.n);
  s += ";k_active=" + std::to_string(cfg.k_active);
  s += ";alpha=" + dtos(cfg.alpha);
  s += ";sigma=" + dtos(cfg.sigma);
  s += ";design_variance=" + dtos(cfg.design_variance);
  s += ";coeff_low=" + dtos(cfg.coeff_low);
  s += ";coeff_high=" + dtos(cfg.coeff_high);
  s += ";n_lambdas=" + std::to_string(cfg.n_lambdas);
  s += ";lambda_min_ratio=" + dtos(cfg.lambda_min_ratio);
  s += ";trials=" + std::to_string(cfg.trials);
  s += ";seed=" + std::to_string(cfg.seed);
  return s;
}

}  // namespace

const BenchSummaryCell& BenchReport::cell(int value_index, Method m) const {
  for (const auto& c : summary) {
    if (c.method == m &&
        c.sweep_value == sweep_values[static_cast<std::size_t>(value_index)])
      return c;
  }
  raise(ErrorCode::invalid_argument, "bench report: no such summary cell");
}

std::string BenchReport::to_csv() const {
  std::string csv = "sweep_value,method,trial,lambda_selected,mse\n";
  for (const auto& c : cells) {
    csv += dtos(c.sweep_value);
    csv += ',';
    csv += method_name(c.method);
    csv += ',';
    csv += std::to_string(c.trial);
    csv += ',';
    csv += c.ok ? dtos(c.lambda) : "nan";
    csv += ',';
    csv += c.ok ? dtos(c.mse) : "nan";
    csv += '\n';
  }
  return csv;
}

std::string BenchReport::summary_json() const {
  nlohmann::ordered_json j;
  j["sweep"] = sweep == SweepKind::noise ? "noise" : "alpha";
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  nlohmann::ordered_json methods_json = nlohmann::ordered_json::array();
  for (Method m : methods) methods_json.push_back(method_name(m));
  j["methods"] = methods_json;
  j["sweep_values"] = sweep_values;
  nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
  for (const auto& c : summary) {
    nlohmann::ordered_json cj;
    cj["sweep_value"] = c.sweep_value;
    cj["method"] = method_name(c.method);
    cj["mean_mse"] = c.mean_mse;
    cj["stderr_mse"] = c.stderr_mse;
    cj["trials"] = c.trials;
    cells_json.push_back(cj);
  }
  j["cells"] = cells_json;
  return j.dump(2);
}

BenchReport run_sweep(const BenchConfig& cfg, SweepKind sweep, const std::vector<double>& values,
                      const std::vector<Method>& methods) {
  cfg.validate();
  require(!values.empty(), ErrorCode::invalid_argument, "run_sweep: no sweep values");
  require(!methods.empty(), ErrorCode::invalid_argument, "run_sweep: no methods");

  const GroupSet gs = cfg.make_groups();
  const LiftedSpace space = make_lifted(gs, cfg.tasks);

  struct UnitResult {
    struct PerMethod {
      double lambda = 0.0;
      double mse = 0.0;
      bool ok = false;
    };
    std::vector<PerMethod> per_method;
  };
  const int n_units = static_cast<int>(values.size()) * cfg.trials;
  std::vector<UnitResult> units(static_cast<std::size_t>(n_units));

  parallel_for(n_units, cfg.threads, [&](int u) {
    const int vi = u / cfg.trials;
    const int trial = u % cfg.trials;
    BenchConfig point = cfg;
    if (sweep == SweepKind::noise)
      point.sigma = values[static_cast<std::size_t>(vi)];
    else
      point.alpha = values[static_cast<std::size_t>(vi)];

    const std::uint64_t tseed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(vi), static_cast<std::uint64_t>(trial));
    const TruthDraw draw = gen_truth(point, mix_seed(tseed, 1));
    const MultitaskProblem problem = gen_measurements(draw.truth, point, mix_seed(tseed, 2));

    auto& unit = units[static_cast<std::size_t>(u)];
    unit.per_method.resize(methods.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      auto& slot = unit.per_method[mi];
      try {
        SolverConfig solver = cfg.solver;
        solver.penalty = method_penalty(methods[mi]);
        const double lmax = lambda_max(problem, space, solver.penalty);
        const auto grid = lambda_grid(lmax, cfg.n_lambdas, cfg.lambda_min_ratio);
        const auto choice = clairvoyant_select(problem, space, draw.truth, grid, solver);
        slot.lambda = choice.best_lambda;
        slot.mse = mse(choice.best_fit.x_hat, draw.truth);
        slot.ok = true;
      } catch (const Error&) {
        slot.ok = false;
      }
    }
  });

  BenchReport report;
  report.sweep = sweep;
  report.sweep_values = values;
  report.methods = methods;
  report.seed = cfg.seed;
  report.config_hash = fnv1a(canonical_config(cfg));
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      double sum = 0.0, sum_sq = 0.0;
      int ok_count = 0;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const auto& slot =
            units[vi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(trial)]
                .per_method[mi];
        BenchCell cell;
        cell.sweep_value = values[vi];
        cell.method = methods[mi];
        cell.trial = trial;
        cell.lambda = slot.lambda;
        cell.mse = slot.mse;
        cell.ok = slot.ok;
        report.cells.push_back(cell);
        if (slot.ok) {
          sum += slot.mse;
          sum_sq += slot.mse * slot.mse;
          ++ok_count;
        }
      }
      BenchSummaryCell summary;
      summary.sweep_value = values[vi];
      summary.method = methods[mi];
      summary.trials = ok_count;
      if (ok_count > 0) {
        summary.mean_mse = sum / ok_count;
        if (ok_count > 1) {
          const double var =
              std::max(0.0, (sum_sq - sum * sum / ok_count) / (ok_count - 1));
          summary.stderr_mse = std::sqrt(var / ok_count);
        }
      } else {
        summary.mean_mse = std::numeric_limits<double>::quiet_NaN();
        summary.stderr_mse = std::numeric_limits<double>::quiet_NaN();
      }
      report.summary.push_back(summary);
    }
  }
  return report;
}

ScalingResult scaling_study(const BenchConfig& cfg, const std::vector<int>& n_list, int trials,
                            std::uint64_t seed) {
  require(!n_list.empty(), ErrorCode::invalid_argument, "scaling_study: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    require(n_list[i] > n_list[i - 1], ErrorCode::invalid_argument,
            "scaling_study: n list must be ascending");
  require(trials >= 1, ErrorCode::invalid_argument, "scaling_study: trials must be >= 1");

  const GroupSet gs = cfg.make_groups();
  const LiftedSpace space = make_lifted(gs, cfg.tasks);

  struct Slot {
    double error = 0.0;
    double bound = 0.0;
    bool skipped = false;
  };
  const int n_units = static_cast<int>(n_list.size()) * trials;
  std::vector<Slot> slots(static_cast<std::size_t>(n_units));

  // The sample count varies while the measurement distribution stays fixed,
  // so information accumulates with n. The lambda rule and bound use the
  // population group singular value of the normalized reference distribution
  // (exactly 1 for unit-column Gaussian designs); the per-instance empirical
  // value would inject a (1 + sqrt(TB/n))^2 drift that is not part of the
  // rate being measured.
  const double variance =
      cfg.design_variance > 0.0 ? cfg.design_variance : 1.0 / static_cast<double>(cfg.n);

  parallel_for(n_units, cfg.threads, [&](int u) {
    const int ni = u / trials;
    const int trial = u % trials;
    BenchConfig point = cfg;
    point.n = n_list[static_cast<std::size_t>(ni)];
    point.design_variance = variance;

    const std::uint64_t tseed =
        mix_seed(seed, static_cast<std::uint64_t>(ni), static_cast<std::uint64_t>(trial));
    const TruthDraw draw = gen_truth(point, mix_seed(tseed, 1));
    const MultitaskProblem problem = gen_measurements(draw.truth, point, mix_seed(tseed, 2));
    auto& slot = slots[static_cast<std::size_t>(u)];

    std::vector<int> support;
    for (int g : draw.active_groups) {
      const auto& members = space.layout.replicated.group(g);
      support.insert(support.end(), members.begin(), members.end());
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    const RscEstimate rsc = estimate_rsc(problem, cfg.p, support, 0, tseed);
    if (rsc.singular) {
      slot.skipped = true;
      return;
    }
    BoundParams params;
    params.groups = cfg.group_count();
    params.max_group = cfg.block;
    params.tasks = cfg.tasks;
    params.n = point.n;
    params.active = cfg.k_active;
    params.alpha = std::ceil(cfg.alpha * cfg.tasks * cfg.block) /
                   static_cast<double>(cfg.tasks * cfg.block);
    params.sigma = cfg.sigma;
    params.sigma_m = 1.0;
    params.kappa = rsc.kappa;

    SolverConfig solver = cfg.solver;
    const FitResult res = fit(problem, space, lambda_rule(params), solver);
    slot.error = (res.x_hat - draw.truth).squaredNorm();
    slot.bound = theorem_bound(params);
  });

  ScalingResult out;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    double err_sum = 0.0, bound_sum = 0.0;
    int count = 0;
    for (int trial = 0; trial < trials; ++trial) {
      const auto& slot = slots[ni * static_cast<std::size_t>(trials) + static_cast<std::size_t>(trial)];
      ++out.cells_total;
      if (slot.skipped) {
        ++out.cells_skipped;
        continue;
      }
      err_sum += slot.error;
      bound_sum += slot.bound;
      if (slot.error <= slot.bound) ++out.cells_dominated;
      ++count;
    }
    ScalingRow row;
    row.n = n_list[ni];
    row.mean_sq_error = count > 0 ? err_sum / count : std::numeric_limits<double>::quiet_NaN();
    row.mean_bound = count > 0 ? bound_sum / count : std::numeric_limits<double>::quiet_NaN();
    out.rows.push_back(row);
  }

  // Least-squares slope of log(mean error) against log(n).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int pts = 0;
  for (const auto& row : out.rows) {
    if (!(row.mean_sq_error > 0.0)) continue;
    const double lx = std::log(static_cast<double>(row.n));
    const double ly = std::log(row.mean_sq_error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++pts;
  }
  out.slope = pts >= 2 ? (pts * sxy - sx * sy) / (pts * sxx - sx * sx)
                       : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace soslasso
