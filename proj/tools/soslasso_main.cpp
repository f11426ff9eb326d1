// Command-line front end for the sparse overlapping sets lasso library.
// Talks to the core exclusively through the C API in soslasso.h; all file
// ingestion and output formatting lives here.

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "soslasso.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CliError {
  int exit_code;
  std::string message;
};

void require_ok(int status, const std::string& context) {
  if (status != SOS_OK)
    throw CliError{1, context + ": " + sos_status_name(status) + " (" + sos_last_error() + ")"};
}

std::string dtos(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

using groups_handle = std::unique_ptr<sos_groups, decltype(&sos_groups_free)>;
using problem_handle = std::unique_ptr<sos_problem, decltype(&sos_problem_free)>;
using fit_handle = std::unique_ptr<sos_fit_result, decltype(&sos_fit_result_free)>;
using path_handle = std::unique_ptr<sos_path_result, decltype(&sos_path_result_free)>;
using truth_handle = std::unique_ptr<sos_truth, decltype(&sos_truth_free)>;
using bench_handle = std::unique_ptr<sos_bench_report, decltype(&sos_bench_report_free)>;
using check_handle = std::unique_ptr<sos_check_report, decltype(&sos_check_report_free)>;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{1, "cannot open " + path.string()};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{1, "cannot write " + path.string()};
  out << text;
  if (!out) throw CliError{1, "write failed for " + path.string()};
}

// Dense CSV of doubles, no header.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

Matrix read_csv(const fs::path& path) {
  const std::string text = slurp(path);
  Matrix m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    if (eol > pos) {
      int cols = 0;
      std::size_t field = pos;
      while (field < eol) {
        std::size_t comma = text.find(',', field);
        if (comma == std::string::npos || comma > eol) comma = eol;
        double value = 0.0;
        const auto res = std::from_chars(text.data() + field, text.data() + comma, value);
        if (res.ec != std::errc())
          throw CliError{1, path.string() + ": bad number in row " +
                                std::to_string(m.rows + 1)};
        m.data.push_back(value);
        ++cols;
        field = comma + 1;
      }
      if (m.rows == 0)
        m.cols = cols;
      else if (cols != m.cols)
        throw CliError{1, path.string() + ": ragged row " + std::to_string(m.rows + 1)};
      ++m.rows;
    }
    pos = eol + 1;
  }
  if (m.rows == 0) throw CliError{1, path.string() + ": empty file"};
  return m;
}

std::string matrix_csv(const double* colmajor, int rows, int cols) {
  std::string out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c > 0) out += ',';
      out += dtos(colmajor[static_cast<std::size_t>(c) * rows + r]);
    }
    out += '\n';
  }
  return out;
}

int mode_from_string(const std::string& name) {
  if (name == "soslasso") return SOS_MODE_SOSLASSO;
  if (name == "group") return SOS_MODE_GROUP_ONLY;
  if (name == "l1") return SOS_MODE_L1_ONLY;
  throw CliError{1, "unknown mode: " + name + " (expected soslasso, group, or l1)"};
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw CliError{1, "empty list: " + text};
  return out;
}

// "count:min_ratio", e.g. "30:0.001"
std::pair<int, double> parse_grid_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CliError{1, "grid spec must be count:min_ratio"};
  return {std::stoi(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

struct Manifest {
  int loss_kind = SOS_LOSS_SQUARED;
  std::vector<fs::path> task_files;
  std::optional<fs::path> groups_file;
  std::optional<fs::path> truth_file;
  std::optional<double> sigma;
};

Manifest load_manifest(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError{1, path.string() + ": " + e.what()};
  }
  Manifest m;
  const fs::path base = path.parent_path();
  const std::string loss = doc.value("loss", "squared");
  if (loss == "squared")
    m.loss_kind = SOS_LOSS_SQUARED;
  else if (loss == "logistic")
    m.loss_kind = SOS_LOSS_LOGISTIC;
  else
    throw CliError{1, path.string() + ": unknown loss '" + loss + "'"};
  if (!doc.contains("tasks") || !doc["tasks"].is_array() || doc["tasks"].empty())
    throw CliError{1, path.string() + ": manifest needs a nonempty tasks list"};
  for (const auto& entry : doc["tasks"]) m.task_files.push_back(base / entry.get<std::string>());
  if (doc.contains("groups")) m.groups_file = base / doc["groups"].get<std::string>();
  if (doc.contains("truth")) m.truth_file = base / doc["truth"].get<std::string>();
  if (doc.contains("sigma")) m.sigma = doc["sigma"].get<double>();
  return m;
}

groups_handle load_groups(const fs::path& path) {
  if (!fs::exists(path)) throw CliError{1, "groups file not found: " + path.string()};
  sos_groups* raw = nullptr;
  require_ok(sos_groups_parse_json(slurp(path).c_str(), &raw), path.string());
  return groups_handle(raw, &sos_groups_free);
}

problem_handle load_problem(const Manifest& manifest) {
  sos_problem* raw = nullptr;
  require_ok(sos_problem_create(manifest.loss_kind, &raw), "problem");
  problem_handle problem(raw, &sos_problem_free);
  int dim = -1;
  for (const auto& file : manifest.task_files) {
    if (!fs::exists(file)) throw CliError{1, "task file not found: " + file.string()};
    const Matrix table = read_csv(file);
    if (table.cols < 2)
      throw CliError{1, file.string() + ": expected feature columns plus a response column"};
    const int p = table.cols - 1;
    if (dim < 0)
      dim = p;
    else if (dim != p)
      throw CliError{1, file.string() + ": tasks disagree on column count"};
    std::vector<double> design(static_cast<std::size_t>(table.rows) * p);
    std::vector<double> response(static_cast<std::size_t>(table.rows));
    for (int r = 0; r < table.rows; ++r) {
      for (int c = 0; c < p; ++c) design[static_cast<std::size_t>(r) * p + c] = table.at(r, c);
      response[static_cast<std::size_t>(r)] = table.at(r, p);
    }
    require_ok(sos_problem_add_task(problem.get(), table.rows, p, design.data(), response.data()),
               file.string());
  }
  return problem;
}

// truth file is p rows x T columns
std::vector<double> load_truth_colmajor(const fs::path& path, int p, int tasks) {
  const Matrix table = read_csv(path);
  if (table.rows != p || table.cols != tasks)
    throw CliError{1, path.string() + ": truth shape " + std::to_string(table.rows) + "x" +
                          std::to_string(table.cols) + " does not match problem " +
                          std::to_string(p) + "x" + std::to_string(tasks)};
  std::vector<double> colmajor(static_cast<std::size_t>(p) * tasks);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < tasks; ++c)
      colmajor[static_cast<std::size_t>(c) * p + r] = table.at(r, c);
  return colmajor;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("SOSLASSO_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string profile = "desk";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int p = -1, block = -1, shift = -1, tasks = -1, n = -1, k_active = -1;
  double alpha = -1.0, sigma = -1.0;
};

int cmd_gen(const GenArgs& args, int threads) {
  sos_bench_config cfg;
  require_ok(sos_bench_config_init(
                 args.profile == "paper" ? SOS_PROFILE_PAPER : SOS_PROFILE_DESK, &cfg),
             "config");
  if (args.p >= 0) cfg.p = args.p;
  if (args.block >= 0) cfg.block = args.block;
  if (args.shift >= 0) cfg.shift = args.shift;
  if (args.tasks >= 0) cfg.tasks = args.tasks;
  if (args.n >= 0) cfg.n = args.n;
  if (args.k_active >= 0) cfg.k_active = args.k_active;
  if (args.alpha >= 0.0) cfg.alpha = args.alpha;
  if (args.sigma >= 0.0) cfg.sigma = args.sigma;
  cfg.seed = args.seed;
  cfg.threads = threads;

  sos_groups* groups_raw = nullptr;
  require_ok(sos_groups_chain(cfg.p, cfg.block, cfg.shift, &groups_raw), "chain groups");
  groups_handle groups(groups_raw, &sos_groups_free);

  sos_truth* truth_raw = nullptr;
  require_ok(sos_gen_truth(&cfg, cfg.seed, &truth_raw), "truth");
  truth_handle truth(truth_raw, &sos_truth_free);

  sos_problem* problem_raw = nullptr;
  require_ok(sos_gen_problem(truth.get(), &cfg, cfg.seed, &problem_raw), "measurements");
  problem_handle problem(problem_raw, &sos_problem_free);

  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  // groups.json: materialized member lists
  {
    std::string text = "{\"p\": " + std::to_string(cfg.p) + ", \"groups\": [";
    std::vector<int32_t> buffer(static_cast<std::size_t>(sos_groups_max_size(groups.get())));
    for (int32_t g = 0; g < sos_groups_count(groups.get()); ++g) {
      if (g > 0) text += ", ";
      const int32_t size = sos_groups_size(groups.get(), g);
      require_ok(sos_groups_members(groups.get(), g, buffer.data()), "groups");
      text += '[';
      for (int32_t i = 0; i < size; ++i) {
        if (i > 0) text += ", ";
        text += std::to_string(buffer[static_cast<std::size_t>(i)]);
      }
      text += ']';
    }
    text += "]}\n";
    spit(out_dir / "groups.json", text);
  }

  // truth.csv: p rows x T columns
  {
    std::vector<double> colmajor(static_cast<std::size_t>(cfg.p) * cfg.tasks);
    require_ok(sos_truth_matrix(truth.get(), colmajor.data()), "truth matrix");
    spit(out_dir / "truth.csv", matrix_csv(colmajor.data(), cfg.p, cfg.tasks));
  }

  // per-task CSVs: features then response
  std::vector<std::string> task_names;
  for (int32_t t = 0; t < cfg.tasks; ++t) {
    const int32_t rows = sos_problem_rows(problem.get(), t);
    std::vector<double> design(static_cast<std::size_t>(rows) * cfg.p);
    std::vector<double> response(static_cast<std::size_t>(rows));
    require_ok(sos_problem_get_design(problem.get(), t, design.data()), "design");
    require_ok(sos_problem_get_response(problem.get(), t, response.data()), "response");
    std::string csv;
    for (int32_t r = 0; r < rows; ++r) {
      for (int32_t c = 0; c < cfg.p; ++c) {
        csv += dtos(design[static_cast<std::size_t>(r) * cfg.p + c]);
        csv += ',';
      }
      csv += dtos(response[static_cast<std::size_t>(r)]);
      csv += '\n';
    }
    char name[32];
    std::snprintf(name, sizeof(name), "task_%03d.csv", t);
    task_names.emplace_back(name);
    spit(out_dir / name, csv);
  }

  // manifest
  {
    std::string text = "{\"loss\": \"squared\", \"tasks\": [";
    for (std::size_t i = 0; i < task_names.size(); ++i) {
      if (i > 0) text += ", ";
      text += '"' + task_names[i] + '"';
    }
    text += "], \"groups\": \"groups.json\", \"truth\": \"truth.csv\", \"sigma\": " +
            dtos(cfg.sigma) + "}\n";
    spit(out_dir / "manifest.json", text);
  }
  std::cerr << "wrote " << task_names.size() << " task files, groups.json, truth.csv, "
            << "manifest.json to " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string manifest_path;
  std::string groups_path;
  double lambda = -1.0;
  std::string grid_spec;
  std::string mode = "soslasso";
  double alpha = 1.0;
  double tol = -1.0;
  int max_iters = -1;
  bool backtracking = false;
  std::string out_json = "result.json";
  std::string out_csv = "coefficients.csv";
};

sos_solver_options make_options(const std::string& mode, double alpha, double tol,
                                int max_iters, bool backtracking) {
  sos_solver_options options;
  sos_solver_options_init(&options);
  options.mode = mode_from_string(mode);
  options.alpha = alpha;
  if (tol > 0.0) options.stationarity_tol = tol;
  if (max_iters > 0) options.max_iters = max_iters;
  if (backtracking) options.step_rule = SOS_STEP_BACKTRACKING;
  return options;
}

int cmd_fit(const FitArgs& args) {
  const Manifest manifest = load_manifest(args.manifest_path);
  fs::path groups_path;
  if (!args.groups_path.empty())
    groups_path = args.groups_path;
  else if (manifest.groups_file)
    groups_path = *manifest.groups_file;
  else
    throw CliError{1, "no groups file: pass --groups or add one to the manifest"};
  groups_handle groups = load_groups(groups_path);
  problem_handle problem = load_problem(manifest);

  const int32_t p = sos_problem_dim(problem.get());
  const int32_t tasks = sos_problem_tasks(problem.get());
  const sos_solver_options options =
      make_options(args.mode, args.alpha, args.tol, args.max_iters, args.backtracking);

  double lambda = args.lambda;
  if (lambda < 0.0 && args.grid_spec.empty())
    throw CliError{1, "fit needs --lambda or --grid"};
  if (lambda < 0.0) {
    // clairvoyant pick over the grid; requires a truth file
    if (!manifest.truth_file)
      throw CliError{1, "--grid fit needs a truth file in the manifest for selection; "
                        "use the path subcommand otherwise"};
    const auto [count, min_ratio] = parse_grid_spec(args.grid_spec);
    double lmax = 0.0;
    require_ok(sos_lambda_max(problem.get(), groups.get(), options.mode, options.alpha, &lmax),
               "lambda_max");
    std::vector<double> grid(static_cast<std::size_t>(count));
    int32_t written = 0;
    require_ok(sos_lambda_grid(lmax, count, min_ratio, grid.data(), &written), "grid");
    grid.resize(static_cast<std::size_t>(written));
    sos_path_result* path_raw = nullptr;
    require_ok(sos_path(problem.get(), groups.get(), grid.data(), written, &options, &path_raw),
               "path");
    path_handle path(path_raw, &sos_path_result_free);
    const std::vector<double> truth = load_truth_colmajor(*manifest.truth_file, p, tasks);
    std::vector<double> coef(static_cast<std::size_t>(p) * tasks);
    double best = -1.0;
    for (int32_t i = 0; i < sos_path_length(path.get()); ++i) {
      require_ok(sos_path_coefficients(path.get(), i, coef.data()), "path point");
      double err = 0.0;
      require_ok(sos_mse(coef.data(), truth.data(), static_cast<int64_t>(coef.size()), &err),
                 "mse");
      double point_lambda = 0.0;
      require_ok(sos_path_point(path.get(), i, &point_lambda, nullptr, nullptr, nullptr, nullptr),
                 "path point");
      if (best < 0.0 || err < best) {
        best = err;
        lambda = point_lambda;
      }
    }
  }

  sos_fit_result* fit_raw = nullptr;
  require_ok(sos_fit(problem.get(), groups.get(), lambda, &options, nullptr, &fit_raw), "fit");
  fit_handle fit(fit_raw, &sos_fit_result_free);

  std::vector<double> coef(static_cast<std::size_t>(p) * tasks);
  require_ok(sos_fit_coefficients(fit.get(), coef.data()), "coefficients");
  spit(args.out_csv, matrix_csv(coef.data(), p, tasks));

  const int32_t selected = sos_fit_selected_count(fit.get());
  std::vector<int32_t> selected_groups(static_cast<std::size_t>(selected));
  if (selected > 0)
    require_ok(sos_fit_selected_groups(fit.get(), selected_groups.data()), "selected groups");

  ordered_json result;
  result["lambda"] = sos_fit_lambda(fit.get());
  result["converged"] = sos_fit_converged(fit.get()) != 0;
  result["iterations"] = sos_fit_iterations(fit.get());
  result["objective"] = sos_fit_objective(fit.get());
  result["stationarity_residual"] = sos_fit_stationarity(fit.get());
  result["mode"] = args.mode;
  result["selected_groups"] = selected_groups;
  int nnz = 0;
  for (double v : coef)
    if (v != 0.0) ++nnz;
  result["nnz"] = nnz;
  result["coefficients_file"] = args.out_csv;
  ordered_json x_hat = ordered_json::array();
  for (int32_t r = 0; r < p; ++r) {
    ordered_json row = ordered_json::array();
    for (int32_t c = 0; c < tasks; ++c) row.push_back(coef[static_cast<std::size_t>(c) * p + r]);
    x_hat.push_back(row);
  }
  result["x_hat"] = x_hat;
  spit(args.out_json, result.dump(2) + "\n");

  if (!sos_fit_converged(fit.get())) {
    std::cerr << "fit did not certify stationarity within the iteration budget\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- path

struct PathArgs {
  std::string manifest_path;
  std::string groups_path;
  std::string lambdas_text;
  std::string grid_spec = "30:0.001";
  std::string mode = "soslasso";
  double alpha = 1.0;
  double tol = -1.0;
  int max_iters = -1;
  std::string out_csv = "path.csv";
};

int cmd_path(const PathArgs& args) {
  const Manifest manifest = load_manifest(args.manifest_path);
  fs::path groups_path;
  if (!args.groups_path.empty())
    groups_path = args.groups_path;
  else if (manifest.groups_file)
    groups_path = *manifest.groups_file;
  else
    throw CliError{1, "no groups file: pass --groups or add one to the manifest"};
  groups_handle groups = load_groups(groups_path);
  problem_handle problem = load_problem(manifest);
  const int32_t p = sos_problem_dim(problem.get());
  const int32_t tasks = sos_problem_tasks(problem.get());
  const sos_solver_options options =
      make_options(args.mode, args.alpha, args.tol, args.max_iters, false);

  std::vector<double> lambdas;
  if (!args.lambdas_text.empty()) {
    lambdas = parse_double_list(args.lambdas_text);
  } else {
    const auto [count, min_ratio] = parse_grid_spec(args.grid_spec);
    double lmax = 0.0;
    require_ok(sos_lambda_max(problem.get(), groups.get(), options.mode, options.alpha, &lmax),
               "lambda_max");
    lambdas.resize(static_cast<std::size_t>(count));
    int32_t written = 0;
    require_ok(sos_lambda_grid(lmax, count, min_ratio, lambdas.data(), &written), "grid");
    lambdas.resize(static_cast<std::size_t>(written));
  }

  sos_path_result* path_raw = nullptr;
  require_ok(sos_path(problem.get(), groups.get(), lambdas.data(),
                      static_cast<int32_t>(lambdas.size()), &options, &path_raw),
             "path");
  path_handle path(path_raw, &sos_path_result_free);

  std::vector<double> truth;
  if (manifest.truth_file) truth = load_truth_colmajor(*manifest.truth_file, p, tasks);

  std::string csv = "lambda,objective,nnz,selected_groups_count";
  if (!truth.empty()) csv += ",mse";
  csv += '\n';
  bool all_converged = true;
  std::vector<double> coef(static_cast<std::size_t>(p) * tasks);
  for (int32_t i = 0; i < sos_path_length(path.get()); ++i) {
    double lambda = 0.0, objective = 0.0;
    int32_t nnz = 0, selected = 0, converged = 0;
    require_ok(sos_path_point(path.get(), i, &lambda, &objective, &nnz, &selected, &converged),
               "path point");
    all_converged = all_converged && converged != 0;
    csv += dtos(lambda);
    csv += ',';
    csv += dtos(objective);
    csv += ',';
    csv += std::to_string(nnz);
    csv += ',';
    csv += std::to_string(selected);
    if (!truth.empty()) {
      require_ok(sos_path_coefficients(path.get(), i, coef.data()), "path coefficients");
      double err = 0.0;
      require_ok(sos_mse(coef.data(), truth.data(), static_cast<int64_t>(coef.size()), &err),
                 "mse");
      csv += ',';
      csv += dtos(err);
    }
    csv += '\n';
  }
  spit(args.out_csv, csv);
  if (!all_converged) {
    std::cerr << "some path points did not certify stationarity\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string profile = "desk";
  std::string sweep = "noise";
  std::string methods = "lasso,glasso_latent,soslasso";
  std::string values_text;
  int trials = -1;
  std::uint64_t seed = 0;
  std::string out_csv = "report.csv";
};

int cmd_bench(const BenchArgs& args, int threads) {
  sos_bench_config cfg;
  require_ok(sos_bench_config_init(
                 args.profile == "paper" ? SOS_PROFILE_PAPER : SOS_PROFILE_DESK, &cfg),
             "config");
  if (args.trials > 0) cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.threads = threads;

  int sweep_kind;
  std::vector<double> values;
  if (args.sweep == "noise") {
    sweep_kind = SOS_SWEEP_NOISE;
    values = {0.01, 0.05, 0.1, 0.2, 0.5};
  } else if (args.sweep == "alpha") {
    sweep_kind = SOS_SWEEP_ALPHA;
    values = {0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
  } else {
    throw CliError{1, "unknown sweep: " + args.sweep + " (expected noise or alpha)"};
  }
  if (!args.values_text.empty()) values = parse_double_list(args.values_text);

  std::vector<int32_t> methods;
  {
    std::stringstream stream(args.methods);
    std::string item;
    while (std::getline(stream, item, ',')) {
      if (item == "lasso")
        methods.push_back(SOS_METHOD_LASSO);
      else if (item == "glasso_latent")
        methods.push_back(SOS_METHOD_GLASSO_LATENT);
      else if (item == "soslasso")
        methods.push_back(SOS_METHOD_SOSLASSO);
      else
        throw CliError{1, "unknown method: " + item};
    }
  }
  if (methods.empty()) throw CliError{1, "no methods selected"};

  const auto start = std::chrono::steady_clock::now();
  sos_bench_report* report_raw = nullptr;
  require_ok(sos_bench_run(&cfg, sweep_kind, values.data(), static_cast<int32_t>(values.size()),
                           methods.data(), static_cast<int32_t>(methods.size()), &report_raw),
             "bench");
  bench_handle report(report_raw, &sos_bench_report_free);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  spit(args.out_csv, sos_bench_report_csv(report.get()));
  fs::path summary_path(args.out_csv);
  if (summary_path.extension() == ".csv")
    summary_path.replace_extension(".summary.json");
  else
    summary_path += ".summary.json";
  spit(summary_path, std::string(sos_bench_report_summary_json(report.get())) + "\n");
  std::cerr << "sweep finished in " << elapsed << "s; wrote " << args.out_csv << " and "
            << summary_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string suite;
  int trials = 200;
  std::uint64_t seed = 0;
  std::string out_json = "check_report.json";
};

int cmd_check(const CheckArgs& args, int threads) {
  sos_check_report* report_raw = nullptr;
  require_ok(sos_check_run(args.suite.c_str(), args.trials, args.seed, threads, &report_raw),
             "check");
  check_handle report(report_raw, &sos_check_report_free);
  spit(args.out_json, std::string(sos_check_report_json(report.get())) + "\n");
  const bool passed = sos_check_passed(report.get()) != 0;
  std::cerr << "suite " << args.suite << ": " << (passed ? "pass" : "FAIL") << " ("
            << args.out_json << ")\n";
  return passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse overlapping sets lasso"};
  app.require_subcommand(1);
  int threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker threads (default: SOSLASSO_THREADS or 1)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic problem");
  gen_cmd->add_option("--profile", gen.profile, "paper or desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out_dir, "output directory");
  gen_cmd->add_option("--p", gen.p, "coefficient dimension");
  gen_cmd->add_option("--B", gen.block, "group size");
  gen_cmd->add_option("--shift", gen.shift, "chain shift");
  gen_cmd->add_option("--T", gen.tasks, "task count");
  gen_cmd->add_option("--n", gen.n, "samples per task");
  gen_cmd->add_option("--k-active", gen.k_active, "active group count");
  gen_cmd->add_option("--alpha", gen.alpha, "within-group nonzero fraction");
  gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit at a single regularization level");
  fit_cmd->add_option("--problem", fit.manifest_path, "manifest json")->required();
  fit_cmd->add_option("--groups", fit.groups_path, "groups json (overrides manifest)");
  fit_cmd->add_option("--lambda", fit.lambda, "regularization level");
  fit_cmd->add_option("--grid", fit.grid_spec, "count:min_ratio (clairvoyant pick, needs truth)");
  fit_cmd->add_option("--mode", fit.mode, "soslasso, group, or l1");
  fit_cmd->add_option("--alpha", fit.alpha, "group-term weight");
  fit_cmd->add_option("--tol", fit.tol, "stationarity tolerance");
  fit_cmd->add_option("--max-iters", fit.max_iters, "iteration cap");
  fit_cmd->add_flag("--backtracking", fit.backtracking, "backtracking line search");
  fit_cmd->add_option("--out-json", fit.out_json, "result json path");
  fit_cmd->add_option("--out-csv", fit.out_csv, "coefficients csv path");

  PathArgs path;
  auto* path_cmd = app.add_subcommand("path", "regularization path");
  path_cmd->add_option("--problem", path.manifest_path, "manifest json")->required();
  path_cmd->add_option("--groups", path.groups_path, "groups json (overrides manifest)");
  path_cmd->add_option("--lambdas", path.lambdas_text, "explicit descending list a,b,c");
  path_cmd->add_option("--grid", path.grid_spec, "count:min_ratio from lambda_max");
  path_cmd->add_option("--mode", path.mode, "soslasso, group, or l1");
  path_cmd->add_option("--alpha", path.alpha, "group-term weight");
  path_cmd->add_option("--tol", path.tol, "stationarity tolerance");
  path_cmd->add_option("--max-iters", path.max_iters, "iteration cap");
  path_cmd->add_option("--out", path.out_csv, "path csv");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "synthetic method comparison");
  bench_cmd->add_option("--profile", bench.profile, "paper or desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  bench_cmd->add_option("--sweep", bench.sweep, "noise or alpha")
      ->check(CLI::IsMember({"noise", "alpha"}));
  bench_cmd->add_option("--methods", bench.methods, "comma list of methods");
  bench_cmd->add_option("--values", bench.values_text, "override sweep values a,b,c");
  bench_cmd->add_option("--trials", bench.trials, "trials per sweep point");
  bench_cmd->add_option("--seed", bench.seed, "random seed");
  bench_cmd->add_option("--out", bench.out_csv, "report csv");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "empirical verification suites");
  check_cmd
      ->add_option("--suite", check.suite,
                   "norm, decompose, dual, compat, chi2, lambda, or theorem")
      ->required();
  check_cmd->add_option("--trials", check.trials, "trial count");
  check_cmd->add_option("--seed", check.seed, "random seed");
  check_cmd->add_option("--out", check.out_json, "report json");

  CLI11_PARSE(app, argc, argv);
  const int threads = resolve_threads(threads_flag);

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, threads);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (path_cmd->parsed()) return cmd_path(path);
    if (bench_cmd->parsed()) return cmd_bench(bench, threads);
    if (check_cmd->parsed()) return cmd_check(check, threads);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
