#include "mcgl/harness.hpp"

#include "mcgl/io.hpp"
#include "mcgl/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#ifndef MCGL_VERSION
#define MCGL_VERSION "dev"
#endif

namespace fs = std::filesystem;

namespace mcgl::harness {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) {
      parts.push_back(cur);
    }
  }
  return parts;
}

std::string csv_escape(std::string field)
{
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& fields)
{
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      line += ',';
    }
    line += csv_escape(fields[i]);
  }
  return line;
}

std::string num(double v) { return io::format_double(v); }

std::string ratio_label(double m_over_n) { return "mn_" + io::format_double(m_over_n); }

void ensure_dir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

json solver_to_json(const SolverParams& p)
{
  return json{{"lambda1", p.penalty.lambda1}, {"lambda2", p.penalty.lambda2}, {"gamma_inv", p.penalty.gamma_inv},
              {"tau", p.tau},
              {"sigma", p.sigma},
              {"rho", p.rho},
              {"epsilon", p.epsilon},
              {"max_iter", p.max_iter},
              {"support_threshold", p.support_threshold}};
}

void apply_solver_overrides(SolverParams& p, const json& j)
{
  auto set = [&](const char* key, double& field) {
    if (j.contains(key)) {
      field = j.at(key).get<double>();
    }
  };
  set("lambda1", p.penalty.lambda1);
  set("lambda2", p.penalty.lambda2);
  set("gamma_inv", p.penalty.gamma_inv);
  set("tau", p.tau);
  set("sigma", p.sigma);
  set("rho", p.rho);
  set("epsilon", p.epsilon);
  set("support_threshold", p.support_threshold);
  if (j.contains("max_iter")) {
    p.max_iter = j.at("max_iter").get<int>();
  }
}

json graph_to_json(const GraphSpec& spec)
{
  json j = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GridFamily>) {
          return {{"family", "grid"}, {"rows", f.rows}, {"cols", f.cols}};
        } else if constexpr (std::is_same_v<T, ModularFamily>) {
          return {{"family", "modular"}, {"n", f.n}, {"p_inter", f.p_inter}, {"p_intra", f.p_intra},
                  {"modules", f.modules}};
        } else {
          return {{"family", "erdos_renyi"}, {"n", f.n}, {"p", f.p}};
        }
      },
      spec.family);
  j["weight_low"] = spec.weight_low;
  j["weight_high"] = spec.weight_high;
  return j;
}

GraphSpec graph_from_json(const json& j)
{
  GraphSpec spec;
  const std::string family = j.value("family", "grid");
  if (family == "grid") {
    spec.family = GridFamily{j.value("rows", std::size_t{10}), j.value("cols", std::size_t{10})};
  } else if (family == "modular") {
    spec.family = ModularFamily{j.value("n", std::size_t{100}), j.value("p_inter", 0.01), j.value("p_intra", 0.3),
                                j.value("modules", std::size_t{4})};
  } else if (family == "erdos_renyi" || family == "er") {
    spec.family = ErdosRenyiFamily{j.value("n", std::size_t{100}), j.value("p", 0.1)};
  } else {
    throw ConfigError("unknown graph family '" + family + "'");
  }
  spec.weight_low = j.value("weight_low", 0.1);
  spec.weight_high = j.value("weight_high", 3.0);
  return spec;
}

json manifest_base(const std::string& command, const ExperimentConfig& cfg)
{
  return json{{"command", command},
              {"code_version", code_version()},
              {"config_version", kConfigVersion},
              {"config_hash", config_hash(cfg)},
              {"config", config_to_json(cfg)}};
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

// Graph and covariance for one (trial, m/n) cell, shared by sweep jobs.
struct DataCell {
  int trial = 0;
  std::size_t ratio_index = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t sample_seed = 0;
  Matrix truth;
  Matrix covariance;
  std::string error;
};

} // namespace

std::string code_version() { return std::string("mcgl ") + MCGL_VERSION; }

SolverParams preset(const std::string& names)
{
  auto parts = split(names, ',');
  if (parts.empty()) {
    throw ConfigError("empty preset name");
  }
  if (parts.front() == "l1-baseline") {
    parts.insert(parts.begin(), "convex-default");
  }
  SolverParams p;
  p.penalty.gamma_inv = 2.25;
  p.rho = 1.0;
  p.max_iter = 5000;
  p.epsilon = 1e-4;
  p.tau = 1.0;
  for (const auto& name : parts) {
    if (name == "convex-default" || name == "convex-grid" || name == "convex-modular" || name == "convex-er") {
      p.penalty.lambda1 = 1e-4;
      p.penalty.lambda2 = 2.5e-4;
      p.tau = 1.0;
      p.sigma = 4.9e-3;
    } else if (name == "nonconvex-grid") {
      p.penalty.lambda1 = 0.005;
      p.penalty.lambda2 = 0.0;
      p.tau = 1.0;
      p.sigma = 0.05;
    } else if (name == "nonconvex-modular") {
      p.penalty.lambda1 = 0.01;
      p.penalty.lambda2 = 0.0;
      p.tau = 1.0;
      p.sigma = 0.05;
    } else if (name == "nonconvex-er") {
      p.penalty.lambda1 = 0.01;
      p.penalty.lambda2 = 0.0;
      p.tau = 1.0;
      p.sigma = 0.01;
    } else if (name == "l1-baseline") {
      p.penalty.gamma_inv = 0.0;
    } else {
      throw ConfigError("unknown preset '" + name + "'");
    }
  }
  return p;
}

std::vector<std::string> preset_names()
{
  return {"convex-default", "convex-grid", "convex-modular", "convex-er", "nonconvex-grid",
          "nonconvex-modular", "nonconvex-er", "l1-baseline"};
}

InitialPoint make_initial_point(std::size_t n, const InitOptions& init)
{
  InitialPoint x0 = default_initial_point(n);
  if (init.mode == InitMode::Random) {
    Rng rng(init.seed);
    const double base = 1.0 / static_cast<double>(n);
    for (Eigen::Index k = 0; k < x0.w.size(); ++k) {
      x0.w[k] = rng.uniform(0.5 * base, 1.5 * base);
    }
  }
  return x0;
}

void ExperimentConfig::validate() const
{
  try {
    graph.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) {
    throw ConfigError("trials must be at least 1");
  }
  if (m_over_n.empty()) {
    throw ConfigError("m_over_n must list at least one ratio");
  }
  for (double r : m_over_n) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("m_over_n values must be positive");
    }
  }
  if (!(support_tol >= 0.0)) {
    throw ConfigError("support_tol must be nonnegative");
  }
  if (workers < 1) {
    throw ConfigError("workers must be at least 1");
  }
  for (const auto& rule : {sweep.lambda2_rule, sweep.sigma_rule}) {
    if (rule != "fixed" && rule != "convexify" && rule != "admissible") {
      throw ConfigError("unknown sweep rule '" + rule + "'");
    }
  }
  for (const auto* grid : {&sweep.lambda1, &sweep.lambda2, &sweep.gamma_inv}) {
    for (double v : *grid) {
      if (!(v >= 0.0)) {
        throw ConfigError("sweep grid values must be nonnegative");
      }
    }
  }
  for (std::size_t n : bench_nodes) {
    if (n < 2) {
      throw ConfigError("bench node counts must be at least 2");
    }
  }
}

ExperimentConfig config_from_json(const json& j)
{
  try {
    ExperimentConfig cfg;
    const int version = j.value("config_version", kConfigVersion);
    if (version != kConfigVersion) {
      throw ConfigError("unsupported config_version " + std::to_string(version));
    }
    if (j.contains("graph")) {
      cfg.graph = graph_from_json(j.at("graph"));
    }
    if (j.contains("m_over_n")) {
      const auto& r = j.at("m_over_n");
      cfg.m_over_n = r.is_array() ? r.get<std::vector<double>>() : std::vector<double>{r.get<double>()};
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.base_seed = j.value("base_seed", cfg.base_seed);
    cfg.support_tol = j.value("support_tol", cfg.support_tol);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.write_data = j.value("write_data", cfg.write_data);
    if (j.contains("out")) {
      cfg.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.preset_name = s.value("preset", cfg.preset_name);
      cfg.solver = preset(cfg.preset_name);
      apply_solver_overrides(cfg.solver, s);
      const std::string init = s.value("init", std::string("uniform"));
      if (init == "uniform") {
        cfg.init.mode = InitMode::Uniform;
      } else if (init == "random") {
        cfg.init.mode = InitMode::Random;
      } else {
        throw ConfigError("unknown init mode '" + init + "'");
      }
      cfg.init.seed = s.value("init_seed", std::uint64_t{0});
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      cfg.sweep.lambda1 = s.value("lambda1", std::vector<double>{});
      cfg.sweep.lambda2 = s.value("lambda2", std::vector<double>{});
      cfg.sweep.gamma_inv = s.value("gamma_inv", std::vector<double>{});
      cfg.sweep.lambda2_rule = s.value("lambda2_rule", cfg.sweep.lambda2_rule);
      cfg.sweep.sigma_rule = s.value("sigma_rule", cfg.sweep.sigma_rule);
    }
    if (j.contains("bench")) {
      cfg.bench_nodes = j.at("bench").value("nodes", cfg.bench_nodes);
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg)
{
  json solver = solver_to_json(cfg.solver);
  solver["preset"] = cfg.preset_name;
  solver["init"] = cfg.init.mode == InitMode::Uniform ? "uniform" : "random";
  solver["init_seed"] = cfg.init.seed;
  return json{{"config_version", kConfigVersion},
              {"graph", graph_to_json(cfg.graph)},
              {"m_over_n", cfg.m_over_n},
              {"trials", cfg.trials},
              {"base_seed", cfg.base_seed},
              {"support_tol", cfg.support_tol},
              {"workers", cfg.workers},
              {"write_data", cfg.write_data},
              {"out", cfg.out_dir.string()},
              {"solver", solver},
              {"sweep",
               {{"lambda1", cfg.sweep.lambda1},
                {"lambda2", cfg.sweep.lambda2},
                {"gamma_inv", cfg.sweep.gamma_inv},
                {"lambda2_rule", cfg.sweep.lambda2_rule},
                {"sigma_rule", cfg.sweep.sigma_rule}}},
              {"bench", {{"nodes", cfg.bench_nodes}}}};
}

ExperimentConfig load_config(const fs::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg)
{
  // Output location and worker count do not change results.
  json j = config_to_json(cfg);
  j.erase("out");
  j.erase("workers");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial) { return cfg.base_seed + static_cast<std::uint64_t>(trial); }

std::uint64_t data_seed(std::uint64_t graph_seed, std::size_t ratio_index)
{
  return mix_seed(mix_seed(graph_seed) + 0x632BE59BD9B4E019ULL * (ratio_index + 1));
}

std::size_t sample_count(double m_over_n, std::size_t n)
{
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(m_over_n * static_cast<double>(n))));
}

ResultsTable::ResultsTable(fs::path path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(std::move(columns))
{
  const std::string header = join_row(columns_);
  std::error_code ec;
  if (fs::exists(path_, ec) && fs::file_size(path_, ec) > 0) {
    std::ifstream in(path_);
    std::string first;
    std::getline(in, first);
    if (first != header) {
      throw std::runtime_error("results table " + path_.string() + " has a different header");
    }
    return;
  }
  if (path_.has_parent_path()) {
    ensure_dir(path_.parent_path());
  }
  io::write_text(path_, header + "\n");
}

void ResultsTable::append(const std::vector<std::string>& row)
{
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row width does not match the table header");
  }
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot append to " + path_.string());
  }
  out << join_row(row) << '\n';
}

void run_parallel(std::size_t count, int workers, const std::function<void(std::size_t)>& fn)
{
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        fn(i);
      }
    });
  }
}

// synth -----------------------------------------------------------------

SynthOutput cmd_synth(const ExperimentConfig& cfg)
{
  cfg.validate();
  ensure_dir(cfg.out_dir);
  SynthOutput out;
  json manifest = manifest_base("synth", cfg);
  json trials = json::array();

  for (int t = 0; t < cfg.trials; ++t) {
    GraphSpec spec = cfg.graph;
    spec.seed = trial_seed(cfg, t);
    const WeightVector truth = generate_weights(spec);
    const Matrix theta = apply_L(truth);
    const std::size_t n = truth.nodes();

    const fs::path trial_dir = cfg.out_dir / ("trial_" + std::to_string(t));
    ensure_dir(trial_dir);
    const fs::path truth_path = trial_dir / "truth.edges";
    io::save_edge_list(truth_path, truth);
    out.truth_files.push_back(truth_path);

    json entry{{"trial", t}, {"graph_seed", spec.seed}, {"truth", fs::relative(truth_path, cfg.out_dir).string()},
               {"edges", truth.support_size(0.0)}};
    json samples = json::array();
    for (std::size_t r = 0; r < cfg.m_over_n.size(); ++r) {
      const std::size_t m = sample_count(cfg.m_over_n[r], n);
      const std::uint64_t seed = data_seed(spec.seed, r);
      const fs::path dir = trial_dir / ratio_label(cfg.m_over_n[r]);
      ensure_dir(dir);
      Matrix S;
      json sample{{"m_over_n", cfg.m_over_n[r]}, {"m", m}, {"data_seed", seed}};
      if (cfg.write_data) {
        const Matrix data = sample_gmrf(theta, m, seed);
        S = sample_covariance(data);
        const fs::path data_path = dir / "data.csv";
        io::save_matrix(data_path, data);
        out.data_files.push_back(data_path);
        sample["data"] = fs::relative(data_path, cfg.out_dir).string();
      } else {
        S = sample_gmrf_covariance(theta, m, seed);
      }
      const fs::path cov_path = dir / "covariance.csv";
      io::save_matrix(cov_path, S);
      out.covariance_files.push_back(cov_path);
      sample["covariance"] = fs::relative(cov_path, cfg.out_dir).string();
      samples.push_back(sample);
    }
    entry["samples"] = samples;
    trials.push_back(entry);
  }
  manifest["trials"] = trials;
  out.manifest = cfg.out_dir / "manifest.json";
  write_json(out.manifest, manifest);
  return out;
}

// learn -----------------------------------------------------------------

LearnOutput cmd_learn(const fs::path& covariance, const SolverParams& params, const InitOptions& init,
                      const fs::path& out_dir, const std::string& preset_label)
{
  const Matrix S = io::load_matrix(covariance);
  if (S.rows() != S.cols() || S.rows() < 2) {
    throw io::ParseError("covariance must be a square matrix with at least two rows");
  }
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw io::ParseError("covariance matrix is not symmetric");
  }
  const auto n = static_cast<std::size_t>(S.rows());
  ensure_dir(out_dir);

  LearnOutput out;
  out.report = solve(S, params, make_initial_point(n, init));
  const SolveReport& rep = out.report;

  out.edges = out_dir / "learned.edges";
  io::save_edge_list(out.edges, rep.weights);

  out.trace = out_dir / "trace.csv";
  {
    std::ostringstream trace;
    trace << "iteration,objective\n";
    for (std::size_t k = 0; k < rep.objective_trace.size(); ++k) {
      trace << k + 1 << ',' << num(rep.objective_trace[k]) << '\n';
    }
    io::write_text(out.trace, trace.str());
  }

  json report{{"code_version", code_version()},
              {"covariance", covariance.string()},
              {"preset", preset_label},
              {"params", solver_to_json(params)},
              {"init", {{"mode", init.mode == InitMode::Uniform ? "uniform" : "random"}, {"seed", init.seed}}},
              {"verdict", to_string(rep.verdict.verdict)},
              {"verdict_detail", rep.verdict.message},
              {"converged", rep.converged},
              {"iterations", rep.iterations},
              {"final_rel_change", rep.state.rel_change},
              {"final_objective", std::isfinite(rep.state.objective) ? json(rep.state.objective) : json("inf")},
              {"nnz", rep.weights.support_size(0.0)},
              {"nodes", n},
              {"dual_check_failures", rep.dual_check_failures},
              {"wall_seconds", rep.wall_seconds}};
  out.report_file = out_dir / "report.json";
  write_json(out.report_file, report);
  return out;
}

// eval ------------------------------------------------------------------

std::vector<std::string> eval_columns()
{
  return {"estimate", "truth", "n", "support_tol", "relative_error", "f_score",
          "tp", "fp", "fn", "tn", "nnz_estimate", "nnz_truth"};
}

EvalResult cmd_eval(const fs::path& estimate, const fs::path& truth, double support_tol,
                    const std::optional<fs::path>& results)
{
  const WeightVector est = io::load_edge_list(estimate);
  const WeightVector tru = io::load_edge_list(truth);
  if (est.nodes() != tru.nodes()) {
    throw std::invalid_argument("estimate has " + std::to_string(est.nodes()) + " nodes but truth has " +
                                std::to_string(tru.nodes()));
  }
  const Matrix theta_hat = apply_L(est);
  const Matrix theta_star = apply_L(tru);
  EvalResult r = f_score(theta_hat, theta_star, support_tol);
  r.relative_error = relative_error(theta_hat, theta_star);

  if (results) {
    ResultsTable table(*results, eval_columns());
    const fs::path base = fs::absolute(*results).parent_path();
    auto rel = [&](const fs::path& p) { return fs::relative(fs::absolute(p), base).generic_string(); };
    table.append({rel(estimate), rel(truth), std::to_string(est.nodes()), num(support_tol), num(r.relative_error),
                  num(r.f_score), std::to_string(r.tp), std::to_string(r.fp), std::to_string(r.fn),
                  std::to_string(r.tn), std::to_string(r.nnz_estimate), std::to_string(r.nnz_truth)});
  }
  return r;
}

// sweep -----------------------------------------------------------------

std::vector<std::string> result_columns()
{
  return {"family", "n", "m_over_n", "trial", "seed", "lambda1", "lambda2", "gamma_inv", "tau",
          "sigma", "iterations", "converged", "verdict", "relative_error", "f_score", "nnz", "wall_seconds",
          "status"};
}

std::vector<std::string> to_fields(const ResultRow& r)
{
  return {r.family, std::to_string(r.n), num(r.m_over_n), std::to_string(r.trial), std::to_string(r.seed),
          num(r.lambda1), num(r.lambda2), num(r.gamma_inv), num(r.tau), num(r.sigma),
          std::to_string(r.iterations), r.converged ? "1" : "0", r.verdict, num(r.relative_error),
          num(r.f_score), std::to_string(r.nnz), num(r.wall_seconds), r.status};
}

double quantile(std::vector<double> values, double q)
{
  if (values.empty()) {
    return std::nan("");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SweepOutput cmd_sweep(const ExperimentConfig& cfg)
{
  cfg.validate();
  ensure_dir(cfg.out_dir);
  const std::size_t n = cfg.graph.nodes();

  auto grid_or = [](const std::vector<double>& g, double fallback) {
    return g.empty() ? std::vector<double>{fallback} : g;
  };
  const auto l1_grid = grid_or(cfg.sweep.lambda1, cfg.solver.penalty.lambda1);
  const auto l2_grid = grid_or(cfg.sweep.lambda2, cfg.solver.penalty.lambda2);
  const auto gi_grid = grid_or(cfg.sweep.gamma_inv, cfg.solver.penalty.gamma_inv);

  struct GridPoint {
    SolverParams params;
  };
  std::vector<GridPoint> points;
  for (double l1 : l1_grid) {
    for (double l2 : l2_grid) {
      for (double gi : gi_grid) {
        SolverParams p = cfg.solver;
        p.penalty = {l1, l2, gi};
        if (cfg.sweep.lambda2_rule == "convexify") {
          p.penalty.lambda2 = gi * l1;
        }
        if (cfg.sweep.sigma_rule == "admissible") {
          p.sigma = (1.0 / p.tau - p.penalty.lambda2 / 2.0) / (2.0 * static_cast<double>(n));
        }
        points.push_back({p});
      }
    }
  }

  // One graph + covariance per (trial, ratio), reused by every grid point.
  std::vector<DataCell> cells;
  for (int t = 0; t < cfg.trials; ++t) {
    for (std::size_t r = 0; r < cfg.m_over_n.size(); ++r) {
      DataCell c;
      c.trial = t;
      c.ratio_index = r;
      c.graph_seed = trial_seed(cfg, t);
      c.sample_seed = data_seed(c.graph_seed, r);
      cells.push_back(std::move(c));
    }
  }
  run_parallel(cells.size(), cfg.workers, [&](std::size_t i) {
    DataCell& c = cells[i];
    try {
      GraphSpec spec = cfg.graph;
      spec.seed = c.graph_seed;
      c.truth = generate_graph(spec);
      c.covariance = sample_gmrf_covariance(c.truth, sample_count(cfg.m_over_n[c.ratio_index], n), c.sample_seed);
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  });

  SweepOutput out;
  out.rows.resize(cells.size() * points.size());
  run_parallel(out.rows.size(), cfg.workers, [&](std::size_t job) {
    const DataCell& c = cells[job / points.size()];
    const SolverParams& p = points[job % points.size()].params;
    ResultRow& row = out.rows[job];
    row.family = family_name(cfg.graph.family);
    row.n = n;
    row.m_over_n = cfg.m_over_n[c.ratio_index];
    row.trial = c.trial;
    row.seed = c.graph_seed;
    row.lambda1 = p.penalty.lambda1;
    row.lambda2 = p.penalty.lambda2;
    row.gamma_inv = p.penalty.gamma_inv;
    row.tau = p.tau;
    row.sigma = p.sigma;
    if (!c.error.empty()) {
      row.status = "error: " + c.error;
      return;
    }
    try {
      const SolveReport rep = solve(c.covariance, p, make_initial_point(n, cfg.init));
      const EvalResult ev = f_score(rep.theta, c.truth, cfg.support_tol);
      row.iterations = rep.iterations;
      row.converged = rep.converged;
      row.verdict = to_string(rep.verdict.verdict);
      row.relative_error = ev.relative_error;
      row.f_score = ev.f_score;
      row.nnz = ev.nnz_estimate;
      row.wall_seconds = rep.wall_seconds;
    } catch (const SolverError& e) {
      row.iterations = e.iteration();
      row.status = std::string("error: ") + e.what();
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  out.results = cfg.out_dir / "results.csv";
  std::error_code ec;
  fs::remove(out.results, ec);
  ResultsTable table(out.results, result_columns());
  for (const auto& row : out.rows) {
    table.append(to_fields(row));
  }

  // Aggregate over trials for each (grid point, ratio).
  for (const auto& gp : points) {
    for (double ratio : cfg.m_over_n) {
      CurvePoint cp;
      cp.lambda1 = gp.params.penalty.lambda1;
      cp.lambda2 = gp.params.penalty.lambda2;
      cp.gamma_inv = gp.params.penalty.gamma_inv;
      cp.m_over_n = ratio;
      std::vector<double> re, fsv, nnz;
      for (const auto& row : out.rows) {
        if (row.status == "ok" && row.lambda1 == cp.lambda1 && row.lambda2 == cp.lambda2 &&
            row.gamma_inv == cp.gamma_inv && row.m_over_n == ratio && row.sigma == gp.params.sigma) {
          re.push_back(row.relative_error);
          fsv.push_back(row.f_score);
          nnz.push_back(static_cast<double>(row.nnz));
        }
      }
      cp.runs = re.size();
      cp.re_q1 = quantile(re, 0.25);
      cp.re_median = quantile(re, 0.5);
      cp.re_q3 = quantile(re, 0.75);
      cp.fs_q1 = quantile(fsv, 0.25);
      cp.fs_median = quantile(fsv, 0.5);
      cp.fs_q3 = quantile(fsv, 0.75);
      cp.nnz_median = quantile(nnz, 0.5);
      out.curves.push_back(cp);
    }
  }
  out.aggregate = cfg.out_dir / "aggregate.csv";
  fs::remove(out.aggregate, ec);
  ResultsTable agg(out.aggregate, {"lambda1", "lambda2", "gamma_inv", "m_over_n", "runs", "re_q1", "re_median",
                                   "re_q3", "fs_q1", "fs_median", "fs_q3", "nnz_median"});
  for (const auto& cp : out.curves) {
    agg.append({num(cp.lambda1), num(cp.lambda2), num(cp.gamma_inv), num(cp.m_over_n), std::to_string(cp.runs),
                num(cp.re_q1), num(cp.re_median), num(cp.re_q3), num(cp.fs_q1), num(cp.fs_median), num(cp.fs_q3),
                num(cp.nnz_median)});
  }

  json manifest = manifest_base("sweep", cfg);
  json seeds = json::array();
  for (const auto& c : cells) {
    seeds.push_back({{"trial", c.trial}, {"m_over_n", cfg.m_over_n[c.ratio_index]}, {"graph_seed", c.graph_seed},
                     {"data_seed", c.sample_seed}});
  }
  manifest["seeds"] = seeds;
  manifest["grid_points"] = points.size();
  out.manifest = cfg.out_dir / "manifest.json";
  write_json(out.manifest, manifest);
  return out;
}

// ingest ----------------------------------------------------------------

IngestResult ingest_categorical(const Matrix& binary, const IngestOptions& opts)
{
  const Matrix X = opts.items_as_rows ? Matrix(binary.transpose()) : binary;
  if (X.cols() < 2) {
    throw std::invalid_argument("categorical data needs at least two items");
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(i, j) != 0.0 && X(i, j) != 1.0) {
        throw std::invalid_argument("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                    ") is not 0 or 1");
      }
    }
  }
  IngestResult result;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (X.row(i).maxCoeff() == X.row(i).minCoeff()) {
      result.dropped_rows.push_back(static_cast<std::size_t>(i));
    } else {
      kept.push_back(i);
    }
  }
  if (kept.empty()) {
    throw std::invalid_argument("every feature row is constant");
  }
  Matrix samples(static_cast<Eigen::Index>(kept.size()), X.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    samples.row(static_cast<Eigen::Index>(r)) = X.row(kept[r]);
  }
  switch (opts.centering) {
  case Centering::Rows:
    samples.colwise() -= samples.rowwise().mean();
    break;
  case Centering::Columns:
    samples.rowwise() -= samples.colwise().mean();
    break;
  case Centering::None:
    break;
  }
  result.samples = kept.size();
  result.covariance = sample_covariance(samples);
  if (opts.normalize) {
    const Vector d = result.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      for (Eigen::Index j = 0; j < d.size(); ++j) {
        if (d[i] > 0.0 && d[j] > 0.0) {
          result.covariance(i, j) /= d[i] * d[j];
        }
      }
    }
  }
  return result;
}

IngestResult cmd_ingest_categorical(const fs::path& input, const IngestOptions& opts, const fs::path& out_dir)
{
  const Matrix binary = io::load_matrix(input);
  IngestResult r = ingest_categorical(binary, opts);
  for (std::size_t row : r.dropped_rows) {
    std::cerr << "warning: dropping constant feature row " << row + 1 << "\n";
  }
  ensure_dir(out_dir);
  io::save_matrix(out_dir / "covariance.csv", r.covariance);
  const char* centering = opts.centering == Centering::Rows ? "rows" : opts.centering == Centering::Columns ? "columns" : "none";
  json manifest{{"command", "ingest"},
                {"code_version", code_version()},
                {"input", input.string()},
                {"centering", centering},
                {"normalize", opts.normalize},
                {"items_as_rows", opts.items_as_rows},
                {"items", r.covariance.rows()},
                {"samples", r.samples},
                {"dropped_rows", r.dropped_rows}};
  write_json(out_dir / "manifest.json", manifest);
  return r;
}

// bench -----------------------------------------------------------------

BenchOutput cmd_bench(const ExperimentConfig& cfg)
{
  cfg.validate();
  ensure_dir(cfg.out_dir);
  const double ratio = cfg.m_over_n.front();

  struct Run {
    std::size_t n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = false;
    double wall = 0.0;
    std::string status = "ok";
  };
  std::vector<Run> runs;
  for (std::size_t n : cfg.bench_nodes) {
    for (int t = 0; t < cfg.trials; ++t) {
      runs.push_back({n, t, trial_seed(cfg, t)});
    }
  }

  run_parallel(runs.size(), cfg.workers, [&](std::size_t i) {
    Run& run = runs[i];
    GraphSpec spec = cfg.graph;
    spec.seed = run.seed;
    if (auto* m = std::get_if<ModularFamily>(&spec.family)) {
      m->n = run.n;
    } else if (auto* e = std::get_if<ErdosRenyiFamily>(&spec.family)) {
      e->n = run.n;
    } else {
      // most nearly square factorization of n
      std::size_t rows = 1;
      for (std::size_t d = 1; d * d <= run.n; ++d) {
        if (run.n % d == 0) {
          rows = d;
        }
      }
      spec.family = GridFamily{rows, run.n / rows};
    }
    try {
      const Matrix theta = generate_graph(spec);
      const Matrix S = sample_gmrf_covariance(theta, sample_count(ratio, run.n), data_seed(run.seed, 0));
      const SolveReport rep = solve(S, cfg.solver, make_initial_point(run.n, cfg.init));
      run.iterations = rep.iterations;
      run.converged = rep.converged;
      run.wall = rep.wall_seconds;
    } catch (const std::exception& e) {
      run.status = std::string("error: ") + e.what();
    }
  });

  BenchOutput out;
  out.runs = cfg.out_dir / "bench_runs.csv";
  out.table = cfg.out_dir / "bench.csv";
  std::error_code ec;
  fs::remove(out.runs, ec);
  fs::remove(out.table, ec);
  ResultsTable run_table(out.runs, {"n", "trial", "seed", "iterations", "converged", "wall_seconds", "status"});
  for (const auto& r : runs) {
    run_table.append({std::to_string(r.n), std::to_string(r.trial), std::to_string(r.seed),
                      std::to_string(r.iterations), r.converged ? "1" : "0", num(r.wall), r.status});
  }
  ResultsTable table(out.table, {"n", "trials", "m_over_n", "mean_wall_seconds", "mean_iterations", "converged_runs"});
  for (std::size_t n : cfg.bench_nodes) {
    BenchRow row;
    row.n = n;
    row.m_over_n = ratio;
    double wall = 0.0;
    double iters = 0.0;
    for (const auto& r : runs) {
      if (r.n == n && r.status == "ok") {
        ++row.trials;
        wall += r.wall;
        iters += r.iterations;
        row.converged_runs += r.converged;
      }
    }
    if (row.trials > 0) {
      row.mean_wall_seconds = wall / row.trials;
      row.mean_iterations = iters / row.trials;
    }
    table.append({std::to_string(row.n), std::to_string(row.trials), num(row.m_over_n), num(row.mean_wall_seconds),
                  num(row.mean_iterations), std::to_string(row.converged_runs)});
    out.rows.push_back(row);
  }
  json manifest = manifest_base("bench", cfg);
  write_json(cfg.out_dir / "manifest.json", manifest);
  return out;
}

} // namespace mcgl::harness
