// mcgl: learn sparse graph Laplacians with the minimax concave penalty.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include "mcgl/harness.hpp"
#include "mcgl/io.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace mcgl;
using namespace mcgl::harness;

namespace {

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> support_tol;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
  cmd->add_option("--config", f.config, "experiment config (JSON)");
  cmd->add_option("--seed", f.seed, "base seed (overrides config)");
  cmd->add_option("--workers", f.workers, "parallel jobs")->check(CLI::PositiveNumber);
  cmd->add_option("--support-tol", f.support_tol, "edge support threshold")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", f.out, "output directory");
}

ExperimentConfig resolve_config(const CommonFlags& f)
{
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (!f.preset.empty()) {
    cfg.preset_name = f.preset;
    cfg.solver = preset(f.preset);
  }
  if (f.seed) {
    cfg.base_seed = *f.seed;
  }
  if (f.workers) {
    cfg.workers = *f.workers;
  }
  if (f.support_tol) {
    cfg.support_tol = *f.support_tol;
  }
  if (!f.out.empty()) {
    cfg.out_dir = f.out;
  }
  cfg.validate();
  return cfg;
}

void print_eval(const EvalResult& r)
{
  std::cout << "RE " << io::format_double(r.relative_error) << "\n"
            << "FS " << io::format_double(r.f_score) << "\n"
            << "tp " << r.tp << " fp " << r.fp << " fn " << r.fn << " tn " << r.tn << "\n"
            << "nnz_estimate " << r.nnz_estimate << " nnz_truth " << r.nnz_truth << "\n";
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Sparse graph Laplacian learning with the minimax concave penalty"};
  app.set_version_flag("--version", code_version());
  app.require_subcommand(1);

  // synth
  CommonFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "generate ground-truth graphs, GMRF data and covariances");
  add_common(synth, synth_flags);
  synth->add_option("--preset", synth_flags.preset, "solver preset recorded in the manifest");

  // learn
  CommonFlags learn_flags;
  std::string cov_path;
  std::optional<double> l1, l2, gi, tau, sigma, rho, eps;
  std::optional<int> max_iter;
  std::string init_mode = "uniform";
  auto* learn = app.add_subcommand("learn", "learn a graph from a covariance matrix");
  add_common(learn, learn_flags);
  learn->add_option("--cov,covariance", cov_path, "covariance matrix file")->required();
  learn->add_option("--preset", learn_flags.preset, "parameter preset (comma-chained)");
  learn->add_option("--lambda1", l1);
  learn->add_option("--lambda2", l2);
  learn->add_option("--gamma-inv", gi);
  learn->add_option("--tau", tau);
  learn->add_option("--sigma", sigma);
  learn->add_option("--rho", rho);
  learn->add_option("--epsilon", eps);
  learn->add_option("--max-iter", max_iter);
  learn->add_option("--init", init_mode, "initialization: uniform | random")
      ->check(CLI::IsMember({"uniform", "random"}));

  // eval
  CommonFlags eval_flags;
  std::string estimate, truth, results;
  auto* eval = app.add_subcommand("eval", "compare an estimated edge list with the truth");
  eval->add_option("--estimate", estimate)->required();
  eval->add_option("--truth", truth)->required();
  eval->add_option("--results", results, "results table to append to");
  eval->add_option("--support-tol", eval_flags.support_tol)->check(CLI::NonNegativeNumber);

  // sweep
  CommonFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid over trials and m/n ratios");
  add_common(sweep, sweep_flags);
  sweep->add_option("--preset", sweep_flags.preset);

  // ingest
  std::string ingest_in, ingest_out, centering = "rows";
  bool normalize = false, items_as_rows = false;
  auto* ingest = app.add_subcommand("ingest", "binary categorical matrix to covariance");
  ingest->add_option("--input,input", ingest_in, "0/1 matrix, features x items")->required();
  ingest->add_option("--out", ingest_out, "output directory")->required();
  ingest->add_option("--centering", centering, "rows | columns | none")
      ->check(CLI::IsMember({"rows", "columns", "none"}));
  ingest->add_flag("--normalize", normalize, "rescale to unit diagonal");
  ingest->add_flag("--items-as-rows", items_as_rows, "input lists one item per row");

  // bench
  CommonFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "time the solver over graph sizes");
  add_common(bench, bench_flags);
  bench->add_option("--preset", bench_flags.preset);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*synth) {
      const auto out = cmd_synth(resolve_config(synth_flags));
      std::cout << "wrote " << out.truth_files.size() << " graphs; manifest " << out.manifest.string() << "\n";
    } else if (*learn) {
      ExperimentConfig cfg = resolve_config(learn_flags);
      SolverParams p = cfg.solver;
      if (l1) p.penalty.lambda1 = *l1;
      if (l2) p.penalty.lambda2 = *l2;
      if (gi) p.penalty.gamma_inv = *gi;
      if (tau) p.tau = *tau;
      if (sigma) p.sigma = *sigma;
      if (rho) p.rho = *rho;
      if (eps) p.epsilon = *eps;
      if (max_iter) p.max_iter = *max_iter;
      p.support_threshold = cfg.support_tol;
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      InitOptions init = cfg.init;
      if (init_mode == "random") {
        init.mode = InitMode::Random;
      }
      if (learn_flags.seed) {
        init.seed = *learn_flags.seed;
      }
      const auto out = cmd_learn(cov_path, p, init, cfg.out_dir, cfg.preset_name);
      const auto& rep = out.report;
      std::cout << "verdict " << to_string(rep.verdict.verdict) << " (" << rep.verdict.message << ")\n"
                << "converged " << (rep.converged ? "yes" : "no") << " after " << rep.iterations
                << " iterations\n"
                << "edges " << rep.weights.support_size(0.0) << "\n"
                << "wrote " << out.edges.string() << "\n";
    } else if (*eval) {
      const double tol = eval_flags.support_tol.value_or(1e-8);
      std::optional<fs::path> table;
      if (!results.empty()) {
        table = fs::path(results);
      }
      print_eval(cmd_eval(estimate, truth, tol, table));
    } else if (*sweep) {
      const auto out = cmd_sweep(resolve_config(sweep_flags));
      std::size_t failed = 0;
      for (const auto& row : out.rows) {
        failed += row.status != "ok";
      }
      std::cout << "ran " << out.rows.size() << " jobs (" << failed << " failed); results " << out.results.string()
                << "\n";
    } else if (*ingest) {
      IngestOptions opts;
      opts.centering = centering == "rows" ? Centering::Rows : centering == "columns" ? Centering::Columns : Centering::None;
      opts.normalize = normalize;
      opts.items_as_rows = items_as_rows;
      const auto r = cmd_ingest_categorical(ingest_in, opts, ingest_out);
      std::cout << "covariance " << r.covariance.rows() << "x" << r.covariance.cols() << " from " << r.samples
                << " samples\n";
    } else if (*bench) {
      ExperimentConfig cfg = resolve_config(bench_flags);
      const auto out = cmd_bench(cfg);
      for (const auto& row : out.rows) {
        std::cout << "n " << row.n << " mean_wall_seconds " << io::format_double(row.mean_wall_seconds)
                  << " mean_iterations " << io::format_double(row.mean_iterations) << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver aborted at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return 0;
}
