#pragma once

#include "mcgl/metrics.hpp"
#include "mcgl/pds_solver.hpp"
#include "mcgl/synthetic.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace mcgl::harness {

using nlohmann::json;

inline constexpr int kConfigVersion = 1;

/// Version string written into every manifest.
std::string code_version();

/// Raised for malformed configurations or flags; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Named parameter sets. Names may be chained with commas and are applied
/// left to right, e.g. "nonconvex-grid,l1-baseline". A lone "l1-baseline"
/// modifies "convex-default".
SolverParams preset(const std::string& names);
std::vector<std::string> preset_names();

enum class InitMode { Uniform, Random };

struct InitOptions {
  InitMode mode = InitMode::Uniform;
  std::uint64_t seed = 0;
};

/// Uniform: weights 1/n. Random: weights uniform on [0.5/n, 1.5/n] drawn
/// from `seed`. The dual starts at zero in both cases.
InitialPoint make_initial_point(std::size_t n, const InitOptions& init);

struct SweepGrid {
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<double> gamma_inv;
  /// "fixed" keeps lambda2 from the grid/preset; "convexify" sets
  /// lambda2 = gamma_inv * lambda1.
  std::string lambda2_rule = "fixed";
  /// "fixed" keeps sigma; "admissible" sets sigma = (1/tau - lambda2/2) / (2n).
  std::string sigma_rule = "fixed";
};

struct ExperimentConfig {
  GraphSpec graph;
  std::vector<double> m_over_n{100.0};
  int trials = 15;
  std::string preset_name = "convex-default";
  SolverParams solver = preset("convex-default");
  InitOptions init;
  double support_tol = 1e-8;
  std::filesystem::path out_dir = "out";
  std::uint64_t base_seed = 0;
  int workers = 1;
  bool write_data = true;
  SweepGrid sweep;
  std::vector<std::size_t> bench_nodes{160, 240, 320, 400};

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON text of the config.
std::string config_hash(const ExperimentConfig& cfg);

std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial);
std::uint64_t data_seed(std::uint64_t graph_seed, std::size_t ratio_index);
std::size_t sample_count(double m_over_n, std::size_t n);

/// Delimited table with a fixed header. Appending to an existing file
/// requires a matching header. Writes are serialized.
class ResultsTable {
public:
  ResultsTable(std::filesystem::path path, std::vector<std::string> columns);
  void append(const std::vector<std::string>& row);
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  std::vector<std::string> columns_;
  std::mutex mutex_;
};

/// Runs fn(0..count-1) on up to `workers` threads.
void run_parallel(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// synth -----------------------------------------------------------------

struct SynthOutput {
  std::vector<std::filesystem::path> truth_files;
  std::vector<std::filesystem::path> data_files;
  std::vector<std::filesystem::path> covariance_files;
  std::filesystem::path manifest;
};

SynthOutput cmd_synth(const ExperimentConfig& cfg);

// learn -----------------------------------------------------------------

struct LearnOutput {
  SolveReport report;
  std::filesystem::path edges;
  std::filesystem::path report_file;
  std::filesystem::path trace;
};

LearnOutput cmd_learn(const std::filesystem::path& covariance, const SolverParams& params, const InitOptions& init,
                      const std::filesystem::path& out_dir, const std::string& preset_label = "");

// eval ------------------------------------------------------------------

std::vector<std::string> eval_columns();

/// Loads both edge lists, computes RE/FS and appends a row to `results`
/// when given. File paths in the row are relative to the table's folder.
EvalResult cmd_eval(const std::filesystem::path& estimate, const std::filesystem::path& truth, double support_tol,
                    const std::optional<std::filesystem::path>& results = std::nullopt);

// sweep -----------------------------------------------------------------

struct ResultRow {
  std::string family;
  std::size_t n = 0;
  double m_over_n = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma_inv = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string verdict;
  double relative_error = 0.0;
  double f_score = 0.0;
  std::size_t nnz = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";
};

std::vector<std::string> result_columns();
std::vector<std::string> to_fields(const ResultRow& row);

struct CurvePoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma_inv = 0.0;
  double m_over_n = 0.0;
  std::size_t runs = 0;
  double re_q1 = 0.0, re_median = 0.0, re_q3 = 0.0;
  double fs_q1 = 0.0, fs_median = 0.0, fs_q3 = 0.0;
  double nnz_median = 0.0;
};

struct SweepOutput {
  std::vector<ResultRow> rows;
  std::vector<CurvePoint> curves;
  std::filesystem::path results;
  std::filesystem::path aggregate;
  std::filesystem::path manifest;
};

/// Linear-interpolation quantile of a sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

SweepOutput cmd_sweep(const ExperimentConfig& cfg);

// ingest ----------------------------------------------------------------

enum class Centering { Rows, Columns, None };

struct IngestOptions {
  Centering centering = Centering::Rows;
  bool normalize = false;
  /// Input lists one item per row instead of one item per column.
  bool items_as_rows = false;
};

struct IngestResult {
  Matrix covariance;
  std::vector<std::size_t> dropped_rows;
  std::size_t samples = 0;
};

/// Binary features x items matrix to an items x items covariance. Each
/// feature row is one sample; constant rows are dropped.
IngestResult ingest_categorical(const Matrix& binary, const IngestOptions& opts);

IngestResult cmd_ingest_categorical(const std::filesystem::path& input, const IngestOptions& opts,
                                    const std::filesystem::path& out_dir);

// bench -----------------------------------------------------------------

struct BenchRow {
  std::size_t n = 0;
  int trials = 0;
  double m_over_n = 0.0;
  double mean_wall_seconds = 0.0;
  double mean_iterations = 0.0;
  int converged_runs = 0;
};

struct BenchOutput {
  std::vector<BenchRow> rows;
  std::filesystem::path table;
  std::filesystem::path runs;
};

BenchOutput cmd_bench(const ExperimentConfig& cfg);

} // namespace mcgl::harness
