#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pabcd/generator.hpp"
#include "pabcd/solvers.hpp"

namespace pabcd {

/// One method family; expanded into one cell per thread count.
struct MethodConfig {
  std::string name;
  SolverParams params;
  std::vector<int> threads = {1};
};

struct InstanceConfig {
  std::string name;
  std::string path;                  // file instance (.mtx+sidecar or libsvm)
  std::optional<GeneratorSpec> gen;  // or generated on the fly
  std::optional<double> f_target;    // explicit objective target
  double target_rel = 1e-4;          // target = f_star·(1+target_rel) when known
  std::optional<double> lambda;      // file instances; default 0.1‖Aᵀb‖∞
};

struct BenchConfig {
  std::vector<InstanceConfig> instances;
  std::vector<MethodConfig> methods;
  int runs = 3;
  double time_floor = 1.0;  // minimum cumulative seconds per cell
  std::string output;       // empty = stdout only
  std::string format = "csv";
  std::uint64_t seed = 0;
};

BenchConfig load_bench_config(const std::string& path);

struct CellResult {
  std::string instance;
  std::string method;
  int tau = 1;
  int runs = 0;
  double mean_seconds = 0.0;
  double mean_updates = 0.0;
  double success_rate = 0.0;
  bool failed = false;  // could not load/generate; run continues
  std::string note;
};

/// One run batch per (instance, method, τ) cell, repeated max(runs, enough
/// to accumulate time_floor seconds). A failing instance marks its cells
/// failed and the benchmark carries on.
std::vector<CellResult> run_benchmark(const BenchConfig& cfg);

struct ProfilePoint {
  double log2_ratio = 0.0;      // log₂(time / per-problem best)
  double fraction_solved = 0.0; // nondecreasing in log2_ratio
};

/// Per-method empirical CDF of log₂(time / row minimum) over the problem
/// rows. Non-finite times never count as solved, so a method's curve tops
/// out at its solved fraction.
std::vector<std::vector<ProfilePoint>> performance_profile(
    const std::vector<std::vector<double>>& times);

struct SpeedupEntry {
  std::string instance;
  std::string method;
  int tau = 1;
  double ratio = 0.0;  // mean_time(τ=1) / mean_time(τ=tau)
};

/// τ=1 over τ=k time ratios per (instance, method family). Cells without a
/// τ=1 partner are dropped with a note on the cell.
std::vector<SpeedupEntry> speedup_table(const std::vector<CellResult>& cells);

/// Five-number summary of the speedup ratios across instances, one row per
/// (method, τ): the numbers behind a boxplot, left to external plotting.
struct SpeedupQuantiles {
  std::string method;
  int tau = 1;
  double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
};

std::vector<SpeedupQuantiles> speedup_quantiles(
    const std::vector<SpeedupEntry>& table);

/// Emit cells, profile points and speedups. format "csv" writes
/// `<output>`, `<output>.profile.csv` and `<output>.speedup.csv`;
/// "json" writes everything into the single file `<output>`.
void write_results(const BenchConfig& cfg, const std::vector<CellResult>& cells);

}  // namespace pabcd
