#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pabcd/bench.hpp"
#include "pabcd/generator.hpp"
#include "pabcd/problem.hpp"
#include "pabcd/solvers.hpp"
#include "pabcd/verify.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PABCD_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

nlohmann::json record_json(const pabcd::RunRecord& record) {
  nlohmann::json doc;
  doc["mode"] = pabcd::to_string(record.params.mode);
  doc["tau"] = record.params.tau;
  doc["delta_dp"] = record.params.delta_dp;
  doc["termination"] = pabcd::to_string(record.termination);
  doc["total_updates"] = record.total_updates;
  doc["wall_seconds"] = record.wall_seconds;
  doc["final_x_nnz"] = record.final_x_nnz;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : record.epochs)
    trace.push_back({{"iter", e.iter},
                     {"objective", e.objective},
                     {"h_norm", e.h_norm},
                     {"size_inactive", e.size_inactive},
                     {"size_active", e.size_active},
                     {"beta", e.beta},
                     {"drift", e.drift}});
  doc["epochs"] = trace;
  return doc;
}

int run_solve(const std::string& path, pabcd::SolverParams params,
              std::optional<double> lambda_flag, bool as_json) {
  pabcd::CompositeProblem problem;
  if (path.ends_with(".mtx")) {
    auto inst = pabcd::read_instance(path);
    const double lambda = lambda_flag ? *lambda_flag : inst.lambda;
    problem = pabcd::build_lasso(std::move(inst.A), std::move(inst.b), lambda);
  } else {
    auto data = pabcd::load_libsvm(path);
    const double lambda = lambda_flag
                              ? *lambda_flag
                              : pabcd::default_lambda(data.matrix, data.labels);
    problem = pabcd::build_lasso(std::move(data.matrix),
                                 std::move(data.labels), lambda);
  }

  const pabcd::RunRecord record = pabcd::solve(problem, params);
  if (as_json) {
    std::cout << record_json(record).dump(2) << '\n';
  } else {
    const auto& last = record.epochs.back();
    std::cout << "mode            " << pabcd::to_string(record.params.mode)
              << " (tau=" << record.params.tau << ")\n"
              << "blocks          " << problem.n_vars << " (omega "
              << problem.omega << ", lambda " << problem.lambda << ")\n"
              << "termination     " << pabcd::to_string(record.termination)
              << '\n'
              << "objective       " << last.objective << '\n'
              << "h_norm          " << last.h_norm << '\n'
              << "updates         " << record.total_updates << " over "
              << record.epochs.size() << " cycles\n"
              << "wall_seconds    " << record.wall_seconds << '\n'
              << "final_x_nnz     " << record.final_x_nnz << '\n';
  }
  return record.termination == pabcd::Termination::numerical_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel randomized block coordinate descent for "
               "l1-regularized least squares, with active-set identification"};
  app.require_subcommand(1);

  // solve
  std::string solve_path;
  std::string mode_name = "serial";
  pabcd::SolverParams params;
  params.seed = default_seed();
  double target = 0.0;
  double lambda_flag = 0.0;
  bool json_out = false;
  auto* solve_cmd = app.add_subcommand("solve", "run one configuration");
  solve_cmd->add_option("instance", solve_path,
                        ".mtx (+ .json sidecar) or libsvm file")
      ->required();
  solve_cmd->add_option("--mode", mode_name,
                        "serial | parallel-active | parallel-uniform");
  solve_cmd->add_option("--threads", params.tau, "worker count");
  solve_cmd->add_option("--delta-dp", params.delta_dp, "sampling bias");
  solve_cmd->add_option("--delta-f", params.delta_f, "cycle-size multiplier");
  solve_cmd->add_option("--alpha", params.alpha, "identification exponent");
  solve_cmd->add_option("--epsilon", params.epsilon, "stopping tolerance");
  solve_cmd->add_option("--lmax", params.l_max, "update budget");
  solve_cmd->add_option("--c0", params.c0, "initial cycle size");
  auto* target_opt =
      solve_cmd->add_option("--target", target, "objective target");
  solve_cmd->add_option("--seed", params.seed, "rng seed");
  auto* lambda_opt =
      solve_cmd->add_option("--lambda", lambda_flag, "regularization weight");
  solve_cmd->add_flag("--json", json_out, "machine-readable output");

  // gen
  pabcd::GeneratorSpec gspec;
  gspec.seed = default_seed();
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic instance");
  gen_cmd->add_option("--rows", gspec.rows)->required();
  gen_cmd->add_option("--cols", gspec.cols)->required();
  gen_cmd->add_option("--nnz-per-col", gspec.nnz_per_col)->required();
  gen_cmd->add_option("--support", gspec.support_size,
                      "nonzeros of the optimum (default min(10000, rows/2))");
  gen_cmd->add_option("--lambda", gspec.lambda);
  gen_cmd->add_option("--seed", gspec.seed);
  gen_cmd->add_option("--out", gen_out, "output .mtx path")->required();

  // bench
  std::string bench_config;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark config");
  bench_cmd->add_option("--config", bench_config, "JSON config")->required();

  // verify
  long long trials = 1000000;
  std::uint64_t verify_seed = default_seed();
  auto* verify_cmd =
      app.add_subcommand("verify", "statistical checks of the sampling "
                                   "law and the expected-descent bound");
  verify_cmd->add_option("--trials", trials, "Monte-Carlo trials per check");
  verify_cmd->add_option("--seed", verify_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      params.mode = pabcd::mode_from_string(mode_name);
      if (*target_opt) params.f_target = target;
      return run_solve(solve_path, params,
                       *lambda_opt ? std::optional<double>(lambda_flag)
                                   : std::nullopt,
                       json_out);
    }
    if (gen_cmd->parsed()) {
      const auto inst = pabcd::generate(gspec);
      pabcd::write_instance(gen_out, gspec, inst);
      const auto summary = pabcd::describe(inst);
      std::cout << summary.rows << " x " << summary.cols << "  omega "
                << summary.omega << "  zero(x*) " << summary.pct_zero
                << "%  f_star " << inst.f_star << "\nwrote " << gen_out
                << " and " << gen_out << ".json\n";
      return 0;
    }
    if (bench_cmd->parsed()) {
      const auto cfg = pabcd::load_bench_config(bench_config);
      const auto cells = pabcd::run_benchmark(cfg);
      pabcd::write_results(cfg, cells);
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto reports = pabcd::run_all_checks(trials, verify_seed);
      bool all_pass = true;
      for (const auto& r : reports) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << '\n';
        if (!r.pass && !r.details.empty()) std::cout << r.details << '\n';
        all_pass = all_pass && r.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
