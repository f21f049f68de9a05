#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pabcd/problem.hpp"

namespace pabcd {

enum class Mode { serial_active, parallel_active, parallel_uniform };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct SolverParams {
  Mode mode = Mode::serial_active;
  int tau = 1;                      // worker count
  index_t delta_dp = 10;            // sampling bias toward inactive blocks
  index_t delta_f = 1;              // cycle-size multiplier
  double alpha = 0.5;               // identification exponent, in (0,1)
  index_t c0 = 0;                   // initial cycle size; 0 = number of blocks
  double epsilon = 1e-6;            // stop when ‖v‖ ≤ ε
  long long l_max = 0;              // update budget; 0 = 1000 · number of blocks
  std::optional<double> f_target;   // stop when F ≤ target (cycle boundaries)
  std::uint64_t seed = 0;
};

enum class Termination { target_reached, v_small, budget, numerical_failure };

std::string to_string(Termination t);

/// One synchronization point of the run: the partition and penalty that were
/// in force during the cycle, plus the measurements taken at its boundary.
struct CycleStat {
  long long iter = 0;        // coordinate updates performed so far
  double objective = 0.0;    // F from the refreshed residual
  double h_norm = 0.0;       // ‖h(x)‖ at β = 1
  index_t size_inactive = 0;
  index_t size_active = 0;
  double beta = 1.0;
  double drift = 0.0;        // ‖r‖∞ correction applied by the refresh
};

struct RunRecord {
  SolverParams params;  // with defaults resolved
  Termination termination = Termination::budget;
  long long total_updates = 0;
  std::vector<CycleStat> epochs;
  double wall_seconds = 0.0;
  index_t final_x_nnz = 0;
  std::vector<double> x;               // final iterate, length 2N
  std::vector<index_t> final_active;   // J at termination
};

/// Penalty applied to every block's curvature so that τ simultaneous updates
/// drawn from the two-class distribution still decrease F in expectation:
///   β = (τ−1)·(δ_DP·min(|I|,ω) + min(|J|,ω)) / q + 1,   q = δ_DP·|I| + |J|.
/// β = 1 exactly when τ = 1.
double beta_penalty(int tau, index_t delta_dp, index_t size_inactive,
                    index_t size_active, index_t omega);

/// Euclidean norm of the last-direction vector v.
double stopping_norm(const SolverState& s);

/// Run the configured method from x0 (null vector when omitted).
///
/// Every cycle: (a) q, γ = ⌊c_s/τ⌋ and β are fixed from the current
/// partition; (b) each of the τ workers performs γ draws from its own rng
/// stream (seed + worker index), solves the one-coordinate model against the
/// possibly stale shared residual, and applies the update with atomic
/// scalar operations — the coordinate itself through a compare-exchange so
/// the bound clamp is exact even when two workers collide on a block;
/// (c) at the barrier the residual is recomputed, the β=1 direction drives
/// the identification step, and the stopping rules run.
///
/// serial_active forces τ = 1 (β = 1 follows). parallel_uniform pins
/// I = all blocks, δ_DP = 1 and never re-partitions. A τ = 1 parallel_active
/// run reproduces the serial_active run bit for bit.
RunRecord solve(const CompositeProblem& p, const SolverParams& params,
                const std::vector<double>* x0 = nullptr);

}  // namespace pabcd
