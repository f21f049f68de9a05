#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pabcd/problem.hpp"
#include "pabcd/sampler.hpp"

namespace pabcd {

struct CheckReport {
  std::string name;
  bool pass = false;
  std::string details;
};

/// Monte-Carlo audit of the conditional sampling law. For every stratum
/// k = |S ⌢∩ 𝓑| with at least 100 samples and every i ∈ S, the mean number
/// of occurrences of i among the draws (occurrences, not membership: a block
/// drawn twice counts twice, which is what the accumulated update uses) is
/// compared against k·δ_DP/(δ_DP|I∩S|+|J∩S|) on I∩S and
/// k/(δ_DP|I∩S|+|J∩S|) on J∩S, within 4 binomial standard errors. The k
/// stratum sizes themselves are checked against the binomial law
/// C(τ,k)·p₁ᵏ·p₂^{τ−k}. The k = 0 stratum must contain no occurrence at all.
CheckReport check_conditional_probability(const SamplerSpec& spec,
                                          const std::vector<index_t>& s,
                                          index_t tau, long long trials,
                                          std::uint64_t seed);

/// Monte-Carlo audit of the second moment E[(⌢∩)²] = τ·p₁·((τ−1)·p₁ + 1),
/// within 4 standard errors of the sample mean.
CheckReport check_moment_identity(const SamplerSpec& spec,
                                  const std::vector<index_t>& s, index_t tau,
                                  long long trials, std::uint64_t seed);

/// Extend every set of a partial-separability family so all extended sets
/// meet I in exactly min(|I|,ω) indices and J in exactly min(|J|,ω), padding
/// smallest-first from I∖S and J∖S. The result has degree
/// min(|I|,ω) + min(|J|,ω) ≤ 2ω and the extension is idempotent.
std::vector<std::vector<index_t>> extend_decomposition(
    const std::vector<std::vector<index_t>>& family,
    const std::vector<index_t>& set_i, const std::vector<index_t>& set_j,
    index_t omega);

/// Monte-Carlo audit of the expected-descent bound: with h the β-penalized
/// full direction and 𝓑 a τ-multiset, the mean of F(x + Σ_{i∈𝓑} U_i h_i)
/// (duplicates accumulate the step) must not exceed
///   F(x) + Σ_{i∈I} (τδ_DP/q)·G_i + Σ_{i∈J} (τ/q)·G_i + 3 SE,
/// where G_i = g_i·h_i + (βL_i/2)·h_i² + λ·h_i. When that bound sits below
/// F(x), the estimate must also sit below F(x) + 3 SE. The problem must be
/// small (2N ≤ 50) since every trial evaluates F densely.
CheckReport check_expected_descent(const CompositeProblem& p,
                                   const SolverState& s,
                                   const std::vector<index_t>& set_i,
                                   const std::vector<index_t>& set_j,
                                   index_t delta_dp, index_t tau,
                                   long long trials, std::uint64_t seed);

/// The analytic right-hand side used by check_expected_descent (exposed for
/// tests that enumerate the τ = 1 mixture exactly).
double expected_descent_bound(const CompositeProblem& p, const SolverState& s,
                              const std::vector<index_t>& set_i,
                              const std::vector<index_t>& set_j,
                              index_t delta_dp, index_t tau, double beta,
                              const std::vector<double>& h);

/// The full battery behind `pabcd verify`: conditional law, stratum sizes,
/// second moment, decomposition extension (including its worked example),
/// and expected descent over a grid of states and (τ, δ_DP) pairs.
std::vector<CheckReport> run_all_checks(long long trials, std::uint64_t seed);

}  // namespace pabcd
