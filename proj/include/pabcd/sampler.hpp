#pragma once

#include <vector>

#include "pabcd/rng.hpp"
#include "pabcd/sparse.hpp"

namespace pabcd {

/// Multiset of block indices: order carries no meaning, repetitions do.
using Multiset = std::vector<index_t>;

/// Two-class categorical distribution over the m blocks: members of I are
/// drawn with probability δ_DP/q, members of J with 1/q, q = δ_DP·|I| + |J|.
struct SamplerSpec {
  index_t m = 0;
  std::vector<index_t> inactive;  // I, sorted ascending
  std::vector<index_t> active;    // J, sorted ascending
  index_t delta_dp = 1;
  double q = 0.0;

  static SamplerSpec make(index_t m, std::vector<index_t> inactive,
                          std::vector<index_t> active, index_t delta_dp);

  bool is_inactive(index_t i) const;  // membership in I by binary search
};

/// ℙ(i) under the two-class distribution.
double probability(const SamplerSpec& spec, index_t i);

/// One draw. Inverse CDF in two stages: a uniform variate picks the class
/// (I with probability δ_DP·|I|/q), a second picks uniformly inside the
/// class array. O(1), and fully determined by the rng stream.
index_t sample_block(const SamplerSpec& spec, Xoshiro256pp& rng);

/// τ i.i.d. draws. Same seed, same multiset.
Multiset sample_multiset(const SamplerSpec& spec, index_t tau,
                         Xoshiro256pp& rng);

/// Number of elements of b lying in the sorted set s, counting repetitions.
index_t intersection_count(const std::vector<index_t>& s, const Multiset& b);

/// p₁ = ℙ(one draw lands in S) = (δ_DP·|I∩S| + |J∩S|)/q.
double single_draw_mass(const SamplerSpec& spec,
                        const std::vector<index_t>& s);

/// ℙ(i ∈ 𝓑 | exactly k of the τ draws land in S), for i ∈ S:
/// k·δ_DP/(δ_DP|I∩S| + |J∩S|) on I∩S and k/(δ_DP|I∩S| + |J∩S|) on J∩S;
/// 0 when k = 0.
double conditional_probability_formula(const SamplerSpec& spec,
                                       const std::vector<index_t>& s,
                                       index_t k, index_t tau, index_t i);

/// ℙ(exactly k of τ draws land in S) = C(τ,k)·p₁ᵏ·(1−p₁)^{τ−k}.
double intersection_pmf(const SamplerSpec& spec,
                        const std::vector<index_t>& s, index_t tau,
                        index_t k);

}  // namespace pabcd
