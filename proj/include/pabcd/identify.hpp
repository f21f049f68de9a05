#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "pabcd/sparse.hpp"

namespace pabcd {

/// Identification threshold −‖h(x)‖^α. Zero exactly at stationarity,
/// negative elsewhere.
inline double rho_alpha(double h_norm, double alpha);

/// Candidate likely-active blocks: C = { j : −x_j ≥ ρ_α } = { j : x_j ≤ ‖h‖^α }
/// where h is the full direction at β = 1. Only the finite lower bound 0
/// takes part; the +∞ upper bound yields a constraint value of −∞ which can
/// never reach the threshold, so it is omitted rather than computed.
std::vector<index_t> candidate_active_set(const std::vector<double>& x,
                                          const std::vector<double>& h,
                                          double alpha);

/// J := C in full, I := complement in [0, n_vars). Taking the whole
/// candidate set maximizes the focusing effect and leaves no free knob.
/// candidates must be sorted ascending (candidate_active_set emits them so).
std::pair<std::vector<index_t>, std::vector<index_t>> update_partition(
    const std::vector<index_t>& candidates, index_t n_vars);

/// Cycle length until the next identification point:
/// max(min(δ_F·|I|, m), c0).
inline index_t next_cycle_size(index_t size_inactive, index_t delta_f,
                               index_t m, index_t c0);

// -- inline definitions -----------------------------------------------------

inline double rho_alpha(double h_norm, double alpha) {
  if (h_norm == 0.0) return 0.0;
  return -std::pow(h_norm, alpha);
}

inline index_t next_cycle_size(index_t size_inactive, index_t delta_f,
                               index_t m, index_t c0) {
  const index_t grown = delta_f * size_inactive;
  const index_t capped = grown < m ? grown : m;
  return capped > c0 ? capped : c0;
}

}  // namespace pabcd
