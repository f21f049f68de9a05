#include "pabcd/identify.hpp"

#include <cmath>

namespace pabcd {

std::vector<index_t> candidate_active_set(const std::vector<double>& x,
                                          const std::vector<double>& h,
                                          double alpha) {
  double sq = 0.0;
  for (double hj : h) sq += hj * hj;
  const double threshold = std::pow(std::sqrt(sq), alpha);
  std::vector<index_t> candidates;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] <= threshold) candidates.push_back(static_cast<index_t>(j));
  return candidates;
}

std::pair<std::vector<index_t>, std::vector<index_t>> update_partition(
    const std::vector<index_t>& candidates, index_t n_vars) {
  std::vector<index_t> inactive;
  inactive.reserve(static_cast<std::size_t>(n_vars) - candidates.size());
  std::size_t c = 0;
  for (index_t j = 0; j < n_vars; ++j) {
    if (c < candidates.size() && candidates[c] == j)
      ++c;
    else
      inactive.push_back(j);
  }
  return {std::move(inactive), candidates};
}

}  // namespace pabcd
