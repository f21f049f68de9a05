#include "pabcd/subproblem.hpp"

namespace pabcd {

std::vector<double> full_direction(const CompositeProblem& p,
                                   const SolverState& s, double beta) {
  const index_t n = p.A.cols;
  std::vector<double> h(static_cast<std::size_t>(p.n_vars));
  for (index_t j = 0; j < n; ++j) {
    const auto rows = p.A.col_rows(j);
    const auto vals = p.A.col_values(j);
    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      dot += vals[k] * s.r[static_cast<std::size_t>(rows[k])];
    const double lip = p.lipschitz[static_cast<std::size_t>(j)];
    // the two split halves share the column: gradients are ±dot
    h[static_cast<std::size_t>(j)] = block_direction(
        {dot, lip, beta, p.lambda, s.x[static_cast<std::size_t>(j)]});
    h[static_cast<std::size_t>(j + n)] = block_direction(
        {-dot, lip, beta, p.lambda, s.x[static_cast<std::size_t>(j + n)]});
  }
  return h;
}

double model_value_G(const CompositeProblem& p, const std::vector<double>& h,
                     const SolverState& s, double gamma) {
  const index_t n = p.A.cols;
  double total = 0.0;
  for (index_t j = 0; j < n; ++j) {
    const auto rows = p.A.col_rows(j);
    const auto vals = p.A.col_values(j);
    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      dot += vals[k] * s.r[static_cast<std::size_t>(rows[k])];
    const double hp = h[static_cast<std::size_t>(j)];
    const double hm = h[static_cast<std::size_t>(j + n)];
    total += dot * hp + 0.5 * gamma * hp * hp + p.lambda * hp;
    total += -dot * hm + 0.5 * gamma * hm * hm + p.lambda * hm;
  }
  return total;
}

}  // namespace pabcd
