#include "pabcd/problem.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

namespace pabcd {

CompositeProblem build_lasso(SparseMatrix a, std::vector<double> b,
                             double lambda) {
  if (a.rows != static_cast<index_t>(b.size()))
    throw InvalidInstanceError("A has " + std::to_string(a.rows) +
                               " rows but b has " + std::to_string(b.size()) +
                               " entries");
  if (lambda < 0.0) throw InvalidInstanceError("lambda must be nonnegative");

  const index_t n = a.cols;
  std::vector<double> lip(static_cast<std::size_t>(2 * n), 0.0);
  for (index_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (double v : a.col_values(j)) sq += v * v;
    if (sq == 0.0)
      throw InvalidInstanceError("column " + std::to_string(j) +
                                 " of A is identically zero");
    lip[static_cast<std::size_t>(j)] = sq;
    lip[static_cast<std::size_t>(j + n)] = sq;
  }

  CompositeProblem p;
  p.omega = 2 * max_row_nnz(a);
  p.A = std::move(a);
  p.b = std::move(b);
  p.lambda = lambda;
  p.n_vars = 2 * n;
  p.lipschitz = std::move(lip);
  return p;
}

double default_lambda(const SparseMatrix& a, const std::vector<double>& b) {
  double best = 0.0;
  for (index_t j = 0; j < a.cols; ++j) {
    const auto rows = a.col_rows(j);
    const auto vals = a.col_values(j);
    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      dot += vals[k] * b[static_cast<std::size_t>(rows[k])];
    best = std::max(best, std::abs(dot));
  }
  return 0.1 * best;
}

SolverState make_state(const CompositeProblem& p, double epsilon,
                       const std::vector<double>* x0) {
  SolverState s;
  s.x.assign(static_cast<std::size_t>(p.n_vars), 0.0);
  if (x0 != nullptr) {
    if (static_cast<index_t>(x0->size()) != p.n_vars)
      throw InvalidInstanceError("start point has wrong length");
    for (double v : *x0)
      if (!(v >= 0.0)) throw InvalidInstanceError("start point is infeasible");
    s.x = *x0;
  }
  s.r.assign(p.b.size(), 0.0);
  s.v.assign(static_cast<std::size_t>(p.n_vars), 2.0 * epsilon);
  s.inactive.resize(static_cast<std::size_t>(p.n_vars));
  std::iota(s.inactive.begin(), s.inactive.end(), index_t{0});
  s.active.clear();
  residual_refresh(p, s);
  return s;
}

double objective(const CompositeProblem& p, const SolverState& s) {
  double sq = 0.0;
  for (double ri : s.r) sq += ri * ri;
  double l1 = 0.0;
  for (double xj : s.x) l1 += xj;
  return 0.5 * sq + p.lambda * l1;
}

double gradient_block(const CompositeProblem& p, const SolverState& s,
                      index_t j) {
  const index_t col = p.column_of(j);
  const auto rows = p.A.col_rows(col);
  const auto vals = p.A.col_values(col);
  // atomic_ref<const T> arrives only after C++20, hence the cast; the access
  // is load-only.
  auto& r = const_cast<std::vector<double>&>(s.r);
  double dot = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::atomic_ref<double> ri(r[static_cast<std::size_t>(rows[k])]);
    dot += vals[k] * ri.load(std::memory_order_relaxed);
  }
  return p.sign_of(j) * dot;
}

void apply_block_update(const CompositeProblem& p, SolverState& s, index_t j,
                        double h) {
  std::atomic_ref<double>(s.x[static_cast<std::size_t>(j)])
      .fetch_add(h, std::memory_order_relaxed);
  std::atomic_ref<double>(s.v[static_cast<std::size_t>(j)])
      .store(h, std::memory_order_relaxed);
  if (h == 0.0) return;
  const index_t col = p.column_of(j);
  const double step = p.sign_of(j) * h;
  const auto rows = p.A.col_rows(col);
  const auto vals = p.A.col_values(col);
  for (std::size_t k = 0; k < rows.size(); ++k)
    std::atomic_ref<double>(s.r[static_cast<std::size_t>(rows[k])])
        .fetch_add(step * vals[k], std::memory_order_relaxed);
}

double residual_refresh(const CompositeProblem& p, SolverState& s) {
  const index_t n = p.A.cols;
  std::vector<double> fresh(p.b.size());
  for (std::size_t i = 0; i < p.b.size(); ++i) fresh[i] = -p.b[i];
  for (index_t j = 0; j < n; ++j) {
    const double d = s.x[static_cast<std::size_t>(j)] -
                     s.x[static_cast<std::size_t>(j + n)];
    if (d == 0.0) continue;
    const auto rows = p.A.col_rows(j);
    const auto vals = p.A.col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k)
      fresh[static_cast<std::size_t>(rows[k])] += d * vals[k];
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i)
    drift = std::max(drift, std::abs(fresh[i] - s.r[i]));
  s.r = std::move(fresh);
  return drift;
}

std::vector<double> split_vector(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> z(2 * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] > 0.0)
      z[j] = x[j];
    else
      z[j + n] = -x[j];
  }
  return z;
}

std::vector<double> merge_split(const std::vector<double>& z) {
  const std::size_t n = z.size() / 2;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = z[j] - z[j + n];
  return x;
}

}  // namespace pabcd
