#include <doctest.h>

#include <cmath>
#include <vector>

#include "pabcd/problem.hpp"
#include "pabcd/rng.hpp"
#include "pabcd/subproblem.hpp"

using namespace pabcd;

namespace {

SparseMatrix identity2() {
  return SparseMatrix::from_triplets(2, 2, {0, 1}, {0, 1}, {1.0, 1.0});
}

// dense instance for oracle recomputations
struct DenseOracle {
  std::vector<std::vector<double>> a;  // rows x cols
  std::vector<double> b;
  double lambda;

  static DenseOracle of(const CompositeProblem& p) {
    DenseOracle d;
    d.a.assign(static_cast<std::size_t>(p.A.rows),
               std::vector<double>(static_cast<std::size_t>(p.A.cols), 0.0));
    for (index_t j = 0; j < p.A.cols; ++j) {
      const auto rows = p.A.col_rows(j);
      const auto vals = p.A.col_values(j);
      for (std::size_t k = 0; k < rows.size(); ++k)
        d.a[static_cast<std::size_t>(rows[k])][static_cast<std::size_t>(j)] =
            vals[k];
    }
    d.b = p.b;
    d.lambda = p.lambda;
    return d;
  }

  double smooth(const std::vector<double>& z) const {
    const std::size_t n = a[0].size();
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double ri = -b[i];
      for (std::size_t j = 0; j < n; ++j) ri += a[i][j] * (z[j] - z[j + n]);
      sq += ri * ri;
    }
    return 0.5 * sq;
  }

  double objective(const std::vector<double>& z) const {
    double l1 = 0.0;
    for (double zj : z) l1 += zj;
    return smooth(z) + lambda * l1;
  }
};

CompositeProblem random_problem(index_t rows, index_t cols, double lambda,
                                Xoshiro256pp& rng) {
  std::vector<index_t> ti, tj;
  std::vector<double> tv;
  for (index_t j = 0; j < cols; ++j) {
    bool nonzero = false;
    for (index_t i = 0; i < rows; ++i)
      if (rng.next_double() < 0.5) {
        ti.push_back(i);
        tj.push_back(j);
        tv.push_back(rng.next_double(-1.0, 1.0));
        nonzero = true;
      }
    if (!nonzero) {  // keep the instance valid
      ti.push_back(0);
      tj.push_back(j);
      tv.push_back(1.0);
    }
  }
  std::vector<double> b(static_cast<std::size_t>(rows));
  for (double& bi : b) bi = rng.next_double(-2.0, 2.0);
  return build_lasso(SparseMatrix::from_triplets(rows, cols, ti, tj, tv), b,
                     lambda);
}

}  // namespace

TEST_CASE("build_lasso on the 2x2 identity") {
  const auto p = build_lasso(identity2(), {1.0, -1.0}, 0.0);
  CHECK(p.n_vars == 4);
  CHECK(p.lipschitz == std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(p.omega == 2);

  // minimizer x+=(1,0), x-=(0,1) gives F = 0
  SolverState s = make_state(p, 1e-6);
  s.x = {1.0, 0.0, 0.0, 1.0};
  residual_refresh(p, s);
  CHECK(objective(p, s) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("build_lasso rejects a zero column") {
  const auto a =
      SparseMatrix::from_triplets(2, 2, {0, 1}, {0, 0}, {1.0, 2.0});
  CHECK_THROWS_WITH_AS(build_lasso(a, {1.0, 1.0}, 0.5),
                       doctest::Contains("column 1"), InvalidInstanceError);
}

TEST_CASE("build_lasso rejects shape mismatch and negative lambda") {
  CHECK_THROWS_AS(build_lasso(identity2(), {1.0}, 0.0), InvalidInstanceError);
  CHECK_THROWS_AS(build_lasso(identity2(), {1.0, 1.0}, -0.1),
                  InvalidInstanceError);
}

TEST_CASE("default_lambda") {
  CHECK(default_lambda(identity2(), {2.0, -4.0}) == doctest::Approx(0.4));
  CHECK(default_lambda(identity2(), {0.0, 0.0}) == 0.0);

  Xoshiro256pp rng(17);
  const auto p = random_problem(5, 3, 0.0, rng);
  const auto oracle = DenseOracle::of(p);
  double best = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < 5; ++i) dot += oracle.a[i][j] * oracle.b[i];
    best = std::max(best, std::abs(dot));
  }
  CHECK(default_lambda(p.A, p.b) == doctest::Approx(0.1 * best).epsilon(1e-14));
}

TEST_CASE("objective") {
  const auto p = build_lasso(identity2(), {1.0, -1.0}, 0.0);
  const auto s = make_state(p, 1e-6);
  CHECK(objective(p, s) == doctest::Approx(1.0));  // 0.5 * ||b||^2

  Xoshiro256pp rng(23);
  const auto q = random_problem(6, 4, 0.3, rng);
  SolverState t = make_state(q, 1e-6);
  for (double& xj : t.x) xj = rng.next_double();
  residual_refresh(q, t);
  const auto oracle = DenseOracle::of(q);
  CHECK(objective(q, t) ==
        doctest::Approx(oracle.objective(t.x)).epsilon(1e-12));
}

TEST_CASE("gradient_block") {
  const auto p = build_lasso(identity2(), {1.0, -1.0}, 0.0);
  SolverState s = make_state(p, 1e-6);

  SUBCASE("zero residual means zero gradient") {
    std::fill(s.r.begin(), s.r.end(), 0.0);
    for (index_t j = 0; j < 4; ++j) CHECK(gradient_block(p, s, j) == 0.0);
  }
  SUBCASE("at x = 0 the split gradients are -b and +b") {
    CHECK(gradient_block(p, s, 0) == doctest::Approx(-1.0));
    CHECK(gradient_block(p, s, 1) == doctest::Approx(1.0));
    CHECK(gradient_block(p, s, 2) == doctest::Approx(1.0));
    CHECK(gradient_block(p, s, 3) == doctest::Approx(-1.0));
  }
}

TEST_CASE("gradient matches central differences of the smooth part") {
  Xoshiro256pp rng(31);
  const auto p = random_problem(7, 5, 0.0, rng);
  SolverState s = make_state(p, 1e-6);
  for (double& xj : s.x) xj = 0.5 + rng.next_double();  // interior point
  residual_refresh(p, s);
  const auto oracle = DenseOracle::of(p);

  const double step = 1e-6;
  for (index_t j = 0; j < p.n_vars; ++j) {
    auto hi = s.x, lo = s.x;
    hi[static_cast<std::size_t>(j)] += step;
    lo[static_cast<std::size_t>(j)] -= step;
    const double fd = (oracle.smooth(hi) - oracle.smooth(lo)) / (2.0 * step);
    CHECK(gradient_block(p, s, j) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("gradient antisymmetry across the split halves") {
  Xoshiro256pp rng(37);
  const auto p = random_problem(6, 4, 0.1, rng);
  SolverState s = make_state(p, 1e-6);
  for (double& xj : s.x) xj = rng.next_double();
  residual_refresh(p, s);
  const index_t n = p.A.cols;
  for (index_t j = 0; j < n; ++j) {
    const double g = gradient_block(p, s, j);
    CHECK(std::isfinite(g));
    CHECK(gradient_block(p, s, j + n) == doctest::Approx(-g).epsilon(1e-15));
  }
}

TEST_CASE("apply_block_update") {
  const auto p = build_lasso(identity2(), {1.0, -1.0}, 0.0);
  SolverState s = make_state(p, 1e-6);

  SUBCASE("h = 0 leaves x and r unchanged") {
    const auto x0 = s.x;
    const auto r0 = s.r;
    apply_block_update(p, s, 2, 0.0);
    CHECK(s.x == x0);
    CHECK(s.r == r0);
    CHECK(s.v[2] == 0.0);
  }
  SUBCASE("unit column moves one residual entry") {
    CHECK(s.r[0] == doctest::Approx(-1.0));
    apply_block_update(p, s, 0, 1.0);
    CHECK(s.x[0] == 1.0);
    CHECK(s.r[0] == doctest::Approx(0.0));
    CHECK(s.v[0] == 1.0);
  }
}

TEST_CASE("update sequences stay consistent with the refreshed residual") {
  Xoshiro256pp rng(41);
  const auto p = random_problem(10, 6, 0.2, rng);
  SolverState s = make_state(p, 1e-6);
  double b_inf = 0.0;
  for (double bi : p.b) b_inf = std::max(b_inf, std::abs(bi));

  for (int step = 0; step < 2000; ++step) {
    const index_t j =
        static_cast<index_t>(rng.next_below(static_cast<std::uint64_t>(p.n_vars)));
    const double x = s.x[static_cast<std::size_t>(j)];
    const double h = rng.next_double(-x, 1.0);  // keeps x feasible
    apply_block_update(p, s, j, h);
  }
  const double drift = residual_refresh(p, s);
  CHECK(drift < 1e-10 * (1.0 + b_inf));
}

TEST_CASE("residual_refresh reports injected drift") {
  const auto p = build_lasso(identity2(), {1.0, -1.0}, 0.0);
  SolverState s = make_state(p, 1e-6);
  CHECK(residual_refresh(p, s) == 0.0);
  s.r[0] += 1e-3;
  CHECK(residual_refresh(p, s) == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("serial descent along subproblem directions") {
  Xoshiro256pp rng(43);
  const auto p = random_problem(8, 5, 0.2, rng);
  SolverState s = make_state(p, 1e-6);
  double previous = objective(p, s);
  for (int step = 0; step < 500; ++step) {
    const index_t j =
        static_cast<index_t>(rng.next_below(static_cast<std::uint64_t>(p.n_vars)));
    const double g = gradient_block(p, s, j);
    const double h = block_direction(
        {g, p.lipschitz[static_cast<std::size_t>(j)], 1.0, p.lambda,
         s.x[static_cast<std::size_t>(j)]});
    apply_block_update(p, s, j, h);
    const double now = objective(p, s);
    CHECK(now <= previous + 1e-12);
    previous = now;
  }
}

TEST_CASE("split/merge round trip") {
  const std::vector<double> x = {1.5, -2.0, 0.0, 0.25};
  const auto z = split_vector(x);
  for (double zj : z) CHECK(zj >= 0.0);
  CHECK(merge_split(z) == x);
}
