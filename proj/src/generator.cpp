#include "pabcd/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pabcd/rng.hpp"

#include <json.hpp>

namespace pabcd {

namespace {

// p distinct rows via partial Fisher-Yates over a persistent pool; the pool
// stays a permutation across calls, so each call is a fresh uniform sample.
void sample_rows(std::vector<index_t>& pool, index_t p, Xoshiro256pp& rng,
                 std::vector<index_t>& out) {
  const std::uint64_t m = pool.size();
  out.clear();
  for (index_t t = 0; t < p; ++t) {
    const std::uint64_t pick =
        static_cast<std::uint64_t>(t) +
        rng.next_below(m - static_cast<std::uint64_t>(t));
    std::swap(pool[static_cast<std::size_t>(t)],
              pool[static_cast<std::size_t>(pick)]);
    out.push_back(pool[static_cast<std::size_t>(t)]);
  }
  std::sort(out.begin(), out.end());
}

double nonzero_unit(Xoshiro256pp& rng) {  // uniform on (0,1)
  double u;
  do {
    u = rng.next_double();
  } while (u == 0.0);
  return u;
}

}  // namespace

GeneratedInstance generate(const GeneratorSpec& spec) {
  const index_t m = spec.rows, n = spec.cols, p = spec.nnz_per_col;
  if (m <= 0 || n <= 0) throw std::invalid_argument("empty dimensions");
  if (p < 1 || p > m)
    throw std::invalid_argument("nnz_per_col must lie in [1, rows]");
  const index_t s = spec.support_size > 0
                        ? spec.support_size
                        : std::min<index_t>(10000, m / 2);
  if (s < 1 || s > n)
    throw std::invalid_argument("support_size must lie in [1, cols]");
  if (!(spec.lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");

  Xoshiro256pp rng(spec.seed);

  // residual seed
  std::vector<double> r_star(static_cast<std::size_t>(m));
  for (double& ri : r_star) ri = rng.next_double(-1.0, 1.0);

  // matrix, column by column
  std::vector<index_t> pool(static_cast<std::size_t>(m));
  for (index_t i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;

  SparseMatrix a;
  a.rows = m;
  a.cols = n;
  a.col_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  a.row_idx.resize(static_cast<std::size_t>(n * p));
  a.values.resize(static_cast<std::size_t>(n * p));
  std::vector<index_t> rows_buf;
  for (index_t j = 0; j < n; ++j) {
    a.col_ptr[static_cast<std::size_t>(j) + 1] = (j + 1) * p;
    sample_rows(pool, p, rng, rows_buf);
    for (index_t k = 0; k < p; ++k) {
      a.row_idx[static_cast<std::size_t>(j * p + k)] =
          rows_buf[static_cast<std::size_t>(k)];
      a.values[static_cast<std::size_t>(j * p + k)] = rng.next_double(-1.0, 1.0);
    }
  }

  // support columns, chosen uniformly
  std::vector<index_t> col_pool(static_cast<std::size_t>(n));
  for (index_t j = 0; j < n; ++j) col_pool[static_cast<std::size_t>(j)] = j;
  std::vector<index_t> support;
  sample_rows(col_pool, s, rng, support);

  std::vector<bool> on_support(static_cast<std::size_t>(n), false);
  for (index_t j : support) on_support[static_cast<std::size_t>(j)] = true;

  auto col_dot_r = [&](index_t j) {
    double dot = 0.0;
    for (index_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k)
      dot += a.values[static_cast<std::size_t>(k)] *
             r_star[static_cast<std::size_t>(a.row_idx[static_cast<std::size_t>(k)])];
    return dot;
  };
  auto scale_col = [&](index_t j, double factor) {
    for (index_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k)
      a.values[static_cast<std::size_t>(k)] *= factor;
  };

  std::vector<double> x_star(static_cast<std::size_t>(n), 0.0);
  for (index_t j = 0; j < n; ++j) {
    double dot = col_dot_r(j);
    if (on_support[static_cast<std::size_t>(j)]) {
      while (dot == 0.0) {  // orthogonal column cannot be scaled onto ±λ
        sample_rows(pool, p, rng, rows_buf);
        for (index_t k = 0; k < p; ++k) {
          a.row_idx[static_cast<std::size_t>(j * p + k)] =
              rows_buf[static_cast<std::size_t>(k)];
          a.values[static_cast<std::size_t>(j * p + k)] =
              rng.next_double(-1.0, 1.0);
        }
        dot = col_dot_r(j);
      }
      scale_col(j, spec.lambda / std::abs(dot));
      const double magnitude = 1.0 - rng.next_double();  // uniform on (0,1]
      x_star[static_cast<std::size_t>(j)] =
          (dot > 0.0 ? -1.0 : 1.0) * magnitude;
    } else if (std::abs(dot) > spec.lambda) {
      scale_col(j, spec.lambda * nonzero_unit(rng) / std::abs(dot));
    }
  }

  // b = A·x* − r*, so the residual at x* is exactly r*
  std::vector<double> b(static_cast<std::size_t>(m));
  for (index_t i = 0; i < m; ++i)
    b[static_cast<std::size_t>(i)] = -r_star[static_cast<std::size_t>(i)];
  for (index_t j : support) {
    const double xj = x_star[static_cast<std::size_t>(j)];
    for (index_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k)
      b[static_cast<std::size_t>(a.row_idx[static_cast<std::size_t>(k)])] +=
          xj * a.values[static_cast<std::size_t>(k)];
  }

  double f_star = 0.0;
  for (double ri : r_star) f_star += ri * ri;
  f_star *= 0.5;
  for (index_t j : support)
    f_star += spec.lambda * std::abs(x_star[static_cast<std::size_t>(j)]);

  a.row_nnz.assign(static_cast<std::size_t>(m), 0);
  for (index_t r : a.row_idx) a.row_nnz[static_cast<std::size_t>(r)]++;

  GeneratedInstance inst;
  inst.A = std::move(a);
  inst.b = std::move(b);
  inst.x_star = std::move(x_star);
  inst.f_star = f_star;
  inst.support = std::move(support);
  return inst;
}

InstanceSummary describe(const GeneratedInstance& inst) {
  InstanceSummary out;
  out.rows = inst.A.rows;
  out.cols = inst.A.cols;
  out.omega = 2 * max_row_nnz(inst.A);
  index_t zeros = 0;
  for (double xj : inst.x_star)
    if (xj == 0.0) ++zeros;
  out.pct_zero = 100.0 * static_cast<double>(zeros) /
                 static_cast<double>(inst.A.cols);
  return out;
}

void write_instance(const std::string& path, const GeneratorSpec& spec,
                    const GeneratedInstance& inst) {
  write_matrix_market(path, inst.A);
  nlohmann::json meta;
  meta["lambda"] = spec.lambda;
  meta["f_star"] = inst.f_star;
  meta["seed"] = spec.seed;
  meta["rows"] = inst.A.rows;
  meta["cols"] = inst.A.cols;
  meta["b"] = inst.b;
  meta["support"] = inst.support;
  nlohmann::json vals = nlohmann::json::array();
  for (index_t j : inst.support)
    vals.push_back(inst.x_star[static_cast<std::size_t>(j)]);
  meta["x_star_support_values"] = vals;
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("cannot write sidecar: " + path + ".json");
  out << meta.dump(2) << '\n';
}

LoadedInstance read_instance(const std::string& path) {
  LoadedInstance inst;
  inst.A = load_matrix_market(path);
  std::ifstream in(path + ".json");
  if (!in) throw std::runtime_error("missing sidecar: " + path + ".json");
  nlohmann::json meta = nlohmann::json::parse(in);
  inst.lambda = meta.at("lambda").get<double>();
  inst.b = meta.at("b").get<std::vector<double>>();
  if (meta.contains("f_star")) inst.f_star = meta["f_star"].get<double>();
  if (meta.contains("support") && meta.contains("x_star_support_values")) {
    std::vector<double> x(static_cast<std::size_t>(inst.A.cols), 0.0);
    const auto support = meta["support"].get<std::vector<index_t>>();
    const auto vals = meta["x_star_support_values"].get<std::vector<double>>();
    for (std::size_t k = 0; k < support.size(); ++k)
      x[static_cast<std::size_t>(support[k])] = vals[k];
    inst.x_star = std::move(x);
  }
  return inst;
}

}  // namespace pabcd
