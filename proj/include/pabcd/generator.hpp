#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pabcd/problem.hpp"
#include "pabcd/sparse.hpp"

namespace pabcd {

/// Inputs of the synthetic Lasso instance builder.
struct GeneratorSpec {
  index_t rows = 0;         // M
  index_t cols = 0;         // N
  index_t nnz_per_col = 0;  // p
  index_t support_size = 0; // s; 0 resolves to min(10000, rows/2)
  double lambda = 1.0;
  std::uint64_t seed = 0;
};

/// A generated instance together with its certified optimum.
struct GeneratedInstance {
  SparseMatrix A;
  std::vector<double> b;
  std::vector<double> x_star;  // length N, the exact Lasso minimizer
  double f_star = 0.0;         // ½‖Ax*−b‖² + λ‖x*‖₁
  std::vector<index_t> support;
};

/// Build an instance whose optimum is known in closed form. Columns get
/// nnz_per_col entries at distinct random rows with values uniform on
/// [−1,1]; a residual seed r* is drawn the same way; support columns are
/// rescaled so their correlation with r* sits exactly at ±λ (redrawing any
/// column that happens to be orthogonal to r*), off-support columns with
/// excess correlation are shrunk strictly inside the λ tube; support values
/// get magnitude uniform on (0,1] with the sign that makes the optimality
/// system hold; then b = A·x* − r*. The construction makes x* satisfy the
/// Lasso optimality conditions exactly, so f_star is the true optimal value.
GeneratedInstance generate(const GeneratorSpec& spec);

struct InstanceSummary {
  index_t rows = 0;
  index_t cols = 0;
  index_t omega = 0;       // of the split reformulation
  double pct_zero = 0.0;   // percentage of zero entries of x*
};

InstanceSummary describe(const GeneratedInstance& inst);

/// Write A as Matrix Market plus a `<path>.json` sidecar holding lambda,
/// f_star, seed, b, the support indices and their x* values — everything a
/// later run needs to solve and score the instance.
void write_instance(const std::string& path, const GeneratorSpec& spec,
                    const GeneratedInstance& inst);

struct LoadedInstance {
  SparseMatrix A;
  std::vector<double> b;
  double lambda = 0.0;
  std::optional<double> f_star;
  std::optional<std::vector<double>> x_star;
};

/// Read back a matrix + sidecar pair written by write_instance.
LoadedInstance read_instance(const std::string& path);

}  // namespace pabcd
