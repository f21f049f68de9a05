#pragma once

#include <stdexcept>
#include <vector>

#include "pabcd/sparse.hpp"

namespace pabcd {

/// Instance violates a build precondition (e.g. a structurally zero column).
struct InvalidInstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bound-constrained composite reformulation of
///   min ½‖Ax − b‖² + λ‖x‖₁
/// over split variables z = (x⁺, x⁻) with z ≥ 0:
///   min ½‖A(x⁺ − x⁻) − b‖² + λ·Σ z_j.
///
/// Blocks are single coordinates, so block j of 2N maps to column j mod N of
/// A with sign +1 (j < N) or −1 (j ≥ N). Bounds are the fixed box [0, +∞)
/// and are kept implicit. Immutable after build_lasso.
struct CompositeProblem {
  SparseMatrix A;
  std::vector<double> b;
  double lambda = 0.0;
  index_t n_vars = 0;             // 2N split coordinates
  std::vector<double> lipschitz;  // length 2N; L_j = ‖a_{j mod N}‖²
  index_t omega = 0;              // partial-separability degree, 2·max_row_nnz(A)

  index_t column_of(index_t j) const { return j < A.cols ? j : j - A.cols; }
  double sign_of(index_t j) const { return j < A.cols ? 1.0 : -1.0; }
};

/// Build the split reformulation. Rejects shape mismatches, negative lambda,
/// and matrices with an all-zero column (their curvature constant would be
/// zero and the block subproblem undefined).
CompositeProblem build_lasso(SparseMatrix a, std::vector<double> b,
                             double lambda);

/// The regularization weight convention for ingested datasets:
/// 0.1·‖Aᵀb‖∞.
double default_lambda(const SparseMatrix& a, const std::vector<double>& b);

/// Mutable solver state. x is kept feasible (componentwise ≥ 0) at every
/// synchronization point; r tracks A(x⁺ − x⁻) − b incrementally and may
/// drift while workers race, which residual_refresh repairs.
struct SolverState {
  std::vector<double> x;   // length 2N
  std::vector<double> r;   // length M
  std::vector<double> v;   // length 2N, last direction stored per block
  std::vector<index_t> inactive;  // the set I, sampled at the high rate
  std::vector<index_t> active;    // the set J, flagged as likely at a bound
  index_t cycle_size = 0;
  long long iter_count = 0;
};

/// Fresh state at x = x0 (default null vector): r = A(x⁺−x⁻) − b, every v
/// entry 2ε so no stopping test can fire before any work happens,
/// I = all blocks, J = empty.
SolverState make_state(const CompositeProblem& p, double epsilon,
                       const std::vector<double>* x0 = nullptr);

/// F(x) = ½‖r‖² + λ·Σ x_j. Requires r consistent with x; call
/// residual_refresh first if unsure. Exclusive access.
double objective(const CompositeProblem& p, const SolverState& s);

/// Block gradient ∇_j f = sign(j)·a_{j mod N}ᵀ r. Reads r with relaxed
/// atomics so it may legally observe a partially applied concurrent update
/// set (the benign race; repaired at cycle boundaries).
double gradient_block(const CompositeProblem& p, const SolverState& s,
                      index_t j);

/// x_j += h, v_j = h, r += sign(j)·h·a_{j mod N}. All scalar additions are
/// atomic, so concurrent callers never lose an update. The caller guarantees
/// x_j + h ≥ 0 via the direction computation.
void apply_block_update(const CompositeProblem& p, SolverState& s, index_t j,
                        double h);

/// Recompute r from scratch and return ‖r_old − r_new‖∞ (the drift repaired
/// by this call). Exclusive access.
double residual_refresh(const CompositeProblem& p, SolverState& s);

/// Split a length-N vector into the nonnegative pair (max(x,0), max(−x,0))
/// laid out as one length-2N vector.
std::vector<double> split_vector(const std::vector<double>& x);

/// Inverse of split_vector: x = x⁺ − x⁻.
std::vector<double> merge_split(const std::vector<double>& z);

}  // namespace pabcd
