#pragma once

#include <vector>

#include "pabcd/problem.hpp"

namespace pabcd {

/// Inputs of the one-coordinate quadratic model
///   min_h  g·h + (β·L/2)·h² + λ·((x+h) − x)   s.t.  x + h ≥ 0.
/// The box is the fixed [0, +∞) of the split reformulation, so only the
/// lower bound can clamp.
struct BlockDirectionInput {
  double g;       // block gradient
  double lipschitz;  // L > 0
  double beta;    // parallel penalty, ≥ 1
  double lambda;  // ψ slope, ≥ 0
  double x;       // current coordinate value, ≥ 0
};

/// Closed-form minimizer of the block model: the unconstrained minimum
/// −(g+λ)/(β·L) clamped to the feasible step range [−x, +∞). ψ restricted to
/// the nonnegative orthant is linear, which is what makes the closed form
/// exact.
inline double block_direction(const BlockDirectionInput& in) {
  const double unconstrained = -(in.g + in.lambda) / (in.beta * in.lipschitz);
  return unconstrained < -in.x ? -in.x : unconstrained;
}

/// Model value at step h (for minimality checks and expected-descent bounds):
/// g·h + (βL/2)·h² + λ·h.
inline double block_model_value(const BlockDirectionInput& in, double h) {
  return in.g * h + 0.5 * in.beta * in.lipschitz * h * h + in.lambda * h;
}

/// All 2N block directions at the shared penalty beta, from the current
/// residual. With beta = 1 this is the composite-gradient direction h(x)
/// whose vanishing characterizes stationarity; the identification threshold
/// and the stopping diagnostics are built from it. One full gradient pass —
/// call at cycle boundaries only.
std::vector<double> full_direction(const CompositeProblem& p,
                                   const SolverState& s, double beta);

/// G(h, x, γ) = ∇f(x)ᵀh + (γ/2)‖h‖² + ψ(x+h) − ψ(x)
///            = Σ_j [ g_j·h_j + (γ/2)·h_j² + λ·h_j ].
/// Requires x + h feasible and a consistent residual.
double model_value_G(const CompositeProblem& p, const std::vector<double>& h,
                     const SolverState& s, double gamma);

}  // namespace pabcd
