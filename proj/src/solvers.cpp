#include "pabcd/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pabcd/identify.hpp"
#include "pabcd/sampler.hpp"
#include "pabcd/subproblem.hpp"

namespace pabcd {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::serial_active: return "serial";
    case Mode::parallel_active: return "parallel-active";
    case Mode::parallel_uniform: return "parallel-uniform";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  if (name == "serial") return Mode::serial_active;
  if (name == "parallel-active") return Mode::parallel_active;
  if (name == "parallel-uniform") return Mode::parallel_uniform;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::target_reached: return "target_reached";
    case Termination::v_small: return "v_small";
    case Termination::budget: return "budget";
    case Termination::numerical_failure: return "numerical_failure";
  }
  return "?";
}

double beta_penalty(int tau, index_t delta_dp, index_t size_inactive,
                    index_t size_active, index_t omega) {
  const double q = static_cast<double>(delta_dp) *
                       static_cast<double>(size_inactive) +
                   static_cast<double>(size_active);
  const double capped_i = static_cast<double>(std::min(size_inactive, omega));
  const double capped_j = static_cast<double>(std::min(size_active, omega));
  return static_cast<double>(tau - 1) *
             (static_cast<double>(delta_dp) * capped_i + capped_j) / q +
         1.0;
}

double stopping_norm(const SolverState& s) {
  double sq = 0.0;
  for (double vj : s.v) sq += vj * vj;
  return std::sqrt(sq);
}

namespace {

// One rng per cache line: the generator state is written on every draw, and
// packing neighbouring workers' states into one line serializes the whole
// update loop on the coherence traffic.
struct alignas(64) WorkerStream {
  Xoshiro256pp rng;
  explicit WorkerStream(std::uint64_t seed) : rng(seed) {}
};

// One worker's share of a cycle: gamma block updates against the shared
// state. Reads of r are relaxed atomic loads (they may interleave with other
// workers' column additions); the coordinate update itself is a
// compare-exchange loop so the clamp against the lower bound is computed
// from the value actually replaced.
void run_worker(const CompositeProblem& p, SolverState& s,
                const SamplerSpec& sampler, double beta, index_t gamma,
                Xoshiro256pp& rng) {
  const index_t n = p.A.cols;
  for (index_t t = 0; t < gamma; ++t) {
    const index_t j = sample_block(sampler, rng);
    const index_t col = j < n ? j : j - n;
    const double sigma = j < n ? 1.0 : -1.0;
    const auto rows = p.A.col_rows(col);
    const auto vals = p.A.col_values(col);

    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      dot += vals[k] *
             std::atomic_ref<double>(s.r[static_cast<std::size_t>(rows[k])])
                 .load(std::memory_order_relaxed);
    const double g = sigma * dot;
    const double step =
        -(g + p.lambda) / (beta * p.lipschitz[static_cast<std::size_t>(j)]);

    std::atomic_ref<double> xj(s.x[static_cast<std::size_t>(j)]);
    double cur = xj.load(std::memory_order_relaxed);
    double h = std::max(-cur, step);
    while (h != 0.0 &&
           !xj.compare_exchange_weak(cur, cur + h, std::memory_order_relaxed,
                                     std::memory_order_relaxed)) {
      h = std::max(-cur, step);  // cur was reloaded by the failed exchange
    }
    std::atomic_ref<double>(s.v[static_cast<std::size_t>(j)])
        .store(h, std::memory_order_relaxed);
    if (h == 0.0) continue;
    const double scale = sigma * h;
    for (std::size_t k = 0; k < rows.size(); ++k)
      std::atomic_ref<double>(s.r[static_cast<std::size_t>(rows[k])])
          .fetch_add(scale * vals[k], std::memory_order_relaxed);
  }
}

}  // namespace

RunRecord solve(const CompositeProblem& p, const SolverParams& params,
                const std::vector<double>* x0) {
  const index_t m = p.n_vars;

  SolverParams cfg = params;
  if (cfg.mode == Mode::serial_active) cfg.tau = 1;
  if (cfg.mode == Mode::parallel_uniform) cfg.delta_dp = 1;
  if (cfg.tau < 1) throw std::invalid_argument("tau must be >= 1");
  if (cfg.delta_dp < 1) throw std::invalid_argument("delta_dp must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (cfg.c0 <= 0) cfg.c0 = m;
  if (cfg.l_max <= 0) cfg.l_max = 1000 * m;

  const auto t0 = std::chrono::steady_clock::now();

  SolverState state = make_state(p, cfg.epsilon, x0);
  state.cycle_size = cfg.c0;

  std::vector<WorkerStream> streams;
  streams.reserve(static_cast<std::size_t>(cfg.tau));
  for (int w = 0; w < cfg.tau; ++w)
    streams.emplace_back(cfg.seed + static_cast<std::uint64_t>(w));

  RunRecord record;
  record.params = cfg;

  const bool identify = cfg.mode != Mode::parallel_uniform;
  long long updates = 0;

  while (true) {
    const double beta = beta_penalty(cfg.tau, cfg.delta_dp,
                                     static_cast<index_t>(state.inactive.size()),
                                     static_cast<index_t>(state.active.size()),
                                     p.omega);
    const SamplerSpec sampler = SamplerSpec::make(
        m, state.inactive, state.active, cfg.delta_dp);
    // at least one round, so a cycle shorter than tau still makes progress
    const index_t gamma = std::max<index_t>(state.cycle_size / cfg.tau, 1);

    if (cfg.tau == 1) {
      run_worker(p, state, sampler, beta, gamma, streams[0].rng);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(cfg.tau));
      for (int w = 0; w < cfg.tau; ++w)
        pool.emplace_back(run_worker, std::cref(p), std::ref(state),
                          std::cref(sampler), beta, gamma,
                          std::ref(streams[static_cast<std::size_t>(w)].rng));
      for (auto& th : pool) th.join();
    }
    updates += static_cast<long long>(gamma) * cfg.tau;
    state.iter_count = updates;

    // synchronization point: exact residual, measurements, identification
    const double drift = residual_refresh(p, state);
    const std::vector<double> h = full_direction(p, state, 1.0);
    double h_sq = 0.0;
    for (double hj : h) h_sq += hj * hj;
    const double h_norm = std::sqrt(h_sq);
    const double objective_value = objective(p, state);

    record.epochs.push_back({updates, objective_value, h_norm,
                             static_cast<index_t>(state.inactive.size()),
                             static_cast<index_t>(state.active.size()), beta,
                             drift});

    if (!std::isfinite(objective_value)) {
      record.termination = Termination::numerical_failure;
      break;
    }

    if (identify) {
      const auto candidates = candidate_active_set(state.x, h, cfg.alpha);
      auto [next_inactive, next_active] = update_partition(candidates, m);
      state.inactive = std::move(next_inactive);
      state.active = std::move(next_active);
      state.cycle_size =
          next_cycle_size(static_cast<index_t>(state.inactive.size()),
                          cfg.delta_f, m, cfg.c0);
    }

    if (cfg.f_target && objective_value <= *cfg.f_target) {
      record.termination = Termination::target_reached;
      break;
    }
    if (stopping_norm(state) <= cfg.epsilon) {
      record.termination = Termination::v_small;
      break;
    }
    if (updates >= cfg.l_max) {
      record.termination = Termination::budget;
      break;
    }
  }

  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  record.total_updates = updates;
  record.final_x_nnz = static_cast<index_t>(
      std::count_if(state.x.begin(), state.x.end(),
                    [](double xj) { return xj != 0.0; }));
  record.x = std::move(state.x);
  record.final_active = std::move(state.active);
  return record;
}

}  // namespace pabcd
