#include "pabcd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pabcd/generator.hpp"
#include "pabcd/identify.hpp"
#include "pabcd/rng.hpp"
#include "pabcd/solvers.hpp"
#include "pabcd/subproblem.hpp"

namespace pabcd {

CheckReport check_conditional_probability(const SamplerSpec& spec,
                                          const std::vector<index_t>& s,
                                          index_t tau, long long trials,
                                          std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const std::size_t ns = s.size();

  std::vector<long long> stratum(static_cast<std::size_t>(tau) + 1, 0);
  // occurrences[k][i]: total multiplicity of s[i] over trials in stratum k
  std::vector<std::vector<long long>> occurrences(
      static_cast<std::size_t>(tau) + 1, std::vector<long long>(ns, 0));

  std::vector<index_t> counts(ns);
  for (long long t = 0; t < trials; ++t) {
    std::fill(counts.begin(), counts.end(), index_t{0});
    index_t k = 0;
    for (index_t d = 0; d < tau; ++d) {
      const index_t e = sample_block(spec, rng);
      const auto it = std::lower_bound(s.begin(), s.end(), e);
      if (it != s.end() && *it == e) {
        ++k;
        counts[static_cast<std::size_t>(it - s.begin())]++;
      }
    }
    stratum[static_cast<std::size_t>(k)]++;
    for (std::size_t i = 0; i < ns; ++i)
      occurrences[static_cast<std::size_t>(k)][i] += counts[i];
  }

  std::ostringstream details;
  bool pass = true;
  const double p1 = single_draw_mass(spec, s);

  for (index_t k = 0; k <= tau; ++k) {
    const long long nk = stratum[static_cast<std::size_t>(k)];

    // stratum size against the binomial law
    const double pk = intersection_pmf(spec, s, tau, k);
    const double se_k =
        std::sqrt(pk * (1.0 - pk) / static_cast<double>(trials));
    const double freq_k = static_cast<double>(nk) / static_cast<double>(trials);
    if (se_k > 0.0 && std::abs(freq_k - pk) > 4.0 * se_k) {
      pass = false;
      details << "stratum k=" << k << ": size freq " << freq_k << " vs pmf "
              << pk << " beyond 4 sigma\n";
    }

    if (nk < 100) {
      if (nk > 0) details << "stratum k=" << k << " skipped (" << nk
                          << " samples)\n";
      continue;
    }
    for (std::size_t i = 0; i < ns; ++i) {
      const double expected =
          conditional_probability_formula(spec, s, k, tau, s[i]);
      const double observed =
          static_cast<double>(occurrences[static_cast<std::size_t>(k)][i]) /
          static_cast<double>(nk);
      if (k == 0) {
        if (observed != 0.0) {
          pass = false;
          details << "k=0 stratum contains occurrences of " << s[i] << "\n";
        }
        continue;
      }
      // per trial the multiplicity of s[i] is Binomial(k, p_i / p1)
      const double p_single = probability(spec, s[i]) / p1;
      const double se = std::sqrt(static_cast<double>(k) * p_single *
                                  (1.0 - p_single) / static_cast<double>(nk));
      if (std::abs(observed - expected) > 4.0 * se) {
        pass = false;
        details << "k=" << k << " i=" << s[i] << ": observed " << observed
                << " expected " << expected << " se " << se << "\n";
      }
    }
  }
  CheckReport report;
  report.name = "conditional-sampling-law";
  report.pass = pass;
  report.details = details.str();
  return report;
}

CheckReport check_moment_identity(const SamplerSpec& spec,
                                  const std::vector<index_t>& s, index_t tau,
                                  long long trials, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long long t = 0; t < trials; ++t) {
    index_t k = 0;
    for (index_t d = 0; d < tau; ++d)
      if (std::binary_search(s.begin(), s.end(), sample_block(spec, rng))) ++k;
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    sum += k2;
    sum_sq += k2 * k2;
  }
  const double mean = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
  const double se = std::sqrt(var / static_cast<double>(trials));

  const double p1 = single_draw_mass(spec, s);
  const double expected = static_cast<double>(tau) * p1 *
                          ((static_cast<double>(tau) - 1.0) * p1 + 1.0);

  CheckReport report;
  report.name = "intersection-second-moment";
  report.pass = std::abs(mean - expected) <= 4.0 * se;
  std::ostringstream details;
  details << "mean " << mean << " expected " << expected << " se " << se;
  report.details = details.str();
  return report;
}

std::vector<std::vector<index_t>> extend_decomposition(
    const std::vector<std::vector<index_t>>& family,
    const std::vector<index_t>& set_i, const std::vector<index_t>& set_j,
    index_t omega) {
  const index_t target_i =
      std::min<index_t>(static_cast<index_t>(set_i.size()), omega);
  const index_t target_j =
      std::min<index_t>(static_cast<index_t>(set_j.size()), omega);

  std::vector<std::vector<index_t>> extended;
  extended.reserve(family.size());
  for (const auto& base : family) {
    std::vector<index_t> sorted = base;
    std::sort(sorted.begin(), sorted.end());

    auto pad = [&](const std::vector<index_t>& cls, index_t target) {
      index_t have = 0;
      for (index_t e : cls)
        if (std::binary_search(sorted.begin(), sorted.end(), e)) ++have;
      for (index_t e : cls) {  // cls sorted, so padding is smallest-first
        if (have >= target) break;
        if (!std::binary_search(sorted.begin(), sorted.end(), e)) {
          sorted.insert(
              std::upper_bound(sorted.begin(), sorted.end(), e), e);
          ++have;
        }
      }
    };
    pad(set_i, target_i);
    pad(set_j, target_j);
    extended.push_back(std::move(sorted));
  }
  return extended;
}

double expected_descent_bound(const CompositeProblem& p, const SolverState& s,
                              const std::vector<index_t>& set_i,
                              const std::vector<index_t>& set_j,
                              index_t delta_dp, index_t tau, double beta,
                              const std::vector<double>& h) {
  const double q = static_cast<double>(delta_dp) *
                       static_cast<double>(set_i.size()) +
                   static_cast<double>(set_j.size());
  auto block_term = [&](index_t j) {
    const double g = gradient_block(p, s, j);
    const double hj = h[static_cast<std::size_t>(j)];
    return g * hj +
           0.5 * beta * p.lipschitz[static_cast<std::size_t>(j)] * hj * hj +
           p.lambda * hj;
  };
  double bound = objective(p, s);
  for (index_t j : set_i)
    bound += static_cast<double>(tau) * static_cast<double>(delta_dp) / q *
             block_term(j);
  for (index_t j : set_j)
    bound += static_cast<double>(tau) / q * block_term(j);
  return bound;
}

CheckReport check_expected_descent(const CompositeProblem& p,
                                   const SolverState& s,
                                   const std::vector<index_t>& set_i,
                                   const std::vector<index_t>& set_j,
                                   index_t delta_dp, index_t tau,
                                   long long trials, std::uint64_t seed) {
  CheckReport report;
  report.name = "expected-descent-bound";
  if (p.n_vars > 50) {
    report.pass = false;
    report.details = "problem too large for dense trial evaluation";
    return report;
  }

  const double beta =
      beta_penalty(static_cast<int>(tau), delta_dp,
                   static_cast<index_t>(set_i.size()),
                   static_cast<index_t>(set_j.size()), p.omega);
  const std::vector<double> h = full_direction(p, s, beta);
  const double f_at_x = objective(p, s);
  const double bound =
      expected_descent_bound(p, s, set_i, set_j, delta_dp, tau, beta, h);

  const SamplerSpec sampler =
      SamplerSpec::make(p.n_vars, set_i, set_j, delta_dp);
  Xoshiro256pp rng(seed);

  const index_t n = p.A.cols;
  std::vector<double> r_trial;
  std::vector<index_t> drawn(static_cast<std::size_t>(tau));
  double sum = 0.0, sum_sq = 0.0;
  double l1_at_x = 0.0;
  for (double xj : s.x) l1_at_x += xj;

  for (long long t = 0; t < trials; ++t) {
    for (index_t d = 0; d < tau; ++d)
      drawn[static_cast<std::size_t>(d)] = sample_block(sampler, rng);
    r_trial = s.r;
    double l1 = l1_at_x;
    for (index_t d = 0; d < tau; ++d) {
      const index_t j = drawn[static_cast<std::size_t>(d)];
      const double hj = h[static_cast<std::size_t>(j)];
      if (hj == 0.0) continue;
      const index_t col = j < n ? j : j - n;
      const double step = (j < n ? 1.0 : -1.0) * hj;
      const auto rows = p.A.col_rows(col);
      const auto vals = p.A.col_values(col);
      for (std::size_t e = 0; e < rows.size(); ++e)
        r_trial[static_cast<std::size_t>(rows[e])] += step * vals[e];
      l1 += hj;  // duplicates accumulate; ψ is linear so this stays exact
    }
    double sq = 0.0;
    for (double ri : r_trial) sq += ri * ri;
    const double f_new = 0.5 * sq + p.lambda * l1;
    sum += f_new;
    sum_sq += f_new * f_new;
  }

  const double mean = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
  const double se = std::sqrt(var / static_cast<double>(trials));

  bool pass = mean <= bound + 3.0 * se;
  std::ostringstream details;
  details << "E[F] " << mean << " bound " << bound << " F(x) " << f_at_x
          << " se " << se << " beta " << beta;
  if (bound <= f_at_x && !(mean <= f_at_x + 3.0 * se)) {
    pass = false;
    details << " (estimate above F(x) although the bound promises descent)";
  }
  report.pass = pass;
  report.details = details.str();
  return report;
}

std::vector<CheckReport> run_all_checks(long long trials, std::uint64_t seed) {
  std::vector<CheckReport> reports;

  // conditional law + stratum sizes on the documented worked case
  {
    std::vector<index_t> set_i = {0, 1, 2, 3};
    std::vector<index_t> set_j = {4, 5, 6, 7, 8, 9};
    const auto spec = SamplerSpec::make(10, set_i, set_j, 5);
    const std::vector<index_t> s = {0, 1, 3, 5};
    reports.push_back(
        check_conditional_probability(spec, s, 4, trials, seed));
    reports.push_back(check_moment_identity(spec, s, 4, trials, seed + 1));
  }

  // decomposition extension: the worked example, then random families
  {
    CheckReport report;
    report.name = "decomposition-extension";
    report.pass = true;
    std::ostringstream details;

    const std::vector<index_t> set_i = {1, 2};
    const std::vector<index_t> set_j = {3, 4, 5, 6, 7};
    const std::vector<std::vector<index_t>> family = {
        {1, 4}, {2}, {2, 5, 6}, {1, 3, 7}};
    const auto extended = extend_decomposition(family, set_i, set_j, 3);
    const std::vector<index_t> want_first = {1, 2, 3, 4, 5};
    if (extended[0] != want_first || extended[0].size() != 5) {
      report.pass = false;
      details << "worked example mismatch\n";
    }

    Xoshiro256pp rng(seed + 2);
    for (int trial = 0; trial < 200 && report.pass; ++trial) {
      const index_t m = 4 + static_cast<index_t>(rng.next_below(40));
      std::vector<index_t> si, sj;
      for (index_t e = 0; e < m; ++e)
        (rng.next_double() < 0.4 ? si : sj).push_back(e);
      const index_t omega = 1 + static_cast<index_t>(rng.next_below(
                                    static_cast<std::uint64_t>(m)));
      std::vector<std::vector<index_t>> fam;
      for (int f = 0; f < 5; ++f) {
        std::vector<index_t> set;
        for (index_t e = 0; e < m; ++e)
          if (rng.next_double() <
              static_cast<double>(omega) / (2.0 * static_cast<double>(m)))
            set.push_back(e);
        if (set.empty()) set.push_back(static_cast<index_t>(rng.next_below(
                             static_cast<std::uint64_t>(m))));
        if (static_cast<index_t>(set.size()) > omega)
          set.resize(static_cast<std::size_t>(omega));
        fam.push_back(std::move(set));
      }
      const auto ext = extend_decomposition(fam, si, sj, omega);
      const index_t ti = std::min<index_t>(
          static_cast<index_t>(si.size()), omega);
      const index_t tj = std::min<index_t>(
          static_cast<index_t>(sj.size()), omega);
      for (std::size_t f = 0; f < ext.size(); ++f) {
        index_t in_i = 0;
        for (index_t e : ext[f])
          if (std::binary_search(si.begin(), si.end(), e)) ++in_i;
        const index_t in_j = static_cast<index_t>(ext[f].size()) - in_i;
        const bool superset = std::includes(ext[f].begin(), ext[f].end(),
                                            fam[f].begin(), fam[f].end());
        if (in_i != ti || in_j != tj || !superset ||
            static_cast<index_t>(ext[f].size()) != ti + tj ||
            ti + tj > 2 * omega) {
          report.pass = false;
          details << "random family " << trial << " set " << f
                  << " violates the equal-intersection property\n";
          break;
        }
      }
      if (extend_decomposition(ext, si, sj, omega) != ext) {
        report.pass = false;
        details << "extension is not idempotent on family " << trial << "\n";
      }
    }
    report.details = details.str();
    reports.push_back(report);
  }

  // expected descent on a small generated instance, several states
  {
    GeneratorSpec gspec;
    gspec.rows = 15;
    gspec.cols = 10;  // 20 split coordinates
    gspec.nnz_per_col = 4;
    gspec.support_size = 3;
    gspec.lambda = 1.0;
    gspec.seed = seed + 3;
    const auto inst = generate(gspec);
    auto prob = build_lasso(inst.A, inst.b, gspec.lambda);

    SolverParams sp;
    sp.mode = Mode::serial_active;
    sp.seed = seed + 4;
    sp.f_target = inst.f_star * 1.01;
    const auto mid = solve(prob, sp);
    sp.f_target = inst.f_star * (1.0 + 1e-6);
    const auto near = solve(prob, sp);

    const long long descent_trials = std::max<long long>(trials / 100, 20000);
    int cell = 0;
    for (const std::vector<double>* x :
         {static_cast<const std::vector<double>*>(nullptr), &mid.x, &near.x}) {
      SolverState state = make_state(prob, 1e-6, x);
      std::vector<index_t> set_i, set_j;
      if (x == nullptr) {
        set_i.resize(static_cast<std::size_t>(prob.n_vars));
        std::iota(set_i.begin(), set_i.end(), index_t{0});
      } else {
        const auto h1 = full_direction(prob, state, 1.0);
        const auto cand = candidate_active_set(state.x, h1, 0.5);
        auto parts = update_partition(cand, prob.n_vars);
        set_i = std::move(parts.first);
        set_j = std::move(parts.second);
      }
      for (index_t tau : {2, 4}) {
        for (index_t delta : {1, 10}) {
          auto rep = check_expected_descent(prob, state, set_i, set_j, delta,
                                            tau, descent_trials,
                                            seed + 10 + cell);
          rep.name += " [state=" + std::to_string(cell / 4) +
                      " tau=" + std::to_string(tau) +
                      " dp=" + std::to_string(delta) + "]";
          reports.push_back(std::move(rep));
          ++cell;
        }
      }
    }
  }

  return reports;
}

}  // namespace pabcd
