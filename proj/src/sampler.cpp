#include "pabcd/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pabcd {

SamplerSpec SamplerSpec::make(index_t m, std::vector<index_t> inactive,
                              std::vector<index_t> active, index_t delta_dp) {
  if (delta_dp < 1) throw std::invalid_argument("delta_dp must be >= 1");
  SamplerSpec spec;
  spec.m = m;
  spec.inactive = std::move(inactive);
  spec.active = std::move(active);
  spec.delta_dp = delta_dp;
  std::sort(spec.inactive.begin(), spec.inactive.end());
  std::sort(spec.active.begin(), spec.active.end());
  if (static_cast<index_t>(spec.inactive.size() + spec.active.size()) != m)
    throw std::invalid_argument("I and J must partition the block range");
  spec.q = static_cast<double>(delta_dp) *
               static_cast<double>(spec.inactive.size()) +
           static_cast<double>(spec.active.size());
  if (!(spec.q > 0.0)) throw std::invalid_argument("empty block range");
  return spec;
}

bool SamplerSpec::is_inactive(index_t i) const {
  return std::binary_search(inactive.begin(), inactive.end(), i);
}

double probability(const SamplerSpec& spec, index_t i) {
  return spec.is_inactive(i) ? static_cast<double>(spec.delta_dp) / spec.q
                             : 1.0 / spec.q;
}

index_t sample_block(const SamplerSpec& spec, Xoshiro256pp& rng) {
  const double p_inactive = static_cast<double>(spec.delta_dp) *
                            static_cast<double>(spec.inactive.size()) / spec.q;
  const auto& cls =
      rng.next_double() < p_inactive ? spec.inactive : spec.active;
  return cls[rng.next_below(cls.size())];
}

Multiset sample_multiset(const SamplerSpec& spec, index_t tau,
                         Xoshiro256pp& rng) {
  Multiset b;
  b.reserve(static_cast<std::size_t>(tau));
  for (index_t t = 0; t < tau; ++t) b.push_back(sample_block(spec, rng));
  return b;
}

index_t intersection_count(const std::vector<index_t>& s, const Multiset& b) {
  index_t count = 0;
  for (index_t e : b)
    if (std::binary_search(s.begin(), s.end(), e)) ++count;
  return count;
}

namespace {

// |I∩S| and |J∩S| for sorted s
std::pair<index_t, index_t> class_intersections(
    const SamplerSpec& spec, const std::vector<index_t>& s) {
  index_t in_i = 0;
  for (index_t e : s)
    if (spec.is_inactive(e)) ++in_i;
  return {in_i, static_cast<index_t>(s.size()) - in_i};
}

}  // namespace

double single_draw_mass(const SamplerSpec& spec,
                        const std::vector<index_t>& s) {
  const auto [in_i, in_j] = class_intersections(spec, s);
  return (static_cast<double>(spec.delta_dp) * static_cast<double>(in_i) +
          static_cast<double>(in_j)) /
         spec.q;
}

double conditional_probability_formula(const SamplerSpec& spec,
                                       const std::vector<index_t>& s,
                                       index_t k, index_t tau, index_t i) {
  assert(k >= 0 && k <= tau);
  (void)tau;
  if (k == 0) return 0.0;  // an empty intersection cannot contain i
  const auto [in_i, in_j] = class_intersections(spec, s);
  const double denom =
      static_cast<double>(spec.delta_dp) * static_cast<double>(in_i) +
      static_cast<double>(in_j);
  const double numer = spec.is_inactive(i)
                           ? static_cast<double>(k * spec.delta_dp)
                           : static_cast<double>(k);
  return numer / denom;
}

double intersection_pmf(const SamplerSpec& spec,
                        const std::vector<index_t>& s, index_t tau,
                        index_t k) {
  const double p1 = single_draw_mass(spec, s);
  const double p2 = 1.0 - p1;
  double binom = 1.0;
  for (index_t t = 0; t < k; ++t)
    binom *= static_cast<double>(tau - t) / static_cast<double>(t + 1);
  double prob = binom;
  for (index_t t = 0; t < k; ++t) prob *= p1;
  for (index_t t = 0; t < tau - k; ++t) prob *= p2;
  return prob;
}

}  // namespace pabcd
