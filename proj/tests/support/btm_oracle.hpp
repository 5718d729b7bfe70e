#pragma once

// Brute-force posterior over biterm topic assignments. Independent of the
// sampler: it scores complete assignments with the collapsed joint
//   prod_z Gamma(n_z + a) * prod_z [prod_w Gamma(n_wz + b)] / Gamma(2 n_z + W b)
// (constants dropped) and normalizes over all k^|B| states.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iopscan/btm.hpp"

namespace iopscan::testing {

struct EnumerationFixture {
  std::string name;
  std::vector<Biterm> biterms;
  std::size_t vocab_size;
  std::size_t k;
  double alpha;
  double beta;
};

inline std::uint64_t encode_state(const std::vector<std::uint32_t>& z, std::size_t k) {
  std::uint64_t code = 0;
  for (auto it = z.rbegin(); it != z.rend(); ++it) code = code * k + *it;
  return code;
}

inline std::vector<double> exact_posterior(const EnumerationFixture& f) {
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < f.biterms.size(); ++i) states *= f.k;
  std::vector<double> logp(states);
  std::vector<std::uint32_t> z(f.biterms.size());
  for (std::uint64_t s = 0; s < states; ++s) {
    std::uint64_t code = s;
    for (auto& zi : z) {
      zi = static_cast<std::uint32_t>(code % f.k);
      code /= f.k;
    }
    std::vector<double> nz(f.k, 0.0);
    std::vector<double> nwz(f.vocab_size * f.k, 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
      nz[z[i]] += 1;
      nwz[f.biterms[i].w1 * f.k + z[i]] += 1;
      nwz[f.biterms[i].w2 * f.k + z[i]] += 1;
    }
    double lp = 0.0;
    for (std::size_t t = 0; t < f.k; ++t) {
      lp += std::lgamma(nz[t] + f.alpha);
      for (std::size_t w = 0; w < f.vocab_size; ++w) lp += std::lgamma(nwz[w * f.k + t] + f.beta);
      lp -= std::lgamma(2.0 * nz[t] + static_cast<double>(f.vocab_size) * f.beta);
    }
    logp[s] = lp;
  }
  double mx = logp[0];
  for (double v : logp) mx = std::max(mx, v);
  double total = 0.0;
  for (auto& v : logp) {
    v = std::exp(v - mx);
    total += v;
  }
  for (auto& v : logp) v /= total;
  return logp;
}

/// Total-variation distance between the final states of `chains` seeded
/// chains and the exact posterior.
inline double chain_tv_distance(const EnumerationFixture& f, std::size_t chains, std::size_t sweeps,
                                std::uint64_t master_seed) {
  const auto exact = exact_posterior(f);
  std::vector<double> empirical(exact.size(), 0.0);
  for (std::size_t c = 0; c < chains; ++c) {
    BtmConfig cfg;
    cfg.k = f.k;
    cfg.alpha = f.alpha;
    cfg.beta = f.beta;
    cfg.seed = derive_seed(master_seed, c);
    BtmSampler sampler(f.biterms, f.vocab_size, cfg);
    for (std::size_t s = 0; s < sweeps; ++s) sampler.sweep();
    empirical[encode_state(sampler.assignments(), f.k)] += 1.0 / static_cast<double>(chains);
  }
  double tv = 0.0;
  for (std::size_t s = 0; s < exact.size(); ++s) tv += std::fabs(exact[s] - empirical[s]);
  return 0.5 * tv;
}

/// Fixtures whose finite-sample TV noise at 2000 chains sits well below 0.05.
inline std::vector<EnumerationFixture> enumeration_fixtures() {
  using B = Biterm;
  return {
      {"two-communities-8", {B(0, 1), B(0, 1), B(0, 1), B(0, 1), B(2, 3), B(2, 3), B(2, 3), B(2, 3)},
       4, 2, 0.5, 0.01},
      {"mixed-3", {B(0, 1), B(1, 2), B(3, 4)}, 5, 2, 1.0, 0.1},
      {"self-pairs-6", {B(0, 0), B(0, 1), B(0, 1), B(2, 2), B(2, 3), B(2, 3)}, 4, 2, 1.0, 0.05},
      {"default-priors-6", {B(0, 1), B(0, 1), B(0, 2), B(3, 4), B(3, 4), B(2, 4)}, 5, 2, 25.0, 0.01},
  };
}

}  // namespace iopscan::testing
