#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/dft.hpp"
#include "gowers/function_table.hpp"
#include "gowers/mobius.hpp"
#include "gowers/norms.hpp"
#include "gowers/parallel.hpp"
#include "gowers/progression.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// A_{N,M}(f1,f2,f3,f4) = E_{x in Z/NZ} E_{n,m,k in [M]} f1(x) f2(x+nm)
// f3(x+nk) f4(x+nm+nk), with [M] = {1,...,M}.
struct PatternAverage {
  std::uint64_t n = 0;  // the N of Z/NZ (population size for the x-average)
  std::uint64_t m = 0;
  cd value{0.0, 0.0};
  NormMethod method = NormMethod::exact;
  std::uint64_t samples = 0;
  double std_error = 0.0;
};

inline constexpr double kPatternBudget = 1e8;

namespace patterndetail {

// Core evaluator with the x-average restricted to [x0, x0+count).  The plain
// pattern average uses the whole group; the Mobius experiment averages over
// the embedded window [1, N] only.
inline PatternAverage pattern_core_exact(const FunctionTable& f1, const FunctionTable& f2,
                                         const FunctionTable& f3, const FunctionTable& f4,
                                         std::uint64_t m_max, std::uint64_t x0,
                                         std::uint64_t count, double budget) {
  const std::uint64_t order = f1.order();
  double cost = static_cast<double>(count) * std::pow(static_cast<double>(m_max), 3.0);
  if (cost > budget)
    throw resource_error(
        "exact pattern average cost exceeds budget; use the Monte-Carlo estimator", cost);

  const std::uint64_t chunk = std::max<std::uint64_t>(1, 1 << 8);
  auto parts = chunked_map<cd>(count, chunk, [&](std::uint64_t b, std::uint64_t e) {
    KahanSumC acc;
    for (std::uint64_t xi = b; xi < e; ++xi) {
      std::uint64_t x = (x0 + xi) % order;
      for (std::uint64_t n = 1; n <= m_max; ++n) {
        KahanSumC inner_acc;
        for (std::uint64_t m = 1; m <= m_max; ++m) {
          std::uint64_t xnm = (x + n * m) % order;
          cd f2v = f2.values[xnm];
          if (f2v == cd{0.0, 0.0}) continue;
          cd ksum{0.0, 0.0};
          for (std::uint64_t k = 1; k <= m_max; ++k) {
            std::uint64_t nk = n * k;
            ksum += f3.values[(x + nk) % order] * f4.values[(xnm + nk) % order];
          }
          inner_acc.add(f2v * ksum);
        }
        acc.add(f1.values[x] * inner_acc.value());
      }
    }
    return acc.value();
  });
  KahanSumC total;
  for (cd p : parts) total.add(p);

  PatternAverage out;
  out.n = count;
  out.m = m_max;
  out.method = NormMethod::exact;
  double denom = static_cast<double>(count) * std::pow(static_cast<double>(m_max), 3.0);
  out.value = total.value() / denom;
  return out;
}

inline PatternAverage pattern_core_mc(const FunctionTable& f1, const FunctionTable& f2,
                                      const FunctionTable& f3, const FunctionTable& f4,
                                      std::uint64_t m_max, std::uint64_t x0, std::uint64_t count,
                                      std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw argument_error("pattern MC: samples must be >= 1");
  const std::uint64_t order = f1.order();
  RngStream stream = make_stream(seed, 0x7061747465726eull /* "pattern" */);
  const std::uint64_t chunk = 65536;
  struct Part {
    KahanSumC sum;
    KahanSum sumsq;
  };
  auto parts = chunked_map<Part>(samples, chunk, [&](std::uint64_t b, std::uint64_t e) {
    Part p;
    for (std::uint64_t s = b; s < e; ++s) {
      std::uint64_t x = (x0 + stream.below(4 * s, count)) % order;
      std::uint64_t n = 1 + stream.below(4 * s + 1, m_max);
      std::uint64_t m = 1 + stream.below(4 * s + 2, m_max);
      std::uint64_t k = 1 + stream.below(4 * s + 3, m_max);
      cd v = f1.values[x] * f2.values[(x + n * m) % order] * f3.values[(x + n * k) % order] *
             f4.values[(x + n * m + n * k) % order];
      p.sum.add(v);
      p.sumsq.add(std::norm(v));
    }
    return p;
  });
  KahanSumC sum;
  KahanSum sumsq;
  for (const auto& p : parts) {
    sum.add(p.sum.value());
    sumsq.add(p.sumsq.value());
  }
  double ns = static_cast<double>(samples);
  cd meanv = sum.value() / ns;
  double var =
      samples > 1 ? std::max(0.0, (sumsq.value() - ns * std::norm(meanv)) / (ns - 1.0)) : 0.0;

  PatternAverage out;
  out.n = count;
  out.m = m_max;
  out.method = NormMethod::monte_carlo;
  out.samples = samples;
  out.value = meanv;
  out.std_error = std::sqrt(var / ns);
  return out;
}

}  // namespace patterndetail

inline PatternAverage pattern_average(const FunctionTable& f1, const FunctionTable& f2,
                                      const FunctionTable& f3, const FunctionTable& f4,
                                      std::uint64_t m_max, NormMethod method,
                                      std::uint64_t samples = 0, std::uint64_t seed = 0,
                                      double budget = kPatternBudget) {
  check_same_group(f1, f2);
  check_same_group(f1, f3);
  check_same_group(f1, f4);
  if (f1.group.arity() != 1) throw argument_error("pattern average: functions must live on Z/NZ");
  if (m_max < 1) throw argument_error("pattern average: M must be >= 1");
  if (method == NormMethod::exact)
    return patterndetail::pattern_core_exact(f1, f2, f3, f4, m_max, 0, f1.order(), budget);
  return patterndetail::pattern_core_mc(f1, f2, f3, f4, m_max, 0, f1.order(), samples, seed);
}

// Local Gowers norms along the dilated progressions n.Q, Q = {a : |a| <=
// kappa sqrt(N)}, for n in n_list; exact when the budget allows, Monte-Carlo
// otherwise.
struct LocalNormChain {
  std::vector<std::pair<std::uint64_t, NormResult>> entries;
  double average = 0.0;  // mean of norm values over the listed n
  double kappa = 0.0;
  double bound = 0.0;  // kappa * sqrt(N)
};

inline LocalNormChain local_norm_chain(const FunctionTable& f, std::uint64_t m_max, double kappa,
                                       const std::vector<std::uint64_t>& n_list, int d,
                                       double budget = kDefaultNormBudget,
                                       std::uint64_t mc_samples = 100000,
                                       std::uint64_t seed = 0) {
  if (f.group.arity() != 1) throw argument_error("local norm chain: function must live on Z/NZ");
  double bound = kappa * std::sqrt(static_cast<double>(f.order()));
  if (!(bound >= 1.0)) throw argument_error("local norm chain: kappa sqrt(N) must be >= 1");
  std::vector<std::uint64_t> ns = n_list;
  if (ns.empty())
    for (std::uint64_t n = 1; n <= m_max; ++n) ns.push_back(n);

  LocalNormChain chain;
  chain.kappa = kappa;
  chain.bound = bound;
  KahanSum avg;
  for (std::uint64_t n : ns) {
    GroupElement gen = reduce(f.group, {static_cast<std::int64_t>(n % f.order())});
    CosetProgression q = CosetProgression::rank1(f.group, gen, bound);
    ShiftSet ss = ShiftSet::from(q);
    NormResult r;
    double est = normdetail::estimate_exact_cost(f.group, std::vector<ShiftSet>(d, ss));
    if (est <= budget) {
      r = uniformity_norm(f, ss, d, budget);
    } else {
      r = box_norm_mc(f, std::vector<ShiftSet>(d, ss), mc_samples, make_stream(seed, n).key);
    }
    avg.add(r.value);
    chain.entries.emplace_back(n, r);
  }
  chain.average = chain.entries.empty() ? 0.0 : avg.value() / static_cast<double>(chain.entries.size());
  return chain;
}

// Multiplicity function nu of n.Q + m.Q and its normalized autocorrelation
// nu2(a) = E_b nu(b) nu(a-b), with the Fourier data used in the transfer
// argument: c_xi = nuhat(xi)^2 >= 0 and sum_xi c_xi = E_a nu(a)^2.
struct MultiplicityProfile {
  FunctionTable nu;
  FunctionTable nu2;
  Spectrum spectrum;       // of nu2
  double l1_spectrum = 0.0;
  double mean_nu_sq = 0.0; // E_a nu(a)^2
  std::uint64_t total_mass = 0;  // |n.Q + m.Q| counting multiplicity
};

inline MultiplicityProfile multiplicity_profile(std::uint64_t n_mod, std::uint64_t gen_n,
                                                std::uint64_t gen_m, double kappa,
                                                double budget = kPatternBudget) {
  GroupSpec g = GroupSpec::cyclic(static_cast<std::int64_t>(n_mod));
  double bound = kappa * std::sqrt(static_cast<double>(n_mod));
  std::int64_t w = static_cast<std::int64_t>(std::floor(bound));
  if (w < 0) throw argument_error("multiplicity profile: kappa sqrt(N) must be >= 0");
  double axis = static_cast<double>(2 * w + 1);
  if (axis * axis > budget)
    throw resource_error("multiplicity profile enumeration exceeds budget", axis * axis);

  MultiplicityProfile out;
  out.nu = FunctionTable::zero(g);
  std::uint64_t nn = gen_n % n_mod, mm = gen_m % n_mod;
  for (std::int64_t i = -w; i <= w; ++i)
    for (std::int64_t j = -w; j <= w; ++j) {
      std::int64_t v = (static_cast<std::int64_t>(nn) * i + static_cast<std::int64_t>(mm) * j) %
                       static_cast<std::int64_t>(n_mod);
      if (v < 0) v += static_cast<std::int64_t>(n_mod);
      out.nu.values[static_cast<std::uint64_t>(v)] += 1.0;
    }
  out.total_mass = static_cast<std::uint64_t>(axis * axis);

  Spectrum nu_hat = dft(out.nu);
  out.spectrum.group = g;
  out.spectrum.coeffs.resize(n_mod);
  KahanSum l1;
  for (std::uint64_t xi = 0; xi < n_mod; ++xi) {
    cd c = nu_hat.coeffs[xi] * nu_hat.coeffs[xi];
    out.spectrum.coeffs[xi] = c;
    l1.add(std::abs(c));
  }
  out.l1_spectrum = l1.value();
  out.nu2 = idft(out.spectrum);

  KahanSum sq;
  for (std::uint64_t a = 0; a < n_mod; ++a) sq.add(std::norm(out.nu.values[a]));
  out.mean_nu_sq = sq.value() / static_cast<double>(n_mod);
  return out;
}

// E_{x in [N]} E_{n,m,k in [M]} mu(x) mu(x+nm) mu(x+nk) mu(x+nm+nk), with mu
// embedded in Z/(embed_factor N)Z and truncated to zero outside [1, N].
inline PatternAverage mobius_experiment(std::uint64_t n, std::uint64_t m_max,
                                        std::uint64_t embed_factor, NormMethod method,
                                        std::uint64_t samples = 0, std::uint64_t seed = 0,
                                        double budget = kPatternBudget) {
  if (m_max == 0)
    m_max = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(n))));
  FunctionTable f = mobius_table(n, embed_factor);
  PatternAverage out;
  if (method == NormMethod::exact) {
    out = patterndetail::pattern_core_exact(f, f, f, f, m_max, 1, n, budget);
  } else {
    out = patterndetail::pattern_core_mc(f, f, f, f, m_max, 1, n, samples, seed);
  }
  out.n = n;
  out.m = m_max;
  return out;
}

}  // namespace gowers
