#pragma once

#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/function_table.hpp"

namespace gowers {

inline constexpr std::uint64_t kSieveCap = 200'000'000;

// Mobius function mu(1..n) by linear sieve.
inline std::vector<std::int8_t> mobius_sieve(std::uint64_t n) {
  if (n > kSieveCap) throw resource_error("mobius sieve beyond memory cap", static_cast<double>(n));
  std::vector<std::int8_t> mu(n + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<char> composite(n + 1, 0);
  if (n >= 1) mu[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      mu[i] = -1;
    }
    for (std::uint32_t p : primes) {
      std::uint64_t ip = i * p;
      if (ip > n) break;
      composite[ip] = 1;
      if (i % p == 0) {
        mu[ip] = 0;
        break;
      }
      mu[ip] = -mu[i];
    }
  }
  return mu;
}

// mu embedded in Z/(embed_factor*N)Z: value mu(x) at residues 1..N, zero
// elsewhere.  The padding keeps [N]-supported pattern sums free of
// wraparound contamination.
inline FunctionTable mobius_table(std::uint64_t n, std::uint64_t embed_factor = 5) {
  if (n < 1) throw argument_error("mobius_table: N must be >= 1");
  if (embed_factor < 1) throw argument_error("mobius_table: embed factor must be >= 1");
  auto mu = mobius_sieve(n);
  GroupSpec g = GroupSpec::cyclic(static_cast<std::int64_t>(embed_factor * n));
  FunctionTable f = FunctionTable::zero(g);
  for (std::uint64_t x = 1; x <= n && x < g.order; ++x)
    f.values[x] = static_cast<double>(mu[x]);
  return f;
}

}  // namespace gowers
