#pragma once

// 64-bit primality and factorization: trial division against a cached prime
// sieve up to 1e6, then deterministic Miller-Rabin plus Brent's rho for the
// cofactor. Inputs must stay below 2^63; beyond that we refuse rather than
// silently go probabilistic.

#include "qcat/common.hpp"

#include <utility>
#include <vector>

namespace qcat {

bool is_prime_u64(u64 n);

struct Factorization {
  u64 n = 0;
  std::vector<std::pair<u64, int>> factors;  // ascending primes with exponents
  bool used_rho = false;                     // trial division did not finish the job

  u64 radical() const;
  int omega() const { return int(factors.size()); }
};

// Throws resource_guard if n >= 2^63, invalid_input if n == 0.
Factorization factorize(u64 n);

// All (unsorted is useless here: returned ascending) divisors of n.
std::vector<u64> divisors_of(const Factorization& f);

// Primes <= n by plain sieve.
std::vector<u64> primes_up_to(u64 n);

// Smallest-prime-factor sieve for bulk scans. spf[k] = least prime factor of
// k for 2 <= k <= n (spf[0] = spf[1] = 0).
std::vector<u64> spf_sieve(u64 n);

// Euler phi and Carmichael lambda from a factorization.
u64 euler_phi(const Factorization& f);
u64 carmichael_lambda(const Factorization& f);

} // namespace qcat
