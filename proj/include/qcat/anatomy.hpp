#pragma once

// Multiplicative anatomy: the z-smooth part s_z(N) built from the distinct
// prime divisors of N, the threshold functions D, V, W, z used by the
// good-integer tests, and reciprocal sums over primes in progressions.

#include "qcat/common.hpp"
#include "qcat/primes.hpp"

namespace qcat {

// Iterated logarithm with clamping: log_1 x = log x, and
// log_k x = log_{k-1}(max{log x, 2}) for k >= 2. Natural logs throughout.
double log_iter(double x, int k);

struct AnatomyThresholds {
  double x = 0;
  int g = 1;
  double D = 0;  // (log x)^{(log_3 x)^2}
  double V = 0;  // exp(exp(sqrt(log_2 x)))
  double W = 0;  // x^{log_3 x / log_2 x}
  double z = 0;  // (log_2 x)^{2g+1}
};

// Requires x >= 16 so every iterated log is safely positive.
AnatomyThresholds anatomy_thresholds(double x, int g);

// s_z(N) = prod over distinct primes p | N of prod_{q <= z, q prime} q^{v_q(p-1)}:
// the z-smooth part of each p-1, multiplied over the distinct prime divisors.
u64 smooth_part_s_z(u64 N, double z);

// Same, but the caller supplies the factorization of N and the list of primes
// q <= z (bulk scans).
u64 smooth_part_s_z(const Factorization& fN, const std::vector<u64>& zprimes);

// sum of 1/p over primes p <= x with p == 1 (mod q^j). Sieve-based;
// x must stay <= 1e8 and j <= 2g.
double progression_reciprocal_sum(u64 x, u64 q, int j, int g);

// Smooth-part comparison bound exp((log_2 x)(log_3 x)^{3/2}).
double smooth_bound_Z(double x);

// Fraction of 2 <= N <= x with s_z(N) > Z(x), at the z for that x.
// Exhaustive over the range via an SPF sieve.
double smooth_exceedance_fraction(u64 x, int g);

} // namespace qcat
