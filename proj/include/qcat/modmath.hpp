#pragma once

// Modular scalar arithmetic, Bezout splitting for CRT, multiplicative orders.

#include "qcat/common.hpp"
#include "qcat/primes.hpp"

#include <optional>

namespace qcat {

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);

// Inverse of a mod m, gcd(a, m) must be 1.
u64 invmod(u64 a, u64 m);

// Canonical Bezout pair for coprime N1, N2 >= 1:
//   N2*r2 + N1*r1 = 1 with 0 <= r2 < N1 (r1 determined, possibly negative).
struct BezoutSplit {
  i64 r1 = 0;
  i64 r2 = 0;
};
BezoutSplit bezout_split(long N1, long N2);

// Order of a in (Z/mZ)^*, with verification data. Computed by divisor
// descent from the Carmichael exponent, never by linear search.
struct OrderRecord {
  u64 modulus = 0;
  u64 order = 0;
  Factorization order_factors;
  bool verified_identity = false;   // a^order == 1
  bool verified_minimal = false;    // a^(order/q) != 1 for every prime q | order
};

OrderRecord mult_order(u64 a, u64 m);

} // namespace qcat
