#pragma once

// Multiplicative order of an integer matrix mod N, computed prime power by
// prime power: factor-degree exponent bound mod p, divisor descent, then
// Hensel-style lifting to p^e, combined by lcm. Never a blind linear search
// (except mod 2, where the full group is tiny).

#include "qcat/common.hpp"
#include "qcat/intmat.hpp"
#include "qcat/primes.hpp"

#include <map>

namespace qcat {

struct MatrixOrderRecord {
  u64 modulus = 0;
  u64 order = 0;
  std::vector<std::tuple<u64, int, u64>> by_prime_power;  // (p, e, order mod p^e)
  bool verified_identity = false;
  bool verified_minimal = false;
  bool crosschecked = false;  // direct powering agreed (N small enough)
};

MatrixOrderRecord matrix_order(const IMat& A, u64 N, const Limits& lim = {});

u64 imat_fingerprint(const IMat& A);

// Memoizing wrapper for bulk scans; per-prime-power values are computed once
// (cross-checked on first computation when small) and combined per call.
class OrderCache {
 public:
  explicit OrderCache(const Limits& lim = {}) : lim_(lim) {}
  u64 order(const IMat& A, u64 N);

 private:
  Limits lim_;
  std::map<std::pair<u64, u64>, u64> memo_;  // (fingerprint, p^e) -> order
};

} // namespace qcat
