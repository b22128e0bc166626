#pragma once

// Good primes (split, with large root and ratio orders) and good integers
// (a square-free prime witness in the [V, W] window with small
// gcd(p-1, ord(A, N/p))). Thresholds can be overridden, since at desk scale
// the asymptotic window is only a few integers wide.

#include "qcat/anatomy.hpp"
#include "qcat/common.hpp"
#include "qcat/orders.hpp"
#include "qcat/sympl.hpp"

#include <optional>
#include <string>

namespace qcat {

struct GoodPrimeReport {
  u64 p = 0;
  bool splits = false;
  std::vector<u64> roots;
  std::vector<u64> root_orders;
  std::vector<u64> ratio_orders;  // over unordered pairs of distinct roots
  double exponent = 1.0 / 3.0;
  double threshold = 0;  // p^exponent
  bool is_good = false;
};

// p = 2 is never good; p | disc(f_A) is an error ("ramified or non-separable
// reduction").
GoodPrimeReport is_good_prime(const SymplecticMatrix& S, u64 p, double exponent = 1.0 / 3.0);

struct GoodnessOverrides {
  std::optional<double> V, W, D;
  double exponent = 1.0 / 3.0;
};

struct GoodIntegerReport {
  u64 N = 0;
  bool is_good = false;
  u64 witness_p = 0;  // 0 when absent
  u64 M = 0;          // N / witness_p
  u64 ord_A_M = 0;
  u64 gcd_value = 0;
  double V_used = 0, W_used = 0, D_used = 0;
  std::vector<std::pair<u64, std::string>> rejected;  // candidate p -> reason
};

GoodIntegerReport is_good_integer(const SymplecticMatrix& S, u64 N,
                                  const GoodnessOverrides& ov = {},
                                  OrderCache* cache = nullptr, const Limits& lim = {});

} // namespace qcat
