#include "qcat/anatomy.hpp"

#include <algorithm>
#include <cmath>

namespace qcat {

double log_iter(double x, int k) {
  if (k < 1) throw invalid_input("log_iter: k must be >= 1");
  double v = std::log(x);
  for (int i = 2; i <= k; ++i) v = std::log(std::max(v, 2.0));
  return v;
}

AnatomyThresholds anatomy_thresholds(double x, int g) {
  if (!(x >= 16.0)) throw invalid_input("anatomy_thresholds: requires x >= 16");
  if (g < 1) throw invalid_input("anatomy_thresholds: g must be >= 1");
  AnatomyThresholds t;
  t.x = x;
  t.g = g;
  double l1 = log_iter(x, 1), l2 = log_iter(x, 2), l3 = log_iter(x, 3);
  t.D = std::pow(l1, l3 * l3);
  t.V = std::exp(std::exp(std::sqrt(l2)));
  t.W = std::pow(x, l3 / l2);
  t.z = std::pow(l2, 2 * g + 1);
  return t;
}

u64 smooth_part_s_z(const Factorization& fN, const std::vector<u64>& zprimes) {
  u64 s = 1;
  for (auto [p, e] : fN.factors) {
    (void)e;
    u64 m = p - 1;
    for (u64 q : zprimes) {
      while (m % q == 0) {
        m /= q;
        s *= q;
      }
    }
  }
  return s;
}

u64 smooth_part_s_z(u64 N, double z) {
  if (N < 1) throw invalid_input("smooth_part_s_z: N must be positive");
  u64 zb = z < 2 ? 0 : u64(std::floor(z));
  return smooth_part_s_z(factorize(N), primes_up_to(zb));
}

double progression_reciprocal_sum(u64 x, u64 q, int j, int g) {
  if (x > 100'000'000ull) throw resource_guard("progression_reciprocal_sum: x exceeds 1e8 bound");
  if (g < 1 || j < 1 || j > 2 * g) throw invalid_input("progression_reciprocal_sum: requires 1 <= j <= 2g");
  if (!is_prime_u64(q)) throw invalid_input("progression_reciprocal_sum: q must be prime");
  u64 mod = 1;
  for (int i = 0; i < j; ++i) {
    if (mod > x / q + 1) return 0.0;  // q^j already beyond every p <= x
    mod *= q;
  }
  double s = 0.0;
  for (u64 p : primes_up_to(x))
    if (p % mod == 1) s += 1.0 / double(p);
  return s;
}

double smooth_bound_Z(double x) {
  if (!(x >= 16.0)) throw invalid_input("smooth_bound_Z: requires x >= 16");
  return std::exp(log_iter(x, 2) * std::pow(log_iter(x, 3), 1.5));
}

double smooth_exceedance_fraction(u64 x, int g) {
  if (x < 16) throw invalid_input("smooth_exceedance_fraction: requires x >= 16");
  AnatomyThresholds t = anatomy_thresholds(double(x), g);
  double Z = smooth_bound_Z(double(x));
  std::vector<u64> zprimes = primes_up_to(u64(std::floor(t.z)));
  std::vector<u64> spf = spf_sieve(x);
  u64 exceed = 0, total = 0;
  for (u64 N = 2; N <= x; ++N) {
    u64 m = N, s = 1;
    while (m > 1) {
      u64 p = spf[m];
      while (m % p == 0) m /= p;
      u64 r = p - 1;
      for (u64 q : zprimes) {
        while (r % q == 0) {
          r /= q;
          s *= q;
        }
      }
    }
    ++total;
    if (double(s) > Z) ++exceed;
  }
  return double(exceed) / double(total);
}

} // namespace qcat
