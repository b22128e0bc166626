#include "qcat/modmath.hpp"

#include <numeric>

namespace qcat {

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

namespace {
// returns (g, x) with a*x == g (mod m), g = gcd(a, m)
std::pair<i64, i64> egcd_mod(i64 a, i64 m) {
  i64 old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    std::swap(old_r -= q * r, r);
    std::swap(old_s -= q * s, s);
  }
  return {old_r, old_s};
}
} // namespace

u64 invmod(u64 a, u64 m) {
  if (m == 0) throw invalid_input("invmod: zero modulus");
  a %= m;
  auto [g, x] = egcd_mod(i64(a), i64(m));
  if (g != 1) throw invalid_input("invmod: arguments not coprime");
  return u64(imod(x, i64(m)));
}

BezoutSplit bezout_split(long N1, long N2) {
  if (N1 < 1 || N2 < 1) throw invalid_input("bezout_split: moduli must be positive");
  if (std::gcd(N1, N2) != 1) throw invalid_input("bezout_split: moduli must be coprime");
  BezoutSplit b;
  if (N1 == 1) {
    b.r2 = 0;
    b.r1 = 1;  // N2*0 + 1*1 = 1
    return b;
  }
  b.r2 = i64(invmod(u64(imod(N2, N1)), u64(N1)));
  b.r1 = (1 - i64(N2) * b.r2) / N1;
  return b;
}

OrderRecord mult_order(u64 a, u64 m) {
  if (m == 0) throw invalid_input("mult_order: zero modulus");
  a %= m;
  if (m == 1) {
    OrderRecord rec;
    rec.modulus = 1;
    rec.order = 1;
    rec.order_factors = factorize(1);
    rec.verified_identity = rec.verified_minimal = true;
    return rec;
  }
  if (std::gcd(a, m) != 1) throw invalid_input("mult_order: base not invertible");
  u64 lam = carmichael_lambda(factorize(m));
  u64 t = lam;
  for (auto [q, e] : factorize(lam).factors) {
    (void)e;
    while (t % q == 0 && powmod(a, t / q, m) == 1) t /= q;
  }
  OrderRecord rec;
  rec.modulus = m;
  rec.order = t;
  rec.order_factors = factorize(t);
  rec.verified_identity = powmod(a, t, m) == 1;
  rec.verified_minimal = true;
  for (auto [q, e] : rec.order_factors.factors) {
    (void)e;
    if (powmod(a, t / q, m) == 1) rec.verified_minimal = false;
  }
  if (!rec.verified_identity || !rec.verified_minimal)
    throw property_failure("mult_order: verification failed");
  return rec;
}

} // namespace qcat
