#include "qcat/primes.hpp"

#include <algorithm>
#include <numeric>

namespace qcat {

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while (!(d & 1)) d >>= 1, ++s;
  u64 x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

const std::vector<u64>& small_primes() {
  static const std::vector<u64> table = primes_up_to(1'000'000);
  return table;
}

u64 brent_rho(u64 n, u64 seed) {
  // Brent's cycle variant of Pollard rho; n must be odd composite, not a
  // prime power handled elsewhere. Returns a nontrivial factor.
  SplitMix64 rng(seed);
  while (true) {
    u64 y = rng.below(n - 2) + 1, c = rng.below(n - 2) + 1;
    u64 x = y, q = 1, g = 1, ys = y;
    const u64 m = 128;
    u64 r = 1;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = (mulmod_u64(y, y, n) + c) % n;
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (mulmod_u64(ys, ys, n) + c) % n;
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::vector<u64>& out, u64 seed) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = brent_rho(n, seed);
  factor_rec(d, out, seed + 1);
  factor_rec(n / d, out, seed + 2);
}

} // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
    if (n % p == 0) return n == p;
  if (n < 41 * 41) return true;
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull})
    if (!miller_rabin(n, a)) return false;
  return true;
}

Factorization factorize(u64 n) {
  if (n == 0) throw invalid_input("factorize: n must be positive");
  if (n >= (1ull << 63)) throw resource_guard("factorize: input exceeds 2^63-1 bound");
  Factorization f;
  f.n = n;
  u64 m = n;
  for (u64 p : small_primes()) {
    if (p * p > m) break;
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) m /= p, ++e;
      f.factors.push_back({p, e});
    }
  }
  if (m > 1) {
    if (is_prime_u64(m)) {
      f.factors.push_back({m, 1});
    } else {
      f.used_rho = true;
      std::vector<u64> ps;
      factor_rec(m, ps, 0x5eedull ^ m);
      std::sort(ps.begin(), ps.end());
      for (std::size_t i = 0; i < ps.size();) {
        std::size_t j = i;
        while (j < ps.size() && ps[j] == ps[i]) ++j;
        f.factors.push_back({ps[i], int(j - i)});
        i = j;
      }
    }
  }
  std::sort(f.factors.begin(), f.factors.end());
  return f;
}

std::vector<u64> divisors_of(const Factorization& f) {
  std::vector<u64> ds{1};
  for (auto [p, e] : f.factors) {
    std::size_t base = ds.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> ps;
  if (n < 2) return ps;
  std::vector<bool> comp(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (!comp[i]) {
      ps.push_back(i);
      for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    if (i * i > n) break;
  }
  for (u64 i = ps.empty() ? 2 : ps.back() + 1; i <= n; ++i)
    if (!comp[i]) ps.push_back(i);
  return ps;
}

std::vector<u64> spf_sieve(u64 n) {
  std::vector<u64> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      for (u64 j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
  }
  return spf;
}

u64 Factorization::radical() const {
  u64 v = 1;
  for (auto [p, e] : factors) v *= p;
  return v;
}

u64 euler_phi(const Factorization& f) {
  u64 v = 1;
  for (auto [p, e] : f.factors) {
    v *= p - 1;
    for (int k = 1; k < e; ++k) v *= p;
  }
  return v;
}

u64 carmichael_lambda(const Factorization& f) {
  u64 lam = 1;
  for (auto [p, e] : f.factors) {
    u64 part;
    if (p == 2) {
      part = e == 1 ? 1 : (e == 2 ? 2 : (1ull << (e - 2)));
    } else {
      part = p - 1;
      for (int k = 1; k < e; ++k) part *= p;
    }
    lam = std::lcm(lam, part);
  }
  return lam;
}

} // namespace qcat
