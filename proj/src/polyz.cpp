#include "qcat/polyz.hpp"

#include "qcat/primes.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qcat {

// ------------------------------------------------------------------ Z[x] ---

Int ZPoly::eval(const Int& v) const {
  Int r = 0;
  for (int i = deg(); i >= 0; --i) r = r * v + c[i];
  return r;
}

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size()) r.c[i] += a.c[i];
    if (i < b.c.size()) r.c[i] += b.c[i];
  }
  r.trim();
  return r;
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size()) r.c[i] += a.c[i];
    if (i < b.c.size()) r.c[i] -= b.c[i];
  }
  r.trim();
  return r;
}

ZPoly operator-(const ZPoly& a) {
  ZPoly r = a;
  for (Int& v : r.c) v = -v;
  return r;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  ZPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

ZPoly mul_scalar(const ZPoly& a, const Int& s) {
  if (s == 0) return {};
  ZPoly r = a;
  for (Int& v : r.c) v *= s;
  return r;
}

ZPoly derivative(const ZPoly& a) {
  ZPoly r;
  for (int i = 1; i <= a.deg(); ++i) r.c.push_back(a.c[i] * i);
  r.trim();
  return r;
}

Int content(const ZPoly& a) {
  Int g = 0;
  for (const Int& v : a.c) g = gcd(g, v);
  return g;
}

ZPoly divmod_monic(const ZPoly& f, const ZPoly& d, ZPoly* rem) {
  if (!d.monic()) throw invalid_input("divmod_monic: divisor must be monic");
  ZPoly r = f, q;
  int dd = d.deg();
  if (f.deg() >= dd) q.c.assign(f.deg() - dd + 1, Int(0));
  while (r.deg() >= dd) {
    Int lead = r.c.back();
    int shift = r.deg() - dd;
    q.c[shift] = lead;
    for (int i = 0; i <= dd; ++i) r.c[shift + i] -= lead * d.c[i];
    r.trim();
  }
  q.trim();
  if (rem) *rem = r;
  return q;
}

bool divides_exact(const ZPoly& d, const ZPoly& f, ZPoly* quot) {
  if (d.is_zero()) return f.is_zero();
  if (f.is_zero()) {
    if (quot) *quot = {};
    return true;
  }
  if (f.deg() < d.deg()) return false;
  ZPoly r = f, q;
  q.c.assign(f.deg() - d.deg() + 1, Int(0));
  while (r.deg() >= d.deg()) {
    Int lead = r.c.back();
    if (lead % d.lc() != 0) return false;
    Int step = lead / d.lc();
    int shift = r.deg() - d.deg();
    q.c[shift] = step;
    for (int i = 0; i <= d.deg(); ++i) r.c[shift + i] -= step * d.c[i];
    r.trim();
  }
  if (!r.is_zero()) return false;
  q.trim();
  if (quot) *quot = q;
  return true;
}

namespace {
ZPoly primitive_signed(ZPoly a) {
  Int g = content(a);
  if (g > 1)
    for (Int& v : a.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return a;
}
} // namespace

ZPoly gcd_q(ZPoly a, ZPoly b) {
  a = primitive_signed(a);
  b = primitive_signed(b);
  while (!b.is_zero()) {
    // pseudo-remainder: lc(b)^k * a mod b
    int k = a.deg() - b.deg() + 1;
    if (k < 1) {
      std::swap(a, b);
      continue;
    }
    Int lb = b.lc();
    ZPoly r = a;
    for (int i = 0; i < k; ++i) r = mul_scalar(r, lb);
    ZPoly scaled_b = b;
    while (r.deg() >= b.deg() && !r.is_zero()) {
      Int step = r.lc() / b.lc();
      int shift = r.deg() - b.deg();
      for (int i = 0; i <= b.deg(); ++i) r.c[shift + i] -= step * b.c[i];
      r.trim();
    }
    a = b;
    b = primitive_signed(r);
  }
  a = primitive_signed(a);
  if (!a.is_zero() && a.lc() < 0) a = -a;
  return a;
}

ZPoly xn_minus_1(int m) {
  ZPoly f;
  f.c.assign(m + 1, Int(0));
  f.c[0] = -1;
  f.c[m] = 1;
  return f;
}

ZPoly cyclotomic(int m) {
  static std::map<int, ZPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  ZPoly f = xn_minus_1(m);
  for (int d = 1; d < m; ++d) {
    if (m % d) continue;
    ZPoly rem;
    f = divmod_monic(f, cyclotomic(d), &rem);
    if (!rem.is_zero()) throw property_failure("cyclotomic: division failed");
  }
  cache[m] = f;
  return f;
}

bool is_palindromic(const ZPoly& f) {
  int n = f.deg();
  for (int i = 0; 2 * i <= n; ++i)
    if (f.coeff(i) != f.coeff(n - i)) return false;
  return true;
}

ZPoly reciprocal(const ZPoly& f) {
  ZPoly r = f;
  std::reverse(r.c.begin(), r.c.end());
  r.trim();
  return r;
}

ZPoly charpoly(const IMat& A) {
  if (A.rows != A.cols) throw invalid_input("charpoly: square matrix required");
  int n = A.rows;
  ZPoly f;
  f.c.assign(n + 1, Int(0));
  f.c[n] = 1;
  IMat Bk = A;
  for (int k = 1; k <= n; ++k) {
    Int ck = -trace(Bk);
    if (ck % k != 0) throw property_failure("charpoly: non-integer coefficient");
    ck /= k;
    f.c[n - k] = ck;
    if (k < n) {
      IMat M = Bk;
      for (int i = 0; i < n; ++i) M.at(i, i) += ck;
      Bk = A * M;
    }
  }
  return f;
}

Int resultant(const ZPoly& f, const ZPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  int n = f.deg(), m = g.deg();
  if (n == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), f.c[0].get_mpz_t(), m);
    return r;
  }
  if (m == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), g.c[0].get_mpz_t(), n);
    return r;
  }
  IMat S(n + m, n + m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) S.at(i, i + j) = f.c[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) S.at(m + i, i + j) = g.c[m - j];
  return det_bareiss(S);
}

Int discriminant(const ZPoly& f) {
  int n = f.deg();
  if (n < 1) throw invalid_input("discriminant: degree must be >= 1");
  Int res = resultant(f, derivative(f));
  Int d = res / f.lc();
  if (d * f.lc() != res) throw property_failure("discriminant: leading coefficient division failed");
  return ((i64(n) * (n - 1) / 2) % 2 == 0) ? d : -d;
}

ZPoly poly_from_power_sums(const std::vector<Int>& s) {
  int n = int(s.size());
  std::vector<Rat> e(n + 1, Rat(0));
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    Rat acc = 0;
    for (int i = 1; i <= k; ++i) {
      Rat term = e[k - i] * Rat(s[i - 1]);
      if (i % 2 == 0) acc -= term;
      else acc += term;
    }
    e[k] = acc / k;
  }
  ZPoly f;
  f.c.assign(n + 1, Int(0));
  for (int k = 0; k <= n; ++k) {
    Rat v = (k % 2 == 0) ? e[k] : -e[k];
    v.canonicalize();
    if (v.get_den() != 1) throw property_failure("poly_from_power_sums: non-integer coefficient");
    f.c[n - k] = v.get_num();
  }
  f.trim();
  return f;
}

// ------------------------------------------------------------------- F_p ---

namespace {
u64 fmul(u64 a, u64 b, u64 p) { return u64(u128(a) * b % p); }
u64 fpow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = fmul(r, a, p);
    a = fmul(a, a, p);
    e >>= 1;
  }
  return r;
}
u64 finv(u64 a, u64 p) { return fpow(a % p, p - 2, p); }
} // namespace

void fp_trim(Fpoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int fp_deg(const Fpoly& f) { return int(f.size()) - 1; }

Fpoly fp_from(const ZPoly& f, u64 p) {
  Fpoly r(f.c.size());
  Int pp(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    Int v = f.c[i] % pp;
    if (v < 0) v += pp;
    r[i] = v.get_ui();
  }
  fp_trim(r);
  return r;
}

Fpoly fp_mul(const Fpoly& a, const Fpoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Fpoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + u128(a[i]) * b[j]) % p;
  }
  fp_trim(r);
  return r;
}

Fpoly fp_divmod(const Fpoly& f, const Fpoly& d, u64 p, Fpoly* rem) {
  if (d.empty()) throw invalid_input("fp_divmod: zero divisor");
  Fpoly r = f, q;
  int dd = fp_deg(d);
  u64 inv_lead = finv(d.back(), p);
  if (fp_deg(r) >= dd) q.assign(fp_deg(r) - dd + 1, 0);
  while (fp_deg(r) >= dd) {
    u64 coeff = fmul(r.back(), inv_lead, p);
    int shift = fp_deg(r) - dd;
    q[shift] = coeff;
    for (int i = 0; i <= dd; ++i) {
      u64 sub = fmul(coeff, d[i], p);
      r[shift + i] = (r[shift + i] + p - sub) % p;
    }
    fp_trim(r);
  }
  fp_trim(q);
  if (rem) *rem = r;
  return q;
}

Fpoly fp_monic(Fpoly f, u64 p) {
  fp_trim(f);
  if (f.empty() || f.back() == 1) return f;
  u64 inv = finv(f.back(), p);
  for (u64& v : f) v = fmul(v, inv, p);
  return f;
}

Fpoly fp_gcd(Fpoly a, Fpoly b, u64 p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    Fpoly r;
    fp_divmod(a, b, p, &r);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

Fpoly fp_powmod(const Fpoly& base, const Int& e, const Fpoly& mod, u64 p) {
  Fpoly r{1}, b;
  fp_divmod(base, mod, p, &b);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r;
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) {
      Fpoly t = fp_mul(r, b, p);
      fp_divmod(t, mod, p, &r);
    }
    if (i + 1 < bits) {
      Fpoly t = fp_mul(b, b, p);
      fp_divmod(t, mod, p, &b);
    }
  }
  return r;
}

Fpoly fp_derivative(const Fpoly& f, u64 p) {
  Fpoly r;
  for (int i = 1; i <= fp_deg(f); ++i) r.push_back(fmul(f[i], u64(i) % p, p));
  fp_trim(r);
  return r;
}

u64 fp_eval(const Fpoly& f, u64 v, u64 p) {
  u64 r = 0;
  for (int i = fp_deg(f); i >= 0; --i) r = (fmul(r, v, p) + f[i]) % p;
  return r;
}

std::vector<std::pair<int, Fpoly>> fp_ddf(Fpoly f, u64 p) {
  f = fp_monic(std::move(f), p);
  std::vector<std::pair<int, Fpoly>> out;
  Fpoly h{0, 1};  // x
  int d = 0;
  while (fp_deg(f) > 0) {
    ++d;
    if (2 * d > fp_deg(f)) {
      out.push_back({fp_deg(f), f});
      break;
    }
    h = fp_powmod(h, Int(static_cast<unsigned long>(p)), f, p);
    Fpoly hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + p - 1) % p;
    fp_trim(hx);
    Fpoly g = fp_gcd(hx, f, p);
    if (fp_deg(g) > 0) {
      out.push_back({d, g});
      f = fp_divmod(f, g, p, nullptr);
      Fpoly hr;
      fp_divmod(h, f, p, &hr);
      h = hr;
    }
  }
  return out;
}

namespace {

// equal-degree splitting of monic squarefree f whose irreducible factors all
// have degree d; p odd
void fp_eds(const Fpoly& f, int d, u64 p, SplitMix64& rng, std::vector<Fpoly>& out) {
  int n = fp_deg(f);
  if (n == d) {
    out.push_back(fp_monic(f, p));
    return;
  }
  Int pd = 1;
  for (int i = 0; i < d; ++i) pd *= static_cast<unsigned long>(p);
  Int e = (pd - 1) / 2;
  while (true) {
    Fpoly a(n);
    for (int i = 0; i < n; ++i) a[i] = rng.below(p);
    fp_trim(a);
    if (a.empty()) continue;
    Fpoly b = fp_powmod(a, e, f, p);
    if (b.empty()) continue;
    b[0] = (b[0] + p - 1) % p;
    fp_trim(b);
    Fpoly g = fp_gcd(b, f, p);
    if (fp_deg(g) > 0 && fp_deg(g) < n) {
      fp_eds(g, d, p, rng, out);
      fp_eds(fp_divmod(f, g, p, nullptr), d, p, rng, out);
      return;
    }
  }
}

// distinct irreducible factors of arbitrary monic f (multiplicity ignored)
std::vector<Fpoly> fp_distinct_irreducibles(Fpoly f, u64 p, SplitMix64& rng) {
  std::vector<Fpoly> irr;
  f = fp_monic(std::move(f), p);
  while (fp_deg(f) > 0) {
    Fpoly df = fp_derivative(f, p);
    if (df.empty()) {
      // f = g(x^p) = (h(x))^p over F_p: take p-th root
      Fpoly h((fp_deg(f)) / p + 1);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = f[i * p];
      f = std::move(h);
      continue;
    }
    Fpoly g = fp_gcd(f, df, p);
    Fpoly sqfree = fp_divmod(f, g, p, nullptr);
    for (auto& [d, block] : fp_ddf(sqfree, p)) fp_eds(block, d, p, rng, irr);
    f = g;
    // strip factors already found so the loop terminates even when
    // multiplicities are divisible by p
    for (const Fpoly& h : irr) {
      while (fp_deg(f) >= fp_deg(h)) {
        Fpoly r;
        Fpoly q = fp_divmod(f, h, p, &r);
        if (!r.empty()) break;
        f = q;
      }
    }
  }
  std::sort(irr.begin(), irr.end());
  irr.erase(std::unique(irr.begin(), irr.end()), irr.end());
  return irr;
}

} // namespace

std::vector<std::pair<Fpoly, int>> fp_factor(const Fpoly& f_in, u64 p, u64 seed) {
  if (p < 3) throw invalid_input("fp_factor: p must be an odd prime");
  Fpoly f = fp_monic(f_in, p);
  if (fp_deg(f) < 1) return {};
  SplitMix64 rng(seed ^ p);
  std::vector<std::pair<Fpoly, int>> out;
  for (const Fpoly& h : fp_distinct_irreducibles(f, p, rng)) {
    int mult = 0;
    Fpoly g = f;
    while (true) {
      Fpoly r;
      Fpoly q = fp_divmod(g, h, p, &r);
      if (!r.empty()) break;
      g = q;
      ++mult;
    }
    out.push_back({h, mult});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (fp_deg(a.first) != fp_deg(b.first)) return fp_deg(a.first) < fp_deg(b.first);
    return a.first < b.first;
  });
  return out;
}

std::vector<u64> fp_roots(const Fpoly& f, u64 p, u64 seed) {
  std::vector<u64> roots;
  if (fp_deg(f) < 1) return roots;
  if (p <= 1'000'000) {
    for (u64 v = 0; v < p; ++v)
      if (fp_eval(f, v, p) == 0) roots.push_back(v);
    return roots;
  }
  for (auto& [h, e] : fp_factor(f, p, seed)) {
    (void)e;
    if (fp_deg(h) == 1) roots.push_back((p - h[0] % p) % p);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<int> fp_factor_degrees(const Fpoly& f, u64 p, u64 seed) {
  std::vector<int> degs;
  for (auto& [h, e] : fp_factor(f, p, seed))
    for (int i = 0; i < e; ++i) degs.push_back(fp_deg(h));
  std::sort(degs.begin(), degs.end());
  return degs;
}

// ------------------------------------------------------------- Zassenhaus ---

namespace {

ZPoly z_from_fp(const Fpoly& f) {
  ZPoly r;
  for (u64 v : f) r.c.push_back(Int(static_cast<unsigned long>(v)));
  r.trim();
  return r;
}

ZPoly reduce_mod(const ZPoly& f, const Int& m) {
  ZPoly r = f;
  for (Int& v : r.c) {
    v %= m;
    if (v < 0) v += m;
  }
  r.trim();
  return r;
}

ZPoly balanced_mod(const ZPoly& f, const Int& m) {
  ZPoly r = reduce_mod(f, m);
  for (Int& v : r.c)
    if (2 * v > m) v -= m;
  r.trim();
  return r;
}

ZPoly mul_mod(const ZPoly& a, const ZPoly& b, const Int& m) { return reduce_mod(a * b, m); }

// division with monic divisor, coefficients mod m
ZPoly divmod_monic_mod(const ZPoly& f, const ZPoly& d, const Int& m, ZPoly* rem) {
  ZPoly r = reduce_mod(f, m), q;
  int dd = d.deg();
  if (r.deg() >= dd) q.c.assign(r.deg() - dd + 1, Int(0));
  while (r.deg() >= dd) {
    Int lead = r.c.back();
    int shift = r.deg() - dd;
    q.c[shift] = lead;
    for (int i = 0; i <= dd; ++i) {
      Int v = (r.c[shift + i] - lead * d.c[i]) % m;
      if (v < 0) v += m;
      r.c[shift + i] = v;
    }
    r.trim();
  }
  q.trim();
  if (rem) *rem = reduce_mod(r, m);
  return reduce_mod(q, m);
}

// extended Euclid in F_p[x]: s*a + t*b = 1 for coprime a, b
void fp_bezout(const Fpoly& a, const Fpoly& b, u64 p, Fpoly& s, Fpoly& t) {
  Fpoly r0 = a, r1 = b;
  Fpoly s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    Fpoly rem;
    Fpoly q = fp_divmod(r0, r1, p, &rem);
    r0 = std::move(r1);
    r1 = std::move(rem);
    Fpoly qs = fp_mul(q, s1, p), qt = fp_mul(q, t1, p);
    Fpoly ns(std::max(s0.size(), qs.size()), 0), nt(std::max(t0.size(), qt.size()), 0);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      u64 v = (i < s0.size() ? s0[i] : 0) + p - (i < qs.size() ? qs[i] % p : 0);
      ns[i] = v % p;
    }
    for (std::size_t i = 0; i < nt.size(); ++i) {
      u64 v = (i < t0.size() ? t0[i] : 0) + p - (i < qt.size() ? qt[i] % p : 0);
      nt[i] = v % p;
    }
    s0 = std::move(s1);
    s1 = std::move(ns);
    t0 = std::move(t1);
    t1 = std::move(nt);
    fp_trim(s1);
    fp_trim(t1);
  }
  if (fp_deg(r0) != 0) throw property_failure("fp_bezout: inputs not coprime");
  u64 inv = finv(r0[0], p);
  for (u64& v : s0) v = fmul(v, inv, p);
  for (u64& v : t0) v = fmul(v, inv, p);
  s = std::move(s0);
  t = std::move(t0);
}

// Quadratic two-factor Hensel: f = g*h (mod m) with monic g, h and Bezout
// s*g + t*h = 1 (mod m); all updated to hold mod m^2.
struct HenselPair {
  ZPoly g, h, s, t;
};

void hensel_step(const ZPoly& f, HenselPair& P, const Int& m) {
  Int m2 = m * m;
  ZPoly e = reduce_mod(f - P.g * P.h, m2);
  ZPoly q, r;
  q = divmod_monic_mod(mul_mod(P.s, e, m2), P.h, m2, &r);
  ZPoly g1 = reduce_mod(P.g + P.t * e + q * P.g, m2);
  ZPoly h1 = reduce_mod(P.h + r, m2);
  ZPoly b = reduce_mod(P.s * g1 + P.t * h1 - ZPoly{1}, m2);
  ZPoly c, d;
  c = divmod_monic_mod(mul_mod(P.s, b, m2), h1, m2, &d);
  ZPoly s1 = reduce_mod(P.s - d, m2);
  ZPoly t1 = reduce_mod(P.t - P.t * b - c * g1, m2);
  if (g1.deg() != P.g.deg() || h1.deg() != P.h.deg() || !h1.monic() || !g1.monic())
    throw property_failure("hensel_step: degree drift");
  P = {g1, h1, s1, t1};
}

// lift the list of pairwise coprime monic mod-p factors of monic f to mod M
// (M = p^(2^j)); recursive binary tree
void hensel_tree(const ZPoly& f, const std::vector<Fpoly>& fac, std::size_t lo, std::size_t hi,
                 u64 p, const Int& M, std::vector<ZPoly>& out) {
  if (hi - lo == 1) {
    out[lo] = reduce_mod(f, M);
    return;
  }
  std::size_t mid = (lo + hi) / 2;
  Fpoly gp{1}, hp{1};
  for (std::size_t i = lo; i < mid; ++i) gp = fp_mul(gp, fac[i], p);
  for (std::size_t i = mid; i < hi; ++i) hp = fp_mul(hp, fac[i], p);
  Fpoly sp, tp;
  fp_bezout(gp, hp, p, sp, tp);
  HenselPair P{z_from_fp(gp), z_from_fp(hp), z_from_fp(sp), z_from_fp(tp)};
  Int m(static_cast<unsigned long>(p));
  while (m < M) {
    hensel_step(reduce_mod(f, m * m), P, m);
    m *= m;
  }
  // m may exceed M; reduce down (M divides m since both are powers of p)
  hensel_tree(reduce_mod(P.g, M), fac, lo, mid, p, M, out);
  hensel_tree(reduce_mod(P.h, M), fac, mid, hi, p, M, out);
}

// Zassenhaus factorization of a monic squarefree integer polynomial
std::vector<ZPoly> factor_squarefree_monic(const ZPoly& f) {
  int n = f.deg();
  if (n <= 1) return {f};
  // choose p odd with f squarefree mod p
  u64 p = 0;
  for (u64 cand : primes_up_to(10'000)) {
    if (cand < 3) continue;
    Fpoly fp = fp_from(f, cand);
    if (fp_deg(fp) != n) continue;
    Fpoly g = fp_gcd(fp, fp_derivative(fp, cand), cand);
    if (fp_deg(g) == 0) {
      p = cand;
      break;
    }
  }
  if (!p) throw property_failure("factor: no good reduction prime below 1e4");
  auto modular = fp_factor(fp_from(f, p), p, 0x715eull);
  std::vector<Fpoly> fac;
  for (auto& [h, e] : modular) {
    if (e != 1) throw property_failure("factor: reduction not squarefree");
    fac.push_back(h);
  }
  if (fac.size() == 1) return {f};
  if (fac.size() > 24) throw resource_guard("factor: too many modular factors");

  // Mignotte-style bound: |coeff of any monic divisor| <= 2^n * ||f||_2
  Int norm2 = 0;
  for (const Int& v : f.c) norm2 += v * v;
  Int bound = sqrt(norm2) + 1;
  bound <<= (n + 1);  // 2 * 2^n * ||f||_2
  Int M(static_cast<unsigned long>(p));
  while (M <= bound) M *= M;

  std::vector<ZPoly> lifted(fac.size());
  hensel_tree(reduce_mod(f, M), fac, 0, fac.size(), p, M, lifted);

  // recombination
  std::vector<int> alive(fac.size());
  std::iota(alive.begin(), alive.end(), 0);
  ZPoly rem_f = f;
  std::vector<ZPoly> result;
  bool found = true;
  while (found && !alive.empty()) {
    found = false;
    for (std::size_t s = 1; !found && 2 * s <= alive.size(); ++s) {
      // iterate over subsets of size s via combination walk
      std::vector<std::size_t> idx(s);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        ZPoly cand{1};
        for (std::size_t i : idx) cand = mul_mod(cand, lifted[alive[i]], M);
        cand = balanced_mod(cand, M);
        ZPoly q;
        if (divides_exact(cand, rem_f, &q)) {
          result.push_back(cand);
          rem_f = q;
          std::vector<int> na;
          for (std::size_t i = 0, k = 0; i < alive.size(); ++i) {
            if (k < s && idx[k] == i) ++k;
            else na.push_back(alive[i]);
          }
          alive = std::move(na);
          found = true;
          break;
        }
        // next combination
        int pos = int(s) - 1;
        while (pos >= 0 && idx[pos] == alive.size() - s + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (std::size_t i = pos + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  if (rem_f.deg() > 0) result.push_back(rem_f);
  return result;
}

} // namespace

std::vector<std::pair<ZPoly, int>> factor_rational(const ZPoly& f) {
  if (f.is_zero()) throw invalid_input("factor_rational: zero polynomial");
  if (!f.monic()) throw invalid_input("factor_rational: monic input required");
  std::vector<std::pair<ZPoly, int>> out;
  if (f.deg() == 0) return out;
  // squarefree part, then recover multiplicities by exact division
  ZPoly g = gcd_q(f, derivative(f));
  ZPoly sqfree = f;
  if (g.deg() > 0) {
    ZPoly q;
    if (!divides_exact(g, f, &q)) throw property_failure("factor_rational: gcd division failed");
    sqfree = q;
  }
  for (const ZPoly& h : factor_squarefree_monic(sqfree)) {
    int mult = 0;
    ZPoly rest = f, q;
    while (divides_exact(h, rest, &q)) {
      rest = q;
      ++mult;
    }
    out.push_back({h, mult});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
    return a.first.c < b.first.c;
  });
  // verify
  ZPoly prod{1};
  for (auto& [h, e] : out)
    for (int i = 0; i < e; ++i) prod = prod * h;
  if (!(prod == f)) throw property_failure("factor_rational: verification product mismatch");
  return out;
}

// ---------------------------------------------------------------- F_{p^d} ---

FqElem fq_reduce(const Fpoly& a, const FqCtx& F) {
  Fpoly r;
  fp_divmod(a, F.h, F.p, &r);
  return r;
}

FqElem fq_add(const FqElem& a, const FqElem& b, const FqCtx& F) {
  Fpoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = ((i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0)) % F.p;
  fp_trim(r);
  return r;
}

FqElem fq_sub(const FqElem& a, const FqElem& b, const FqCtx& F) {
  Fpoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = ((i < a.size() ? a[i] : 0) + F.p - (i < b.size() ? b[i] % F.p : 0)) % F.p;
  fp_trim(r);
  return r;
}

FqElem fq_mul(const FqElem& a, const FqElem& b, const FqCtx& F) {
  return fq_reduce(fp_mul(a, b, F.p), F);
}

FqElem fq_pow(const FqElem& a, const Int& e, const FqCtx& F) { return fp_powmod(a, e, F.h, F.p); }

FqElem fq_scalar(u64 v, const FqCtx& F) {
  Fpoly r{v % F.p};
  fp_trim(r);
  return r;
}

FqElem fq_x(const FqCtx& F) { return fq_reduce(Fpoly{0, 1}, F); }

bool fq_is_zero(const FqElem& a) { return a.empty(); }

} // namespace qcat
