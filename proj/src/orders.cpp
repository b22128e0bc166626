#include "qcat/orders.hpp"

#include "qcat/modmath.hpp"
#include "qcat/polyz.hpp"

#include <numeric>

namespace qcat {

namespace {

u64 lcm_checked(u64 a, u64 b) {
  u64 g = std::gcd(a, b);
  u128 v = u128(a / g) * b;
  if (v >> 63) throw resource_guard("matrix_order: exponent exceeds 64-bit range");
  return u64(v);
}

u64 sp_group_bound(int twog) {
  // |Sp(2g, F_2)| for 2g = 2, 4, 6
  switch (twog) {
    case 2: return 6;
    case 4: return 720;
    case 6: return 1451520;
    default: throw invalid_input("matrix_order: dimension must be 2, 4 or 6");
  }
}

u64 order_mod_2(const IMat& A) {
  u64 bound = sp_group_bound(A.rows);
  ModMat M = ModMat::from(A, 2), P = M;
  u64 t = 1;
  while (!P.is_identity()) {
    P = mul(P, M);
    if (++t > bound) throw property_failure("matrix_order: order mod 2 exceeds group bound");
  }
  return t;
}

u64 order_mod_odd_prime(const IMat& A, u64 q) {
  int n = A.rows;
  Fpoly f = fp_from(charpoly(A), q);
  auto factors = fp_factor(f, q);
  u64 E = 1;
  bool separable = true;
  for (auto& [h, mult] : factors) {
    int d = fp_deg(h);
    u64 qd = 1;
    for (int i = 0; i < d; ++i) {
      if (qd > ((1ull << 62) / q)) throw resource_guard("matrix_order: q^d - 1 exceeds factoring bound");
      qd *= q;
    }
    E = lcm_checked(E, qd - 1);
    if (mult > 1) separable = false;
  }
  if (separable == false) {
    u64 qs = 1;
    while (qs < u64(n)) qs = qs * q;  // least power of q covering the largest Jordan block
    E = lcm_checked(E, qs);
  }
  ModMat M = ModMat::from(A, q);
  u64 t = E;
  for (auto [l, e] : factorize(E).factors) {
    (void)e;
    while (t % l == 0 && pow(M, t / l).is_identity()) t /= l;
  }
  if (!pow(M, t).is_identity()) throw property_failure("matrix_order: descent failed mod prime");
  return t;
}

u64 order_mod_prime_power(const IMat& A, u64 q, int e) {
  u64 t = q == 2 ? order_mod_2(A) : order_mod_odd_prime(A, q);
  u64 m = q;
  for (int k = 2; k <= e; ++k) {
    m *= q;
    ModMat M = ModMat::from(A, m);
    if (!pow(M, t).is_identity()) {
      t = t * q;  // kernel of reduction is an elementary abelian q-group
      if (!pow(M, t).is_identity())
        throw property_failure("matrix_order: lifting step failed");
    }
  }
  return t;
}

void check_invertible(const IMat& A, u64 N) {
  Int d = det_bareiss(A) % Int(static_cast<unsigned long>(N));
  if (d < 0) d += Int(static_cast<unsigned long>(N));
  Int g = gcd(d, Int(static_cast<unsigned long>(N)));
  if (g != 1) throw invalid_input("matrix_order: matrix not invertible mod N");
}

} // namespace

u64 imat_fingerprint(const IMat& A) {
  u64 h = 1469598103934665603ull;
  auto mix = [&](u64 v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(u64(A.rows));
  mix(u64(A.cols));
  for (const Int& v : A.a) {
    mix(mpz_fdiv_ui(v.get_mpz_t(), 4294967291u));
    mix(v < 0 ? 2u : 1u);
  }
  return h;
}

MatrixOrderRecord matrix_order(const IMat& A, u64 N, const Limits& lim) {
  if (A.rows != A.cols || A.rows < 1) throw invalid_input("matrix_order: square matrix required");
  if (N == 0) throw invalid_input("matrix_order: modulus must be positive");
  if (N >> 32) throw resource_guard("matrix_order: modulus exceeds 2^32");
  MatrixOrderRecord rec;
  rec.modulus = N;
  if (N == 1) {
    rec.order = 1;
    rec.verified_identity = rec.verified_minimal = true;
    return rec;
  }
  check_invertible(A, N);
  u64 ord = 1;
  for (auto [q, e] : factorize(N).factors) {
    u64 t = order_mod_prime_power(A, q, e);
    rec.by_prime_power.push_back({q, e, t});
    ord = lcm_checked(ord, t);
  }
  rec.order = ord;

  ModMat M = ModMat::from(A, N);
  rec.verified_identity = pow(M, ord).is_identity();
  rec.verified_minimal = true;
  for (auto [l, e] : factorize(ord).factors) {
    (void)e;
    if (pow(M, ord / l).is_identity()) rec.verified_minimal = false;
  }
  if (!rec.verified_identity || !rec.verified_minimal)
    throw property_failure("matrix_order: verification failed");

  if (i64(N) <= lim.order_crosscheck_max) {
    ModMat P = M;
    u64 t = 1;
    while (!P.is_identity()) {
      P = mul(P, M);
      if (++t > ord) break;
    }
    if (t != ord) throw property_failure("matrix_order: direct powering cross-check mismatch");
    rec.crosschecked = true;
  }
  return rec;
}

u64 OrderCache::order(const IMat& A, u64 N) {
  if (N == 1) return 1;
  u64 fp = imat_fingerprint(A);
  u64 ord = 1;
  for (auto [q, e] : factorize(N).factors) {
    u64 qe = 1;
    for (int i = 0; i < e; ++i) qe *= q;
    auto key = std::make_pair(fp, qe);
    auto it = memo_.find(key);
    u64 t;
    if (it != memo_.end()) {
      t = it->second;
    } else {
      check_invertible(A, qe);
      t = order_mod_prime_power(A, q, e);
      if (i64(qe) <= lim_.order_crosscheck_max) {
        ModMat M = ModMat::from(A, qe), P = M;
        u64 s = 1;
        while (!P.is_identity()) {
          P = mul(P, M);
          if (++s > t) break;
        }
        if (s != t) throw property_failure("matrix_order: cached value cross-check mismatch");
      }
      memo_[key] = t;
    }
    u64 g = std::gcd(ord, t);
    ord = ord / g * t;
  }
  return ord;
}

} // namespace qcat
