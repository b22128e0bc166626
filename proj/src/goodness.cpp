#include "qcat/goodness.hpp"

#include "qcat/modmath.hpp"

#include <cmath>
#include <numeric>

namespace qcat {

GoodPrimeReport is_good_prime(const SymplecticMatrix& S, u64 p, double exponent) {
  if (!is_prime_u64(p)) throw invalid_input("is_good_prime: p must be prime");
  if (!(exponent > 0 && exponent < 0.5))
    throw invalid_input("is_good_prime: exponent must lie in (0, 1/2)");
  ZPoly f = charpoly(S.A);
  Int disc = discriminant(f);
  if (mpz_divisible_ui_p(disc.get_mpz_t(), p))
    throw invalid_input("is_good_prime: ramified or non-separable reduction");
  GoodPrimeReport rep;
  rep.p = p;
  rep.exponent = exponent;
  rep.threshold = std::pow(double(p), exponent);
  if (p == 2) return rep;  // never good
  rep.roots = fp_roots(fp_from(f, p), p);
  rep.splits = int(rep.roots.size()) == 2 * S.g;
  if (!rep.splits) return rep;
  bool all_large = true;
  for (u64 r : rep.roots) {
    u64 ord = mult_order(r, p).order;
    rep.root_orders.push_back(ord);
    if (double(ord) < rep.threshold) all_large = false;
  }
  for (std::size_t i = 0; i < rep.roots.size(); ++i)
    for (std::size_t j = i + 1; j < rep.roots.size(); ++j) {
      u64 ratio = mulmod(rep.roots[i], invmod(rep.roots[j], p), p);
      u64 ord = mult_order(ratio, p).order;
      rep.ratio_orders.push_back(ord);
      if (double(ord) < rep.threshold) all_large = false;
    }
  rep.is_good = all_large;
  return rep;
}

GoodIntegerReport is_good_integer(const SymplecticMatrix& S, u64 N, const GoodnessOverrides& ov,
                                  OrderCache* cache, const Limits& lim) {
  if (N < 2) throw invalid_input("is_good_integer: N must be >= 2");
  GoodIntegerReport rep;
  rep.N = N;
  bool need_thresholds = !ov.V || !ov.W || !ov.D;
  if (need_thresholds && N < 16)
    throw invalid_input("is_good_integer: thresholds undefined below x = 16; supply overrides");
  AnatomyThresholds t;
  if (need_thresholds) t = anatomy_thresholds(double(N), S.g);
  rep.V_used = ov.V ? *ov.V : t.V;
  rep.W_used = ov.W ? *ov.W : t.W;
  rep.D_used = ov.D ? *ov.D : t.D;

  Int disc = discriminant(charpoly(S.A));
  for (auto [p, e] : factorize(N).factors) {
    if (e != 1) {
      rep.rejected.push_back({p, "square divisor"});
      continue;
    }
    if (double(p) < rep.V_used || double(p) > rep.W_used) {
      rep.rejected.push_back({p, "outside window"});
      continue;
    }
    if (p == 2) {
      rep.rejected.push_back({p, "p = 2 is never good"});
      continue;
    }
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p)) {
      rep.rejected.push_back({p, "ramified"});
      continue;
    }
    GoodPrimeReport gp = is_good_prime(S, p, ov.exponent);
    if (!gp.splits) {
      rep.rejected.push_back({p, "not split"});
      continue;
    }
    if (!gp.is_good) {
      rep.rejected.push_back({p, "small root or ratio order"});
      continue;
    }
    u64 M = N / p;
    u64 ord = cache ? cache->order(S.A, M) : matrix_order(S.A, M, lim).order;
    u64 g = std::gcd(p - 1, ord);
    if (double(g) > rep.D_used) {
      rep.rejected.push_back({p, "gcd(p-1, ord(A, N/p)) too large"});
      continue;
    }
    rep.is_good = true;
    rep.witness_p = p;
    rep.M = M;
    rep.ord_A_M = ord;
    rep.gcd_value = g;
    return rep;
  }
  return rep;
}

} // namespace qcat
