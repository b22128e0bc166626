#include "qcat/counting.hpp"

#include "qcat/modmath.hpp"
#include "qcat/orders.hpp"
#include "qcat/polyz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace qcat {

namespace {

// Mixed-radix key for a coordinate vector mod base; bails out if base^len
// cannot fit a u64 key space.
void check_key_space(u64 base, int len) {
  long double span = 1;
  for (int i = 0; i < len; ++i) span *= (long double)base;
  if (span >= 9.2e18L)
    throw resource_guard("counting table key space exceeds 64 bits; reduce N or g");
}

u64 encode_vec(const std::vector<u64>& v, u64 base) {
  u64 key = 0;
  for (std::size_t i = v.size(); i-- > 0;) key = key * base + v[i];
  return key;
}

std::vector<u64> add_vec(const std::vector<u64>& a, const std::vector<u64>& b, u64 base) {
  std::vector<u64> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % base;
  return out;
}

// c(v) for 2nu-fold sums of the given generators (each exponent value k
// contributes its vector once per position), by iterated convolution.
std::unordered_map<u64, u64> fold_sums(const std::vector<std::vector<u64>>& gens, u64 base,
                                       int folds, const Limits& lim) {
  std::unordered_map<u64, u64> cur;
  cur.reserve(gens.size() * 2);
  for (const auto& w : gens) cur[encode_vec(w, base)] += 1;
  const std::size_t len = gens.empty() ? 0 : gens[0].size();
  for (int step = 1; step < folds; ++step) {
    std::unordered_map<u64, u64> next;
    next.reserve(std::min<std::size_t>(cur.size() * gens.size(), lim.count_table_max));
    for (const auto& [key, cnt] : cur) {
      std::vector<u64> v(len);
      u64 k = key;
      for (std::size_t i = 0; i < len; ++i) {
        v[i] = k % base;
        k /= base;
      }
      for (const auto& w : gens) {
        next[encode_vec(add_vec(v, w, base), base)] += cnt;
        if (next.size() > lim.count_table_max)
          throw resource_guard("counting table exceeds limit; reduce nu or N");
      }
    }
    cur.swap(next);
  }
  return cur;
}

Int sum_of_squares(const std::unordered_map<u64, u64>& table) {
  Int total = 0;
  for (const auto& [key, cnt] : table) {
    Int c((unsigned long)cnt);
    total += c * c;
  }
  return total;
}

Int ipow(u64 b, int e) {
  Int v = 1;
  for (int i = 0; i < e; ++i) v *= Int((unsigned long)b);
  return v;
}

// Exhaustive count of equal 2nu-fold sums over the generator list; only used
// when gens.size()^{4nu} <= 1e7.
Int exhaustive_equal_sums(const std::vector<std::vector<u64>>& gens, u64 base, int nu) {
  const int half = 2 * nu;
  const std::size_t tau = gens.size();
  const std::size_t len = gens[0].size();
  std::unordered_map<u64, u64> sums;
  std::vector<std::size_t> idx(std::size_t(half), 0);
  while (true) {
    std::vector<u64> acc(len, 0);
    for (int i = 0; i < half; ++i) acc = add_vec(acc, gens[idx[std::size_t(i)]], base);
    sums[encode_vec(acc, base)] += 1;
    std::size_t f = 0;
    while (f < std::size_t(half) && ++idx[f] == tau) idx[f++] = 0;
    if (f == std::size_t(half)) break;
  }
  return sum_of_squares(sums);
}

void check_count_invariants(const CountResult& res) {
  if (res.nu == 1) {
    Int t((unsigned long)res.tau);
    Int lower = 2 * t * t - t;
    if (res.value < lower)
      throw property_failure("count below the diagonal lower bound 2 tau^2 - tau");
  }
  if (res.value > ipow(res.tau, 4 * res.nu))
    throw property_failure("count above tau^{4 nu}");
}

CountResult count_from_generators(std::vector<std::vector<u64>> gens, u64 base, u64 modulus,
                                  int nu, std::optional<FrequencyVector> n, u64 tau,
                                  const Limits& lim) {
  check_key_space(base, int(gens[0].size()));
  CountResult res;
  res.modulus = modulus;
  res.nu = nu;
  res.n = std::move(n);
  res.tau = tau;
  res.method = CountMethod::convolution;
  res.value = sum_of_squares(fold_sums(gens, base, 2 * nu, lim));

  double total = std::pow(double(tau), 4.0 * nu);
  if (total <= 1e7) {
    Int direct = exhaustive_equal_sums(gens, base, nu);
    if (direct != res.value)
      throw property_failure("convolution and exhaustive counts disagree");
    res.crosschecked = true;
  }
  check_count_invariants(res);
  return res;
}

} // namespace

CountResult q_count_vector(const SymplecticMatrix& A, long N, const FrequencyVector& n, int nu,
                           const Limits& lim) {
  if (N < 2) throw invalid_input("q_count_vector: N must be >= 2");
  if (nu < 1) throw invalid_input("q_count_vector: nu must be >= 1");
  if ((int)n.size() != 2 * A.g) throw invalid_input("q_count_vector: bad frequency length");
  const u64 tau = matrix_order(A.A, u64(N), lim).order;
  const int d = 2 * A.g;

  ModMat Am = ModMat::from(A.A, u64(N));
  std::vector<u64> cur(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) cur[std::size_t(i)] = u64(imod(n[std::size_t(i)], N));
  std::vector<std::vector<u64>> gens;
  gens.reserve(std::size_t(tau));
  for (u64 k = 1; k <= tau; ++k) {
    std::vector<u64> nxt(std::size_t(d), 0);
    for (int j = 0; j < d; ++j) {
      u128 acc = 0;
      for (int i = 0; i < d; ++i) acc += u128(cur[std::size_t(i)]) * Am.at(i, j);
      nxt[std::size_t(j)] = u64(acc % u64(N));
    }
    cur = nxt;
    gens.push_back(cur);
  }
  return count_from_generators(std::move(gens), u64(N), u64(N), nu, n, tau, lim);
}

CountResult q_count_matrix(const SymplecticMatrix& A, long N, int nu, const Limits& lim) {
  if (N < 2) throw invalid_input("q_count_matrix: N must be >= 2");
  if (nu < 1) throw invalid_input("q_count_matrix: nu must be >= 1");
  const u64 tau = matrix_order(A.A, u64(N), lim).order;
  const int d = 2 * A.g;

  // Matrix entries flattened to a coordinate vector of length 4g^2.
  ModMat Am = ModMat::from(A.A, u64(N));
  ModMat cur = ModMat::identity(d, u64(N));
  std::vector<std::vector<u64>> gens;
  gens.reserve(std::size_t(tau));
  for (u64 k = 1; k <= tau; ++k) {
    cur = mul(cur, Am);
    gens.push_back(cur.a);
  }
  return count_from_generators(std::move(gens), u64(N), u64(N), nu, std::nullopt, tau, lim);
}

CountResult r_count(const SymplecticMatrix& A, u64 p, int nu, const Limits& lim) {
  if (!is_prime_u64(p)) throw invalid_input("r_count: p must be prime");
  if (nu < 1) throw invalid_input("r_count: nu must be >= 1");
  CharPolyInfo info = char_poly_info(A);
  if (mpz_divisible_ui_p(info.discriminant.get_mpz_t(), (unsigned long)p))
    throw invalid_input("r_count: non-separable reduction (p divides disc)");

  std::vector<std::pair<Fpoly, int>> factors = fp_factor(fp_from(info.poly, p), p);
  std::vector<FqCtx> fields;
  for (const auto& [h, mult] : factors) {
    if (mult > 1) throw invalid_input("r_count: non-separable reduction");
    fields.push_back(FqCtx{p, h});
  }

  const u64 tau = matrix_order(A.A, p, lim).order;
  const int d = 2 * A.g;

  // Track x^k in each residue field; coordinates are the concatenated
  // polynomial coefficients (padded to the factor degree).
  std::vector<FqElem> cur;
  for (const FqCtx& F : fields) cur.push_back(fq_x(F));
  std::vector<std::vector<u64>> gens;
  gens.reserve(std::size_t(tau));
  for (u64 k = 1; k <= tau; ++k) {
    std::vector<u64> coords(std::size_t(d), 0);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (k > 1) cur[i] = fq_mul(cur[i], fq_x(fields[i]), fields[i]);
      int deg = fp_deg(fields[i].h);
      for (int c = 0; c < deg; ++c)
        coords[pos + std::size_t(c)] = c < (int)cur[i].size() ? cur[i][std::size_t(c)] : 0;
      pos += std::size_t(deg);
    }
    gens.push_back(std::move(coords));
  }
  return count_from_generators(std::move(gens), p, p, nu, std::nullopt, tau, lim);
}

MordellSum mordell_partial_sum(u64 p, const std::vector<u64>& alphas,
                               const std::vector<u64>& lambdas, u64 T) {
  if (!is_prime_u64(p)) throw invalid_input("mordell_partial_sum: p must be prime");
  if (alphas.size() != lambdas.size())
    throw invalid_input("mordell_partial_sum: alpha/lambda length mismatch");
  for (u64 l : lambdas)
    if (l % p == 0) throw invalid_input("mordell_partial_sum: lambda must be a unit");

  MordellSum ms;
  ms.p = p;
  ms.alphas = alphas;
  ms.lambdas = lambdas;
  ms.T = T;
  std::vector<Cx> ep(static_cast<std::size_t>(p));
  for (u64 x = 0; x < p; ++x)
    ep[std::size_t(x)] = std::polar(1.0, 2.0 * M_PI * double(x) / double(p));
  std::vector<u64> pw(lambdas.size(), 1);
  Cx S(0, 0);
  for (u64 t = 1; t <= T; ++t) {
    u64 e = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      pw[i] = mulmod(pw[i], lambdas[i] % p, p);
      e = (e + mulmod(alphas[i] % p, pw[i], p)) % p;
    }
    S += ep[std::size_t(e)];
  }
  ms.value = S;
  if (std::abs(S) > double(T) + 1e-9)
    throw property_failure("mordell_partial_sum: |S| exceeds T");
  return ms;
}

MomentReport moment_identity_check(const SymplecticMatrix& A, u64 p, int nu, const Limits& lim,
                                   const Tolerances& tol) {
  const int d = 2 * A.g;
  std::vector<u64> roots = eigenvalues_mod_p(A, p);  // throws unless fully split
  double span = std::pow(double(p), double(d));
  if (span > lim.moment_scan_max)
    throw resource_guard("moment_identity_check: alpha scan p^{2g} too large");

  const u64 T = matrix_order(A.A, p, lim).order;
  std::vector<Cx> ep(static_cast<std::size_t>(p));
  for (u64 x = 0; x < p; ++x)
    ep[std::size_t(x)] = std::polar(1.0, 2.0 * M_PI * double(x) / double(p));

  // powers[i][t] = lambda_i^{t+1}
  std::vector<std::vector<u64>> powers(static_cast<std::size_t>(d), std::vector<u64>(static_cast<std::size_t>(T)));
  for (int i = 0; i < d; ++i) {
    u64 cur = 1;
    for (u64 t = 0; t < T; ++t) {
      cur = mulmod(cur, roots[std::size_t(i)], p);
      powers[std::size_t(i)][std::size_t(t)] = cur;
    }
  }

  double lhs = 0;
  std::vector<u64> alpha(std::size_t(d), 0);
  while (true) {
    Cx S(0, 0);
    for (u64 t = 0; t < T; ++t) {
      u64 e = 0;
      for (int i = 0; i < d; ++i)
        e = (e + mulmod(alpha[std::size_t(i)], powers[std::size_t(i)][std::size_t(t)], p)) % p;
      S += ep[std::size_t(e)];
    }
    double a2 = std::norm(S);
    double term = 1;
    for (int k = 0; k < 2 * nu; ++k) term *= a2;
    lhs += term;

    int f = 0;
    while (f < d && ++alpha[std::size_t(f)] == p) alpha[std::size_t(f++)] = 0;
    if (f == d) break;
  }
  lhs /= span;

  MomentReport rep;
  rep.lhs = lhs;
  rep.rhs = r_count(A, p, nu, lim).value;
  rep.T = T;
  double rhs = rep.rhs.get_d();
  rep.match = std::abs(lhs - rhs) < tol.moment_rel * rhs;
  return rep;
}

KrReport kr_inequality_check(const SymplecticMatrix& A, long N, i64 r, const FrequencyVector& n,
                             int nu, DeltaMethod method, const Limits& lim,
                             const Tolerances& tol) {
  CountResult Q = q_count_vector(A, N, n, nu, lim);
  DeltaResult elt = max_translation_element(A, N, n, r, method, lim, tol);

  KrReport rep;
  rep.Q = Q.value;
  rep.tau = Q.tau;
  rep.max_element = elt.max_element;
  rep.quantum_period = elt.quantum_period;
  double lhs = 1;
  for (int k = 0; k < 4 * nu; ++k) lhs *= elt.max_element;
  rep.lhs = lhs;
  double denom = std::pow(double(Q.tau), 4.0 * nu);
  double Ng = std::pow(double(N), double(A.g));
  rep.rhs = Ng * Q.value.get_d() / denom;
  rep.holds = rep.lhs <= rep.rhs + tol.kr_slack;
  return rep;
}

double zero_divisor_bound_value(const SymplecticMatrix& A, u64 p, i64 r,
                                const FrequencyVector& n, const Limits& lim,
                                const Tolerances& tol) {
  if (A.g < 2) throw invalid_input("zero_divisor_bound_value: needs g >= 2");
  CharPolyInfo info = char_poly_info(A);
  if (!info.separable) throw invalid_input("zero_divisor_bound_value: f_A not separable");
  if (info.irreducible) throw invalid_input("zero_divisor_bound_value: f_A irreducible");
  SubspaceSplit split = invariant_subspace_split(A);
  if (split.scar_prone)
    throw invalid_input("zero_divisor_bound_value: invariant isotropic subspace present");
  bool zero_mod_p = true;
  for (i64 x : n)
    if (imod(x, i64(p)) != 0) zero_mod_p = false;
  if (zero_mod_p) throw invalid_input("zero_divisor_bound_value: n vanishes mod p");
  if (!is_zero_divisor(n, A, p))
    throw invalid_input("zero_divisor_bound_value: n is not a zero-divisor mod p");

  DeltaResult res = max_translation_element(A, long(p), n, r, DeltaMethod::dense, lim, tol);
  return res.max_element;
}

ZeroDivisorReport zero_divisor_bound_check(const SymplecticMatrix& A, i64 r,
                                           const FrequencyVector& n, const std::vector<u64>& ps,
                                           const Limits& lim, const Tolerances& tol) {
  ZeroDivisorReport rep;
  for (u64 p : ps)
    rep.points.push_back({p, zero_divisor_bound_value(A, p, r, n, lim, tol)});
  if (rep.points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = double(rep.points.size());
    for (const auto& pt : rep.points) {
      double x = std::log(double(pt.p));
      double y = std::log(std::max(pt.value, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double denom = sxx - sx * sx / m;
    rep.gamma_emp = denom > 0 ? -(sxy - sx * sy / m) / denom : 0;
  }
  return rep;
}

} // namespace qcat
