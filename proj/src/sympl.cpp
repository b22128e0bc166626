#include "qcat/sympl.hpp"

#include "qcat/modmath.hpp"
#include "qcat/primes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qcat {

IMat symplectic_J(int g) {
  IMat J(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J.at(i, g + i) = 1;
    J.at(g + i, i) = -1;
  }
  return J;
}

Int omega_form(const std::vector<Int>& x, const std::vector<Int>& y, int g) {
  Int s = 0;
  for (int i = 0; i < g; ++i) s += x[i] * y[g + i] - x[g + i] * y[i];
  return s;
}

std::vector<i64> apply_row(const std::vector<i64>& v, const IMat& A) {
  if (int(v.size()) != A.rows) throw invalid_input("apply_row: size mismatch");
  std::vector<i64> out(A.cols);
  for (int j = 0; j < A.cols; ++j) {
    Int acc = 0;
    for (int i = 0; i < A.rows; ++i) acc += Int(static_cast<long>(v[i])) * A.at(i, j);
    if (!acc.fits_slong_p()) throw resource_guard("apply_row: entry exceeds 64-bit range");
    out[j] = acc.get_si();
  }
  return out;
}

SymplecticMatrix validate(const IMat& raw, int g) {
  if (g < 1) throw invalid_input("validate: genus must be positive");
  if (raw.rows != 2 * g || raw.cols != 2 * g)
    throw invalid_input("validate: matrix must be 2g x 2g");
  IMat J = symplectic_J(g);
  if (!(transpose(raw) * J * raw == J)) throw invalid_input("validate: not symplectic");
  if (det_bareiss(raw) != 1) throw invalid_input("validate: determinant is not 1");
  SymplecticMatrix S;
  S.g = g;
  S.A = raw;
  S.parity = is_identity_mod(raw, 2);
  return S;
}

SymplecticMatrix validate(const std::vector<std::vector<long>>& rows, int g) {
  IMat M(int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
  for (int i = 0; i < M.rows; ++i) {
    if (int(rows[i].size()) != M.cols) throw invalid_input("validate: ragged matrix");
    for (int j = 0; j < M.cols; ++j) M.at(i, j) = rows[i][j];
  }
  return validate(M, g);
}

std::pair<u64, SymplecticMatrix> parity_reduce(const SymplecticMatrix& S) {
  u64 bound;
  switch (S.g) {
    case 1: bound = 6; break;
    case 2: bound = 720; break;
    case 3: bound = 1451520; break;
    default: throw invalid_input("parity_reduce: genus must be 1, 2 or 3");
  }
  ModMat M = ModMat::from(S.A, 2), P = M;
  u64 k = 1;
  while (!P.is_identity()) {
    P = mul(P, M);
    if (++k > bound) throw property_failure("parity_reduce: exceeded group order bound");
  }
  return {k, validate(pow_int(S.A, k), S.g)};
}

CharPolyInfo char_poly_info(const SymplecticMatrix& S) {
  CharPolyInfo info;
  info.poly = charpoly(S.A);
  if (!is_palindromic(info.poly))
    throw property_failure("char_poly_info: polynomial not palindromic");
  info.discriminant = discriminant(info.poly);
  info.rational_factors = factor_rational(info.poly);
  info.separable = info.discriminant != 0;
  info.irreducible =
      info.rational_factors.size() == 1 && info.rational_factors[0].second == 1;
  return info;
}

namespace {

ZPoly det_bareiss_poly(std::vector<std::vector<ZPoly>> M) {
  int n = int(M.size());
  if (n == 0) return ZPoly{1};
  ZPoly prev{1};
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (!M[i][k].is_zero()) { piv = i; break; }
      if (piv < 0) return {};
      std::swap(M[k], M[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        ZPoly v = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        ZPoly q;
        if (!divides_exact(prev, v, &q))
          throw property_failure("det_bareiss_poly: inexact division");
        M[i][j] = q;
      }
    prev = M[k][k];
  }
  return sign > 0 ? M[n - 1][n - 1] : -M[n - 1][n - 1];
}

// Res_y(f(y), y^{2g} f(x/y)) = prod_{i,j} (x - lambda_i lambda_j); for a
// symplectic (reciprocal) spectrum this is the full polynomial of eigenvalue
// ratios.
ZPoly ratio_polynomial(const ZPoly& f) {
  int n = f.deg();
  // G(x, y) = sum_k f_k x^k y^{n-k}, a degree-n polynomial in y whose y^j
  // coefficient is f_{n-j} x^{n-j}
  std::vector<ZPoly> fy(n + 1), Gy(n + 1);
  for (int j = 0; j <= n; ++j) {
    fy[j] = ZPoly{};
    fy[j].c.assign(1, f.c[j]);
    fy[j].trim();
    ZPoly m;
    m.c.assign(n - j + 1, Int(0));
    m.c[n - j] = f.c[n - j];
    m.trim();
    Gy[j] = m;
  }
  // Sylvester matrix in y: n rows of f-coefficients, n rows of G-coefficients
  int size = 2 * n;
  std::vector<std::vector<ZPoly>> Syl(size, std::vector<ZPoly>(size));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) Syl[i][i + j] = fy[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) Syl[n + i][i + j] = Gy[n - j];
  return det_bareiss_poly(std::move(Syl));
}

std::vector<int> small_cyclotomic_divisors(const ZPoly& f, int phi_bound) {
  std::vector<int> hits;
  for (int m = 1; m <= 2 * phi_bound * phi_bound + 1; ++m) {
    if (int(euler_phi(factorize(u64(m)))) > phi_bound) continue;
    if (divides_exact(cyclotomic(m), f, nullptr)) hits.push_back(m);
  }
  return hits;
}

IMat poly_at_matrix(const ZPoly& h, const IMat& A) {
  int n = A.rows;
  IMat R(n, n);
  IMat P = IMat::identity(n);
  for (int k = 0; k <= h.deg(); ++k) {
    if (h.c[k] != 0)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R.at(i, j) += h.c[k] * P.at(i, j);
    if (k < h.deg()) P = P * A;
  }
  return R;
}

Isotropy classify_isotropy(const std::vector<std::vector<Int>>& basis, int g) {
  int k = int(basis.size());
  IMat G(k, k);
  bool all_zero = true;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      G.at(i, j) = omega_form(basis[i], basis[j], g);
      if (G.at(i, j) != 0) all_zero = false;
    }
  if (all_zero) return Isotropy::isotropic;
  if (det_bareiss(G) != 0) return Isotropy::symplectic;
  return Isotropy::mixed;
}

std::string basis_key(const std::vector<std::vector<Int>>& basis) {
  // canonical form: RREF over Q, serialized
  std::vector<std::vector<Rat>> m(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (const Int& v : basis[i]) m[i].push_back(Rat(v));
  int rank = 0;
  auto R = rref_rational(std::move(m), &rank, nullptr);
  std::ostringstream os;
  for (int i = 0; i < rank; ++i)
    for (auto& q : R[i]) os << q.get_str() << ",";
  return os.str();
}

} // namespace

RootOfUnityReport root_of_unity_checks(const SymplecticMatrix& S) {
  CharPolyInfo info = char_poly_info(S);
  if (!info.separable)
    throw invalid_input("root_of_unity_checks: characteristic polynomial not separable");
  RootOfUnityReport rep;
  rep.cyclotomic_in_poly = small_cyclotomic_divisors(info.poly, 2 * S.g);
  rep.ergodic = rep.cyclotomic_in_poly.empty();
  rep.ratio_poly = ratio_polynomial(info.poly);
  ZPoly forced{1};
  ZPoly xm1{-1, 1};
  for (int i = 0; i < 2 * S.g; ++i) forced = forced * xm1;
  if (!divides_exact(forced, rep.ratio_poly, &rep.ratio_reduced))
    throw property_failure("root_of_unity_checks: forced (x-1)^2g factor missing");
  rep.cyclotomic_in_ratio = small_cyclotomic_divisors(rep.ratio_reduced, 4 * S.g * S.g);
  rep.ratio_condition = rep.cyclotomic_in_ratio.empty();
  return rep;
}

namespace {
IMat krylov_matrix(const FrequencyVector& n, const SymplecticMatrix& S) {
  int d = 2 * S.g;
  if (int(n.size()) != d) throw invalid_input("is_zero_divisor: frequency length mismatch");
  IMat K(d, d);
  std::vector<Int> row(d);
  for (int j = 0; j < d; ++j) row[j] = Int(static_cast<long>(n[j]));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) K.at(i, j) = row[j];
    if (i + 1 < d) {
      std::vector<Int> next(d, Int(0));
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) next[k] += row[j] * S.A.at(j, k);
      row = std::move(next);
    }
  }
  return K;
}
} // namespace

bool is_zero_divisor(const FrequencyVector& n, const SymplecticMatrix& S,
                     std::optional<u64> modulus) {
  IMat K = krylov_matrix(n, S);
  int d = 2 * S.g;
  if (modulus) {
    u64 p = *modulus;
    if (!is_prime_u64(p)) throw invalid_input("is_zero_divisor: modulus must be prime");
    Int disc = discriminant(charpoly(S.A));
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p))
      throw invalid_input("is_zero_divisor: p divides the discriminant");
    return rank_mod_p(K, p) < d;
  }
  return rank_rational(K) < d;
}

std::vector<u64> eigenvalues_mod_p(const SymplecticMatrix& S, u64 p) {
  if (!is_prime_u64(p)) throw invalid_input("eigenvalues_mod_p: p must be prime");
  ZPoly f = charpoly(S.A);
  Int disc = discriminant(f);
  if (mpz_divisible_ui_p(disc.get_mpz_t(), p))
    throw invalid_input("eigenvalues_mod_p: p divides the discriminant");
  std::vector<u64> roots = fp_roots(fp_from(f, p), p);
  if (int(roots.size()) != 2 * S.g) throw invalid_input("eigenvalues_mod_p: not split");
  return roots;
}

SubspaceSplit invariant_subspace_split(const SymplecticMatrix& S) {
  CharPolyInfo info = char_poly_info(S);
  SubspaceSplit out;
  int d = 2 * S.g;
  if (info.separable) {
    out.complete = true;
    std::vector<std::vector<std::vector<Int>>> kernels;
    for (std::size_t i = 0; i < info.rational_factors.size(); ++i) {
      const ZPoly& h = info.rational_factors[i].first;
      auto basis = kernel_rows(poly_at_matrix(h, S.A));
      if (int(basis.size()) != h.deg())
        throw property_failure("invariant_subspace_split: kernel dimension mismatch");
      SubspaceDescriptor sd;
      sd.basis = basis;
      sd.label = int(i);
      sd.isotropy = classify_isotropy(basis, S.g);
      out.subspaces.push_back(sd);
      kernels.push_back(std::move(basis));
    }
    int t = int(kernels.size());
    for (unsigned mask = 1; mask < (1u << t); ++mask) {
      std::vector<std::vector<Int>> joint;
      for (int i = 0; i < t; ++i)
        if (mask & (1u << i))
          for (auto& b : kernels[i]) joint.push_back(b);
      if (int(joint.size()) == d) continue;  // the full space is symplectic
      if (classify_isotropy(joint, S.g) == Isotropy::isotropic) out.scar_prone = true;
    }
    return out;
  }

  // non-separable: cyclic-subspace search over small integer seeds
  out.complete = false;
  std::vector<std::vector<i64>> seeds;
  for (int i = 0; i < d; ++i) {
    std::vector<i64> v(d, 0);
    v[i] = 1;
    seeds.push_back(v);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (i64 s : {i64(1), i64(-1)}) {
        std::vector<i64> v(d, 0);
        v[i] = 1;
        v[j] = s;
        seeds.push_back(v);
      }
  std::map<std::string, SubspaceDescriptor> found;
  for (auto& seed : seeds) {
    FrequencyVector n(seed.begin(), seed.end());
    IMat orbit = krylov_matrix(n, S);
    // canonical basis from the RREF of the orbit
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i][j] = Rat(orbit.at(i, j));
    int rank = 0;
    auto R = rref_rational(std::move(m), &rank, nullptr);
    if (rank == 0 || rank == d) continue;
    std::vector<std::vector<Int>> basis;
    for (int i = 0; i < rank; ++i) {
      Int den = 1;
      for (auto& q : R[i]) den = Int(lcm(den, q.get_den()));
      std::vector<Int> row(d);
      for (int j = 0; j < d; ++j) row[j] = Int(R[i][j] * den);
      Int gg = 0;
      for (auto& v : row) gg = gcd(gg, v);
      if (gg > 1)
        for (auto& v : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), gg.get_mpz_t());
      basis.push_back(std::move(row));
    }
    std::string key = basis_key(basis);
    if (found.count(key)) continue;
    SubspaceDescriptor sd;
    sd.basis = basis;
    sd.label = -1;
    sd.isotropy = classify_isotropy(basis, S.g);
    if (sd.isotropy == Isotropy::isotropic) out.scar_prone = true;
    found[key] = sd;
  }
  for (auto& [k, sd] : found) {
    (void)k;
    out.subspaces.push_back(sd);
  }
  return out;
}

namespace {

std::vector<u64> reduce_row_mod_p(const std::vector<Int>& row, u64 p) {
  std::vector<u64> r(row.size());
  Int pp(static_cast<unsigned long>(p));
  for (std::size_t j = 0; j < row.size(); ++j) {
    Int v = row[j] % pp;
    if (v < 0) v += pp;
    r[j] = v.get_ui();
  }
  return r;
}

// solve x * B = v over F_p where B rows are basis vectors; empty optional if
// inconsistent
std::optional<std::vector<u64>> solve_left_fp(const std::vector<std::vector<u64>>& B,
                                              const std::vector<u64>& v, u64 p) {
  int k = int(B.size());
  int cols = int(v.size());
  std::vector<std::vector<u64>> aug(cols, std::vector<u64>(k + 1));
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < k; ++j) aug[i][j] = B[j][i] % p;
    aug[i][k] = v[i] % p;
  }
  // gaussian elimination
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c <= k && r < cols; ++c) {
    int pr = -1;
    for (int i = r; i < cols; ++i)
      if (aug[i][c]) { pr = i; break; }
    if (pr < 0) continue;
    std::swap(aug[r], aug[pr]);
    u64 inv = powmod(aug[r][c], p - 2, p);
    for (int j = c; j <= k; ++j) aug[r][j] = mulmod(aug[r][j], inv, p);
    for (int i = 0; i < cols; ++i) {
      if (i == r || !aug[i][c]) continue;
      u64 f = aug[i][c];
      for (int j = c; j <= k; ++j)
        aug[i][j] = (aug[i][j] + p - mulmod(f, aug[r][j], p)) % p;
    }
    piv.push_back(c);
    ++r;
  }
  std::vector<u64> x(k, 0);
  for (int i = 0; i < r; ++i) {
    if (piv[i] == k) return std::nullopt;  // inconsistent
    x[piv[i]] = aug[i][k];
  }
  return x;
}

u64 omega_mod_p(const std::vector<u64>& x, const std::vector<u64>& y, int g, u64 p) {
  u64 s = 0;
  for (int i = 0; i < g; ++i) {
    s = (s + mulmod(x[i], y[g + i], p)) % p;
    s = (s + p - mulmod(x[g + i], y[i], p)) % p;
  }
  return s;
}

bool gram_nonsingular_mod_p(const std::vector<std::vector<u64>>& basis, int g, u64 p) {
  int k = int(basis.size());
  IMat G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      G.at(i, j) = Int(static_cast<unsigned long>(omega_mod_p(basis[i], basis[j], g, p)));
  return rank_mod_p(G, p) == k;
}

} // namespace

ZeroDivisorSplitResult zero_divisor_split(const FrequencyVector& n, const SymplecticMatrix& S,
                                          u64 p) {
  int d = 2 * S.g;
  if (!is_prime_u64(p) || p == 2) throw invalid_input("zero_divisor_split: p must be an odd prime");
  CharPolyInfo info = char_poly_info(S);
  if (mpz_divisible_ui_p(info.discriminant.get_mpz_t(), p))
    throw invalid_input("zero_divisor_split: p divides the discriminant");
  std::vector<u64> n_mod(d);
  bool n_zero = true;
  for (int i = 0; i < d; ++i) {
    n_mod[i] = u64(imod(n[i], i64(p)));
    if (n_mod[i]) n_zero = false;
  }
  if (n_zero) throw invalid_input("zero_divisor_split: n is zero mod p");
  if (!is_zero_divisor(n, S, p)) throw invalid_input("zero_divisor_split: n is not a zero-divisor");

  // rational kernels of the irreducible factors, reduced mod p
  std::vector<std::vector<std::vector<u64>>> kernels;
  for (auto& [h, e] : info.rational_factors) {
    if (e != 1) throw property_failure("zero_divisor_split: non-separable factorization");
    auto basis = kernel_rows(poly_at_matrix(h, S.A));
    std::vector<std::vector<u64>> bp;
    for (auto& row : basis) bp.push_back(reduce_row_mod_p(row, p));
    kernels.push_back(std::move(bp));
  }

  // coordinates of n over the stacked kernel basis, mod p
  std::vector<std::vector<u64>> stacked;
  for (auto& K : kernels)
    for (auto& row : K) stacked.push_back(row);
  if (int(stacked.size()) != d)
    throw property_failure("zero_divisor_split: kernel dimensions do not fill the space");
  auto coords = solve_left_fp(stacked, n_mod, p);
  if (!coords) throw property_failure("zero_divisor_split: bad reduction of kernel basis at p");

  std::vector<int> in_W1;
  {
    std::size_t off = 0;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      bool nonzero = false;
      for (std::size_t j = 0; j < kernels[i].size(); ++j)
        if ((*coords)[off + j]) nonzero = true;
      if (nonzero) in_W1.push_back(int(i));
      off += kernels[i].size();
    }
  }
  if (int(in_W1.size()) == int(kernels.size()))
    throw property_failure("zero_divisor_split: n meets every factor (not a zero-divisor)");

  auto build_part = [&](bool first) {
    std::vector<std::vector<u64>> basis;
    std::vector<int> labels;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      bool sel = std::find(in_W1.begin(), in_W1.end(), int(i)) != in_W1.end();
      if (sel == first) {
        for (auto& row : kernels[i]) basis.push_back(row);
        labels.push_back(int(i));
      }
    }
    return std::make_pair(basis, labels);
  };
  auto [b1, l1] = build_part(true);
  auto [b2, l2] = build_part(false);

  // symplecticity of each part and omega-orthogonality across parts
  if (!gram_nonsingular_mod_p(b1, S.g, p) || !gram_nonsingular_mod_p(b2, S.g, p))
    throw property_failure("zero_divisor_split: scar regime (isotropic pairing mod p)");
  for (auto& x : b1)
    for (auto& y : b2)
      if (omega_mod_p(x, y, S.g, p) != 0)
        throw property_failure("zero_divisor_split: parts are not omega-orthogonal");

  auto restricted = [&](const std::vector<std::vector<u64>>& basis) {
    int k = int(basis.size());
    IMat R(k, k);
    for (int i = 0; i < k; ++i) {
      // image of basis row under A, mod p
      std::vector<u64> img(d, 0);
      for (int c = 0; c < d; ++c) {
        Int acc = 0;
        for (int r = 0; r < d; ++r)
          acc += Int(static_cast<unsigned long>(basis[i][r])) * S.A.at(r, c);
        acc %= Int(static_cast<unsigned long>(p));
        if (acc < 0) acc += Int(static_cast<unsigned long>(p));
        img[c] = acc.get_ui();
      }
      auto sol = solve_left_fp(basis, img, p);
      if (!sol) throw property_failure("zero_divisor_split: subspace not A-invariant mod p");
      for (int j = 0; j < k; ++j) R.at(i, j) = Int(static_cast<unsigned long>((*sol)[j]));
    }
    return R;
  };

  ZeroDivisorSplitResult out;
  out.p = p;
  out.A_on_W1 = restricted(b1);
  out.A_on_W2 = restricted(b2);
  {
    std::size_t off = 0, w1off = 0;
    out.n_on_W1.assign(b1.size(), 0);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      bool sel = std::find(in_W1.begin(), in_W1.end(), int(i)) != in_W1.end();
      if (sel) {
        for (std::size_t j = 0; j < kernels[i].size(); ++j)
          out.n_on_W1[w1off + j] = (*coords)[off + j];
        w1off += kernels[i].size();
      }
      off += kernels[i].size();
    }
  }

  // restricted map must not see n as a zero-divisor
  {
    int k = int(b1.size());
    IMat K(k, k);
    std::vector<Int> row(k);
    for (int j = 0; j < k; ++j) row[j] = Int(static_cast<unsigned long>(out.n_on_W1[j]));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) K.at(i, j) = row[j];
      if (i + 1 < k) {
        std::vector<Int> next(k, Int(0));
        for (int j = 0; j < k; ++j)
          for (int c = 0; c < k; ++c) next[c] += row[j] * out.A_on_W1.at(j, c);
        row = std::move(next);
      }
    }
    if (rank_mod_p(K, p) < k)
      throw property_failure("zero_divisor_split: image of n is still a zero-divisor on W1");
  }

  auto to_desc = [&](const std::vector<std::vector<u64>>& basis,
                     const std::vector<int>& labels) {
    SubspaceDescriptor sd;
    for (auto& row : basis) {
      std::vector<Int> r;
      for (u64 v : row) r.push_back(Int(static_cast<unsigned long>(v)));
      sd.basis.push_back(std::move(r));
    }
    sd.label = labels.size() == 1 ? labels[0] : -1;
    sd.isotropy = Isotropy::symplectic;
    return sd;
  };
  out.W1 = to_desc(b1, l1);
  out.W2 = to_desc(b2, l2);
  return out;
}

} // namespace qcat
