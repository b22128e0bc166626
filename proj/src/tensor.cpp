#include "qcat/tensor.hpp"

#include "qcat/primes.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qcat {

StateVector crt_isometry(long N1, long N2, const StateVector& f1, const StateVector& f2,
                         const Limits& lim) {
  if (std::gcd(N1, N2) != 1) throw invalid_input("crt_isometry: moduli must be coprime");
  if (f1.N != N1 || f2.N != N2 || f1.g != f2.g)
    throw invalid_input("crt_isometry: factor states do not match the moduli");
  const int g = f1.g;
  const long N = N1 * N2;
  Lattice L = Lattice::make(N, g, lim);
  Lattice L1 = Lattice::make(N1, g, lim);
  Lattice L2 = Lattice::make(N2, g, lim);
  StateVector out;
  out.N = N;
  out.g = g;
  out.v.resize(L.D);
  long c[8], c1[8], c2[8];
  for (long Q = 0; Q < L.D; ++Q) {
    L.decode(Q, c);
    for (int i = 0; i < g; ++i) {
      c1[i] = c[i] % N1;
      c2[i] = c[i] % N2;
    }
    out.v[Q] = f1.v[L1.encode(c1)] * f2.v[L2.encode(c2)];
  }
  return out;
}

CrtIndexMap::CrtIndexMap(long n1, long n2, int gg, const Limits& lim)
    : N1(n1), N2(n2), g(gg) {
  if (std::gcd(N1, N2) != 1) throw invalid_input("CrtIndexMap: moduli must be coprime");
  Lattice L = Lattice::make(N1 * N2, g, lim);
  Lattice L1 = Lattice::make(N1, g, lim);
  Lattice L2 = Lattice::make(N2, g, lim);
  i1.resize(std::size_t(L.D));
  i2.resize(std::size_t(L.D));
  long c[8], c1[8], c2[8];
  for (long Q = 0; Q < L.D; ++Q) {
    L.decode(Q, c);
    for (int i = 0; i < g; ++i) {
      c1[i] = c[i] % N1;
      c2[i] = c[i] % N2;
    }
    i1[std::size_t(Q)] = L1.encode(c1);
    i2[std::size_t(Q)] = L2.encode(c2);
  }
}

double verify_tensor_translation(long N1, long N2, const FrequencyVector& n, i64 r,
                                 const Limits& lim) {
  if (n.size() % 2 != 0) throw invalid_input("verify_tensor_translation: bad frequency length");
  const int g = int(n.size() / 2);
  const long N = N1 * N2;
  BezoutSplit bz = bezout_split(N1, N2);
  TranslationOp TN = make_translation(N, g, r, n, lim);
  TranslationOp T1 = make_translation(N1, g, imod(r * bz.r2, 2 * N1), n, lim);
  TranslationOp T2 = make_translation(N2, g, imod(r * bz.r1, 2 * N2), n, lim);
  CrtIndexMap map(N1, N2, g, lim);

  // Both sides are generalized permutations; compare row by row.
  double acc = 0;
  for (long Q = 0; Q < TN.D; ++Q) {
    long lcol = TN.perm[std::size_t(Q)];
    Cx lval = TN.phase[std::size_t(Q)];
    long q1 = map.i1[std::size_t(Q)], q2 = map.i2[std::size_t(Q)];
    long p1 = T1.perm[std::size_t(q1)], p2 = T2.perm[std::size_t(q2)];
    Cx rval = T1.phase[std::size_t(q1)] * T2.phase[std::size_t(q2)];
    // the right side's nonzero sits at the unique full column with residues (p1, p2)
    bool same_col = (map.i1[std::size_t(lcol)] == p1 && map.i2[std::size_t(lcol)] == p2);
    if (same_col) {
      acc += std::norm(lval - rval);
    } else {
      acc += std::norm(lval) + std::norm(rval);
    }
  }
  return std::sqrt(acc);
}

TensorPropagatorReport verify_tensor_propagator(const SymplecticMatrix& A, long N1, long N2,
                                                const Limits& lim, const Tolerances& tol) {
  const long N = N1 * N2;
  BezoutSplit bz = bezout_split(N1, N2);
  Propagator PN = solve_propagator(A, N, 1, lim, tol);
  Propagator P1 = solve_propagator(A, N1, imod(bz.r2, 2 * N1), lim, tol);
  Propagator P2 = solve_propagator(A, N2, imod(bz.r1, 2 * N2), lim, tol);
  CrtIndexMap map(N1, N2, A.g, lim);

  const long D = PN.D;
  Mat K(D, D);
  for (long Q = 0; Q < D; ++Q)
    for (long Qp = 0; Qp < D; ++Qp)
      K(Q, Qp) = P1.U(map.i1[std::size_t(Q)], map.i1[std::size_t(Qp)]) *
                 P2.U(map.i2[std::size_t(Q)], map.i2[std::size_t(Qp)]);

  Cx overlap = (K.adjoint() * PN.U).trace();
  TensorPropagatorReport rep;
  rep.overlap_abs = std::abs(overlap);
  if (rep.overlap_abs < 1e-3 * double(D))
    throw property_failure("verify_tensor_propagator: trace overlap vanishes");
  rep.zeta = overlap / rep.overlap_abs;
  rep.residual = (PN.U - rep.zeta * K).norm();
  if (rep.residual > tol.tensor_prop)
    throw property_failure("verify_tensor_propagator: residual " +
                           std::to_string(rep.residual));
  return rep;
}

SymplecticMatrix restrict_to_planes(const SymplecticMatrix& A, const std::vector<int>& planes) {
  const int g = A.g;
  const int h = int(planes.size());
  IMat sub(2 * h, 2 * h);
  auto full_idx = [&](int k) { return k < h ? planes[std::size_t(k)] : g + planes[std::size_t(k - h)]; };
  for (int i = 0; i < 2 * h; ++i)
    for (int j = 0; j < 2 * h; ++j)
      sub.at(i, j) = A.A.at(full_idx(i), full_idx(j));
  return validate(sub, h);
}

FrequencyVector restrict_frequency(const FrequencyVector& n, int g, const std::vector<int>& planes) {
  const int h = int(planes.size());
  FrequencyVector out(std::size_t(2 * h));
  for (int k = 0; k < h; ++k) {
    out[std::size_t(k)] = n[std::size_t(planes[std::size_t(k)])];
    out[std::size_t(h + k)] = n[std::size_t(g + planes[std::size_t(k)])];
  }
  return out;
}

namespace {

// Union-find on plane indices; planes i, j couple when any matrix entry
// links their coordinate pairs {i, g+i} and {j, g+j}.
std::vector<std::vector<int>> plane_groups_of(const SymplecticMatrix& A) {
  const int g = A.g;
  std::vector<int> parent(static_cast<std::size_t>(g));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    return x;
  };
  auto unite = [&](int x, int y) { parent[std::size_t(find(x))] = find(y); };
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      if (i == j) continue;
      bool coupled = A.A.at(i, j) != 0 || A.A.at(i, g + j) != 0 || A.A.at(g + i, j) != 0 ||
                     A.A.at(g + i, g + j) != 0;
      if (coupled) unite(i, j);
    }
  std::vector<std::vector<int>> groups;
  for (int root = 0; root < g; ++root) {
    if (find(root) != root) continue;
    std::vector<int> grp;
    for (int i = 0; i < g; ++i)
      if (find(i) == root) grp.push_back(i);
    groups.push_back(std::move(grp));
  }
  std::sort(groups.begin(), groups.end());
  return groups;
}

}  // namespace

FactorPlan plan_factors(const SymplecticMatrix& A, long N, i64 r, const Limits& lim) {
  if (N < 1) throw invalid_input("plan_factors: N must be positive");
  FactorPlan plan;
  plan.N = N;
  plan.g = A.g;
  plan.r = r;
  plan.plane_groups = plane_groups_of(A);
  plan.plane_split_used = plan.plane_groups.size() > 1;

  // CRT chain with literal Bezout integers: split off prime powers ascending.
  std::vector<std::pair<long, i64>> crt;  // (modulus, twist)
  Factorization fac = factorize(u64(N));
  std::vector<long> pps;
  for (auto [p, e] : fac.factors)
    pps.push_back(long(checked_pow_long(long(p), e, std::numeric_limits<long>::max() / 2)));
  if (pps.empty()) pps.push_back(1);  // N = 1
  long cur_mod = N;
  i64 cur_twist = r;
  for (std::size_t i = 0; i + 1 < pps.size(); ++i) {
    long N1 = pps[i];
    long N2 = cur_mod / N1;
    BezoutSplit bz = bezout_split(N1, N2);
    crt.emplace_back(N1, cur_twist * bz.r2);
    cur_twist *= bz.r1;
    cur_mod = N2;
  }
  crt.emplace_back(cur_mod, cur_twist);

  for (const auto& grp : plan.plane_groups)
    for (auto [mod, twist] : crt) {
      LeafSpec leaf;
      leaf.planes = grp;
      leaf.modulus = mod;
      leaf.twist = imod(twist, 2 * mod);
      plan.leaves.push_back(std::move(leaf));
    }
  for (const LeafSpec& leaf : plan.leaves)
    checked_pow_long(leaf.modulus, int(leaf.planes.size()), lim.dense_dim);
  return plan;
}

} // namespace qcat
