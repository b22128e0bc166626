#include "qcat/spectral.hpp"

#include "qcat/orders.hpp"

#include <algorithm>
#include <numeric>

namespace qcat {

namespace {

Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) throw invalid_input("lcm of zero");
  u64 g = std::gcd(a, b);
  u128 v = u128(a / g) * b;
  if (v > u128(std::numeric_limits<u64>::max()))
    throw resource_guard("lcm overflow in merged period");
  return u64(v);
}

} // namespace

double sigma_max(const Mat& B, const Tolerances& tol) {
  if (B.rows() == 0 || B.cols() == 0) return 0;
  if (B.rows() == 1 && B.cols() == 1) return std::abs(B(0, 0));
  const long n = B.cols();
  double best = 0;
  for (int s = 0; s < 3; ++s) {
    SplitMix64 rng(0xb5ad4eceda1ce2a9ull + 0x9e3779b9ull * u64(s));
    Vec v(n);
    for (long i = 0; i < n; ++i) v[i] = Cx(2 * rng.unit() - 1, 2 * rng.unit() - 1);
    double nv = v.norm();
    if (nv == 0) continue;
    v /= nv;
    double lam = 0;
    for (int it = 0; it < 50000; ++it) {
      Vec w = B * v;
      Vec u = B.adjoint() * w;
      double nu = u.norm();
      if (nu <= 1e-300) {
        lam = 0;
        break;
      }
      double prev = lam;
      lam = nu;  // Rayleigh quotient of B^H B at unit v
      v = u / nu;
      if (it > 2 && std::abs(lam - prev) <= tol.sup_rel * lam) break;
    }
    best = std::max(best, std::sqrt(lam));
  }
  return best;
}

double matrix_element_sup(const EigenSpace& E, const EigenSpace& Ep, const DenseOperator& Op,
                          const Tolerances& tol) {
  if (Op.M.rows() != E.basis.rows() || Op.M.rows() != Ep.basis.rows())
    throw invalid_input("matrix_element_sup: dimension mismatch");
  Mat B = Ep.basis.adjoint() * (Op.M * E.basis);
  return sigma_max(B, tol);
}

long SpectralScheme::total_dim() const {
  long d = 0;
  for (const MergedSpace& sp : spaces) d += sp.dim;
  return d;
}

SpectralScheme build_spectral_scheme(const SymplecticMatrix& A, long N, i64 r,
                                     const Limits& lim, const Tolerances& tol,
                                     PropagatorCache* cache) {
  FactorPlan plan = plan_factors(A, N, r, lim);
  SpectralScheme S;
  S.N = N;
  S.g = A.g;
  S.r = r;
  S.A = A;

  // Full-space index tables; the full dimension is never materialized as a
  // dense operator, so it is bounded separately from lim.dense_dim.
  Limits loose = lim;
  loose.dense_dim = std::max<long>(lim.dense_dim, 1L << 22);
  Lattice Lfull = Lattice::make(N, A.g, loose);

  for (const LeafSpec& leaf : plan.leaves) {
    SpectralLeaf sl;
    sl.spec = leaf;
    sl.A_sub = restrict_to_planes(A, leaf.planes);

    std::shared_ptr<const Propagator> prop;
    std::tuple<u64, long, i64> key{imat_fingerprint(sl.A_sub.A), leaf.modulus, leaf.twist};
    if (cache) {
      auto it = cache->memo.find(key);
      if (it != cache->memo.end()) prop = it->second;
    }
    if (!prop) {
      auto built = std::make_shared<Propagator>(
          solve_propagator(sl.A_sub, leaf.modulus, leaf.twist, lim, tol));
      quantum_period(*built, 0, lim, tol);
      eigen_decompose(*built, lim, tol);
      prop = built;
      if (cache) cache->memo.emplace(key, prop);
    }
    sl.P = prop;

    const int h = int(leaf.planes.size());
    Lattice Lleaf = Lattice::make(leaf.modulus, h, lim);
    sl.full_to_leaf.resize(std::size_t(Lfull.D));
    long c[8], cl[8];
    for (long Q = 0; Q < Lfull.D; ++Q) {
      Lfull.decode(Q, c);
      for (int k = 0; k < h; ++k) cl[k] = c[leaf.planes[std::size_t(k)]] % leaf.modulus;
      sl.full_to_leaf[std::size_t(Q)] = Lleaf.encode(cl);
    }
    long off = 0;
    for (const EigenSpace& es : prop->eigen) {
      sl.offsets.push_back(off);
      off += es.dim();
    }
    S.leaves.push_back(std::move(sl));
  }

  S.L = 1;
  for (const SpectralLeaf& sl : S.leaves) S.L = lcm_u64(S.L, sl.P->period);

  // Cross product of leaf eigenspaces, grouped by the exact integer label.
  std::map<long, MergedSpace> by_label;
  std::vector<std::size_t> idx(S.leaves.size(), 0);
  while (true) {
    long label = 0;
    Cx theta(1, 0);
    long dim = 1;
    MergedTuple tup;
    for (std::size_t f = 0; f < S.leaves.size(); ++f) {
      const Propagator& P = *S.leaves[f].P;
      const EigenSpace& es = P.eigen[idx[f]];
      label = long((u64(label) + u64(es.m) * (S.L / P.period)) % S.L);
      theta *= es.theta;
      dim *= es.dim();
      tup.part.push_back(int(idx[f]));
    }
    tup.dim = dim;
    MergedSpace& sp = by_label[label];
    if (sp.tuples.empty()) {
      sp.label = label;
      sp.theta = theta;
    }
    tup.offset = sp.dim;
    sp.dim += dim;
    sp.tuples.push_back(std::move(tup));

    std::size_t f = 0;
    while (f < S.leaves.size() && ++idx[f] == S.leaves[f].P->eigen.size()) idx[f++] = 0;
    if (f == S.leaves.size()) break;
  }
  for (auto& [label, sp] : by_label) S.spaces.push_back(std::move(sp));
  if (S.total_dim() != Lfull.D)
    throw property_failure("build_spectral_scheme: merged dimensions do not sum to N^g");
  return S;
}

std::vector<Mat> leaf_mode_blocks(const SpectralScheme& S, const FrequencyVector& n,
                                  const Limits& lim) {
  std::vector<Mat> out;
  for (const SpectralLeaf& sl : S.leaves) {
    FrequencyVector nf = restrict_frequency(n, S.g, sl.spec.planes);
    TranslationOp T = make_translation(sl.spec.modulus, int(sl.spec.planes.size()),
                                       sl.spec.twist, nf, lim);
    const Propagator& P = *sl.P;
    Mat V(P.D, P.D);
    long off = 0;
    for (const EigenSpace& es : P.eigen) {
      V.block(0, off, P.D, es.dim()) = es.basis;
      off += es.dim();
    }
    Mat W = V;
    left_mul_inplace(T, W);
    out.push_back(V.adjoint() * W);
  }
  return out;
}

Mat merged_block(const SpectralScheme& S, const std::vector<std::vector<Mat>>& mode_blocks,
                 const std::vector<Cx>& coeffs, std::size_t dst, std::size_t src) {
  const MergedSpace& sd = S.spaces[dst];
  const MergedSpace& ss = S.spaces[src];
  Mat B = Mat::Zero(sd.dim, ss.dim);
  const std::size_t F = S.leaves.size();
  for (const MergedTuple& td : sd.tuples)
    for (const MergedTuple& ts : ss.tuples) {
      Mat acc = Mat::Zero(td.dim, ts.dim);
      for (std::size_t m = 0; m < coeffs.size(); ++m) {
        Mat piece = Mat::Identity(1, 1);
        for (std::size_t f = 0; f < F; ++f) {
          const SpectralLeaf& sl = S.leaves[f];
          const Propagator& P = *sl.P;
          long rd = sl.offsets[std::size_t(td.part[f])];
          long cs = sl.offsets[std::size_t(ts.part[f])];
          long nd = P.eigen[std::size_t(td.part[f])].dim();
          long ns = P.eigen[std::size_t(ts.part[f])].dim();
          piece = kron(piece, Mat(mode_blocks[m][f].block(rd, cs, nd, ns)));
        }
        acc += coeffs[m] * piece;
      }
      B.block(td.offset, ts.offset, td.dim, ts.dim) = acc;
    }
  return B;
}

namespace {

DeltaResult delta_dense_path(const SymplecticMatrix& A, long N, const ObservableSpec& f, i64 r,
                             bool subtract, const Limits& lim, const Tolerances& tol) {
  Propagator P = solve_propagator(A, N, r, lim, tol);
  quantum_period(P, 0, lim, tol);
  eigen_decompose(P, lim, tol);
  DenseOperator Op = op_assemble(N, A.g, r, f, lim);
  Cx f0 = f.mean();

  DeltaResult res;
  res.quantum_period = P.period;
  res.spaces = long(P.eigen.size());
  res.used_tensor = false;
  for (const EigenSpace& Ea : P.eigen) {
    Mat W = Op.M * Ea.basis;
    for (const EigenSpace& Eb : P.eigen) {
      Mat B = Eb.basis.adjoint() * W;
      double raw = sigma_max(B, tol);
      res.max_element = std::max(res.max_element, raw);
      double val = raw;
      if (subtract && Ea.m == Eb.m && std::abs(f0) > 0) {
        Mat B2 = B - f0 * Mat::Identity(B.rows(), B.cols());
        val = sigma_max(B2, tol);
      }
      res.delta = std::max(res.delta, val);
    }
  }
  return res;
}

DeltaResult delta_tensor_path(const SymplecticMatrix& A, long N, const ObservableSpec& f, i64 r,
                              bool subtract, const Limits& lim, const Tolerances& tol,
                              PropagatorCache* cache) {
  SpectralScheme S = build_spectral_scheme(A, N, r, lim, tol, cache);
  std::vector<std::vector<Mat>> blocks;
  std::vector<Cx> coeffs;
  for (const auto& [n, c] : f.modes) {
    blocks.push_back(leaf_mode_blocks(S, n, lim));
    coeffs.push_back(c);
  }
  Cx f0 = f.mean();

  DeltaResult res;
  res.quantum_period = S.L;
  res.spaces = long(S.spaces.size());
  res.used_tensor = true;
  for (std::size_t a = 0; a < S.spaces.size(); ++a)
    for (std::size_t b = 0; b < S.spaces.size(); ++b) {
      Mat B = merged_block(S, blocks, coeffs, b, a);
      double raw = sigma_max(B, tol);
      res.max_element = std::max(res.max_element, raw);
      double val = raw;
      if (subtract && a == b && std::abs(f0) > 0) {
        Mat B2 = B - f0 * Mat::Identity(B.rows(), B.cols());
        val = sigma_max(B2, tol);
      }
      res.delta = std::max(res.delta, val);
    }
  return res;
}

DeltaResult delta_impl(const SymplecticMatrix& A, long N, const ObservableSpec& f, i64 r,
                       bool subtract, DeltaMethod method, const Limits& lim,
                       const Tolerances& tol, PropagatorCache* cache) {
  if (method == DeltaMethod::automatic) {
    FactorPlan plan = plan_factors(A, N, r, lim);
    method = plan.leaves.size() > 1 ? DeltaMethod::tensor : DeltaMethod::dense;
  }
  if (method == DeltaMethod::tensor)
    return delta_tensor_path(A, N, f, r, subtract, lim, tol, cache);
  return delta_dense_path(A, N, f, r, subtract, lim, tol);
}

} // namespace

DeltaResult delta_A(const SymplecticMatrix& A, long N, const ObservableSpec& f, i64 r,
                    DeltaMethod method, const Limits& lim, const Tolerances& tol,
                    PropagatorCache* cache) {
  return delta_impl(A, N, f, r, true, method, lim, tol, cache);
}

DeltaResult max_translation_element(const SymplecticMatrix& A, long N, const FrequencyVector& n,
                                    i64 r, DeltaMethod method, const Limits& lim,
                                    const Tolerances& tol, PropagatorCache* cache) {
  ObservableSpec f = make_observable({{n, Cx(1, 0)}});
  return delta_impl(A, N, f, r, false, method, lim, tol, cache);
}

bool coprime_period_products_injective(const Propagator& P1, const Propagator& P2,
                                       double tol_sep) {
  if (P1.period == 0 || P2.period == 0)
    throw invalid_input("coprime_period_products_injective: periods unknown");
  if (std::gcd(P1.period, P2.period) != 1)
    throw invalid_input("coprime_period_products_injective: periods are not coprime");
  std::vector<Cx> prods;
  for (const EigenSpace& a : P1.eigen)
    for (const EigenSpace& b : P2.eigen) prods.push_back(a.theta * b.theta);
  for (std::size_t i = 0; i < prods.size(); ++i)
    for (std::size_t j = i + 1; j < prods.size(); ++j)
      if (std::abs(prods[i] - prods[j]) < tol_sep) return false;
  return true;
}

} // namespace qcat
