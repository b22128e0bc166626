#include "qcat/propagator.hpp"

#include "qcat/orders.hpp"
#include "qcat/primes.hpp"

#include <cmath>
#include <numeric>

namespace qcat {

namespace {

Mat mat_pow(const Mat& U, u64 e) {
  Mat acc = Mat::Identity(U.rows(), U.cols());
  Mat base = U;
  while (e) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

// Row i of A reduced mod m, as machine integers.
std::vector<i64> row_mod(const IMat& A, int i, long m) {
  std::vector<i64> out(std::size_t(A.cols));
  for (int j = 0; j < A.cols; ++j)
    out[std::size_t(j)] = i64(mpz_fdiv_ui(A.at(i, j).get_mpz_t(), (unsigned long)m));
  return out;
}

std::vector<i64> vec_times_mat_mod(const std::vector<i64>& v, const IMat& A, long m) {
  std::vector<i64> out(std::size_t(A.cols), 0);
  for (int j = 0; j < A.cols; ++j) {
    i64 acc = 0;
    for (int i = 0; i < A.rows; ++i) {
      i64 aij = i64(mpz_fdiv_ui(A.at(i, j).get_mpz_t(), (unsigned long)m));
      acc = imod(acc + imod(v[std::size_t(i)], m) * aij, m);
    }
    out[std::size_t(j)] = acc;
  }
  return out;
}

double egorov_residual_impl(const Mat& U, const SymplecticMatrix& A, long N, i64 r,
                            const FrequencyVector& n, const Limits& lim) {
  const long D = U.rows();
  TranslationOp T1 = make_translation(N, A.g, r, n, lim);
  std::vector<i64> nA = apply_row(n, A.A);
  TranslationOp T2 = make_translation(N, A.g, r, nA, lim);
  Mat W = U;
  left_mul_inplace(T1, W);      // T(n) U
  Mat E = U.adjoint() * W;      // U* T(n) U
  for (long Q = 0; Q < D; ++Q)
    E(Q, T2.perm[std::size_t(Q)]) -= T2.phase[std::size_t(Q)];
  return E.norm() / std::sqrt(double(D));
}

void fix_global_phase(Mat& U) {
  const long D = U.rows();
  for (long i = 0; i < D; ++i)
    for (long j = 0; j < D; ++j) {
      Cx u = U(i, j);
      if (std::abs(u) > 1e-9) {
        U *= std::conj(u) / std::abs(u);
        return;
      }
    }
  throw property_failure("propagator: zero matrix has no phase convention");
}

// Shared tail: proportionality check, scaling, phase fix, Egorov check.
void unitarize_and_verify(Propagator& P, Mat X, const Limits& lim, const Tolerances& tol) {
  const long D = P.D;
  double fro2 = X.squaredNorm();
  if (fro2 <= 0) throw property_failure("propagator: intertwiner vanished");
  double scale = fro2 / double(D);
  Mat gram = X.adjoint() * X;
  double dev = (gram - scale * Mat::Identity(D, D)).norm();
  if (dev > tol.proportional * scale * std::sqrt(double(D)))
    throw property_failure("propagator: X*X not proportional to the identity");
  X *= std::sqrt(double(D) / fro2);
  fix_global_phase(X);
  P.U = std::move(X);
  P.unitarity_residual = (gram / scale - Mat::Identity(D, D)).norm();

  double worst = 0;
  for (int i = 0; i < 2 * P.g; ++i) {
    FrequencyVector e(std::size_t(2 * P.g), 0);
    e[std::size_t(i)] = 1;
    worst = std::max(worst, egorov_residual_impl(P.U, P.A, P.N, P.r, e, lim));
  }
  P.egorov_generator_residual = worst;
  if (worst > tol.egorov)
    throw property_failure("propagator: Egorov residual " + std::to_string(worst) +
                           " above tolerance");
}

void check_preconditions(const SymplecticMatrix& A, long N, i64 r) {
  if (N < 1) throw invalid_input("solve_propagator: N must be positive");
  if (!A.parity) throw invalid_input("solve_propagator: A must be congruent to I mod 2");
  if (std::gcd(std::abs(r), (i64)N) != 1)
    throw invalid_input("solve_propagator: r must be coprime to N");
}

} // namespace

Propagator solve_propagator(const SymplecticMatrix& A, long N, i64 r, const Limits& lim,
                            const Tolerances& tol) {
  check_preconditions(A, N, r);
  const int g = A.g;
  Lattice L = Lattice::make(N, g, lim);
  const long D = L.D;
  const long two_n = 2 * N;
  const i64 rr = imod(r, two_n);
  const int G = 2 * g;

  // Constraint per generator i: with e = e_i, m = e_i A,
  //   phase_e(R) X[R+a, S+b] = X[R, S] phase_m(S),
  // where a, b are the position halves of e, m. Entry (R,S) therefore forces
  // entry (R+a, S+b) with exponent shift t_m(S) - t_e(R) mod 2N.
  std::vector<std::vector<int32_t>> fR(G), bR(G), fS(G), bS(G), te(G), tm(G);
  {
    long c[8];
    for (int i = 0; i < G; ++i) {
      fR[i].resize(std::size_t(D));
      bR[i].resize(std::size_t(D));
      fS[i].resize(std::size_t(D));
      bS[i].resize(std::size_t(D));
      te[i].assign(std::size_t(D), 0);
      tm[i].resize(std::size_t(D));

      long aShift[8] = {0, 0, 0, 0, 0, 0, 0, 0};
      if (i < g) aShift[i] = 1;
      std::vector<i64> m = row_mod(A.A, i, two_n);
      long bShift[8];
      i64 bd = 0;
      for (int j = 0; j < g; ++j) {
        bShift[j] = long(imod(m[std::size_t(j)], N));
        bd = imod(bd + (m[std::size_t(j)] % two_n) * (m[std::size_t(g + j)] % two_n), two_n);
      }
      i64 base = imod(rr * bd, two_n);

      long negA[8], negB[8];
      for (int j = 0; j < g; ++j) {
        negA[j] = imod(-aShift[j], N);
        negB[j] = imod(-bShift[j], N);
      }
      for (long R = 0; R < D; ++R) {
        fR[i][std::size_t(R)] = int32_t(L.shifted(R, aShift));
        bR[i][std::size_t(R)] = int32_t(L.shifted(R, negA));
        if (i >= g) {
          L.decode(R, c);
          te[i][std::size_t(R)] = int32_t(imod(2 * rr * c[i - g], two_n));
        }
      }
      for (long S = 0; S < D; ++S) {
        fS[i][std::size_t(S)] = int32_t(L.shifted(S, bShift));
        bS[i][std::size_t(S)] = int32_t(L.shifted(S, negB));
        L.decode(S, c);
        i64 t = base;
        for (int j = 0; j < g; ++j)
          t = imod(t + 2 * rr * ((m[std::size_t(g + j)] * c[j]) % two_n), two_n);
        tm[i][std::size_t(S)] = int32_t(t);
      }
    }
  }

  const std::size_t nodes = std::size_t(D) * std::size_t(D);
  std::vector<int32_t> exps(nodes, 0);
  std::vector<int32_t> comp(nodes, -1);
  std::vector<std::size_t> stack;
  int32_t n_comp = 0;
  int consistent_count = 0;
  int32_t chosen = -1;
  long chosen_size = 0;

  for (std::size_t seed = 0; seed < nodes; ++seed) {
    if (comp[seed] >= 0) continue;
    const int32_t cid = n_comp++;
    bool consistent = true;
    long size = 0;
    comp[seed] = cid;
    exps[seed] = 0;
    stack.push_back(seed);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      ++size;
      const long R = long(u / std::size_t(D));
      const long S = long(u % std::size_t(D));
      const i64 eu = exps[u];
      for (int i = 0; i < G; ++i) {
        {  // forward
          std::size_t v = std::size_t(fR[i][std::size_t(R)]) * std::size_t(D) +
                          std::size_t(fS[i][std::size_t(S)]);
          i64 w = imod(i64(tm[i][std::size_t(S)]) - i64(te[i][std::size_t(R)]), two_n);
          i64 want = imod(eu + w, two_n);
          if (comp[v] < 0) {
            comp[v] = cid;
            exps[v] = int32_t(want);
            stack.push_back(v);
          } else if (exps[v] != want) {
            consistent = false;
          }
        }
        {  // backward
          long Rp = bR[i][std::size_t(R)];
          long Sp = bS[i][std::size_t(S)];
          std::size_t v = std::size_t(Rp) * std::size_t(D) + std::size_t(Sp);
          i64 w = imod(i64(tm[i][std::size_t(Sp)]) - i64(te[i][std::size_t(Rp)]), two_n);
          i64 want = imod(eu - w, two_n);
          if (comp[v] < 0) {
            comp[v] = cid;
            exps[v] = int32_t(want);
            stack.push_back(v);
          } else if (exps[v] != want) {
            consistent = false;
          }
        }
      }
    }
    if (consistent) {
      ++consistent_count;
      if (chosen < 0) {
        chosen = cid;
        chosen_size = size;
      }
    }
  }

  if (consistent_count != 1)
    throw property_failure("solve_propagator: intertwiner space dimension " +
                           std::to_string(consistent_count) + ", expected 1");

  Propagator P;
  P.A = A;
  P.N = N;
  P.g = g;
  P.D = D;
  P.r = r;
  P.intertwiner_dim = consistent_count;

  PhaseTable roots(N);
  Mat X = Mat::Zero(D, D);
  for (std::size_t u = 0; u < nodes; ++u)
    if (comp[u] == chosen)
      X(long(u / std::size_t(D)), long(u % std::size_t(D))) = roots(exps[u]);
  (void)chosen_size;

  unitarize_and_verify(P, std::move(X), lim, tol);
  return P;
}

Mat averaged_intertwiner(const SymplecticMatrix& A, long N, i64 r, u64 seed_index,
                         const Limits& lim) {
  check_preconditions(A, N, r);
  const int g = A.g;
  Lattice L = Lattice::make(N, g, lim);
  const long D = L.D;

  Mat X;
  if (seed_index == 0) {
    X = Mat::Identity(D, D);
  } else {
    SplitMix64 rng(0x71c3a5b6d2e90f4bull ^ seed_index);
    X.resize(D, D);
    for (long i = 0; i < D; ++i)
      for (long j = 0; j < D; ++j)
        X(i, j) = Cx(2 * rng.unit() - 1, 2 * rng.unit() - 1);
  }

  Mat Y = Mat::Zero(D, D);
  const int G = 2 * g;
  FrequencyVector n(std::size_t(G), 0);
  double terms = 0;
  while (true) {
    std::vector<i64> nA = apply_row(n, A.A);
    TranslationOp Ta = make_translation(N, g, r, nA, lim);
    TranslationOp Tn = make_translation(N, g, r, n, lim);
    Mat M = X;
    left_mul_inplace(Ta, M);
    right_mul_adjoint_inplace(M, Tn);
    Y += M;
    terms += 1;
    int k = 0;
    while (k < G && ++n[std::size_t(k)] == N) n[std::size_t(k++)] = 0;
    if (k == G) break;
  }
  return Y / terms;
}

Propagator solve_propagator_averaged(const SymplecticMatrix& A, long N, i64 r,
                                     const Limits& lim, const Tolerances& tol) {
  check_preconditions(A, N, r);
  Lattice L = Lattice::make(N, A.g, lim);
  Mat Y;
  bool found = false;
  for (u64 seed = 0; seed < 8 && !found; ++seed) {
    Y = averaged_intertwiner(A, N, r, seed, lim);
    found = Y.norm() > 1e-8 * std::sqrt(double(L.D));
  }
  if (!found) throw property_failure("solve_propagator_averaged: projection vanished for all seeds");

  // The averaging projector fixes W with T(mA) W = W T(m); the propagator of
  // the postcondition is its adjoint. Try both orientations, keep the one
  // satisfying Egorov.
  Propagator best;
  double best_res = -1;
  for (int orient = 0; orient < 2; ++orient) {
    Propagator P;
    P.A = A;
    P.N = N;
    P.g = A.g;
    P.D = L.D;
    P.r = r;
    P.intertwiner_dim = 1;
    try {
      unitarize_and_verify(P, orient == 0 ? Mat(Y.adjoint()) : Y, lim, tol);
    } catch (const property_failure&) {
      continue;
    }
    if (best_res < 0 || P.egorov_generator_residual < best_res) {
      best_res = P.egorov_generator_residual;
      best = std::move(P);
    }
  }
  if (best_res < 0)
    throw property_failure("solve_propagator_averaged: neither orientation satisfies Egorov");
  return best;
}

void quantum_period(Propagator& P, u64 cap, const Limits& lim, const Tolerances& tol) {
  if (P.U.rows() == 0) throw invalid_input("quantum_period: propagator not solved");
  if (P.ord_2N == 0) P.ord_2N = matrix_order(P.A.A, u64(2 * P.N), lim).order;
  if (cap == 0) cap = 4 * P.ord_2N;

  const long D = P.D;
  std::vector<u64> cand = divisors_of(factorize(P.ord_2N));
  bool skipped_above_cap = false;
  for (u64 t : cand) {
    if (t > cap) {
      skipped_above_cap = true;
      continue;
    }
    Mat M = mat_pow(P.U, t);
    Cx z = M.trace() / double(D);
    if (std::abs(z) < 0.5) continue;
    double dev = (M - z * Mat::Identity(D, D)).cwiseAbs().maxCoeff();
    if (dev <= tol.scalar_detect) {
      P.period = t;
      P.zeta = z / std::abs(z);
      return;
    }
  }
  if (skipped_above_cap)
    throw resource_guard("quantum_period: no scalar power within cap " + std::to_string(cap) +
                         "; raise the cap (period divides ord(A,2N) = " +
                         std::to_string(P.ord_2N) + ")");
  throw property_failure("quantum_period: U^ord(A,2N) is not scalar");
}

void eigen_decompose(Propagator& P, const Limits& lim, const Tolerances& tol) {
  if (P.period == 0) throw invalid_input("eigen_decompose: run quantum_period first");
  const long D = P.D;
  const long tau = long(P.period);
  P.eigen.clear();

  const double base_arg = std::arg(P.zeta) / double(tau);
  std::vector<Cx> thetas(static_cast<std::size_t>(tau));
  for (long m = 0; m < tau; ++m)
    thetas[std::size_t(m)] = std::polar(1.0, base_arg + 2.0 * M_PI * double(m) / double(tau));

  const std::size_t per = sizeof(Cx) * std::size_t(D) * std::size_t(D);
  long chunk = long(std::max<std::size_t>(1, P.period > 0 ? lim.eig_budget_bytes / per : 1));
  chunk = std::max(1L, chunk - 3);  // room for U, W and the completeness sum
  chunk = std::min(chunk, tau);

  Mat sumP = Mat::Zero(D, D);
  long total_dim = 0;
  for (long m0 = 0; m0 < tau; m0 += chunk) {
    const long mc = std::min(chunk, tau - m0);
    std::vector<Mat> proj(std::size_t(mc), Mat::Zero(D, D));
    std::vector<Cx> coef(std::size_t(mc), Cx(1, 0));
    Mat W = Mat::Identity(D, D);
    for (long j = 0; j < tau; ++j) {
      for (long k = 0; k < mc; ++k) {
        proj[std::size_t(k)] += coef[std::size_t(k)] * W;
        coef[std::size_t(k)] *= std::conj(thetas[std::size_t(m0 + k)]);
      }
      if (j + 1 < tau) W = W * P.U;
    }
    for (long k = 0; k < mc; ++k) {
      Mat& Pm = proj[std::size_t(k)];
      Pm /= double(tau);
      sumP += Pm;
      long dm = std::lround(Pm.trace().real());
      if (dm == 0) continue;
      Eigen::ColPivHouseholderQR<Mat> qr(Pm);
      qr.setThreshold(1e-7);
      if (qr.rank() != dm)
        throw property_failure("eigen_decompose: projector rank " + std::to_string(qr.rank()) +
                               " disagrees with trace " + std::to_string(dm));
      EigenSpace es;
      es.m = int(m0 + k);
      es.theta = thetas[std::size_t(m0 + k)];
      es.basis = qr.householderQ() * Mat::Identity(D, dm);
      total_dim += dm;
      P.eigen.push_back(std::move(es));
    }
  }

  double completeness = (sumP - Mat::Identity(D, D)).norm();
  if (completeness > tol.spectral_sum)
    throw property_failure("eigen_decompose: completeness residual " +
                           std::to_string(completeness));
  if (total_dim != D)
    throw property_failure("eigen_decompose: eigenspace dimensions sum to " +
                           std::to_string(total_dim) + ", expected " + std::to_string(D));
}

double egorov_residual(const Propagator& P, const FrequencyVector& n) {
  return egorov_residual_impl(P.U, P.A, P.N, P.r, n, Limits{});
}

double power_egorov_check(const SymplecticMatrix& A, long N, i64 r, u64 d, const Limits& lim,
                          const Tolerances& tol) {
  if (d < 1) throw invalid_input("power_egorov_check: d must be >= 1");
  Propagator P = solve_propagator(A, N, r, lim, tol);
  quantum_period(P, 0, lim, tol);
  eigen_decompose(P, lim, tol);

  const long D = P.D;
  const long two_n = 2 * N;
  Mat Ud = mat_pow(P.U, d);
  ModMat Ad = pow(ModMat::from(A.A, u64(two_n)), d);

  double worst = 0;
  for (int i = 0; i < 2 * A.g; ++i) {
    FrequencyVector e(std::size_t(2 * A.g), 0);
    e[std::size_t(i)] = 1;
    FrequencyVector eAd(std::size_t(2 * A.g));
    for (int j = 0; j < 2 * A.g; ++j) eAd[std::size_t(j)] = i64(Ad.at(i, j));
    TranslationOp T1 = make_translation(N, A.g, r, e, lim);
    TranslationOp T2 = make_translation(N, A.g, r, eAd, lim);
    Mat W = Ud;
    left_mul_inplace(T1, W);
    Mat E = Ud.adjoint() * W;
    for (long Q = 0; Q < D; ++Q)
      E(Q, T2.perm[std::size_t(Q)]) -= T2.phase[std::size_t(Q)];
    worst = std::max(worst, E.norm() / std::sqrt(double(D)));
  }
  if (worst > tol.power_egorov)
    throw property_failure("power_egorov_check: residual " + std::to_string(worst));

  for (const EigenSpace& es : P.eigen) {
    Cx want = std::polar(1.0, std::fmod(double(d) * std::arg(es.theta), 2.0 * M_PI));
    Mat small = es.basis.adjoint() * (Ud * es.basis);
    Cx got = small.trace() / double(es.dim());
    if (std::abs(got - want) > tol.eigen_label * 10 + 1e-10 * double(d))
      throw property_failure("power_egorov_check: eigenvalue of U^d deviates from theta^d");
  }
  return worst;
}

DenseOperator twisted_average(const SymplecticMatrix& A, long N, i64 r,
                              const FrequencyVector& n, Cx mu, const Limits& lim) {
  if (std::abs(std::abs(mu) - 1.0) > 1e-12)
    throw invalid_input("twisted_average: mu must be unimodular");
  Lattice L = Lattice::make(N, A.g, lim);
  const long D = L.D;
  const long two_n = 2 * N;
  u64 tau = matrix_order(A.A, u64(N), lim).order;

  Mat acc = Mat::Zero(D, D);
  std::vector<i64> cur(n.begin(), n.end());
  Cx mup(1, 0);
  for (u64 i = 1; i <= tau; ++i) {
    cur = vec_times_mat_mod(cur, A.A, two_n);
    mup *= mu;
    TranslationOp T = make_translation(N, A.g, r, FrequencyVector(cur.begin(), cur.end()), lim);
    for (long Q = 0; Q < D; ++Q)
      acc(Q, T.perm[std::size_t(Q)]) += mup * T.phase[std::size_t(Q)];
  }
  acc /= double(tau);
  return DenseOperator{N, A.g, OpTag::generic, std::move(acc)};
}

} // namespace qcat
