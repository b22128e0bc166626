#include "qcat/hilbert.hpp"

#include <cmath>
#include <numeric>

namespace qcat {

Lattice Lattice::make(long N, int g, const Limits& lim) {
  if (N < 1) throw invalid_input("Lattice: N must be >= 1");
  if (g < 1 || g > 8) throw invalid_input("Lattice: g out of range");
  Lattice L;
  L.N = N;
  L.g = g;
  L.D = checked_pow_long(N, g, lim.dense_dim);
  return L;
}

void Lattice::decode(long idx, long* coords) const {
  for (int i = 0; i < g; ++i) {
    coords[i] = idx % N;
    idx /= N;
  }
}

long Lattice::encode(const long* coords) const {
  long idx = 0;
  for (int i = g - 1; i >= 0; --i) idx = idx * N + imod(coords[i], N);
  return idx;
}

long Lattice::shifted(long idx, const long* shift) const {
  long c[8];
  decode(idx, c);
  for (int i = 0; i < g; ++i) c[i] = imod(c[i] + shift[i], N);
  return encode(c);
}

PhaseTable::PhaseTable(long N) : two_n(2 * N), w(std::size_t(2 * N)) {
  const double step = M_PI / double(N);
  for (long t = 0; t < two_n; ++t) {
    double a = step * double(t);
    w[std::size_t(t)] = Cx(std::cos(a), std::sin(a));
  }
}

Cx inner(const StateVector& a, const StateVector& b) {
  if (a.N != b.N || a.g != b.g) throw invalid_input("inner: mismatched spaces");
  double scale = 1.0;
  for (int i = 0; i < a.g; ++i) scale /= double(a.N);
  return scale * b.v.dot(a.v);  // Eigen dot conjugates its object, so this is sum a conj(b)
}

double state_norm(const StateVector& a) {
  return std::sqrt(std::abs(inner(a, a)));
}

StateVector normalized_delta(long N, int g, const std::vector<long>& u, const Limits& lim) {
  Lattice L = Lattice::make(N, g, lim);
  if ((int)u.size() != g) throw invalid_input("normalized_delta: point has wrong length");
  StateVector s;
  s.N = N;
  s.g = g;
  s.v = Vec::Zero(L.D);
  long c[8];
  for (int i = 0; i < g; ++i) c[i] = imod(u[i], N);
  double amp = 1.0;
  for (int i = 0; i < g; ++i) amp *= std::sqrt(double(N));
  s.v[L.encode(c)] = amp;  // norm 1 under the N^{-g} pairing
  return s;
}

TranslationOp make_translation(long N, int g, i64 r, const FrequencyVector& n,
                               const Limits& lim) {
  Lattice L = Lattice::make(N, g, lim);
  if ((int)n.size() != 2 * g) throw invalid_input("make_translation: frequency has wrong length");
  if (std::gcd(std::abs(r), (i64)N) != 1)
    throw invalid_input("make_translation: r must be coprime to N");

  TranslationOp T;
  T.N = N;
  T.g = g;
  T.D = L.D;
  T.r = r;
  T.n = n;
  T.perm.resize(std::size_t(L.D));
  T.phase_exp.resize(std::size_t(L.D));
  T.phase.resize(std::size_t(L.D));

  const long two_n = 2 * N;
  std::vector<i64> n1(g), n2(g);
  for (int i = 0; i < g; ++i) {
    n1[i] = imod(n[i], two_n);
    n2[i] = imod(n[std::size_t(g + i)], two_n);
  }
  i64 rr = imod(r, two_n);
  i64 base = 0;  // r n1.n2 mod 2N
  for (int i = 0; i < g; ++i) base = imod(base + rr * ((n1[i] * n2[i]) % two_n), two_n);

  PhaseTable roots(N);
  long c[8];
  std::vector<long> shift(g);
  for (int i = 0; i < g; ++i) shift[i] = long(imod(n1[i], N));
  for (long Q = 0; Q < L.D; ++Q) {
    L.decode(Q, c);
    i64 t = base;
    for (int i = 0; i < g; ++i) t = imod(t + 2 * rr * ((n2[i] * c[i]) % two_n), two_n);
    T.perm[std::size_t(Q)] = L.shifted(Q, shift.data());
    T.phase_exp[std::size_t(Q)] = long(t);
    T.phase[std::size_t(Q)] = roots(t);
  }
  return T;
}

StateVector translation_apply(const TranslationOp& T, const StateVector& phi) {
  if (phi.N != T.N || phi.g != T.g) throw invalid_input("translation_apply: mismatched spaces");
  StateVector out;
  out.N = T.N;
  out.g = T.g;
  out.v.resize(T.D);
  for (long Q = 0; Q < T.D; ++Q)
    out.v[Q] = T.phase[std::size_t(Q)] * phi.v[T.perm[std::size_t(Q)]];
  return out;
}

StateVector translation_apply(long N, int g, i64 r, const FrequencyVector& n,
                              const StateVector& phi, const Limits& lim) {
  return translation_apply(make_translation(N, g, r, n, lim), phi);
}

DenseOperator to_dense(const TranslationOp& T) {
  DenseOperator D;
  D.N = T.N;
  D.g = T.g;
  D.tag = OpTag::translation;
  D.M = Mat::Zero(T.D, T.D);
  for (long Q = 0; Q < T.D; ++Q)
    D.M(Q, T.perm[std::size_t(Q)]) = T.phase[std::size_t(Q)];
  return D;
}

Cx translation_trace(const TranslationOp& T) {
  Cx tr(0, 0);
  for (long Q = 0; Q < T.D; ++Q)
    if (T.perm[std::size_t(Q)] == Q) tr += T.phase[std::size_t(Q)];
  return tr;
}

void left_mul_inplace(const TranslationOp& T, Mat& M) {
  if (M.rows() != T.D) throw invalid_input("left_mul_inplace: dimension mismatch");
  Mat out(M.rows(), M.cols());
  for (long Q = 0; Q < T.D; ++Q)
    out.row(Q) = T.phase[std::size_t(Q)] * M.row(T.perm[std::size_t(Q)]);
  M.swap(out);
}

void right_mul_inplace(Mat& M, const TranslationOp& T) {
  if (M.cols() != T.D) throw invalid_input("right_mul_inplace: dimension mismatch");
  Mat out(M.rows(), M.cols());
  for (long Q = 0; Q < T.D; ++Q)
    out.col(T.perm[std::size_t(Q)]) = T.phase[std::size_t(Q)] * M.col(Q);
  M.swap(out);
}

void left_mul_adjoint_inplace(const TranslationOp& T, Mat& M) {
  if (M.rows() != T.D) throw invalid_input("left_mul_adjoint_inplace: dimension mismatch");
  Mat out(M.rows(), M.cols());
  for (long Q = 0; Q < T.D; ++Q)
    out.row(T.perm[std::size_t(Q)]) = std::conj(T.phase[std::size_t(Q)]) * M.row(Q);
  M.swap(out);
}

void right_mul_adjoint_inplace(Mat& M, const TranslationOp& T) {
  if (M.cols() != T.D) throw invalid_input("right_mul_adjoint_inplace: dimension mismatch");
  Mat out(M.rows(), M.cols());
  for (long Q = 0; Q < T.D; ++Q)
    out.col(Q) = std::conj(T.phase[std::size_t(Q)]) * M.col(T.perm[std::size_t(Q)]);
  M.swap(out);
}

Cx ObservableSpec::mean() const {
  for (const auto& [n, c] : modes) {
    bool zero = true;
    for (i64 x : n)
      if (x != 0) zero = false;
    if (zero) return c;
  }
  return Cx(0, 0);
}

bool ObservableSpec::is_real() const {
  for (const auto& [n, c] : modes) {
    FrequencyVector neg(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) neg[i] = -n[i];
    Cx want = std::conj(c);
    bool found = false;
    for (const auto& [m, d] : modes)
      if (m == neg) {
        found = std::abs(d - want) <= 1e-14 * (1.0 + std::abs(d));
        break;
      }
    if (!found) return false;
  }
  return true;
}

ObservableSpec make_observable(std::vector<std::pair<FrequencyVector, Cx>> modes) {
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i].first == modes[j].first)
        throw invalid_input("make_observable: duplicate frequency");
  ObservableSpec f;
  f.modes = std::move(modes);
  return f;
}

DenseOperator op_assemble(long N, int g, i64 r, const ObservableSpec& f, const Limits& lim) {
  Lattice L = Lattice::make(N, g, lim);
  DenseOperator out;
  out.N = N;
  out.g = g;
  out.tag = OpTag::observable;
  out.M = Mat::Zero(L.D, L.D);
  for (const auto& [n, c] : f.modes) {
    TranslationOp T = make_translation(N, g, r, n, lim);
    for (long Q = 0; Q < L.D; ++Q)
      out.M(Q, T.perm[std::size_t(Q)]) += c * T.phase[std::size_t(Q)];
  }
  if (f.is_real()) {
    double dev = (out.M - out.M.adjoint()).cwiseAbs().maxCoeff();
    if (dev > Tolerances{}.algebra)
      throw property_failure("op_assemble: real symbol did not produce a self-adjoint operator");
  }
  return out;
}

} // namespace qcat
