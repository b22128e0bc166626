#include "qcat/intmat.hpp"

#include "qcat/modmath.hpp"

#include <algorithm>

namespace qcat {

IMat IMat::identity(int n) {
  IMat I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

IMat operator*(const IMat& A, const IMat& B) {
  if (A.cols != B.rows) throw invalid_input("IMat: shape mismatch in product");
  IMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const Int& aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

IMat operator+(const IMat& A, const IMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw invalid_input("IMat: shape mismatch in sum");
  IMat C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
  return C;
}

IMat operator-(const IMat& A, const IMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw invalid_input("IMat: shape mismatch in difference");
  IMat C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
  return C;
}

IMat transpose(const IMat& A) {
  IMat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

IMat pow_int(const IMat& A, unsigned long e) {
  if (A.rows != A.cols) throw invalid_input("pow_int: square matrix required");
  IMat R = IMat::identity(A.rows), B = A;
  while (e) {
    if (e & 1) R = R * B;
    if (e >>= 1) B = B * B;
  }
  return R;
}

IMat mod_reduce(const IMat& A, const Int& m) {
  IMat R = A;
  for (Int& v : R.a) {
    v %= m;
    if (v < 0) v += m;
  }
  return R;
}

bool is_identity_mod(const IMat& A, const Int& m) {
  if (A.rows != A.cols) return false;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      Int v = A.at(i, j) - (i == j ? 1 : 0);
      if (v % m != 0) return false;
    }
  return true;
}

Int trace(const IMat& A) {
  Int t = 0;
  for (int i = 0; i < A.rows; ++i) t += A.at(i, i);
  return t;
}

Int det_bareiss(IMat A) {
  if (A.rows != A.cols) throw invalid_input("det_bareiss: square matrix required");
  int n = A.rows;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (A.at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (A.at(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(A.at(k, j), A.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int v = A.at(i, j) * A.at(k, k) - A.at(i, k) * A.at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A.at(i, j) = v;
      }
    prev = A.at(k, k);
  }
  return sign > 0 ? A.at(n - 1, n - 1) : -A.at(n - 1, n - 1);
}

std::vector<std::vector<Rat>> rref_rational(std::vector<std::vector<Rat>> m, int* rank_out,
                                            std::vector<int>* pivot_cols) {
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  int r = 0;
  if (pivot_cols) pivot_cols->clear();
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    Rat inv = 1 / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  if (rank_out) *rank_out = r;
  return m;
}

int rank_rational(const IMat& A) {
  std::vector<std::vector<Rat>> m(A.rows, std::vector<Rat>(A.cols));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) m[i][j] = Rat(A.at(i, j));
  int r = 0;
  rref_rational(std::move(m), &r, nullptr);
  return r;
}

std::vector<std::vector<Int>> kernel_rows(const IMat& M) {
  // x * M = 0  <=>  M^T x^T = 0; eliminate on M^T.
  int n = M.rows;  // unknowns
  std::vector<std::vector<Rat>> m(M.cols, std::vector<Rat>(n));
  for (int i = 0; i < M.cols; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = Rat(M.at(j, i));
  int rank = 0;
  std::vector<int> piv;
  auto R = rref_rational(std::move(m), &rank, &piv);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<Int>> basis;
  for (int c = 0; c < n; ++c) {
    if (is_piv[c]) continue;
    std::vector<Rat> v(n, Rat(0));
    v[c] = 1;
    for (int r = 0; r < rank; ++r) v[piv[r]] = -R[r][c];
    // clear denominators, make primitive
    Int den = 1;
    for (auto& q : v) den = Int(lcm(den, q.get_den()));
    std::vector<Int> w(n);
    Int g = 0;
    for (int j = 0; j < n; ++j) {
      w[j] = Int(v[j] * den);
      g = gcd(g, w[j]);
    }
    if (g > 1)
      for (auto& x : w) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    basis.push_back(std::move(w));
  }
  return basis;
}

bool solve_left(const IMat& M, const std::vector<Rat>& b, std::vector<Rat>& x) {
  // x (1 x rows) * M (rows x cols) = b: transpose to M^T x^T = b^T, eliminate
  // on the augmented system.
  int n = M.rows, eqs = M.cols;
  if (int(b.size()) != eqs) throw invalid_input("solve_left: rhs size mismatch");
  std::vector<std::vector<Rat>> m(eqs, std::vector<Rat>(n + 1));
  for (int i = 0; i < eqs; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rat(M.at(j, i));
    m[i][n] = b[i];
  }
  int rank = 0;
  std::vector<int> piv;
  auto R = rref_rational(std::move(m), &rank, &piv);
  for (int r = 0; r < rank; ++r)
    if (piv[r] == n) return false;  // pivot in augmented column
  x.assign(n, Rat(0));
  for (int r = 0; r < rank; ++r) x[piv[r]] = R[r][n];
  return true;
}

ModMat ModMat::from(const IMat& A, u64 m) {
  if (A.rows != A.cols) throw invalid_input("ModMat: square matrix required");
  ModMat M(A.rows, m);
  Int mm(static_cast<unsigned long>(m));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      Int v = A.at(i, j) % mm;
      if (v < 0) v += mm;
      M.at(i, j) = v.get_ui();
    }
  return M;
}

ModMat ModMat::identity(int n, u64 m) {
  ModMat I(n, m);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1 % m;
  return I;
}

bool ModMat::is_identity() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (at(i, j) != (i == j ? 1 % mod : 0)) return false;
  return true;
}

ModMat mul(const ModMat& A, const ModMat& B) {
  ModMat C(A.n, A.mod);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      u128 s = 0;
      for (int k = 0; k < A.n; ++k) s += u128(A.at(i, k)) * B.at(k, j);
      C.at(i, j) = u64(s % A.mod);
    }
  return C;
}

ModMat pow(const ModMat& A, u64 e) {
  ModMat R = ModMat::identity(A.n, A.mod), B = A;
  while (e) {
    if (e & 1) R = mul(R, B);
    if (e >>= 1) B = mul(B, B);
  }
  return R;
}

namespace {
std::vector<std::vector<u64>> to_mod_p(const IMat& A, u64 p) {
  std::vector<std::vector<u64>> m(A.rows, std::vector<u64>(A.cols));
  Int pp(static_cast<unsigned long>(p));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      Int v = A.at(i, j) % pp;
      if (v < 0) v += pp;
      m[i][j] = v.get_ui();
    }
  return m;
}

// Gauss elimination mod p; returns rank, reduces m in place to RREF.
int rref_mod_p(std::vector<std::vector<u64>>& m, u64 p, std::vector<int>* piv_out) {
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  int r = 0;
  if (piv_out) piv_out->clear();
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] % p != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    u64 inv = powmod(m[r][c] % p, p - 2, p);
    for (int j = c; j < cols; ++j) m[r][j] = u64(u128(m[r][j]) * inv % p);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      u64 f = m[i][c] % p;
      if (!f) continue;
      for (int j = c; j < cols; ++j) {
        u64 sub = u64(u128(f) * m[r][j] % p);
        m[i][j] = (m[i][j] + p - sub) % p;
      }
    }
    if (piv_out) piv_out->push_back(c);
    ++r;
  }
  return r;
}
} // namespace

int rank_mod_p(const IMat& A, u64 p) {
  auto m = to_mod_p(A, p);
  return rref_mod_p(m, p, nullptr);
}

std::vector<std::vector<u64>> kernel_rows_mod_p(const IMat& M, u64 p) {
  int n = M.rows;
  auto Mt = to_mod_p(transpose(M), p);
  std::vector<int> piv;
  int rank = rref_mod_p(Mt, p, &piv);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<u64>> basis;
  for (int c = 0; c < n; ++c) {
    if (is_piv[c]) continue;
    std::vector<u64> v(n, 0);
    v[c] = 1;
    for (int r = 0; r < rank; ++r) v[piv[r]] = (p - Mt[r][c] % p) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace qcat
