#pragma once

// Exact integer / rational dense linear algebra on the small matrices this
// project needs (dimension <= a few dozen): arithmetic, Bareiss determinants
// and ranks, rational kernels and solves, and fast modular powering.
//
// Vectors act on the right throughout the project: v -> v*M.

#include "qcat/common.hpp"

#include <vector>

namespace qcat {

struct IMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}

  Int& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static IMat identity(int n);
  bool operator==(const IMat&) const = default;
};

IMat operator*(const IMat& A, const IMat& B);
IMat operator+(const IMat& A, const IMat& B);
IMat operator-(const IMat& A, const IMat& B);
IMat transpose(const IMat& A);
IMat pow_int(const IMat& A, unsigned long e);
IMat mod_reduce(const IMat& A, const Int& m);  // entries into [0, m)
bool is_identity_mod(const IMat& A, const Int& m);
Int trace(const IMat& A);

Int det_bareiss(IMat A);        // square input
int rank_rational(const IMat& A);

// Basis of {x : x * M = 0}, rows made integral and primitive.
std::vector<std::vector<Int>> kernel_rows(const IMat& M);

// Solve x * M = b over Q; empty optional if inconsistent.
// M may be rectangular; x has M.rows entries.
std::vector<std::vector<Rat>> rref_rational(std::vector<std::vector<Rat>> m, int* rank_out,
                                            std::vector<int>* pivot_cols);
bool solve_left(const IMat& M, const std::vector<Rat>& b, std::vector<Rat>& x);

// Modular matrices over u64 for order computations (modulus < 2^32).
struct ModMat {
  int n = 0;
  u64 mod = 0;
  std::vector<u64> a;

  ModMat() = default;
  ModMat(int n_, u64 m) : n(n_), mod(m), a(std::size_t(n_) * n_, 0) {}
  u64& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  u64 at(int i, int j) const { return a[std::size_t(i) * n + j]; }

  static ModMat from(const IMat& A, u64 m);
  static ModMat identity(int n, u64 m);
  bool is_identity() const;
};

ModMat mul(const ModMat& A, const ModMat& B);
ModMat pow(const ModMat& A, u64 e);

int rank_mod_p(const IMat& A, u64 p);
std::vector<std::vector<u64>> kernel_rows_mod_p(const IMat& M, u64 p);

} // namespace qcat
