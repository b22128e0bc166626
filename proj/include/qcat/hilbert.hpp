#pragma once

// The quantum state space H_N = L^2((Z/NZ)^g) with the scaled inner product
// <phi, psi> = N^{-g} sum_u phi(u) conj(psi(u)), translation operators as
// generalized permutations with exact 2N-th root phases, and observable
// assembly.
//
// Index convention: a point Q = (Q_0, ..., Q_{g-1}) in (Z/NZ)^g has linear
// index Q_0 + N Q_1 + N^2 Q_2 + ...

#include "qcat/common.hpp"
#include "qcat/sympl.hpp"

#include <Eigen/Dense>

namespace qcat {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct Lattice {
  long N = 0;
  int g = 0;
  long D = 0;  // N^g

  static Lattice make(long N, int g, const Limits& lim = {});
  void decode(long idx, long* coords) const;
  long encode(const long* coords) const;
  long shifted(long idx, const long* shift) const;  // coords + shift mod N
};

// Table of 2N-th roots of unity: root(t) = exp(pi i t / N).
struct PhaseTable {
  long two_n = 0;
  std::vector<Cx> w;
  explicit PhaseTable(long N);
  Cx operator()(i64 t) const { return w[std::size_t(imod(t, two_n))]; }
};

struct StateVector {
  long N = 0;
  int g = 0;
  Vec v;
};

Cx inner(const StateVector& a, const StateVector& b);  // linear in the first slot
double state_norm(const StateVector& a);
StateVector normalized_delta(long N, int g, const std::vector<long>& u, const Limits& lim = {});

enum class OpTag { translation, observable, propagator, projector, generic };

struct DenseOperator {
  long N = 0;
  int g = 0;
  OpTag tag = OpTag::generic;
  Mat M;
};

// T_N^{(r)}(n): one nonzero per row, T[Q, Q+n1] = zeta_{2N}^{t(Q)} with
// t(Q) = r n1.n2 + 2 r n2.Q, everything reduced mod 2N exactly.
struct TranslationOp {
  long N = 0;
  int g = 0;
  long D = 0;
  i64 r = 0;
  FrequencyVector n;            // as given
  std::vector<long> perm;       // column of the nonzero in each row
  std::vector<long> phase_exp;  // t(Q) mod 2N
  std::vector<Cx> phase;
};

TranslationOp make_translation(long N, int g, i64 r, const FrequencyVector& n,
                               const Limits& lim = {});

StateVector translation_apply(const TranslationOp& T, const StateVector& phi);
StateVector translation_apply(long N, int g, i64 r, const FrequencyVector& n,
                              const StateVector& phi, const Limits& lim = {});

DenseOperator to_dense(const TranslationOp& T);
Cx translation_trace(const TranslationOp& T);

// M <- T * M and M <- M * T without materializing T.
void left_mul_inplace(const TranslationOp& T, Mat& M);
void right_mul_inplace(Mat& M, const TranslationOp& T);
// M <- T^* M and M <- M * T^*
void left_mul_adjoint_inplace(const TranslationOp& T, Mat& M);
void right_mul_adjoint_inplace(Mat& M, const TranslationOp& T);

struct ObservableSpec {
  std::vector<std::pair<FrequencyVector, Cx>> modes;  // distinct frequencies

  Cx mean() const;  // coefficient of n = 0
  bool is_real() const;
};

ObservableSpec make_observable(std::vector<std::pair<FrequencyVector, Cx>> modes);

DenseOperator op_assemble(long N, int g, i64 r, const ObservableSpec& f, const Limits& lim = {});

} // namespace qcat
