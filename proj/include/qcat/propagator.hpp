#pragma once

// Quantized cat map propagators. solve_propagator finds the unitary U with
// U* T(e_i) U = T(e_i A) for the 2g generator frequencies by solving the
// sparse intertwining system on matrix entries: each constraint couples two
// entries with a root-of-unity ratio, so the system is a union of orbits on
// entry pairs and is solved exactly by a breadth-first walk with integer
// phase exponents mod 2N. A group-averaging fallback is kept for
// cross-checks.

#include "qcat/common.hpp"
#include "qcat/hilbert.hpp"
#include "qcat/sympl.hpp"

namespace qcat {

struct EigenSpace {
  int m = 0;   // label in {0, ..., tau_q - 1}
  Cx theta;    // zeta^{1/tau} e^{2 pi i m / tau}
  Mat basis;   // D x dim, orthonormal columns (ell^2 pairing)
  long dim() const { return basis.cols(); }
};

struct Propagator {
  SymplecticMatrix A;
  long N = 0;
  int g = 0;
  long D = 0;
  i64 r = 1;
  Mat U;
  int intertwiner_dim = 0;
  double unitarity_residual = 0;
  double egorov_generator_residual = 0;

  u64 period = 0;  // tau_q; 0 until quantum_period runs
  Cx zeta{0, 0};   // U^tau = zeta I
  u64 ord_2N = 0;  // ord(A, 2N), cached by quantum_period

  std::vector<EigenSpace> eigen;

  DenseOperator dense() const { return DenseOperator{N, g, OpTag::propagator, U}; }
};

Propagator solve_propagator(const SymplecticMatrix& A, long N, i64 r,
                            const Limits& lim = {}, const Tolerances& tol = {});

// Group-averaging projector N^{-2g} sum_n T(nA) X T(n)^*, seeded with the
// identity (seed_index 0) or a deterministic pseudo-random matrix. Quadratic
// in the number of lattice points; intended for small-N cross-checks.
Mat averaged_intertwiner(const SymplecticMatrix& A, long N, i64 r, u64 seed_index,
                         const Limits& lim = {});
Propagator solve_propagator_averaged(const SymplecticMatrix& A, long N, i64 r,
                                     const Limits& lim = {}, const Tolerances& tol = {});

// Minimal t <= cap with U^t scalar; cap = 0 means the default 4 ord(A, 2N).
// Fills period, zeta, ord_2N.
void quantum_period(Propagator& P, u64 cap = 0, const Limits& lim = {},
                    const Tolerances& tol = {});

// Spectral projectors P_m = tau^{-1} sum_j theta_m^{-j} U^j for all m,
// chunked within lim.eig_budget_bytes; empty eigenspaces dropped; bases by
// column-pivoted QR. Requires quantum_period first.
void eigen_decompose(Propagator& P, const Limits& lim = {}, const Tolerances& tol = {});

// ||U* T(n) U - T(nA)||_F / ||T(n)||_F for one frequency.
double egorov_residual(const Propagator& P, const FrequencyVector& n);

// Egorov for the power A^d: max generator residual of U^d against T(e A^d),
// plus the spectral-mapping check theta_m^d on each computed eigenspace.
double power_egorov_check(const SymplecticMatrix& A, long N, i64 r, u64 d,
                          const Limits& lim = {}, const Tolerances& tol = {});

// D(n) = tau^{-1} sum_{i=1..tau} T(n A^i) mu^i, tau = ord(A, N).
DenseOperator twisted_average(const SymplecticMatrix& A, long N, i64 r,
                              const FrequencyVector& n, Cx mu, const Limits& lim = {});

} // namespace qcat
