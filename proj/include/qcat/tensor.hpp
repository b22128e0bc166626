#pragma once

// Tensor structure of H_N: the Chinese-remainder isometry
// L^2((Z/N)^g) = L^2((Z/N1)^g) (x) L^2((Z/N2)^g) for coprime N1 N2 = N,
// under which T_N(n) maps to T_{N1}^{(r2)}(n) (x) T_{N2}^{(r1)}(n) with the
// canonical Bezout pair N2 r2 + N1 r1 = 1, and propagators factor up to a
// global phase. Also the coordinate-plane split used when A acts
// block-diagonally on symplectic planes.

#include "qcat/common.hpp"
#include "qcat/hilbert.hpp"
#include "qcat/modmath.hpp"
#include "qcat/propagator.hpp"
#include "qcat/sympl.hpp"

namespace qcat {

StateVector crt_isometry(long N1, long N2, const StateVector& f1, const StateVector& f2,
                         const Limits& lim = {});

// full index Q in (Z/N1N2)^g -> (index mod N1, index mod N2), g from context.
struct CrtIndexMap {
  long N1 = 0, N2 = 0;
  int g = 0;
  std::vector<long> i1, i2;  // per full index
  CrtIndexMap(long N1, long N2, int g, const Limits& lim = {});
};

// Frobenius residual of T_N^{(r)}(n) vs the twisted tensor product, exact
// generalized-permutation comparison. Must be <= 1e-12.
double verify_tensor_translation(long N1, long N2, const FrequencyVector& n, i64 r = 1,
                                 const Limits& lim = {});

struct TensorPropagatorReport {
  Cx zeta;             // fitted unimodular phase
  double residual;     // ||U_N - zeta (U1 (x) U2)||_F
  double overlap_abs;  // |tr((U1 (x) U2)* U_N)|, should be N^g
};

TensorPropagatorReport verify_tensor_propagator(const SymplecticMatrix& A, long N1, long N2,
                                                const Limits& lim = {},
                                                const Tolerances& tol = {});

// Factorization plan: symplectic-plane groups of A crossed with the prime
// power CRT factors of N. Twists are the literal products of the canonical
// Bezout cofactors, so each leaf translation matches the full one exactly.
struct LeafSpec {
  std::vector<int> planes;  // position-coordinate indices of this group
  long modulus = 0;
  i64 twist = 1;  // r already folded in
};

struct FactorPlan {
  long N = 0;
  int g = 0;
  i64 r = 1;
  std::vector<LeafSpec> leaves;
  std::vector<std::vector<int>> plane_groups;
  bool plane_split_used = false;
};

FactorPlan plan_factors(const SymplecticMatrix& A, long N, i64 r, const Limits& lim = {});

// A restricted to a plane group, columns/rows (C | g+C), revalidated.
SymplecticMatrix restrict_to_planes(const SymplecticMatrix& A, const std::vector<int>& planes);

// n restricted to a plane group: (n1|C, n2|C).
FrequencyVector restrict_frequency(const FrequencyVector& n, int g, const std::vector<int>& planes);

} // namespace qcat
