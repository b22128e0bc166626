#pragma once

// Exact congruence counting: the solution counts Q (vector and matrix
// congruences mod N) and R (simultaneous eigenvalue-power equations over the
// residue fields), Mordell-type partial exponential sums, the orthogonality
// moment identity linking them, and numerical checks of the bound chain on
// eigenfunction matrix elements.

#include "qcat/common.hpp"
#include "qcat/spectral.hpp"
#include "qcat/sympl.hpp"

#include <optional>

namespace qcat {

enum class CountMethod { convolution, exhaustive };

struct CountResult {
  u64 modulus = 0;
  int nu = 0;
  std::optional<FrequencyVector> n;
  Int value = 0;
  u64 tau = 0;  // ord(A, modulus)
  CountMethod method = CountMethod::convolution;
  bool crosschecked = false;  // exhaustive enumeration agreed
};

// Q_{2nu}(N; n): tuples (k_1..k_{2nu}, l_1..l_{2nu}) in [1,tau]^{4nu} with
// n (A^{k_1}+...+A^{k_2nu} - A^{l_1}-...-A^{l_2nu}) == 0 mod N, computed as
// sum_v c(v)^2 over an associative table of 2nu-fold sums.
CountResult q_count_vector(const SymplecticMatrix& A, long N, const FrequencyVector& n, int nu,
                           const Limits& lim = {});

// Same with the full matrix congruence sum A^{k_i} == sum A^{l_i} mod N.
CountResult q_count_matrix(const SymplecticMatrix& A, long N, int nu, const Limits& lim = {});

// R_{2nu}(d_1..d_t; p): one fixed root per irreducible factor of f_A mod p,
// simultaneous power-sum equality in the product of residue fields,
// exponents in [1, ord(A,p)].
CountResult r_count(const SymplecticMatrix& A, u64 p, int nu, const Limits& lim = {});

struct MordellSum {
  u64 p = 0;
  std::vector<u64> alphas;
  std::vector<u64> lambdas;
  u64 T = 0;
  Cx value{0, 0};
};

// S = sum_{t=1..T} e_p(sum_i alpha_i lambda_i^t).
MordellSum mordell_partial_sum(u64 p, const std::vector<u64>& alphas,
                               const std::vector<u64>& lambdas, u64 T);

struct MomentReport {
  double lhs = 0;  // p^{-2g} sum_alpha |S(alpha)|^{4nu}
  Int rhs = 0;     // R_{2nu}(1,...,1; p)
  bool match = false;
  u64 T = 0;
};

// Requires f_A split mod p; scans all alpha in F_p^{2g}.
MomentReport moment_identity_check(const SymplecticMatrix& A, u64 p, int nu,
                                   const Limits& lim = {}, const Tolerances& tol = {});

struct KrReport {
  double lhs = 0;  // (max matrix element)^{4nu}
  double rhs = 0;  // N^g Q / tau^{4nu}
  double max_element = 0;
  Int Q = 0;
  u64 tau = 0;
  u64 quantum_period = 0;
  bool holds = false;
};

KrReport kr_inequality_check(const SymplecticMatrix& A, long N, i64 r, const FrequencyVector& n,
                             int nu, DeltaMethod method = DeltaMethod::automatic,
                             const Limits& lim = {}, const Tolerances& tol = {});

// Max matrix element of T_p^{(r)}(n) over eigenpairs on the full space (no
// tensor shortcut), after checking the zero-divisor preconditions: g >= 2,
// f_A separable and reducible, no invariant isotropic subspace, n a
// zero-divisor mod p with nonzero image.
double zero_divisor_bound_value(const SymplecticMatrix& A, u64 p, i64 r,
                                const FrequencyVector& n, const Limits& lim = {},
                                const Tolerances& tol = {});

struct ZeroDivisorPoint {
  u64 p = 0;
  double value = 0;
};

struct ZeroDivisorReport {
  std::vector<ZeroDivisorPoint> points;
  double gamma_emp = 0;  // fitted decay exponent: value ~ p^{-gamma}
};

ZeroDivisorReport zero_divisor_bound_check(const SymplecticMatrix& A, i64 r,
                                           const FrequencyVector& n, const std::vector<u64>& ps,
                                           const Limits& lim = {}, const Tolerances& tol = {});

} // namespace qcat
