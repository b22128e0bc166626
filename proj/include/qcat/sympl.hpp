#pragma once

// The classical side: symplectic validation, characteristic polynomial
// analysis, root-of-unity exclusions, zero-divisor tests and invariant
// subspace classification. Everything here is exact (integer or rational).
//
// Conventions: vectors are rows acting by v -> v*A, the symplectic form is
// omega(x, y) = x1.y2 - x2.y1 on Z^g x Z^g, i.e. omega(x,y) = x J y^T with
// J = [[0, I], [-I, 0]].

#include "qcat/common.hpp"
#include "qcat/intmat.hpp"
#include "qcat/polyz.hpp"

#include <optional>

namespace qcat {

using FrequencyVector = std::vector<i64>;  // length 2g, split as (n1 | n2)

struct SymplecticMatrix {
  int g = 0;
  IMat A;
  bool parity = false;  // A == I mod 2
};

IMat symplectic_J(int g);

// Checks A^T J A = J and det A = 1; sets the parity flag.
SymplecticMatrix validate(const IMat& raw, int g);
SymplecticMatrix validate(const std::vector<std::vector<long>>& rows, int g);

// Minimal k with A^k == I mod 2, and the power itself.
std::pair<u64, SymplecticMatrix> parity_reduce(const SymplecticMatrix& S);

struct CharPolyInfo {
  ZPoly poly;  // det(xI - A), monic, palindromic
  Int discriminant = 0;
  std::vector<std::pair<ZPoly, int>> rational_factors;
  bool separable = false;
  bool irreducible = false;
};

CharPolyInfo char_poly_info(const SymplecticMatrix& S);

struct RootOfUnityReport {
  bool ergodic = false;          // no Phi_m | f_A with phi(m) <= 2g
  bool ratio_condition = false;  // reduced ratio polynomial has no small cyclotomic factor
  std::vector<int> cyclotomic_in_poly;
  std::vector<int> cyclotomic_in_ratio;
  ZPoly ratio_poly;     // Res_y(f(y), y^2g f(x/y)), degree 4g^2
  ZPoly ratio_reduced;  // after removing the forced (x-1)^2g
};

// Requires separable char poly.
RootOfUnityReport root_of_unity_checks(const SymplecticMatrix& S);

// Krylov rank test: rows n, nA, ..., nA^{2g-1}; true iff rank < 2g over Q,
// or over F_p when a modulus is given. The zero vector counts as a
// zero-divisor.
bool is_zero_divisor(const FrequencyVector& n, const SymplecticMatrix& S,
                     std::optional<u64> modulus = {});

// The 2g distinct roots of f_A mod p (ascending). Errors if p | disc or the
// polynomial does not split completely.
std::vector<u64> eigenvalues_mod_p(const SymplecticMatrix& S, u64 p);

enum class Isotropy { isotropic, symplectic, mixed };

struct SubspaceDescriptor {
  std::vector<std::vector<Int>> basis;  // primitive integer rows
  int label = -1;                       // generating irreducible factor, -1 if none
  Isotropy isotropy = Isotropy::mixed;
};

struct SubspaceSplit {
  std::vector<SubspaceDescriptor> subspaces;
  bool scar_prone = false;
  bool complete = false;  // separable path: all kernel-sum invariant subspaces examined
};

// Separable input: kernels of the irreducible factors with isotropy labels,
// scar_prone iff some sum of kernels is isotropic (complete enumeration).
// Non-separable input: best-effort cyclic-subspace search (sound, marked
// incomplete) instead of outright rejection, so block-diagonal scar examples
// are still recognized.
SubspaceSplit invariant_subspace_split(const SymplecticMatrix& S);

struct ZeroDivisorSplitResult {
  SubspaceDescriptor W1, W2;     // bases as vectors over F_p (entries in [0,p))
  IMat A_on_W1, A_on_W2;         // restricted matrices in those bases, entries mod p
  std::vector<u64> n_on_W1;      // coordinates of n over the W1 basis, mod p
  u64 p = 0;
};

// Split F_p^{2g} = W1 + W2 along the rational factor kernels: W1 carries the
// components of n, W2 = W1-perp, both A-invariant and symplectic mod p; the
// image of n in W1 is not a zero-divisor for the restricted map.
ZeroDivisorSplitResult zero_divisor_split(const FrequencyVector& n, const SymplecticMatrix& S,
                                          u64 p);

// Helpers shared with the quantize module.
Int omega_form(const std::vector<Int>& x, const std::vector<Int>& y, int g);
std::vector<i64> apply_row(const std::vector<i64>& v, const IMat& A);

} // namespace qcat
