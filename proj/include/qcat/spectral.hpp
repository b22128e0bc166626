#pragma once

// Eigenspace pair analysis: the QUE defect
//   Delta_A(f, N) = max over ordered eigenspace pairs of ||P' (Op(f) - f0 I) P||
// computed either on a dense propagator or through the tensor factorization
// (CRT leaves x symplectic-plane leaves). Merged eigenspaces carry exact
// integer labels k = sum_f m_f L / tau_f mod L, L = lcm of leaf periods, so
// no floating-point clustering ever happens.

#include "qcat/common.hpp"
#include "qcat/hilbert.hpp"
#include "qcat/propagator.hpp"
#include "qcat/tensor.hpp"

#include <map>
#include <memory>

namespace qcat {

double matrix_element_sup(const EigenSpace& E, const EigenSpace& Ep, const DenseOperator& Op,
                          const Tolerances& tol = {});

// Largest singular value by power iteration on the Gram operator, three
// deterministic seeded starts.
double sigma_max(const Mat& B, const Tolerances& tol = {});

struct PropagatorCache {
  std::map<std::tuple<u64, long, i64>, std::shared_ptr<const Propagator>> memo;
};

struct SpectralLeaf {
  LeafSpec spec;
  SymplecticMatrix A_sub;
  std::shared_ptr<const Propagator> P;  // solved, period known, decomposed
  std::vector<long> full_to_leaf;       // full index -> leaf index
  std::vector<long> offsets;            // eigenspace start offsets in the concatenated basis
};

struct MergedTuple {
  std::vector<int> part;  // per leaf: index into leaf eigen list
  long offset = 0;        // column offset inside the merged space
  long dim = 0;
};

struct MergedSpace {
  long label = 0;  // k in [0, L)
  Cx theta;        // product of leaf eigenvalues (global phase convention-free)
  long dim = 0;
  std::vector<MergedTuple> tuples;
};

struct SpectralScheme {
  long N = 0;
  int g = 0;
  i64 r = 1;
  SymplecticMatrix A;
  std::vector<SpectralLeaf> leaves;
  u64 L = 1;
  std::vector<MergedSpace> spaces;

  long total_dim() const;
};

SpectralScheme build_spectral_scheme(const SymplecticMatrix& A, long N, i64 r,
                                     const Limits& lim = {}, const Tolerances& tol = {},
                                     PropagatorCache* cache = nullptr);

// Per-leaf spectral blocks V^H T(n_leaf) V for one full-space frequency.
std::vector<Mat> leaf_mode_blocks(const SpectralScheme& S, const FrequencyVector& n,
                                  const Limits& lim = {});

// The merged-basis block of sum_n c_n T(n) between spaces src -> dst
// (entries <Op b_src, b_dst>), assembled by Kronecker gathers.
Mat merged_block(const SpectralScheme& S, const std::vector<std::vector<Mat>>& mode_blocks,
                 const std::vector<Cx>& coeffs, std::size_t dst, std::size_t src);

enum class DeltaMethod { automatic, dense, tensor };

struct DeltaResult {
  double delta = 0;
  double max_element = 0;  // same sweep without the f0 subtraction
  u64 quantum_period = 0;  // tau_q of the dense propagator, or lcm of leaf periods
  long spaces = 0;
  bool used_tensor = false;
};

DeltaResult delta_A(const SymplecticMatrix& A, long N, const ObservableSpec& f, i64 r = 1,
                    DeltaMethod method = DeltaMethod::automatic, const Limits& lim = {},
                    const Tolerances& tol = {}, PropagatorCache* cache = nullptr);

// max over ordered eigenspace pairs of ||P' T(n) P|| (no subtraction), the
// left side of the fourth-moment bound.
DeltaResult max_translation_element(const SymplecticMatrix& A, long N, const FrequencyVector& n,
                                    i64 r = 1, DeltaMethod method = DeltaMethod::automatic,
                                    const Limits& lim = {}, const Tolerances& tol = {},
                                    PropagatorCache* cache = nullptr);

// Checks, on computed spectra of two leaves with coprime periods, that
// eigenvalue products are pairwise distinct.
bool coprime_period_products_injective(const Propagator& P1, const Propagator& P2,
                                       double tol_sep = 1e-9);

} // namespace qcat
