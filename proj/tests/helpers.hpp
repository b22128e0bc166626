#pragma once

// Shared fixtures for the test binaries: the three reference matrices and a
// few dense-matrix conveniences.

#include "qcat/hilbert.hpp"
#include "qcat/sympl.hpp"

namespace qtest {

inline qcat::SymplecticMatrix a1() { return qcat::validate({{1, 2}, {2, 5}}, 1); }

// Two uncoupled symplectic planes: blocks [[1,2],[2,5]] and [[1,4],[4,17]].
inline qcat::SymplecticMatrix a2() {
  return qcat::validate({{1, 0, 2, 0}, {0, 1, 0, 4}, {2, 0, 5, 0}, {0, 4, 0, 17}}, 2);
}

// diag-block(M, M^{-T}) with M = [[3,2],[4,3]]: invariant isotropic position
// plane, planes coupled, char poly (x^2-6x+1)^2.
inline qcat::SymplecticMatrix a3() {
  return qcat::validate({{3, 2, 0, 0}, {4, 3, 0, 0}, {0, 0, 3, -4}, {0, 0, -2, 3}}, 2);
}

inline qcat::Mat dense_t(long N, int g, qcat::i64 r, const qcat::FrequencyVector& n) {
  return qcat::to_dense(qcat::make_translation(N, g, r, n)).M;
}

inline double rel_fro(const qcat::Mat& X, const qcat::Mat& Y) {
  return (X - Y).norm() / std::sqrt(double(X.rows()));
}

} // namespace qtest
