#pragma once

// Exact polynomial arithmetic: Z[x] with resultants, discriminants,
// cyclotomics, characteristic polynomials, Newton's identities and full
// rational factorization (Zassenhaus with Hensel lifting), plus the mod-p
// toolkit (DDF, Cantor-Zassenhaus, root finding) and F_{p^d} arithmetic.
//
// Coefficients are stored ascending; the zero polynomial has an empty list.

#include "qcat/common.hpp"
#include "qcat/intmat.hpp"

#include <initializer_list>
#include <map>
#include <vector>

namespace qcat {

struct ZPoly {
  std::vector<Int> c;

  ZPoly() = default;
  ZPoly(std::initializer_list<long> v) {
    for (long x : v) c.push_back(Int(x));
    trim();
  }
  explicit ZPoly(std::vector<Int> v) : c(std::move(v)) { trim(); }

  static ZPoly x() { return ZPoly{0, 1}; }

  int deg() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Int& lc() const { return c.back(); }
  bool monic() const { return !c.empty() && c.back() == 1; }
  Int coeff(int i) const { return i >= 0 && i < int(c.size()) ? c[i] : Int(0); }
  Int eval(const Int& v) const;
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool operator==(const ZPoly&) const = default;
};

ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly mul_scalar(const ZPoly& a, const Int& s);
ZPoly derivative(const ZPoly& a);
Int content(const ZPoly& a);

// Quotient of f by monic d; remainder out. Exact integer arithmetic.
ZPoly divmod_monic(const ZPoly& f, const ZPoly& d, ZPoly* rem);

// True (and quotient) iff d divides f exactly over Z.
bool divides_exact(const ZPoly& d, const ZPoly& f, ZPoly* quot);

// gcd over Q of two integer polynomials, returned as the primitive integer
// polynomial with positive leading coefficient.
ZPoly gcd_q(ZPoly a, ZPoly b);

ZPoly xn_minus_1(int m);
ZPoly cyclotomic(int m);
bool is_palindromic(const ZPoly& f);

// x^deg * f(1/x)
ZPoly reciprocal(const ZPoly& f);

// det(xI - A) by Faddeev-LeVerrier, exact.
ZPoly charpoly(const IMat& A);

Int resultant(const ZPoly& f, const ZPoly& g);
Int discriminant(const ZPoly& f);

// Monic polynomial of degree n = s.size() whose roots have power sums
// s[0] = sum lambda_i, s[1] = sum lambda_i^2, ... via Newton's identities.
// Throws property_failure if the elementary symmetric functions are not
// integers.
ZPoly poly_from_power_sums(const std::vector<Int>& s);

// Irreducible monic factors with multiplicities, for monic input.
std::vector<std::pair<ZPoly, int>> factor_rational(const ZPoly& f);

// ---------------------------------------------------------------- mod p ---

using Fpoly = std::vector<u64>;  // ascending, reduced mod p, no leading zeros

Fpoly fp_from(const ZPoly& f, u64 p);
int fp_deg(const Fpoly& f);
void fp_trim(Fpoly& f);
Fpoly fp_mul(const Fpoly& a, const Fpoly& b, u64 p);
Fpoly fp_divmod(const Fpoly& f, const Fpoly& d, u64 p, Fpoly* rem);
Fpoly fp_gcd(Fpoly a, Fpoly b, u64 p);  // monic
Fpoly fp_monic(Fpoly f, u64 p);
Fpoly fp_powmod(const Fpoly& base, const Int& e, const Fpoly& mod, u64 p);
Fpoly fp_derivative(const Fpoly& f, u64 p);
u64 fp_eval(const Fpoly& f, u64 v, u64 p);

// Distinct-degree decomposition of a squarefree monic f: list of
// (d, product of all irreducible factors of degree d).
std::vector<std::pair<int, Fpoly>> fp_ddf(Fpoly f, u64 p);

// Full factorization of monic f mod p (p odd), irreducible monic factors
// with multiplicities. Deterministic given the seed.
std::vector<std::pair<Fpoly, int>> fp_factor(const Fpoly& f, u64 p, u64 seed = 1);

// Roots in F_p with multiplicity stripped (distinct roots, ascending).
// Full scan for p <= 1e6, Cantor-Zassenhaus above.
std::vector<u64> fp_roots(const Fpoly& f, u64 p, u64 seed = 1);

// Degrees (with multiplicity) of the irreducible factors of f mod p.
std::vector<int> fp_factor_degrees(const Fpoly& f, u64 p, u64 seed = 1);

// ------------------------------------------------------------- F_{p^d} ---

struct FqCtx {
  u64 p = 0;
  Fpoly h;  // monic irreducible over F_p
  int d() const { return fp_deg(h); }
};

using FqElem = Fpoly;  // reduced mod h

FqElem fq_reduce(const Fpoly& a, const FqCtx& F);
FqElem fq_add(const FqElem& a, const FqElem& b, const FqCtx& F);
FqElem fq_sub(const FqElem& a, const FqElem& b, const FqCtx& F);
FqElem fq_mul(const FqElem& a, const FqElem& b, const FqCtx& F);
FqElem fq_pow(const FqElem& a, const Int& e, const FqCtx& F);
FqElem fq_scalar(u64 v, const FqCtx& F);
FqElem fq_x(const FqCtx& F);  // the class of x
bool fq_is_zero(const FqElem& a);

} // namespace qcat
