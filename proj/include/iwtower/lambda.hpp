#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "iwtower/arith.hpp"
#include "iwtower/poly.hpp"

namespace iwtower {

// Element of Lambda = Z_p[[T]] known modulo (p^k, T^D). A polynomial element
// has no unknown tail: every coefficient beyond the stored ones is zero.
class LambdaElement {
 public:
  LambdaElement() : LambdaElement(2, 1, 1, {}) {}
  LambdaElement(unsigned long p, int precision, int truncation, std::vector<mpz_class> coeffs,
                bool polynomial = false);
  // Exact polynomial in T; the truncation is raised to deg + 1 if needed.
  static LambdaElement from_poly_T(unsigned long p, int precision, int truncation, const IntPoly& f);
  // Exact polynomial in t = 1 + T.
  static LambdaElement from_poly_t(unsigned long p, int precision, int truncation, const IntPoly& f);

  unsigned long prime() const { return p_; }
  int precision() const { return k_; }
  int truncation() const { return D_; }
  bool is_polynomial() const { return poly_; }
  const std::vector<mpz_class>& residues() const { return c_; }
  const mpz_class& residue(std::size_t i) const;
  PAdicInt coeff(std::size_t i) const { return PAdicInt(p_, k_, residue(i)); }
  mpz_class modulus() const { return pow_ui(p_, static_cast<unsigned long>(k_)); }

  bool is_zero() const;          // all known coefficients vanish mod p^k
  int degree() const;            // index of the last nonzero residue, -1 for zero
  Valuation min_valuation() const;
  IntPoly to_poly() const;  // residue representatives

  LambdaElement with_precision(int k) const;
  LambdaElement with_truncation(int D) const;

  LambdaElement operator-() const;
  friend LambdaElement operator+(const LambdaElement& a, const LambdaElement& b);
  friend LambdaElement operator-(const LambdaElement& a, const LambdaElement& b);
  friend LambdaElement operator*(const LambdaElement& a, const LambdaElement& b);
  // Equal modulo (p^k, T^D) at the common precision and truncation.
  friend bool operator==(const LambdaElement& a, const LambdaElement& b);

  std::string to_string() const;

 private:
  unsigned long p_;
  int k_;
  int D_;
  bool poly_;
  std::vector<mpz_class> c_;  // length D_, residues in [0, p^k)
};

struct WeierstrassData {
  int mu = 0;
  int lambda = 0;
  LambdaElement distinguished;  // monic of degree lambda, T^lambda mod p
  LambdaElement unit;           // truncation D - lambda
  int precision = 0;            // p-adic digits guaranteed for `distinguished`
  int unit_precision = 0;       // p-adic digits guaranteed for `unit`
};

// f = p^mu * unit * distinguished. PrecisionError when f vanishes mod (p^k, T^D).
WeierstrassData weierstrass_prepare(const LambdaElement& f);

// nu_{p^n} = ((1+T)^{p^n} - 1) / T and Phi_{p^j}(1+T) as exact elements.
LambdaElement nu_poly(unsigned long p, int n, int precision);
LambdaElement cyclotomic_poly(unsigned long p, int j, int precision);

// (1+T)^v = sum binom(v, i) T^i for i < D. The output precision is
// k - v_p((D-1)!) and must be positive.
LambdaElement binom_series(const PAdicInt& v, int truncation);

struct CyclotomicFactor {
  int j = 0;         // Phi_{p^j}(1+T)
  int multiplicity = 0;
};
std::vector<CyclotomicFactor> cyclotomic_factor_profile(const LambdaElement& f);

// v_p of Res(f(1+T), g) with f in Z[t] and g a polynomial element of Lambda.
int resultant_valuation(const IntPoly& f_t, const LambdaElement& g);

// Lambda-module up to pseudo-isomorphism:
// Lambda^r + sum Lambda/(f_i^{e_i}) + sum Lambda/(p^{m_j}).
struct LambdaModuleNF {
  unsigned long p = 2;
  int free_rank = 0;
  std::vector<std::pair<LambdaElement, int>> poly_factors;  // distinguished f, exponent e
  std::vector<int> p_factors;
};
void validate_nf(const LambdaModuleNF& nf);

struct NFInvariants {
  int lambda = 0;
  int mu = 0;
};
// (sum e_i deg f_i, sum m_j); DomainError on a free part.
NFInvariants nf_invariants(const LambdaModuleNF& nf);

struct QuotientOrder {
  bool infinite = false;
  long exponent = 0;  // v_p of the order when finite
};
// Order of M / nu_{p^n} M.
QuotientOrder nf_quotient_order(const LambdaModuleNF& nf, int n);

// M / nu_{p^n} M as a Z_p-module: free rank plus the p-exponent of the
// torsion. Polynomial summands go through multiplication matrices on
// Z[T]/(f^e), so this also covers cyclotomic factors.
struct QuotientStructure {
  int free_rank = 0;
  long torsion_exponent = 0;
};
QuotientStructure nf_quotient_structure(const LambdaModuleNF& nf, int n);

struct LimitShape {
  int lambda = 0;
  bool has_mu = false;  // (Q_p/Z_p)^lambda, plus an infinite-exponent p-torsion part when true
};
LimitShape direct_limit_shape(const LambdaModuleNF& nf);

}  // namespace iwtower
