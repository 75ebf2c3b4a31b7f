#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "iwtower/poly.hpp"

namespace iwtower {

// Sparse Laurent polynomial in Z[t_1^{+-1}, ..., t_d^{+-1}].
class LaurentPoly {
 public:
  using Exponent = std::vector<int>;
  using Terms = std::map<Exponent, mpz_class>;  // lex order, last entry leads

  explicit LaurentPoly(std::size_t nvars = 1) : n_(nvars) {}
  static LaurentPoly constant(std::size_t nvars, const mpz_class& c);
  static LaurentPoly variable(std::size_t nvars, std::size_t i, int power = 1);
  static LaurentPoly monomial(std::size_t nvars, const Exponent& e, const mpz_class& c);

  std::size_t nvars() const { return n_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return t_.size(); }
  const Exponent& leading_exponent() const { return t_.rbegin()->first; }
  const mpz_class& leading_coeff() const { return t_.rbegin()->second; }

  Exponent min_exponents() const;
  Exponent max_exponents() const;
  int total_degree() const;  // sum over variables of (max - min)
  mpz_class content() const;

  void add_term(const Exponent& e, const mpz_class& c);
  LaurentPoly shifted(const Exponent& e) const;  // times t^e
  // Unit-normalized representative: minimum exponent 0 in every variable and
  // a positive leading coefficient.
  LaurentPoly normalized() const;
  // Image under t_i -> t^{v_i} as (poly, shift) with value t^shift * poly(t).
  std::pair<IntPoly, long> specialize(const std::vector<long>& v) const;
  mpz_class eval_at_ones() const;

  LaurentPoly operator-() const;
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const mpz_class& c, const LaurentPoly& a);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.n_ == b.n_ && a.t_ == b.t_; }

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  std::size_t n_;
  Terms t_;
};

// a / b in the Laurent ring; DomainError when b does not divide a.
LaurentPoly exact_divide(const LaurentPoly& a, const LaurentPoly& b);
bool divides(const LaurentPoly& b, const LaurentPoly& a);
// Normalized gcd via recursive primitive remainder sequences. LimitError when
// an intermediate total degree exceeds `degree_cap`.
LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b, int degree_cap = 400);
// Equal up to multiplication by +-t^e.
bool associated(const LaurentPoly& a, const LaurentPoly& b);

// Determinant of a square matrix with sparse rows, by dynamic programming over
// the set of used columns. LimitError when the state count exceeds the cap.
LaurentPoly sparse_determinant(const std::vector<std::vector<LaurentPoly>>& m, std::size_t nvars,
                               std::size_t state_cap = 2'000'000);

}  // namespace iwtower
