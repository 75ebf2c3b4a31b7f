#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace iwtower {

// Dense univariate polynomial over Z, coefficients low to high, no trailing
// zeros (the zero polynomial is empty).
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  static IntPoly constant(const mpz_class& c);
  static IntPoly monomial(const mpz_class& c, std::size_t deg);
  static IntPoly from_longs(const std::vector<long>& coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  const mpz_class& leading() const { return c_.back(); }

  IntPoly operator-() const;
  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const mpz_class& c, const IntPoly& a);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

  mpz_class eval(const mpz_class& x) const;
  IntPoly pow(unsigned n) const;
  // f(x + c)
  IntPoly taylor_shift(const mpz_class& c) const;
  // f(x^m)
  IntPoly inflate(unsigned m) const;
  mpz_class content() const;
  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

struct PolyDivision {
  IntPoly quotient, remainder;
};
// Division by a monic polynomial.
PolyDivision divmod_monic(const IntPoly& f, const IntPoly& monic);

// (t^{p^n} - 1) / (t - 1) and the cyclotomic polynomial Phi_{p^j}(t).
IntPoly nu_t(unsigned long p, int n);
IntPoly cyclotomic_prime_power_t(unsigned long p, int j);

}  // namespace iwtower
