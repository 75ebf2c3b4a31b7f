#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace iwtower {

bool is_prime(unsigned long p);
void require_prime(unsigned long p);  // throws InputError
mpz_class pow_ui(unsigned long base, unsigned long exp);
// p-adic valuation of a nonzero integer.
int vp(const mpz_class& x, unsigned long p);
// Representative in [0, m).
mpz_class mod_nonneg(const mpz_class& a, const mpz_class& m);

struct Valuation {
  int value = 0;
  bool at_least = false;  // residue vanished: true valuation is >= value
  bool operator==(const Valuation&) const = default;
};

// Element of Z_p known modulo p^k, stored as the residue in [0, p^k).
class PAdicInt {
 public:
  PAdicInt(unsigned long p, int precision, const mpz_class& value);
  // Base-p digits, least significant first ("2121" or "2,1,2,1"). The
  // precision is the number of digits given, capped at `precision`.
  static PAdicInt from_digits(unsigned long p, int precision, const std::string& digits);

  unsigned long prime() const { return p_; }
  int precision() const { return k_; }
  const mpz_class& residue() const { return r_; }
  mpz_class modulus() const { return pow_ui(p_, static_cast<unsigned long>(k_)); }

  Valuation valuation() const;
  bool is_unit() const;
  PAdicInt unit_inverse() const;  // DomainError on non-units
  PAdicInt reduced(int precision) const;
  std::vector<unsigned long> digits() const;
  std::string digit_string() const;  // least significant first

  PAdicInt operator-() const;
  friend PAdicInt operator+(const PAdicInt& a, const PAdicInt& b);
  friend PAdicInt operator-(const PAdicInt& a, const PAdicInt& b);
  friend PAdicInt operator*(const PAdicInt& a, const PAdicInt& b);
  // Equality at the common precision.
  friend bool operator==(const PAdicInt& a, const PAdicInt& b);

 private:
  unsigned long p_;
  int k_;
  mpz_class r_;
};

// Root of f (coefficients low to high) lifted from the simple root x0 mod p.
PAdicInt hensel_root(const std::vector<mpz_class>& f, const mpz_class& x0, unsigned long p,
                     int precision);
// Same, seeded with the smallest simple root of f mod p.
PAdicInt hensel_root(const std::vector<mpz_class>& f, unsigned long p, int precision);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols = 0);
  static IntMatrix from_mpz_rows(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix transpose() const;
  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  bool is_zero() const;
  std::vector<std::vector<mpz_class>> to_rows() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..., d_i >= 0.
struct SmithDecomposition {
  IntMatrix U, D, V;
  std::size_t rank = 0;
};
SmithDecomposition smith_decompose(const IntMatrix& m);
// Diagonal of the Smith form (length min(rows, cols)), no transforms.
std::vector<mpz_class> smith_normal_form(const IntMatrix& m);

class AbelianGroup;
AbelianGroup cokernel(const IntMatrix& m);

// Finitely generated abelian group in invariant-factor form: torsion factors
// d_1 | d_2 | ... (all > 1), then `free_rank` copies of Z.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  // Direct sum of Z/n_i (n_i = 0 means Z); normalized via Smith form.
  static AbelianGroup from_cyclic_orders(const std::vector<mpz_class>& orders);

  const std::vector<mpz_class>& torsion() const { return torsion_; }
  int free_rank() const { return free_rank_; }
  // torsion factors followed by one 0 per free summand
  std::vector<mpz_class> invariant_factors() const;
  bool is_finite() const { return free_rank_ == 0; }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  std::optional<mpz_class> order() const;
  AbelianGroup p_part(unsigned long p) const;  // keeps free summands
  int p_rank(unsigned long p) const;           // dim over F_p of G/pG
  long p_exponent(unsigned long p) const;      // v_p of the torsion order
  std::string to_string() const;

  bool operator==(const AbelianGroup&) const = default;

 private:
  friend AbelianGroup cokernel(const IntMatrix& m);
  std::vector<mpz_class> torsion_;
  int free_rank_ = 0;
};

// Z^rows / image of M : Z^cols -> Z^rows.
AbelianGroup cokernel(const IntMatrix& m);

}  // namespace iwtower
