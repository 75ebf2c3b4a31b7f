#include "iwtower/poly.hpp"

#include <algorithm>

#include "iwtower/arith.hpp"
#include "iwtower/error.hpp"

namespace iwtower {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly(std::vector<mpz_class>{c}); }

IntPoly IntPoly::monomial(const mpz_class& c, std::size_t deg) {
  std::vector<mpz_class> v(deg + 1);
  v[deg] = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::from_longs(const std::vector<long>& coeffs) {
  return IntPoly(std::vector<mpz_class>(coeffs.begin(), coeffs.end()));
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::operator-() const {
  IntPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPoly(std::move(r));
}

IntPoly operator*(const mpz_class& c, const IntPoly& a) {
  std::vector<mpz_class> r = a.c_;
  for (auto& x : r) x *= c;
  return IntPoly(std::move(r));
}

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPoly IntPoly::pow(unsigned n) const {
  IntPoly r = constant(1), b = *this;
  while (n) {
    if (n & 1u) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

IntPoly IntPoly::taylor_shift(const mpz_class& c) const {
  // Horner in the shifted variable.
  std::vector<mpz_class> a = c_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) a[j - 1] += c * a[j];
  return IntPoly(std::move(a));
}

IntPoly IntPoly::inflate(unsigned m) const {
  if (m == 0) return constant(eval(1));
  if (is_zero()) return {};
  std::vector<mpz_class> r((c_.size() - 1) * m + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * m] = c_[i];
  return IntPoly(std::move(r));
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& x : c_) g = gcd(g, x);
  return g;
}

std::string IntPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class a = abs(c);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    if (i == 0 || a != 1) s += a.get_str();
    if (i > 0) {
      if (a != 1) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

PolyDivision divmod_monic(const IntPoly& f, const IntPoly& monic) {
  if (monic.is_zero() || monic.leading() != 1) throw DomainError("divmod_monic: divisor is not monic");
  std::vector<mpz_class> r = f.coeffs();
  const int m = monic.degree();
  if (f.degree() < m) return {IntPoly(), f};
  std::vector<mpz_class> q(static_cast<std::size_t>(f.degree() - m + 1));
  for (int i = f.degree(); i >= m; --i) {
    mpz_class c = r[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    q[static_cast<std::size_t>(i - m)] = c;
    for (int j = 0; j <= m; ++j) r[static_cast<std::size_t>(i - m + j)] -= c * monic.coeffs()[static_cast<std::size_t>(j)];
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

IntPoly nu_t(unsigned long p, int n) {
  const mpz_class N = pow_ui(p, static_cast<unsigned long>(n));
  return IntPoly(std::vector<mpz_class>(N.get_ui(), mpz_class(1)));
}

IntPoly cyclotomic_prime_power_t(unsigned long p, int j) {
  if (j < 1) throw DomainError("cyclotomic index must be >= 1");
  // Phi_{p^j}(t) = sum_{i<p} t^{i p^{j-1}}
  const unsigned long step = pow_ui(p, static_cast<unsigned long>(j - 1)).get_ui();
  std::vector<mpz_class> c(step * (p - 1) + 1);
  for (unsigned long i = 0; i < p; ++i) c[i * step] = 1;
  return IntPoly(std::move(c));
}

}  // namespace iwtower
