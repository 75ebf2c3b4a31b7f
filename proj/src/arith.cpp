#include "iwtower/arith.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "iwtower/error.hpp"

namespace iwtower {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  mpz_class z(p);
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

void require_prime(unsigned long p) {
  if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
}

mpz_class pow_ui(unsigned long base, unsigned long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

int vp(const mpz_class& x, unsigned long p) {
  if (x == 0) throw DomainError("valuation of zero");
  mpz_class q = x;
  int v = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), p)) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), p);
    ++v;
  }
  return v;
}

mpz_class mod_nonneg(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// ---------------------------------------------------------------- PAdicInt

PAdicInt::PAdicInt(unsigned long p, int precision, const mpz_class& value) : p_(p), k_(precision) {
  require_prime(p);
  if (precision < 1) throw InputError("p-adic precision must be >= 1");
  r_ = mod_nonneg(value, modulus());
}

PAdicInt PAdicInt::from_digits(unsigned long p, int precision, const std::string& digits) {
  std::vector<unsigned long> ds;
  if (digits.find(',') != std::string::npos) {
    std::stringstream ss(digits);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
        throw InputError("bad p-adic digit string: " + digits);
      ds.push_back(std::stoul(tok));
    }
  } else {
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("bad p-adic digit string: " + digits);
      ds.push_back(static_cast<unsigned long>(c - '0'));
    }
  }
  if (ds.empty()) throw InputError("empty p-adic digit string");
  mpz_class v = 0, pk = 1;
  for (unsigned long d : ds) {
    if (d >= p) throw InputError("digit " + std::to_string(d) + " out of range for p = " + std::to_string(p));
    v += pk * d;
    pk *= p;
  }
  int k = std::min<int>(precision, static_cast<int>(ds.size()));
  return PAdicInt(p, k, v);
}

Valuation PAdicInt::valuation() const {
  if (r_ == 0) return {k_, true};
  return {vp(r_, p_), false};
}

bool PAdicInt::is_unit() const { return !mpz_divisible_ui_p(r_.get_mpz_t(), p_); }

PAdicInt PAdicInt::unit_inverse() const {
  if (!is_unit()) throw DomainError("unit_inverse: not a unit in Z_" + std::to_string(p_));
  mpz_class inv, m = modulus();
  mpz_invert(inv.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t());
  return PAdicInt(p_, k_, inv);
}

PAdicInt PAdicInt::reduced(int precision) const {
  return PAdicInt(p_, std::min(precision, k_), r_);
}

std::vector<unsigned long> PAdicInt::digits() const {
  std::vector<unsigned long> out;
  mpz_class q = r_;
  for (int i = 0; i < k_; ++i) {
    out.push_back(mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), p_));
  }
  return out;
}

std::string PAdicInt::digit_string() const {
  std::string s;
  for (unsigned long d : digits()) {
    if (!s.empty() && p_ > 10) s += ',';
    s += std::to_string(d);
  }
  return s;
}

namespace {
int common_precision(const PAdicInt& a, const PAdicInt& b) {
  if (a.prime() != b.prime()) throw DomainError("p-adic operands have different primes");
  return std::min(a.precision(), b.precision());
}
}  // namespace

PAdicInt PAdicInt::operator-() const { return PAdicInt(p_, k_, -r_); }

PAdicInt operator+(const PAdicInt& a, const PAdicInt& b) {
  return PAdicInt(a.p_, common_precision(a, b), a.r_ + b.r_);
}
PAdicInt operator-(const PAdicInt& a, const PAdicInt& b) {
  return PAdicInt(a.p_, common_precision(a, b), a.r_ - b.r_);
}
PAdicInt operator*(const PAdicInt& a, const PAdicInt& b) {
  return PAdicInt(a.p_, common_precision(a, b), a.r_ * b.r_);
}
bool operator==(const PAdicInt& a, const PAdicInt& b) {
  int k = common_precision(a, b);
  mpz_class m = pow_ui(a.p_, static_cast<unsigned long>(k));
  return mod_nonneg(a.r_ - b.r_, m) == 0;
}

// ---------------------------------------------------------------- Hensel

namespace {
mpz_class eval_mod(const std::vector<mpz_class>& f, const mpz_class& x, const mpz_class& m) {
  mpz_class acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = mod_nonneg(acc * x + *it, m);
  return acc;
}
std::vector<mpz_class> derivative(const std::vector<mpz_class>& f) {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  return d;
}
}  // namespace

PAdicInt hensel_root(const std::vector<mpz_class>& f, const mpz_class& x0, unsigned long p, int precision) {
  require_prime(p);
  if (precision < 1) throw InputError("hensel_root: precision must be >= 1");
  const mpz_class mp(p);
  if (eval_mod(f, x0, mp) != 0) throw DomainError("hensel_root: seed is not a root mod p");
  const auto df = derivative(f);
  if (eval_mod(df, x0, mp) == 0) throw DomainError("hensel_root: seed is not a simple root mod p");

  const mpz_class m = pow_ui(p, static_cast<unsigned long>(precision));
  mpz_class x = mod_nonneg(x0, m);
  // Newton: the number of correct digits doubles each step.
  for (int correct = 1; correct < precision; correct *= 2) {
    mpz_class fx = eval_mod(f, x, m), dfx = eval_mod(df, x, m), inv;
    mpz_invert(inv.get_mpz_t(), dfx.get_mpz_t(), m.get_mpz_t());
    x = mod_nonneg(x - fx * inv, m);
  }
  return PAdicInt(p, precision, x);
}

PAdicInt hensel_root(const std::vector<mpz_class>& f, unsigned long p, int precision) {
  require_prime(p);
  const mpz_class mp(p);
  const auto df = derivative(f);
  for (unsigned long x = 0; x < p; ++x) {
    if (eval_mod(f, x, mp) == 0 && eval_mod(df, x, mp) != 0) return hensel_root(f, mpz_class(x), p, precision);
  }
  throw DomainError("hensel_root: no simple root mod " + std::to_string(p));
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  std::vector<std::vector<mpz_class>> z;
  for (const auto& r : rows) z.emplace_back(r.begin(), r.end());
  return from_mpz_rows(z, cols);
}

IntMatrix IntMatrix::from_mpz_rows(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const mpz_class& x) { return x == 0; });
}

std::vector<std::vector<mpz_class>> IntMatrix::to_rows() const {
  std::vector<std::vector<mpz_class>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product: shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const mpz_class& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix sum: shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference: shape mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

// ---------------------------------------------------------------- Smith form

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// Elimination with the smallest nonzero entry as pivot. When U / V are given
// the row / column operations are mirrored so that U * M * V = D.
std::size_t smith_in_place(IntMatrix& a, IntMatrix* u, IntMatrix* v) {
  const std::size_t R = a.rows(), C = a.cols();
  auto row_axpy = [&](std::size_t dst, std::size_t src, const mpz_class& q) {  // row_dst -= q row_src
    for (std::size_t j = 0; j < C; ++j)
      if (a(src, j) != 0) a(dst, j) -= q * a(src, j);
    if (u)
      for (std::size_t j = 0; j < R; ++j)
        if ((*u)(src, j) != 0) (*u)(dst, j) -= q * (*u)(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const mpz_class& q) {  // col_dst -= q col_src
    for (std::size_t i = 0; i < R; ++i)
      if (a(i, src) != 0) a(i, dst) -= q * a(i, src);
    if (v)
      for (std::size_t i = 0; i < C; ++i)
        if ((*v)(i, src) != 0) (*v)(i, dst) -= q * (*v)(i, src);
  };
  auto swap_r = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    if (u) u->swap_rows(i, j);
  };
  auto swap_c = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    if (v) v->swap_cols(i, j);
  };

  std::size_t t = 0;
  for (; t < R && t < C; ++t) {
    std::size_t pi = R, pj = C;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (a(i, j) != 0 && (pi == R || cmpabs(a(i, j), a(pi, pj)) < 0)) pi = i, pj = j;
    if (pi == R) break;
    swap_r(t, pi);
    swap_c(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a(i, t) == 0) continue;
        mpz_class q = a(i, t) / a(t, t);
        if (q != 0) row_axpy(i, t, q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a(t, j) == 0) continue;
        mpz_class q = a(t, j) / a(t, t);
        if (q != 0) col_axpy(j, t, q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < R; ++i)
          if (a(i, t) != 0 && cmpabs(a(i, t), a(bi, bj)) < 0) bi = i, bj = t;
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(t, j) != 0 && cmpabs(a(t, j), a(bi, bj)) < 0) bi = t, bj = j;
        swap_r(t, bi);
        swap_c(t, bj);
        continue;
      }
      // pivot must divide the remaining block
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == R) break;
      row_axpy(t, bad, mpz_class(-1));
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < C; ++j) a(t, j) = -a(t, j);
      if (u)
        for (std::size_t j = 0; j < R; ++j) (*u)(t, j) = -(*u)(t, j);
    }
  }
  return t;
}

}  // namespace

SmithDecomposition smith_decompose(const IntMatrix& m) {
  SmithDecomposition s{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  s.rank = smith_in_place(s.D, &s.U, &s.V);
  return s;
}

std::vector<mpz_class> smith_normal_form(const IntMatrix& m) {
  IntMatrix d = m;
  smith_in_place(d, nullptr, nullptr);
  std::vector<mpz_class> diag;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) diag.push_back(d(i, i));
  return diag;
}

// ---------------------------------------------------------------- AbelianGroup

AbelianGroup AbelianGroup::from_cyclic_orders(const std::vector<mpz_class>& orders) {
  IntMatrix d(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) d(i, i) = orders[i];
  return cokernel(d);
}

std::vector<mpz_class> AbelianGroup::invariant_factors() const {
  std::vector<mpz_class> out = torsion_;
  out.insert(out.end(), static_cast<std::size_t>(free_rank_), mpz_class(0));
  return out;
}

std::optional<mpz_class> AbelianGroup::order() const {
  if (free_rank_ > 0) return std::nullopt;
  mpz_class n = 1;
  for (const auto& d : torsion_) n *= d;
  return n;
}

AbelianGroup AbelianGroup::p_part(unsigned long p) const {
  std::vector<mpz_class> orders;
  for (const auto& d : torsion_) {
    int e = mpz_divisible_ui_p(d.get_mpz_t(), p) ? vp(d, p) : 0;
    if (e > 0) orders.push_back(pow_ui(p, static_cast<unsigned long>(e)));
  }
  orders.insert(orders.end(), static_cast<std::size_t>(free_rank_), mpz_class(0));
  return from_cyclic_orders(orders);
}

int AbelianGroup::p_rank(unsigned long p) const {
  int r = free_rank_;
  for (const auto& d : torsion_)
    if (mpz_divisible_ui_p(d.get_mpz_t(), p)) ++r;
  return r;
}

long AbelianGroup::p_exponent(unsigned long p) const {
  long e = 0;
  for (const auto& d : torsion_)
    if (mpz_divisible_ui_p(d.get_mpz_t(), p)) e += vp(d, p);
  return e;
}

std::string AbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::string s;
  std::size_t i = 0;
  while (i < torsion_.size()) {
    std::size_t j = i;
    while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
    if (!s.empty()) s += " + ";
    std::string cyc = "Z/" + torsion_[i].get_str();
    s += (j - i == 1) ? cyc : "(" + cyc + ")^" + std::to_string(j - i);
    i = j;
  }
  if (free_rank_ > 0) {
    if (!s.empty()) s += " + ";
    s += free_rank_ == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank_);
  }
  return s;
}

AbelianGroup cokernel(const IntMatrix& m) {
  const auto diag = smith_normal_form(m);
  std::vector<mpz_class> tors;
  std::size_t rank = 0;
  for (const auto& d : diag) {
    if (d == 0) continue;
    ++rank;
    if (d != 1) tors.push_back(d);
  }
  AbelianGroup out;
  out.torsion_ = std::move(tors);
  out.free_rank_ = static_cast<int>(m.rows() - rank);
  return out;
}

}  // namespace iwtower
