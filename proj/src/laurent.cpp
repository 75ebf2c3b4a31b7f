#include "iwtower/laurent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

#include "iwtower/error.hpp"

namespace iwtower {

LaurentPoly LaurentPoly::constant(std::size_t nvars, const mpz_class& c) {
  LaurentPoly r(nvars);
  r.add_term(Exponent(nvars, 0), c);
  return r;
}

LaurentPoly LaurentPoly::variable(std::size_t nvars, std::size_t i, int power) {
  Exponent e(nvars, 0);
  e.at(i) = power;
  return monomial(nvars, e, 1);
}

LaurentPoly LaurentPoly::monomial(std::size_t nvars, const Exponent& e, const mpz_class& c) {
  if (e.size() != nvars) throw DomainError("monomial: exponent length mismatch");
  LaurentPoly r(nvars);
  r.add_term(e, c);
  return r;
}

bool LaurentPoly::is_constant() const {
  if (t_.empty()) return true;
  if (t_.size() > 1) return false;
  const auto& e = t_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

LaurentPoly::Exponent LaurentPoly::min_exponents() const {
  if (t_.empty()) return Exponent(n_, 0);
  Exponent m = t_.begin()->first;
  for (const auto& [e, c] : t_)
    for (std::size_t i = 0; i < n_; ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

LaurentPoly::Exponent LaurentPoly::max_exponents() const {
  if (t_.empty()) return Exponent(n_, 0);
  Exponent m = t_.begin()->first;
  for (const auto& [e, c] : t_)
    for (std::size_t i = 0; i < n_; ++i) m[i] = std::max(m[i], e[i]);
  return m;
}

int LaurentPoly::total_degree() const {
  const auto lo = min_exponents(), hi = max_exponents();
  int d = 0;
  for (std::size_t i = 0; i < n_; ++i) d += hi[i] - lo[i];
  return d;
}

mpz_class LaurentPoly::content() const {
  mpz_class g = 0;
  for (const auto& [e, c] : t_) g = gcd(g, c);
  return g;
}

void LaurentPoly::add_term(const Exponent& e, const mpz_class& c) {
  if (c == 0) return;
  auto [it, fresh] = t_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

LaurentPoly LaurentPoly::shifted(const Exponent& s) const {
  LaurentPoly r(n_);
  for (const auto& [e, c] : t_) {
    Exponent f = e;
    for (std::size_t i = 0; i < n_; ++i) f[i] += s[i];
    r.t_.emplace_hint(r.t_.end(), std::move(f), c);
  }
  return r;
}

LaurentPoly LaurentPoly::normalized() const {
  if (t_.empty()) return *this;
  Exponent m = min_exponents();
  for (auto& x : m) x = -x;
  LaurentPoly r = shifted(m);
  if (r.leading_coeff() < 0) r = -r;
  return r;
}

std::pair<IntPoly, long> LaurentPoly::specialize(const std::vector<long>& v) const {
  if (v.size() != n_) throw DomainError("specialize: wrong number of exponents");
  std::map<long, mpz_class> acc;
  for (const auto& [e, c] : t_) {
    long d = 0;
    for (std::size_t i = 0; i < n_; ++i) d += static_cast<long>(e[i]) * v[i];
    acc[d] += c;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
  if (acc.empty()) return {IntPoly(), 0};
  const long lo = acc.begin()->first;
  std::vector<mpz_class> c(static_cast<std::size_t>(acc.rbegin()->first - lo + 1));
  for (const auto& [d, x] : acc) c[static_cast<std::size_t>(d - lo)] = x;
  return {IntPoly(std::move(c)), lo};
}

mpz_class LaurentPoly::eval_at_ones() const {
  mpz_class s = 0;
  for (const auto& [e, c] : t_) s += c;
  return s;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [e, c] : r.t_) c = -c;
  return r;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r = a;
  for (const auto& [e, c] : b.t_) r.add_term(e, c);
  return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.n_ != b.n_) throw DomainError("Laurent product: variable count mismatch");
  LaurentPoly r(a.n_);
  LaurentPoly::Exponent e(a.n_);
  for (const auto& [ea, ca] : a.t_)
    for (const auto& [eb, cb] : b.t_) {
      for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

LaurentPoly operator*(const mpz_class& c, const LaurentPoly& a) {
  if (c == 0) return LaurentPoly(a.nvars());
  LaurentPoly r = a;
  for (auto& [e, x] : r.t_) x *= c;
  return r;
}

std::string LaurentPoly::to_string(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  auto name = [&](std::size_t i) {
    if (i < names.size()) return names[i];
    return n_ == 1 ? std::string("t") : "t" + std::to_string(i + 1);
  };
  std::string s;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class a = abs(c);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    std::string mono;
    for (std::size_t i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += name(i);
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      s += a.get_str();
    else
      s += (a == 1 ? "" : a.get_str() + "*") + mono;
  }
  return s;
}

// ---------------------------------------------------------------- division

namespace {

LaurentPoly::Exponent negate(LaurentPoly::Exponent e) {
  for (auto& x : e) x = -x;
  return e;
}

// Exact division of polynomials (nonnegative exponents) by lex leading terms.
bool poly_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly* q) {
  const std::size_t n = a.nvars();
  LaurentPoly r = a, quo(n);
  if (b.is_zero()) return false;
  const auto& lb = b.leading_exponent();
  const mpz_class& cb = b.leading_coeff();
  LaurentPoly::Exponent e(n);
  while (!r.is_zero()) {
    const auto& lr = r.leading_exponent();
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = lr[i] - lb[i];
      if (e[i] < 0) return false;
    }
    if (!mpz_divisible_p(r.leading_coeff().get_mpz_t(), cb.get_mpz_t())) return false;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), r.leading_coeff().get_mpz_t(), cb.get_mpz_t());
    auto m = LaurentPoly::monomial(n, e, c);
    quo.add_term(e, c);
    r = r - m * b;
  }
  if (q) *q = std::move(quo);
  return true;
}

bool laurent_divide(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly* q) {
  if (b.is_zero()) return false;
  if (a.is_zero()) {
    if (q) *q = LaurentPoly(a.nvars());
    return true;
  }
  const auto ma = a.min_exponents(), mb = b.min_exponents();
  LaurentPoly qq(a.nvars());
  if (!poly_divide(a.shifted(negate(ma)), b.shifted(negate(mb)), &qq)) return false;
  if (q) {
    LaurentPoly::Exponent s(a.nvars());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = ma[i] - mb[i];
    *q = qq.shifted(s);
  }
  return true;
}

}  // namespace

LaurentPoly exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly q(a.nvars());
  if (!laurent_divide(a, b, &q)) throw DomainError("exact_divide: " + b.to_string() + " does not divide " + a.to_string());
  return q;
}

bool divides(const LaurentPoly& b, const LaurentPoly& a) { return laurent_divide(a, b, nullptr); }

bool associated(const LaurentPoly& a, const LaurentPoly& b) { return a.normalized() == b.normalized(); }

// ---------------------------------------------------------------- gcd

namespace {

int degree_in(const LaurentPoly& a, std::size_t v) {
  int d = -1;
  for (const auto& [e, c] : a.terms()) d = std::max(d, e[v]);
  return d;
}

// Coefficients of a as a polynomial in t_v (the t_v exponent is zeroed).
std::map<int, LaurentPoly> coefficients_in(const LaurentPoly& a, std::size_t v) {
  std::map<int, LaurentPoly> out;
  for (const auto& [e, c] : a.terms()) {
    auto f = e;
    f[v] = 0;
    auto [it, fresh] = out.try_emplace(e[v], LaurentPoly(a.nvars()));
    it->second.add_term(f, c);
  }
  return out;
}

LaurentPoly times_var_power(const LaurentPoly& a, std::size_t v, int k) {
  LaurentPoly::Exponent s(a.nvars(), 0);
  s[v] = k;
  return a.shifted(s);
}

struct GcdContext {
  int cap;
  void check(const LaurentPoly& x) const {
    if (x.total_degree() > cap)
      throw LimitError("gcd: intermediate degree " + std::to_string(x.total_degree()) + " exceeds the cap " +
                       std::to_string(cap));
  }
};

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b, const GcdContext& ctx);

LaurentPoly content_in(const LaurentPoly& a, std::size_t v, const GcdContext& ctx) {
  LaurentPoly g(a.nvars());
  for (const auto& [d, c] : coefficients_in(a, v)) {
    g = poly_gcd(g, c, ctx);
    if (g.is_constant() && abs(g.leading_coeff()) == 1) break;
  }
  return g;
}

LaurentPoly primitive_in(const LaurentPoly& a, std::size_t v, const GcdContext& ctx) {
  if (a.is_zero()) return a;
  return exact_divide(a, content_in(a, v, ctx));
}

LaurentPoly pseudo_remainder(LaurentPoly r, const LaurentPoly& b, std::size_t v, const GcdContext& ctx) {
  const int db = degree_in(b, v);
  const LaurentPoly lb = coefficients_in(b, v).rbegin()->second;
  while (!r.is_zero()) {
    const int dr = degree_in(r, v);
    if (dr < db) break;
    const LaurentPoly lr = coefficients_in(r, v).rbegin()->second;
    r = lb * r - times_var_power(lr * b, v, dr - db);
    ctx.check(r);
  }
  return r;
}

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b, const GcdContext& ctx) {
  const std::size_t n = a.nvars();
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  // main variable: the last one that occurs
  int v = -1;
  for (int i = static_cast<int>(n) - 1; i >= 0 && v < 0; --i)
    if (degree_in(a, static_cast<std::size_t>(i)) > 0 || degree_in(b, static_cast<std::size_t>(i)) > 0) v = i;
  if (v < 0) return LaurentPoly::constant(n, gcd(a.leading_coeff(), b.leading_coeff()));
  const std::size_t mv = static_cast<std::size_t>(v);

  const LaurentPoly ca = content_in(a, mv, ctx), cb = content_in(b, mv, ctx);
  const LaurentPoly c = poly_gcd(ca, cb, ctx);
  LaurentPoly pa = exact_divide(a, ca), pb = exact_divide(b, cb);
  if (degree_in(pa, mv) < degree_in(pb, mv)) std::swap(pa, pb);
  LaurentPoly g = LaurentPoly::constant(n, 1);
  for (;;) {
    if (degree_in(pb, mv) == 0) break;  // primitive of degree 0: a unit
    LaurentPoly r = pseudo_remainder(pa, pb, mv, ctx);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, mv, ctx);
  }
  return (c * primitive_in(g, mv, ctx)).normalized();
}

}  // namespace

LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b, int degree_cap) {
  if (a.nvars() != b.nvars()) throw DomainError("gcd: variable count mismatch");
  GcdContext ctx{degree_cap};
  ctx.check(a);
  ctx.check(b);
  return poly_gcd(a.normalized(), b.normalized(), ctx);
}

// ---------------------------------------------------------------- determinant

LaurentPoly sparse_determinant(const std::vector<std::vector<LaurentPoly>>& m, std::size_t nvars,
                               std::size_t state_cap) {
  const std::size_t n = m.size();
  if (n == 0) return LaurentPoly::constant(nvars, 1);
  if (n > 63) throw LimitError("sparse_determinant: matrix larger than 63 x 63");
  for (const auto& row : m)
    if (row.size() != n) throw DomainError("sparse_determinant: matrix is not square");

  // state: set of columns used by the rows processed so far
  std::unordered_map<std::uint64_t, LaurentPoly> cur{{0, LaurentPoly::constant(nvars, 1)}}, next;
  for (std::size_t i = 0; i < n; ++i) {
    next.clear();
    for (const auto& [used, acc] : cur) {
      for (std::size_t j = 0; j < n; ++j) {
        if ((used >> j) & 1u || m[i][j].is_zero()) continue;
        // inversions created by placing column j after the used columns above it
        const int inv = std::popcount(used >> (j + 1));
        LaurentPoly term = acc * m[i][j];
        if (inv % 2) term = -term;
        auto [it, fresh] = next.try_emplace(used | (std::uint64_t{1} << j), LaurentPoly(nvars));
        it->second = it->second + term;
      }
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    if (next.size() > state_cap) throw LimitError("sparse_determinant: too many partial states");
    cur.swap(next);
  }
  if (cur.empty()) return LaurentPoly(nvars);
  return cur.begin()->second;
}

}  // namespace iwtower
