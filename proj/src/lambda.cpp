#include "iwtower/lambda.hpp"

#include <algorithm>

#include "iwtower/error.hpp"

namespace iwtower {

namespace {

const mpz_class kZero = 0;

// Series a * b mod (m, T^len).
std::vector<mpz_class> mul_trunc(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                 std::size_t len, const mpz_class& m) {
  std::vector<mpz_class> r(len);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
  }
  for (auto& x : r) x = mod_nonneg(x, m);
  return r;
}

// Inverse of a unit series mod (m, T^len).
std::vector<mpz_class> inverse_series(const std::vector<mpz_class>& c, std::size_t len, const mpz_class& m) {
  std::vector<mpz_class> u(len);
  mpz_class inv0;
  if (mpz_invert(inv0.get_mpz_t(), c[0].get_mpz_t(), m.get_mpz_t()) == 0)
    throw DomainError("series is not a unit");
  u[0] = inv0;
  for (std::size_t n = 1; n < len; ++n) {
    mpz_class acc = 0;
    for (std::size_t i = 1; i <= n && i < c.size(); ++i) acc += c[i] * u[n - i];
    u[n] = mod_nonneg(-acc * inv0, m);
  }
  return u;
}

int legendre(unsigned long n, unsigned long p) {  // v_p(n!)
  int v = 0;
  while (n) {
    n /= p;
    v += static_cast<int>(n);
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------- element

LambdaElement::LambdaElement(unsigned long p, int precision, int truncation, std::vector<mpz_class> coeffs,
                             bool polynomial)
    : p_(p), k_(precision), D_(truncation), poly_(polynomial), c_(std::move(coeffs)) {
  require_prime(p);
  if (k_ < 1) throw InputError("Lambda precision must be >= 1");
  if (D_ < 1) throw InputError("Lambda truncation must be >= 1");
  const mpz_class m = modulus();
  for (auto& x : c_) x = mod_nonneg(x, m);
  if (poly_) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    D_ = std::max<int>(D_, static_cast<int>(c_.size()));
  }
  c_.resize(static_cast<std::size_t>(D_));
}

LambdaElement LambdaElement::from_poly_T(unsigned long p, int precision, int truncation, const IntPoly& f) {
  return LambdaElement(p, precision, truncation, f.coeffs(), true);
}

LambdaElement LambdaElement::from_poly_t(unsigned long p, int precision, int truncation, const IntPoly& f) {
  return from_poly_T(p, precision, truncation, f.taylor_shift(1));
}

const mpz_class& LambdaElement::residue(std::size_t i) const { return i < c_.size() ? c_[i] : kZero; }

bool LambdaElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpz_class& x) { return x == 0; });
}

int LambdaElement::degree() const {
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
    if (c_[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

Valuation LambdaElement::min_valuation() const {
  int v = k_;
  for (const auto& x : c_)
    if (x != 0) v = std::min(v, iwtower::vp(x, p_));
  return {v, v == k_};
}

IntPoly LambdaElement::to_poly() const { return IntPoly(c_); }

LambdaElement LambdaElement::with_precision(int k) const {
  if (k > k_) throw PrecisionError("cannot raise the precision of a Lambda element");
  return LambdaElement(p_, k, D_, c_, poly_);
}

LambdaElement LambdaElement::with_truncation(int D) const {
  if (D >= D_) {
    if (!poly_ && D > D_) throw PrecisionError("cannot raise the truncation of a power series");
    return LambdaElement(p_, k_, D, c_, poly_);
  }
  std::vector<mpz_class> c(c_.begin(), c_.begin() + D);
  bool still_poly = poly_ && degree() < D;
  return LambdaElement(p_, k_, D, std::move(c), still_poly);
}

LambdaElement LambdaElement::operator-() const {
  std::vector<mpz_class> c = c_;
  for (auto& x : c) x = -x;
  return LambdaElement(p_, k_, D_, std::move(c), poly_);
}

namespace {
void check_compatible(const LambdaElement& a, const LambdaElement& b) {
  if (a.prime() != b.prime()) throw DomainError("Lambda elements over different primes");
}
int combined_truncation(const LambdaElement& a, const LambdaElement& b, int poly_need) {
  if (a.is_polynomial() && b.is_polynomial()) return std::max({a.truncation(), b.truncation(), poly_need});
  if (a.is_polynomial()) return b.truncation();
  if (b.is_polynomial()) return a.truncation();
  return std::min(a.truncation(), b.truncation());
}
}  // namespace

LambdaElement operator+(const LambdaElement& a, const LambdaElement& b) {
  check_compatible(a, b);
  const int D = combined_truncation(a, b, 1);
  std::vector<mpz_class> c(static_cast<std::size_t>(D));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.residue(i) + b.residue(i);
  return LambdaElement(a.p_, std::min(a.k_, b.k_), D, std::move(c), a.poly_ && b.poly_);
}

LambdaElement operator-(const LambdaElement& a, const LambdaElement& b) { return a + (-b); }

LambdaElement operator*(const LambdaElement& a, const LambdaElement& b) {
  check_compatible(a, b);
  const int D = combined_truncation(a, b, a.degree() + b.degree() + 1);
  const int k = std::min(a.k_, b.k_);
  auto c = mul_trunc(a.c_, b.c_, static_cast<std::size_t>(D), pow_ui(a.p_, static_cast<unsigned long>(k)));
  return LambdaElement(a.p_, k, D, std::move(c), a.poly_ && b.poly_);
}

bool operator==(const LambdaElement& a, const LambdaElement& b) {
  check_compatible(a, b);
  const int k = std::min(a.k_, b.k_);
  int D = std::min(a.D_, b.D_);
  if (a.poly_ && b.poly_) D = std::max(a.D_, b.D_);
  const mpz_class m = pow_ui(a.p_, static_cast<unsigned long>(k));
  for (std::size_t i = 0; i < static_cast<std::size_t>(D); ++i)
    if (mod_nonneg(a.residue(i) - b.residue(i), m) != 0) return false;
  return true;
}

std::string LambdaElement::to_string() const {
  // balanced representatives, so small negative coefficients read naturally
  const mpz_class m = modulus();
  std::vector<mpz_class> c = c_;
  for (auto& x : c)
    if (2 * x > m) x -= m;
  std::string s = IntPoly(c).to_string("T");
  if (!poly_) s += " + O(T^" + std::to_string(D_) + ")";
  return s + " mod " + std::to_string(p_) + "^" + std::to_string(k_);
}

// ---------------------------------------------------------------- Weierstrass

WeierstrassData weierstrass_prepare(const LambdaElement& f) {
  const unsigned long p = f.prime();
  const int k = f.precision();
  const Valuation mv = f.min_valuation();
  if (mv.at_least) throw PrecisionError("weierstrass_prepare: element vanishes mod (p^k, T^D); precision exhausted");
  const int mu = mv.value;
  const int kp = k - mu;
  const mpz_class m = pow_ui(p, static_cast<unsigned long>(kp));
  const mpz_class pmu = pow_ui(p, static_cast<unsigned long>(mu));

  const int D = f.truncation();
  // g = f / p^mu; lambda = first unit coefficient
  int lambda = -1;
  for (int i = 0; i < D && lambda < 0; ++i) {
    const mpz_class& c = f.residue(static_cast<std::size_t>(i));
    if (c != 0 && iwtower::vp(c, p) == mu) lambda = i;
  }

  // A polynomial has an exact zero tail, so extend the working length until
  // the contraction below reaches full precision.
  const int L = f.is_polynomial() ? std::max(D, f.degree() + 1) + (kp + 1) * lambda + 1 : D;
  std::vector<mpz_class> g(static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < g.size(); ++i) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), f.residue(i).get_mpz_t(), pmu.get_mpz_t());
    g[i] = mod_nonneg(q, m);
  }

  WeierstrassData w;
  w.mu = mu;
  w.lambda = lambda;
  if (lambda == 0) {
    w.distinguished = LambdaElement(p, kp, 1, {mpz_class(1)}, true);
    g.resize(static_cast<std::size_t>(D));
    w.unit = LambdaElement(p, kp, D, g, false);
    w.precision = kp;
    w.unit_precision = kp;
    return w;
  }

  // g = B + T^lambda C with C a unit. Solve h = 1 - tau(B C^{-1} h), where tau
  // drops the first lambda coefficients; then q = C^{-1} h satisfies
  // q g = T^lambda - r with deg r < lambda.
  const std::size_t lam = static_cast<std::size_t>(lambda);
  const std::size_t Lc = static_cast<std::size_t>(L) - lam;
  std::vector<mpz_class> B(g.begin(), g.begin() + static_cast<long>(lam));
  std::vector<mpz_class> C(g.begin() + static_cast<long>(lam), g.end());
  const auto U = inverse_series(C, Lc, m);
  const auto BU = mul_trunc(B, U, Lc, m);

  std::vector<mpz_class> h(Lc), term(Lc);
  h[0] = 1;
  term[0] = 1;
  for (int j = 1; j <= kp; ++j) {
    auto y = mul_trunc(BU, term, Lc, m);
    bool nonzero = false;
    for (std::size_t i = 0; i < Lc; ++i) {
      term[i] = i + lam < Lc ? mod_nonneg(-y[i + lam], m) : mpz_class(0);
      if (term[i] != 0) nonzero = true;
    }
    if (!nonzero) break;
    for (std::size_t i = 0; i < Lc; ++i) h[i] = mod_nonneg(h[i] + term[i], m);
  }
  const auto q = mul_trunc(U, h, Lc, m);
  const auto qg = mul_trunc(q, g, lam, m);

  // h_i is exact modulo p^ceil((Lc - i) / lambda) (capped at kp).
  auto digits_at = [&](std::size_t i) {
    const long gap = static_cast<long>(Lc) - static_cast<long>(i);
    if (gap <= 0) return 0;
    const long d = (gap + lambda - 1) / lambda;
    return static_cast<int>(std::min<long>(kp, d));
  };
  w.precision = digits_at(lam - 1);
  const std::size_t unit_len = static_cast<std::size_t>(D) - lam;
  w.unit_precision = unit_len > 0 ? digits_at(unit_len - 1) : kp;
  if (w.precision < 1)
    throw PrecisionError("weierstrass_prepare: truncation too short to determine the distinguished polynomial");

  std::vector<mpz_class> P(qg.begin(), qg.end());
  P.push_back(1);
  w.distinguished = LambdaElement(p, w.precision, lambda + 1, P, true);
  if (unit_len > 0) {
    auto unit = inverse_series(q, unit_len, m);
    w.unit = LambdaElement(p, std::max(1, w.unit_precision), static_cast<int>(unit_len), unit, false);
  } else {
    w.unit = LambdaElement(p, kp, 1, {}, false);
  }
  return w;
}

// ---------------------------------------------------------------- named elements

LambdaElement nu_poly(unsigned long p, int n, int precision) {
  require_prime(p);
  if (n < 0) throw InputError("nu_poly: level must be >= 0");
  return LambdaElement::from_poly_t(p, precision, 1, nu_t(p, n));
}

LambdaElement cyclotomic_poly(unsigned long p, int j, int precision) {
  require_prime(p);
  return LambdaElement::from_poly_t(p, precision, 1, cyclotomic_prime_power_t(p, j));
}

LambdaElement binom_series(const PAdicInt& v, int truncation) {
  const unsigned long p = v.prime();
  if (truncation < 1) throw InputError("binom_series: truncation must be >= 1");
  const int kout = v.precision() - legendre(static_cast<unsigned long>(truncation - 1), p);
  if (kout < 1)
    throw PrecisionError("binom_series: precision " + std::to_string(v.precision()) +
                         " is exhausted by the factorials up to " + std::to_string(truncation - 1) + "!");
  // binom(v, i) for the integer representative agrees with the p-adic value
  // modulo p^(k - v_p(i!)).
  std::vector<mpz_class> c(static_cast<std::size_t>(truncation));
  mpz_class b = 1;
  const mpz_class& r = v.residue();
  for (int i = 0; i < truncation; ++i) {
    if (i > 0) {
      b *= (r - (i - 1));
      mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(i));
    }
    c[static_cast<std::size_t>(i)] = b;
  }
  return LambdaElement(p, kout, truncation, std::move(c), false);
}

// ---------------------------------------------------------------- cyclotomic profile

std::vector<CyclotomicFactor> cyclotomic_factor_profile(const LambdaElement& f) {
  const unsigned long p = f.prime();
  const auto w = weierstrass_prepare(f);
  const int prec = w.precision;
  const mpz_class m = pow_ui(p, static_cast<unsigned long>(prec));
  auto reduce = [&](const IntPoly& a) {
    std::vector<mpz_class> c = a.coeffs();
    for (auto& x : c) x = mod_nonneg(x, m);
    return IntPoly(std::move(c));
  };
  IntPoly cur = reduce(w.distinguished.to_poly());
  std::vector<CyclotomicFactor> out;
  for (int j = 1;; ++j) {
    const IntPoly phi = cyclotomic_prime_power_t(p, j).taylor_shift(1);
    if (phi.degree() > cur.degree()) break;
    int e = 0;
    while (phi.degree() <= cur.degree()) {
      auto qr = divmod_monic(cur, phi);
      if (!reduce(qr.remainder).is_zero()) break;
      cur = reduce(qr.quotient);
      ++e;
    }
    if (e > 0) out.push_back({j, e});
  }
  return out;
}

// ---------------------------------------------------------------- resultants

int resultant_valuation(const IntPoly& f_t, const LambdaElement& g) {
  if (!g.is_polynomial()) throw DomainError("resultant_valuation: g must be a polynomial element");
  const unsigned long p = g.prime();
  const int k = g.precision();
  const mpz_class mod = g.modulus();
  const IntPoly fT = f_t.taylor_shift(1);
  if (fT.is_zero() || g.is_zero()) throw PrecisionError("resultant_valuation: resultant vanishes at working precision");
  const int m = fT.degree(), n = g.degree();
  const std::size_t N = static_cast<std::size_t>(m + n);
  if (N == 0) return 0;

  // Sylvester matrix: n shifted copies of f, m shifted copies of g.
  IntMatrix S(N, N);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i)
      S(static_cast<std::size_t>(r), static_cast<std::size_t>(r + m - i)) = mod_nonneg(fT.coeff(static_cast<std::size_t>(i)), mod);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i)
      S(static_cast<std::size_t>(n + r), static_cast<std::size_t>(r + n - i)) = g.residue(static_cast<std::size_t>(i));

  // Triangularize over Z/p^k pivoting on the smallest valuation in the whole
  // remaining block; the Schur complement stays exact modulo p^k.
  int total = 0;
  for (std::size_t t = 0; t < N; ++t) {
    std::size_t pi = N, pj = N;
    int best = k;
    for (std::size_t i = t; i < N; ++i)
      for (std::size_t j = t; j < N; ++j) {
        if (S(i, j) == 0) continue;
        int v = iwtower::vp(S(i, j), p);
        if (v < best) best = v, pi = i, pj = j;
      }
    if (pi == N)
      throw PrecisionError("resultant_valuation: valuation is at least " + std::to_string(total + k) +
                           ", beyond the working precision");
    S.swap_rows(t, pi);
    S.swap_cols(t, pj);
    total += best;
    const mpz_class pv = pow_ui(p, static_cast<unsigned long>(best));
    mpz_class u, uinv;
    mpz_divexact(u.get_mpz_t(), S(t, t).get_mpz_t(), pv.get_mpz_t());
    mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
    for (std::size_t i = t + 1; i < N; ++i) {
      if (S(i, t) == 0) continue;
      mpz_class fac;
      mpz_divexact(fac.get_mpz_t(), S(i, t).get_mpz_t(), pv.get_mpz_t());
      fac = mod_nonneg(fac * uinv, mod);
      for (std::size_t j = t; j < N; ++j)
        if (S(t, j) != 0) S(i, j) = mod_nonneg(S(i, j) - fac * S(t, j), mod);
    }
  }
  return total;
}

// ---------------------------------------------------------------- normal forms

void validate_nf(const LambdaModuleNF& nf) {
  require_prime(nf.p);
  if (nf.free_rank < 0) throw InputError("normal form: negative free rank");
  for (const auto& [f, e] : nf.poly_factors) {
    if (f.prime() != nf.p) throw InputError("normal form: factor over a different prime");
    if (e < 1) throw InputError("normal form: exponent must be >= 1");
    const int d = f.degree();
    if (!f.is_polynomial() || d < 1 || f.residue(static_cast<std::size_t>(d)) != 1)
      throw InputError("normal form: factor is not a monic polynomial of positive degree");
    for (int i = 0; i < d; ++i)
      if (!mpz_divisible_ui_p(f.residue(static_cast<std::size_t>(i)).get_mpz_t(), nf.p))
        throw InputError("normal form: factor " + f.to_string() + " is not distinguished");
  }
  for (int m : nf.p_factors)
    if (m < 1) throw InputError("normal form: p-power exponent must be >= 1");
}

NFInvariants nf_invariants(const LambdaModuleNF& nf) {
  validate_nf(nf);
  if (nf.free_rank > 0) throw DomainError("nf_invariants: module has a free part");
  NFInvariants out;
  for (const auto& [f, e] : nf.poly_factors) out.lambda += e * f.degree();
  for (int m : nf.p_factors) out.mu += m;
  return out;
}

QuotientOrder nf_quotient_order(const LambdaModuleNF& nf, int n) {
  validate_nf(nf);
  if (n < 0) throw InputError("nf_quotient_order: level must be >= 0");
  if (n == 0) return {false, 0};
  if (nf.free_rank > 0) return {true, 0};
  QuotientOrder out;
  for (const auto& [f, e] : nf.poly_factors) {
    for (const auto& c : cyclotomic_factor_profile(f))
      if (c.j <= n) return {true, 0};
    out.exponent += static_cast<long>(e) * resultant_valuation(nu_t(nf.p, n), f);
  }
  const long pn = pow_ui(nf.p, static_cast<unsigned long>(n)).get_si();
  for (int m : nf.p_factors) out.exponent += static_cast<long>(m) * (pn - 1);
  return out;
}

QuotientStructure nf_quotient_structure(const LambdaModuleNF& nf, int n) {
  validate_nf(nf);
  if (n < 0) throw InputError("nf_quotient_structure: level must be >= 0");
  QuotientStructure out;
  const long pn = pow_ui(nf.p, static_cast<unsigned long>(n)).get_si();
  out.free_rank = nf.free_rank * static_cast<int>(pn - 1);
  for (int m : nf.p_factors) out.torsion_exponent += static_cast<long>(m) * (pn - 1);
  const IntPoly nu = nu_t(nf.p, n).taylor_shift(1);
  for (const auto& [f, e] : nf.poly_factors) {
    const IntPoly g = f.to_poly().pow(static_cast<unsigned>(e));
    const std::size_t d = static_cast<std::size_t>(g.degree());
    IntMatrix m(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto col = divmod_monic(nu * IntPoly::monomial(1, j), g).remainder;
      for (std::size_t i = 0; i < d; ++i) m(i, j) = col.coeff(i);
    }
    for (const auto& x : smith_normal_form(m)) {
      if (x == 0) {
        ++out.free_rank;
        continue;
      }
      const int v = vp(x, nf.p);
      if (v >= f.precision()) throw PrecisionError("nf_quotient_structure: torsion exceeds working precision");
      out.torsion_exponent += v;
    }
  }
  return out;
}

LimitShape direct_limit_shape(const LambdaModuleNF& nf) {
  validate_nf(nf);
  if (nf.free_rank > 0) throw DomainError("direct_limit_shape: module has a free part");
  LimitShape s;
  for (const auto& [f, e] : nf.poly_factors) {
    if (!cyclotomic_factor_profile(f).empty())
      throw DomainError("direct_limit_shape: factor " + f.to_string() + " has a cyclotomic divisor");
    s.lambda += e * f.degree();
  }
  s.has_mu = !nf.p_factors.empty();
  return s;
}

}  // namespace iwtower
