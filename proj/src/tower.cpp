#include "iwtower/tower.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "iwtower/error.hpp"

namespace iwtower {

namespace {

long pow_long(unsigned long p, int n) { return pow_ui(p, static_cast<unsigned long>(n)).get_si(); }

long mod_long(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

bool is_s3(const TowerSpec& spec) { return !spec.base.has_value(); }

// Integer tau values are rebuilt at the new precision; p-adic input keeps the
// digits it was given.
TowerSpec at_precision(const TowerSpec& spec, int k) {
  TowerSpec s = spec;
  s.precision = k;
  if (s.tau.integers) s.tau = TauMap::from_integers(spec.p, k, *s.tau.integers);
  for (std::size_t i = 0; i < s.tau.roots.size() && i < s.tau.values.size(); ++i)
    if (s.tau.roots[i]) s.tau.values[i] = hensel_root(*s.tau.roots[i], spec.p, k);
  return s;
}

// Runs f at increasing precision until it stops raising PrecisionError.
template <typename F>
auto with_escalation(const TowerSpec& spec, F f) {
  const int cap = precision_cap();
  int k = spec.precision;
  for (;;) {
    try {
      return f(at_precision(spec, k), k);
    } catch (const PrecisionError& e) {
      if (2 * k > cap)
        throw PrecisionError(std::string(e.what()) + " (precision cap " + std::to_string(cap) + " reached)");
      k *= 2;
    }
  }
}

int rebase_level(const TowerSpec& spec) {
  if (!is_s3(spec) && spec.tau.values.empty()) return 0;
  if (!is_s3(spec)) {
    int r = 0;
    for (const auto& v : spec.tau.values)
      if (!v.valuation().at_least) r = std::max(r, v.valuation().value);
    return r;
  }
  return validate_tau(spec.link, spec.tau).rebase_level;
}

void require_branched(const TowerSpec& spec) {
  if (!is_s3(spec)) return;
  const auto profile = validate_tau(spec.link, spec.tau);
  for (std::size_t i = 0; i < profile.branched.size(); ++i)
    if (!profile.branched[i])
      throw DomainError("component " + std::to_string(i + 1) +
                        " is unbranched; the resultant path needs every component branched");
}

}  // namespace

int precision_cap() {
  const char* env = std::getenv("IWTOWER_PRECISION_CAP");
  if (!env || !*env) return 1024;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1'000'000) throw InputError("IWTOWER_PRECISION_CAP must be a positive integer");
  return static_cast<int>(v);
}

// ---------------------------------------------------------------- tau

TauMap TauMap::tln(unsigned long p, int precision, int components) {
  return from_integers(p, precision, std::vector<long>(static_cast<std::size_t>(components), 1));
}

TauMap TauMap::from_integers(unsigned long p, int precision, const std::vector<long>& v) {
  TauMap t;
  for (long x : v) t.values.emplace_back(p, precision, x);
  t.integers = v;
  return t;
}

bool BranchProfile::totally_branched() const {
  return rebase_level == 0 && std::all_of(branched.begin(), branched.end(), [](bool b) { return b; });
}

BranchProfile validate_tau(const LinkPresentation& link, const TauMap& tau) {
  if (tau.values.size() != static_cast<std::size_t>(link.components))
    throw InputError("tau has " + std::to_string(tau.values.size()) + " entries for a " +
                     std::to_string(link.components) + "-component link");
  BranchProfile out;
  bool unit = false;
  for (const auto& v : tau.values) {
    if (v.prime() != tau.values.front().prime()) throw InputError("tau values over different primes");
    const auto val = v.valuation();
    out.branched.push_back(!val.at_least);
    if (!val.at_least) out.rebase_level = std::max(out.rebase_level, val.value);
    unit = unit || v.is_unit();
  }
  if (!unit) throw DomainError("invalid tower character: every tau(mu_i) is divisible by p");
  return out;
}

// ---------------------------------------------------------------- spec

int TowerSpec::effective_truncation() const {
  return truncation > 0 ? truncation : static_cast<int>(pow_long(p, n_max)) + 8;
}

bool TowerSpec::is_tln() const {
  return tau.integers && std::all_of(tau.integers->begin(), tau.integers->end(), [](long x) { return x == 1; });
}

void validate_spec(const TowerSpec& spec) {
  require_prime(spec.p);
  if (spec.n_max < 2) throw InputError("n_max must be at least 2");
  if (spec.precision < 1) throw InputError("precision must be positive");
  if (spec.truncation < 0) throw InputError("truncation must be non-negative");
  if (spec.oracle_max < 1) throw InputError("oracle bound must be positive");
  for (const auto& v : spec.tau.values)
    if (v.prime() != spec.p) throw InputError("tau values are over a different prime than the tower");
  if (spec.base) {
    if (spec.base->lambda_element.empty()) throw InputError("QHS3 base needs a characteristic element");
    for (const auto& x : spec.base->h1)
      if (x == 0) throw DomainError("base has infinite H_1, not a rational homology sphere");
    return;
  }
  validate_tau(spec.link, spec.tau);
  if (spec.alexander && spec.alexander->nvars() != static_cast<std::size_t>(spec.link.components))
    throw InputError("Alexander polynomial override has the wrong number of variables");
}

LaurentPoly link_alexander(const TowerSpec& spec) {
  if (spec.alexander) return *spec.alexander;
  return multivariable_alexander(spec.link);
}

// ---------------------------------------------------------------- characteristic element

LambdaElement reduced_alexander(const TowerSpec& spec) {
  validate_spec(spec);
  const unsigned long p = spec.p;
  const int k = spec.precision;
  const int D = spec.effective_truncation();
  if (spec.base) {
    LambdaElement f(p, k, D, spec.base->lambda_element, true);
    if (f.is_zero()) throw DomainError("characteristic element vanishes: the tower is not torsion");
    return f;
  }
  const LaurentPoly delta = link_alexander(spec);
  const std::size_t d = static_cast<std::size_t>(spec.link.components);
  if (spec.tau.integers) {
    IntPoly f = delta.specialize(*spec.tau.integers).first;
    if (d >= 2) f = f * IntPoly::from_longs({-1, 1});
    if (f.is_zero()) throw DomainError("characteristic element vanishes: the tower is not torsion");
    return LambdaElement::from_poly_T(p, k, D, f.taylor_shift(1));
  }
  // t^w = (1+T)^w for every monomial, w = sum e_i v_i in Z_p
  LambdaElement acc(p, k, D, {}, false);
  for (const auto& [e, c] : delta.terms()) {
    PAdicInt w(p, k, 0);
    for (std::size_t i = 0; i < d; ++i) w = w + PAdicInt(p, k, e[i]) * spec.tau.values[i];
    const auto b = binom_series(w, D);
    acc = acc.with_precision(std::min(acc.precision(), b.precision())) +
          LambdaElement(p, b.precision(), D, {c}, true) * b;
  }
  if (d >= 2) acc = acc * LambdaElement::from_poly_T(p, acc.precision(), D, IntPoly::from_longs({0, 1}));
  if (acc.is_zero()) throw PrecisionError("characteristic element vanishes at working precision");
  return acc;
}

// ---------------------------------------------------------------- fast path

namespace {

// Does Phi_{p^j} divide the characteristic element of the sublink of
// components with v_p(v_i) < j?
bool sublink_block_vanishes(const TowerSpec& spec, int j) {
  std::vector<bool> keep;
  TauMap t;
  for (const auto& v : spec.tau.values) {
    const auto val = v.valuation();
    keep.push_back(!val.at_least && val.value < j);
    if (keep.back()) t.values.push_back(v);
  }
  if (std::count(keep.begin(), keep.end(), true) < 2) return false;  // knots: Delta(1) = 1
  TowerSpec sub = spec;
  sub.link = sublink(spec.link, keep);
  sub.alexander.reset();
  if (spec.tau.integers) {
    std::vector<long> ints;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if (keep[i]) ints.push_back((*spec.tau.integers)[i]);
    t.integers = ints;
  }
  sub.tau = t;
  LambdaElement f;
  try {
    f = reduced_alexander(sub);
  } catch (const DomainError&) {
    return true;  // the sublink's characteristic element vanishes
  }
  for (const auto& c : cyclotomic_factor_profile(f))
    if (c.j == j) return true;
  return false;
}

// The characteristic element with everything the per-level questions need,
// computed once.
struct Prepared {
  LambdaElement delta;
  WeierstrassData w;
  std::vector<CyclotomicFactor> profile;
  int rebase = 0;
  std::vector<bool> sublink_vanishes;  // index j - 1 for j = 1..rebase
};

Prepared prepare(const TowerSpec& spec, const LambdaElement& delta) {
  Prepared P;
  P.delta = delta;
  P.w = weierstrass_prepare(delta);
  P.profile = cyclotomic_factor_profile(delta);
  P.rebase = rebase_level(spec);
  if (is_s3(spec))
    for (int j = 1; j <= P.rebase; ++j) P.sublink_vanishes.push_back(sublink_block_vanishes(spec, j));
  return P;
}

bool qhs3_prepared(const TowerSpec& spec, const Prepared& P, int n) {
  if (spec.base)
    for (const auto& x : spec.base->h1)
      if (x == 0) return false;
  for (const auto& c : P.profile)
    if (c.j > P.rebase && c.j <= n) return false;
  for (int j = 1; j <= std::min(n, static_cast<int>(P.sublink_vanishes.size())); ++j)
    if (P.sublink_vanishes[static_cast<std::size_t>(j - 1)]) return false;
  return true;
}

long fast_prepared(const TowerSpec& spec, const Prepared& P, int n) {
  const int n0 = P.rebase;
  if (n < n0) throw DomainError("level " + std::to_string(n) + " lies below the re-basing level " + std::to_string(n0));
  require_branched(spec);
  if (!qhs3_prepared(spec, P, n))
    throw DomainError("level " + std::to_string(n) + " is not a rational homology sphere");
  if (n == n0) return 0;
  const IntPoly f = divmod_monic(nu_t(spec.p, n), nu_t(spec.p, n0)).quotient;
  return static_cast<long>(P.w.mu) * f.degree() + resultant_valuation(f, P.w.distinguished);
}

}  // namespace

bool qhs3_check(const TowerSpec& spec, const LambdaElement& delta, int n) {
  return qhs3_prepared(spec, prepare(spec, delta), n);
}

bool qhs3_check(const TowerSpec& spec, int n) { return qhs3_check(spec, reduced_alexander(spec), n); }

long level_order_fast(const TowerSpec& spec, const LambdaElement& delta, int n) {
  return fast_prepared(spec, prepare(spec, delta), n);
}

long level_order_fast(const TowerSpec& spec, int n) {
  return with_escalation(spec, [&](const TowerSpec& s, int) { return level_order_fast(s, reduced_alexander(s), n); });
}

// ---------------------------------------------------------------- oracle

AbelianGroup cyclic_cover_homology(const LinkPresentation& link, const std::vector<long>& tau, long N) {
  if (N < 1) throw InputError("cover degree must be positive");
  if (tau.size() != static_cast<std::size_t>(link.components)) throw InputError("tau size does not match the link");
  const std::size_t g = link.generators.size();
  const std::size_t n = static_cast<std::size_t>(N);
  std::vector<long> a(g);
  for (std::size_t j = 0; j < g; ++j)
    a[j] = mod_long(tau[static_cast<std::size_t>(link.generators[j].component)], N);

  // Schreier transversal x_u^m, x_u a generator with a unit image.
  std::size_t u = g;
  for (std::size_t j = 0; j < g && u == g; ++j)
    if (std::gcd(a[j], N) == 1) u = j;
  if (u == g) throw DomainError("tau mod " + std::to_string(N) + " is not surjective");
  long inv = 0;
  while (mod_long(inv * a[u], N) != 1 % N) ++inv;

  auto col = [&](long coset, std::size_t j) { return static_cast<std::size_t>(coset) * g + j; };
  std::vector<std::vector<std::pair<std::size_t, long>>> rels;

  // Schreier generators s_{k,u} with rep(k) x_u = rep(k + a_u) are trivial.
  for (long k = 0; k < N; ++k)
    if (mod_long(k * inv, N) != N - 1) rels.push_back({{col(k, u), 1}});

  for (const auto& r : link.relators)
    for (long k = 0; k < N; ++k) {
      std::vector<std::pair<std::size_t, long>> row;
      long c = k;
      for (const auto& l : r) {
        const std::size_t j = static_cast<std::size_t>(l.gen);
        if (l.power > 0) {
          row.emplace_back(col(c, j), 1);
          c = mod_long(c + a[j], N);
        } else {
          c = mod_long(c - a[j], N);
          row.emplace_back(col(c, j), -1);
        }
      }
      rels.push_back(std::move(row));
    }

  // Filling: each meridian orbit's closed lift bounds a disc in the branched cover.
  for (std::size_t j = 0; j < g; ++j) {
    const long o = N / std::gcd(a[j], N);
    for (long r = 0; r < N; ++r) {
      std::vector<std::pair<std::size_t, long>> row;
      for (long s = 0; s < o; ++s) row.emplace_back(col(mod_long(r + s * a[j], N), j), 1);
      rels.push_back(std::move(row));
    }
  }

  IntMatrix m(n * g, rels.size());
  for (std::size_t c = 0; c < rels.size(); ++c)
    for (const auto& [i, v] : rels[c]) m(i, c) += v;
  return cokernel(m);
}

AbelianGroup level_homology_oracle(const TowerSpec& spec, int n) {
  validate_spec(spec);
  if (!is_s3(spec)) throw DomainError("the oracle only handles towers over S^3");
  if (n < 0) throw InputError("level must be non-negative");
  const long N = pow_long(spec.p, n);
  if (N > spec.oracle_max)
    throw LimitError("cover degree " + std::to_string(N) + " exceeds the oracle bound " +
                     std::to_string(spec.oracle_max));
  std::vector<long> t;
  for (const auto& v : spec.tau.values) {
    if (v.precision() < n) throw PrecisionError("tau is known to fewer than " + std::to_string(n) + " digits");
    mpz_class r = v.residue() % N;
    t.push_back(r.get_si());
  }
  return cyclic_cover_homology(spec.link, t, N);
}

// ---------------------------------------------------------------- invariants

namespace {

TowerInvariants invariants_from(const TowerSpec& spec, const Prepared& P, int k) {
  TowerInvariants out;
  out.precision = k;
  out.rebase_level = P.rebase;
  if (spec.n_max < out.rebase_level + 2)
    throw DomainError("n_max must exceed the re-basing level " + std::to_string(out.rebase_level) + " by at least 2");
  for (int n = 0; n <= spec.n_max; ++n) out.qhs3_levels.push_back(qhs3_prepared(spec, P, n));
  for (int n = 0; n <= spec.n_max; ++n)
    if (!out.qhs3_levels[static_cast<std::size_t>(n)])
      throw DomainError("level " + std::to_string(n) +
                        " is not a rational homology sphere (cyclotomic factor of the characteristic element); "
                        "the growth law does not apply");
  out.lambda = P.w.lambda;
  out.mu = P.w.mu;
  for (int n = out.rebase_level; n <= spec.n_max; ++n) out.exponents.push_back(fast_prepared(spec, P, n));

  const auto residual = [&](int n) {
    return out.exponents[static_cast<std::size_t>(n - out.rebase_level)] - static_cast<long>(out.lambda) * n -
           static_cast<long>(out.mu) * pow_long(spec.p, n);
  };
  out.nu = residual(spec.n_max);
  if (residual(spec.n_max - 1) != out.nu || residual(spec.n_max - 2) != out.nu) {
    std::ostringstream msg;
    msg << "growth law fit fails within n_max = " << spec.n_max << " (lambda " << out.lambda << ", mu " << out.mu
        << "); exponents from level " << out.rebase_level << ":";
    for (long e : out.exponents) msg << ' ' << e;
    throw DomainError(msg.str());
  }
  out.n0 = spec.n_max - 2;
  while (out.n0 > out.rebase_level && residual(out.n0 - 1) == out.nu) --out.n0;
  return out;
}

}  // namespace

TowerInvariants iwasawa_invariants(const TowerSpec& spec) {
  validate_spec(spec);
  return with_escalation(spec, [&](const TowerSpec& s, int k) { return invariants_from(s, prepare(s, reduced_alexander(s)), k); });
}

std::optional<int> tln_lambda_shortcut(const LinkPresentation& link, unsigned long p) {
  require_prime(p);
  if (link.components < 2) return std::nullopt;
  const mpz_class h = hosokawa_at_1(linking_matrix(link));
  if (mpz_divisible_ui_p(h.get_mpz_t(), p)) return std::nullopt;
  return link.components - 1;
}

// ---------------------------------------------------------------- reports

namespace {

std::optional<long> p_exponent(const AbelianGroup& g, unsigned long p) {
  if (!g.is_finite()) return std::nullopt;
  long e = 0;
  for (const auto& x : g.p_part(p).invariant_factors()) e += vp(x, p);
  return e;
}

}  // namespace

TowerReport compute_tower(const TowerSpec& spec, bool run_oracle) {
  validate_spec(spec);
  TowerReport rep;
  rep.name = spec.name;
  rep.p = spec.p;
  rep.truncation = spec.effective_truncation();
  rep.rebase_level = rebase_level(spec);

  struct Fast {
    std::optional<Prepared> prep;
    std::optional<TowerInvariants> inv;
    std::string inv_note;
    std::string delta_note;
    std::vector<std::optional<long>> exps;
    std::vector<std::optional<bool>> qhs;
    std::vector<std::string> notes;
    int k = 0;
  };
  const auto fast = with_escalation(spec, [&](const TowerSpec& s, int k) {
    Fast f;
    f.k = k;
    f.exps.resize(static_cast<std::size_t>(s.n_max) + 1);
    f.qhs.resize(static_cast<std::size_t>(s.n_max) + 1);
    f.notes.resize(static_cast<std::size_t>(s.n_max) + 1);
    try {
      f.prep = prepare(s, reduced_alexander(s));
    } catch (const DomainError& e) {
      f.delta_note = e.what();
      return f;
    }
    for (int n = 0; n <= s.n_max; ++n) {
      const auto i = static_cast<std::size_t>(n);
      f.qhs[i] = qhs3_prepared(s, *f.prep, n);
      try {
        f.exps[i] = fast_prepared(s, *f.prep, n);
      } catch (const DomainError& e) {
        f.notes[i] = e.what();
      }
    }
    try {
      f.inv = invariants_from(s, *f.prep, k);
    } catch (const DomainError& e) {
      f.inv_note = e.what();
    }
    return f;
  });
  rep.precision = fast.k;
  rep.delta = fast.prep ? fast.prep->delta.to_string() : "unavailable: " + fast.delta_note;

  std::optional<long> base_exponent;
  for (int n = 0; n <= spec.n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    LadderEntry e;
    e.level = n;
    e.degree = pow_long(spec.p, n);
    e.fast = fast.exps[i];
    e.note = fast.notes[i];
    if (run_oracle && is_s3(spec) && e.degree <= spec.oracle_max) {
      e.oracle = level_homology_oracle(spec, n);
      const auto abs = p_exponent(*e.oracle, spec.p);
      if (n == rep.rebase_level) base_exponent = abs;
      if (abs && base_exponent && n >= rep.rebase_level) e.oracle_exponent = *abs - *base_exponent;
    }
    if (fast.qhs[i]) e.qhs3 = *fast.qhs[i];
    else if (e.oracle) e.qhs3 = e.oracle->is_finite();
    if (e.oracle && e.oracle->is_finite() != e.qhs3) {
      rep.paths_agree = false;
      e.note = "oracle and characteristic element disagree on finiteness";
    }
    if (e.fast && e.oracle_exponent) {
      // The image of the base group is known exactly only when its p-part vanishes.
      const bool exact = base_exponent && *base_exponent == 0;
      const bool ok = exact ? *e.fast == *e.oracle_exponent
                            : *e.fast <= *e.oracle_exponent + *base_exponent && *e.oracle_exponent <= *e.fast;
      if (!ok) {
        rep.paths_agree = false;
        e.note = "fast path and oracle disagree";
      }
    }
    rep.ladder.push_back(std::move(e));
  }

  rep.invariants = fast.inv;
  rep.invariants_note = fast.prep ? fast.inv_note : fast.delta_note;
  return rep;
}

SakumaReport sakuma_quotient_check(const TowerSpec& spec, int n) {
  validate_spec(spec);
  if (!is_s3(spec) || !spec.is_tln()) throw DomainError("Sakuma check needs a TLN tower over S^3");
  SakumaReport r;
  r.oracle_exponent = p_exponent(level_homology_oracle(spec, n), spec.p);
  const auto delta = with_escalation(spec, [&](const TowerSpec& s, int) { return reduced_alexander(s); });
  const auto w = weierstrass_prepare(delta);
  LambdaModuleNF nf;
  nf.p = spec.p;
  if (w.lambda > 0) nf.poly_factors.emplace_back(w.distinguished, 1);
  if (w.mu > 0) nf.p_factors.push_back(w.mu);
  const auto q = nf_quotient_order(nf, n);
  if (!q.infinite) r.module_exponent = q.exponent;
  r.equal = r.oracle_exponent == r.module_exponent;
  return r;
}

}  // namespace iwtower
