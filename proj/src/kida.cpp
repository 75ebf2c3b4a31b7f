#include "iwtower/kida.hpp"

#include <map>
#include <numeric>

#include "iwtower/cohomology.hpp"
#include "iwtower/error.hpp"

namespace iwtower {
namespace {

// r with p^r = n, or -1.
int log_p(long n, unsigned long p) {
  if (n < 1) return -1;
  int r = 0;
  while (n % static_cast<long>(p) == 0) {
    n /= static_cast<long>(p);
    ++r;
  }
  return n == 1 ? r : -1;
}

long mod_pos(long a, long q) { return ((a % q) + q) % q; }

void check_status(const BranchComponent& c) {
  bool ok = false;
  switch (c.status) {
    case Splitting::branched: ok = c.e > 1; break;
    case Splitting::inert: ok = c.e == 1 && c.f > 1; break;
    case Splitting::decomposed: ok = c.e == 1 && c.f == 1; break;
  }
  if (!ok)
    throw DomainError("component " + c.id + ": status " + to_string(c.status) + " does not match e = " +
                      std::to_string(c.e) + ", f = " + std::to_string(c.f));
}

// Limit components of S-bar_j in the target tower.
std::vector<long> limit_multiplicities(const TowerMorphism& f) {
  std::vector<long> mult(f.s_bar_components, 1);
  for (std::size_t j = 0; j < f.s_bar_linking.size(); ++j) {
    auto b = decomposition_behavior(f.s_bar_linking[j], f.target.p);
    if (b.limit_components) mult[j] = b.limit_components->get_si();
  }
  return mult;
}

}  // namespace

std::string to_string(Splitting s) {
  switch (s) {
    case Splitting::branched: return "branched";
    case Splitting::inert: return "inert";
    case Splitting::decomposed: return "decomposed";
  }
  return "";
}

Splitting parse_splitting(const std::string& s) {
  if (s == "branched") return Splitting::branched;
  if (s == "inert") return Splitting::inert;
  if (s == "decomposed") return Splitting::decomposed;
  throw InputError("unknown status '" + s + "' (branched, inert or decomposed)");
}

std::string to_string(BehaviorReport::Kind k) {
  switch (k) {
    case BehaviorReport::Kind::infinitely_branched: return "infinitely branched";
    case BehaviorReport::Kind::finitely_decomposed: return "finitely decomposed";
    case BehaviorReport::Kind::totally_decomposed: return "totally decomposed";
  }
  return "";
}

mpz_class components_at_level(long lk, unsigned long p, int n) {
  require_prime(p);
  if (n < 0) throw DomainError("negative level");
  if (lk == 0) return pow_ui(p, static_cast<unsigned long>(n));
  return pow_ui(p, static_cast<unsigned long>(std::min(n, vp(lk, p))));
}

BehaviorReport decomposition_behavior(long lk, unsigned long p) {
  require_prime(p);
  BehaviorReport r;
  if (lk == 0) return r;
  int v = vp(lk, p);
  r.kind = BehaviorReport::Kind::finitely_decomposed;
  r.limit_components = pow_ui(p, static_cast<unsigned long>(v));
  r.infinitely_inert = true;
  r.stable_level = v;
  return r;
}

BehaviorReport component_behavior(const std::vector<std::vector<long>>& lk, const std::vector<bool>& in_L,
                                  std::size_t k, unsigned long p) {
  if (k >= lk.size() || in_L.size() != lk.size()) throw DomainError("component index out of range");
  if (in_L[k]) {
    BehaviorReport r;
    r.kind = BehaviorReport::Kind::infinitely_branched;
    r.limit_components = 1;
    r.stable_level = 0;
    return r;
  }
  long total = 0;
  for (std::size_t j = 0; j < lk.size(); ++j)
    if (in_L[j]) total += lk[k][j];
  return decomposition_behavior(total, p);
}

long meridian_pushforward(Splitting s, unsigned long p) {
  return s == Splitting::branched ? static_cast<long>(p) : 1;
}

Splitting CoverSplitting::status() const {
  if (e > 1) return Splitting::branched;
  return f > 1 ? Splitting::inert : Splitting::decomposed;
}

CoverSplitting cyclic_cover_splitting(const std::vector<std::vector<long>>& lk, const std::vector<long>& tau, long q,
                                      std::size_t k) {
  if (q < 1) throw DomainError("cover degree must be positive");
  if (tau.size() != lk.size() || k >= lk.size()) throw DomainError("tau does not match the linking matrix");
  long t = mod_pos(tau[k], q), ell = 0;
  for (std::size_t j = 0; j < lk.size(); ++j)
    if (j != k) ell = mod_pos(ell + mod_pos(lk[k][j], q) * mod_pos(tau[j], q), q);
  CoverSplitting s;
  s.e = q / std::gcd(t, q);
  long image = q / std::gcd(std::gcd(t, ell), q);  // order of <tau(mu), tau(longitude)>
  s.f = image / s.e;
  s.g = q / image;
  return s;
}

void validate_morphism(const TowerMorphism& f) {
  const unsigned long p = f.target.p;
  require_prime(p);
  if (f.source.p != p) throw DomainError("source and target towers use different primes");
  if (f.iota != 1)
    throw DomainError("iota = multiplication by " + std::to_string(f.iota) +
                      " is not equivariant; this is the k_1/k analogue, outside Kida's formula");
  if (log_p(f.degree, p) < 0)
    throw DomainError("degree " + std::to_string(f.degree) + " is not a power of " + std::to_string(p));
  if (f.s_bar_components < 1) throw DomainError("S-bar must have at least one component");
  if (!f.s_bar_linking.empty()) {
    if (f.s_bar_linking.size() != f.s_bar_components)
      throw DomainError("one linking number per component of S-bar expected");
    bool infinite = false;
    for (long l : f.s_bar_linking) infinite = infinite || l == 0;
    auto derived = infinite ? Decomposition::infinite : Decomposition::finite;
    if (derived != f.s_bar_decomposition)
      throw DomainError(std::string("linking numbers say S-bar is ") + (infinite ? "infinitely" : "finitely") +
                        " decomposed, the morphism declares otherwise");
  }
  for (const auto& c : f.branch_components) {
    if (c.e < 1 || c.f < 1) throw DomainError("component " + c.id + ": e and f must be positive");
    check_status(c);
    if (c.over >= f.s_bar_components) throw DomainError("component " + c.id + " lies over a missing S-bar component");
  }
}

std::vector<std::string> degree_accounting(const TowerMorphism& f) {
  std::vector<std::string> out;
  if (f.s_bar_decomposition == Decomposition::infinite) return out;
  auto mult = limit_multiplicities(f);
  std::vector<long> acc(f.s_bar_components, 0);
  for (const auto& c : f.branch_components)
    if (c.over < acc.size()) acc[c.over] += c.e * c.f;
  for (std::size_t j = 0; j < acc.size(); ++j)
    if (acc[j] != f.degree * mult[j])
      out.push_back("over S-bar component " + std::to_string(j) + ": sum of e f = " + std::to_string(acc[j]) +
                    ", expected " + std::to_string(f.degree * mult[j]));
  return out;
}

long ramification_correction(const std::vector<BranchComponent>& comps) {
  long s = 0;
  for (const auto& c : comps) s += c.e - 1;
  return s;
}

MuPrediction mu_transfer(const TowerMorphism& f, int mu_target) {
  validate_morphism(f);
  if (mu_target != 0) throw DomainError("hypothesis: mu of the target tower must be 0, got " + std::to_string(mu_target));
  if (f.degree != static_cast<long>(f.target.p)) throw DomainError("mu transfer needs a morphism of degree p");
  if (!f.hypotheses.qhs3_levels) throw DomainError("hypothesis: layers must be rational homology spheres");
  if (f.s_bar_decomposition == Decomposition::finite) return {0, true};
  return {static_cast<int>(f.s_bar_components), false};
}

LambdaInput resolve_lambda(const TowerSpec& spec, std::optional<int> supplied) {
  std::optional<int> computed;
  std::string why;
  if (!spec.base && spec.is_tln()) computed = tln_lambda_shortcut(spec.link, spec.p);
  if (!computed) {
    try {
      computed = iwasawa_invariants(spec).lambda;
    } catch (const Error& e) {
      why = e.what();
    }
  }
  if (computed) {
    if (supplied && *supplied != *computed)
      throw DomainError(spec.name + ": supplied lambda = " + std::to_string(*supplied) + " but the tower gives " +
                        std::to_string(*computed));
    return {*computed, true};
  }
  if (supplied) return {*supplied, false};
  throw DomainError(spec.name + ": lambda is not computable (" + why + ") and none was supplied");
}

bool KidaVerdict::hypotheses_hold() const {
  for (const auto& h : hypotheses)
    if (!h.second) return false;
  return true;
}

bool KidaVerdict::passed() const {
  if (!hypotheses_hold() || !identity_holds) return false;
  if (hbar_solved) return hbar_model && *hbar_solved == *hbar_model;
  return true;
}

KidaVerdict kida_check(const TowerMorphism& f, LambdaInput lambda_target, LambdaInput lambda_source) {
  validate_morphism(f);
  KidaVerdict v;
  const auto& h = f.hypotheses;
  bool inert_component = false;
  for (const auto& c : f.branch_components) inert_component = inert_component || c.status == Splitting::inert;
  v.accounting = degree_accounting(f);
  v.hypotheses = {
      {"equivariant Galois (iota = id)", f.iota == 1},
      {"degree accounting: sum of e_w f_w = deg over each S-bar component", v.accounting.empty()},
      {"S-bar infinitely inert in the target tower",
       h.s_bar_infinitely_inert && f.s_bar_decomposition == Decomposition::finite},
      {"mu of the target tower is 0", h.mu_target_zero},
      {"no component of S-bar inert in f0", h.none_inert_in_f0 && !inert_component},
      {"every layer is a rational homology sphere", h.qhs3_levels},
  };
  v.degree = f.degree;
  v.lambda_target = lambda_target;
  v.lambda_source = lambda_source;
  v.correction = ramification_correction(f.branch_components);
  v.lhs = lambda_source.value - 1;
  v.rhs = f.degree * (lambda_target.value - 1) + v.correction;
  v.identity_holds = v.lhs == v.rhs;
  const long p = static_cast<long>(f.target.p);
  if (f.degree == p) {
    mpq_class solved(lambda_source.value - p * lambda_target.value - v.correction, p - 1);
    solved.canonicalize();
    v.hbar_solved = solved;
    if (h.qhs3_levels) v.hbar_model = hbar_defect(f.target.p, {true, true});
  }
  return v;
}

long kida_predict(long degree, long lambda_target, long correction) {
  return degree * (lambda_target - 1) + correction + 1;
}

ComposedMorphism compose_degree_p_steps(unsigned long p, std::size_t s_bar_components,
                                        const std::vector<DegreePStep>& steps) {
  require_prime(p);
  const long P = static_cast<long>(p);
  // composite data of the current top level, over S-bar
  struct Node {
    std::string id;
    std::size_t root;
    long e;
  };
  std::vector<Node> level;
  for (std::size_t j = 0; j < s_bar_components; ++j) level.push_back({"S-bar" + std::to_string(j), j, 1});
  ComposedMorphism out;
  long total = 0;  // sum of (e(w/v) - 1) at the current level
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string where = "step " + std::to_string(k + 1);
    std::vector<long> acc(level.size(), 0);
    std::map<std::size_t, long> before, after;  // per lower component u: both sides of the case algebra
    std::vector<Node> next;
    long step_c = 0;
    for (const auto& c : steps[k].components) {
      if (c.over >= level.size())
        throw DomainError(where + ": component " + c.id + " lies over a component the previous step lacks");
      if (c.status == Splitting::inert)
        throw DomainError(where + ": component " + c.id + " is inert over " + level[c.over].id +
                          "; then p(e(u/v)-1) + (e(w/u)-1) = p(e(w/v)-1) instead of e(w/v)-1, so the "
                          "formula needs every component of S-bar non-inert");
      if ((c.e != 1 && c.e != P) || c.f != 1) throw DomainError(where + ": component " + c.id + " has e or f not in {1, p}");
      check_status(c);
      acc[c.over] += c.e * c.f;
      const Node& u = level[c.over];
      Node w{c.id, u.root, u.e * c.e};
      after[c.over] += w.e - 1;
      before[c.over] += c.e - 1;
      step_c += c.e - 1;
      next.push_back(w);
    }
    for (std::size_t u = 0; u < level.size(); ++u) {
      if (acc[u] != P)
        throw DomainError(where + ": components over " + level[u].id + " have sum of e f = " +
                          std::to_string(acc[u]) + ", expected " + std::to_string(P));
      if (P * (level[u].e - 1) + before[u] != after[u])
        throw DomainError(where + ": branch index bookkeeping fails over " + level[u].id);
    }
    long new_total = 0;
    for (const auto& w : next) new_total += w.e - 1;
    if (new_total != P * total + step_c) throw DomainError(where + ": correction does not compose");
    total = new_total;
    out.step_corrections.push_back(step_c);
    level = std::move(next);
  }
  out.degree = pow_ui(p, steps.size()).get_si();
  for (const auto& w : level) {
    BranchComponent c;
    c.id = w.id;
    c.over = w.root;
    c.e = w.e;
    c.status = w.e > 1 ? Splitting::branched : Splitting::decomposed;
    out.components.push_back(c);
  }
  out.correction = total;
  return out;
}

KidaFamily kida_family(long q) {
  if (q < 2) throw DomainError("family needs q >= 2");
  std::vector<int> beta;
  for (int i = 1; i < q; ++i) beta.push_back(i % 2 ? i : -i);
  beta.push_back(static_cast<int>(q));
  beta.push_back(static_cast<int>(q));
  std::vector<int> lifted;
  for (long k = 0; k < q; ++k) lifted.insert(lifted.end(), beta.begin(), beta.end());
  const int strands = static_cast<int>(q) + 1;
  return {parse_pd(braid_closure_pd(strands, beta, true), "kida-base-" + std::to_string(q)),
          parse_pd(braid_closure_pd(strands, lifted, true), "kida-cover-" + std::to_string(q))};
}

}  // namespace iwtower
