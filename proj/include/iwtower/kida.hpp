#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwtower/link.hpp"
#include "iwtower/tower.hpp"

namespace iwtower {

enum class Splitting { branched, inert, decomposed };
std::string to_string(Splitting s);
Splitting parse_splitting(const std::string& s);

// How a knot K in M - L behaves in the TLN tower over (M, L).
struct BehaviorReport {
  enum class Kind { infinitely_branched, finitely_decomposed, totally_decomposed };
  Kind kind = Kind::totally_decomposed;
  std::optional<mpz_class> limit_components;  // empty: infinitely many
  bool infinitely_inert = false;
  std::optional<int> stable_level;            // first n whose count equals that of n + 1
};
std::string to_string(BehaviorReport::Kind k);

// Components of h_n^{-1}(K) at level n: p^{min(n, v_p(lk))}, p^n when lk = 0.
mpz_class components_at_level(long lk, unsigned long p, int n);
BehaviorReport decomposition_behavior(long lk, unsigned long p);
// Component k of a link, with `in_L` marking the tower's branch link.
BehaviorReport component_behavior(const std::vector<std::vector<long>>& lk, const std::vector<bool>& in_L,
                                  std::size_t k, unsigned long p);

// f(mu') = p mu for a branched knot, mu otherwise (degree p).
long meridian_pushforward(Splitting s, unsigned long p);

// Splitting of component k in the Z/q cover of S^3 defined by mu_j -> tau[j]:
// ramification e, residue degree f (longitude order), g preimages, e f g = q.
struct CoverSplitting {
  long e = 1, f = 1, g = 1;
  Splitting status() const;
};
CoverSplitting cyclic_cover_splitting(const std::vector<std::vector<long>>& lk, const std::vector<long>& tau, long q,
                                      std::size_t k);

struct BranchComponent {
  std::string id;
  std::size_t over = 0;  // component of S-bar (in M) it lies over
  long e = 1;
  long f = 1;
  Splitting status = Splitting::decomposed;
};

struct KidaHypotheses {
  bool s_bar_infinitely_inert = false;
  bool mu_target_zero = false;
  bool none_inert_in_f0 = false;
  bool qhs3_levels = false;
};

enum class Decomposition { finite, infinite };

// f: N~ -> M~ of degree p^r; source is N~, target is M~.
struct TowerMorphism {
  std::string name;
  TowerSpec source, target;
  long degree = 1;
  long iota = 1;  // image of 1 under Z_p -> Z_p
  std::vector<BranchComponent> branch_components;
  std::size_t s_bar_components = 1;
  Decomposition s_bar_decomposition = Decomposition::finite;
  std::vector<long> s_bar_linking;  // lk(S-bar_j, L) when known
  KidaHypotheses hypotheses;
};
// Throws DomainError on a non-equivariant iota, a degree that is not a power of
// p, inconsistent statuses, or linking data that contradicts the declared
// decomposition.
void validate_morphism(const TowerMorphism& f);
// Violations of sum(e_w f_w) = deg * (limit components of S-bar_j), one per
// S-bar component; empty when the accounting holds.
std::vector<std::string> degree_accounting(const TowerMorphism& f);

// Sum of (e_w - 1) over the components of the limit branch link.
long ramification_correction(const std::vector<BranchComponent>& comps);

struct MuPrediction {
  int bound = 0;
  bool exact = false;  // mu_source == bound, else mu_source >= bound
};
MuPrediction mu_transfer(const TowerMorphism& f, int mu_target);

struct LambdaInput {
  int value = 0;
  bool computed = false;
};
// Computed from the tower when the TLN shortcut applies; otherwise the
// supplied value. A supplied value that disagrees with the computed one throws.
LambdaInput resolve_lambda(const TowerSpec& spec, std::optional<int> supplied);

struct KidaVerdict {
  std::vector<std::pair<std::string, bool>> hypotheses;
  std::vector<std::string> accounting;  // degree accounting violations
  long degree = 1;
  LambdaInput lambda_target, lambda_source;
  long correction = 0;
  long lhs = 0, rhs = 0;  // lambda_N - 1 and deg (lambda_M - 1) + correction
  bool identity_holds = false;
  std::optional<mpq_class> hbar_solved;  // degree p only
  std::optional<int> hbar_model;
  bool hypotheses_hold() const;
  bool passed() const;
};
KidaVerdict kida_check(const TowerMorphism& f, LambdaInput lambda_target, LambdaInput lambda_source);

// lambda_N predicted from lambda_M.
long kida_predict(long degree, long lambda_target, long correction);

// Components at step k lie over those of step k - 1 (over S-bar for k = 0).
struct DegreePStep {
  std::vector<BranchComponent> components;
};
struct ComposedMorphism {
  long degree = 1;
  std::vector<BranchComponent> components;  // over indexes S-bar
  long correction = 0;
  std::vector<long> step_corrections;
};
ComposedMorphism compose_degree_p_steps(unsigned long p, std::size_t s_bar_components,
                                        const std::vector<DegreePStep>& steps);

// The Hopf pair K u K' with an axis S-bar, lk(K, S-bar) = q, lk(K', S-bar) = 1,
// and its q-fold cyclic cover branched over the axis. S-bar and S come last.
struct KidaFamily {
  LinkPresentation base, cover;
};
KidaFamily kida_family(long q);

}  // namespace iwtower
