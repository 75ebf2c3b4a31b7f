#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "iwtower/arith.hpp"
#include "iwtower/lambda.hpp"
#include "iwtower/laurent.hpp"
#include "iwtower/link.hpp"

namespace iwtower {

// tau(mu_i) = values[i] in Z_p, one entry per component.
struct TauMap {
  std::vector<PAdicInt> values;
  std::optional<std::vector<long>> integers;  // set when every value is an ordinary integer
  // roots[i], when set, is an integer polynomial whose smallest simple root
  // mod p is values[i]; such entries are re-lifted when precision grows.
  std::vector<std::optional<std::vector<mpz_class>>> roots;
  static TauMap tln(unsigned long p, int precision, int components);
  static TauMap from_integers(unsigned long p, int precision, const std::vector<long>& v);
};

struct BranchProfile {
  std::vector<bool> branched;  // v_i != 0
  int rebase_level = 0;        // max v_p(v_i) over branched components
  bool totally_branched() const;
};
BranchProfile validate_tau(const LinkPresentation& link, const TauMap& tau);

// Base other than S^3: H_1(M) invariant factors and the characteristic element
// of the tower, both supplied.
struct QHSBase {
  std::vector<mpz_class> h1;
  std::vector<mpz_class> lambda_element;  // coefficients in T
};

struct TowerSpec {
  std::string name;
  unsigned long p = 2;
  LinkPresentation link;
  std::optional<LaurentPoly> alexander;  // multivariable Delta_L, computed when absent
  TauMap tau;
  std::optional<QHSBase> base;           // empty means S^3
  int precision = 64;
  int truncation = 0;                    // 0 means p^{n_max} + 8
  int n_max = 3;
  long oracle_max = 9;                   // largest cover degree the oracle attempts

  int effective_truncation() const;
  bool is_tln() const;
};
void validate_spec(const TowerSpec& spec);

// Delta_L when given, else computed from the presentation.
LaurentPoly link_alexander(const TowerSpec& spec);

// Characteristic element of the tower: Delta_L(t^{v_1}, ..., t^{v_d}) with
// t = 1 + T, times T when d >= 2. Exact polynomial when tau is integral.
LambdaElement reduced_alexander(const TowerSpec& spec);

// v_p |H_1(M_n) / image of H_1(M_{n0})|, n0 the re-basing level, from the
// resultant of nu_{p^n}/nu_{p^{n0}} with the characteristic element.
long level_order_fast(const TowerSpec& spec, int n);
long level_order_fast(const TowerSpec& spec, const LambdaElement& delta, int n);

// Absolute H_1 of the degree-N cyclic branched cover defined by
// mu_i -> tau[i] mod N (Reidemeister-Schreier, abelianized, then filled).
AbelianGroup cyclic_cover_homology(const LinkPresentation& link, const std::vector<long>& tau, long N);
AbelianGroup level_homology_oracle(const TowerSpec& spec, int n);

// M_n is a rational homology sphere. Levels j above the re-basing level are
// read off Phi_{p^j} factors of the characteristic element; levels at or below
// it use the sublink of components with v_p(v_i) < j.
bool qhs3_check(const TowerSpec& spec, int n);
bool qhs3_check(const TowerSpec& spec, const LambdaElement& delta, int n);

struct TowerInvariants {
  int lambda = 0;
  int mu = 0;
  long nu = 0;
  int n0 = 0;  // first level from which the fit is exact
  std::vector<bool> qhs3_levels;
  int rebase_level = 0;
  std::vector<long> exponents;  // fast path, levels rebase_level..n_max
  int precision = 0;            // working precision that succeeded
};
TowerInvariants iwasawa_invariants(const TowerSpec& spec);

struct LadderEntry {
  int level = 0;
  long degree = 1;
  bool qhs3 = true;
  std::optional<long> fast;
  std::optional<AbelianGroup> oracle;
  std::optional<long> oracle_exponent;  // v_p of the oracle group order relative to the base
  std::string note;
};

struct TowerReport {
  std::string name;
  unsigned long p = 2;
  int rebase_level = 0;
  std::vector<LadderEntry> ladder;
  std::optional<TowerInvariants> invariants;
  std::string invariants_note;  // why invariants are missing
  int precision = 0;
  int truncation = 0;
  std::string delta;            // characteristic element, printed
  bool paths_agree = true;
};
// Runs both paths on every level, escalating precision on indeterminacy up to
// IWTOWER_PRECISION_CAP (default 1024 digits).
TowerReport compute_tower(const TowerSpec& spec, bool run_oracle = true);

// lambda = d - 1 for the TLN tower when p does not divide H_L(1); empty otherwise.
std::optional<int> tln_lambda_shortcut(const LinkPresentation& link, unsigned long p);

// Exponents are empty when the group is infinite.
struct SakumaReport {
  std::optional<long> oracle_exponent;
  std::optional<long> module_exponent;
  bool equal = false;
};
SakumaReport sakuma_quotient_check(const TowerSpec& spec, int n);

int precision_cap();

}  // namespace iwtower
