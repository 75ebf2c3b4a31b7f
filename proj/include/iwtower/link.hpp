#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "iwtower/laurent.hpp"
#include "iwtower/poly.hpp"

namespace iwtower {

using PDCode = std::vector<std::array<int, 4>>;

struct PDCrossing {
  std::array<int, 4> labels{};  // [a, b, c, d]: a enters under, then counterclockwise
  int sign = 0;
  int under_component = 0, over_component = 0;
  int over_in = 0, over_out = 0;
};

struct Generator {
  std::string id;
  int component = 0;  // 0-based
};

struct Letter {
  int gen = 0;
  int power = 1;  // +1 or -1
};
using Word = std::vector<Letter>;

struct LinkPresentation {
  std::string name;
  int components = 1;
  std::vector<Generator> generators;
  std::vector<Word> relators;
  std::vector<PDCrossing> crossings;  // empty unless built from a PD code
  std::optional<std::vector<std::vector<long>>> linking;  // explicit table, overrides crossings
};

// Wirtinger presentation of a PD code. Orientation: a -> c along the under
// strand at every crossing, propagated to the over strands.
LinkPresentation parse_pd(const PDCode& pd, const std::string& name = "");
// PD code of the closure of a braid word (i means sigma_i, -i its inverse) on
// `strands` strands, optionally with the braid axis as an extra component.
PDCode braid_closure_pd(int strands, const std::vector<int>& word, bool with_axis);
// Generators with lowercase ids; relators are space separated words in which
// an uppercase token is the inverse ("a b A B").
LinkPresentation parse_wirtinger(const std::vector<Generator>& generators, const std::vector<std::string>& relators,
                                 const std::string& name = "");
Word parse_word(const std::string& text, const std::vector<Generator>& generators);
std::string word_to_string(const Word& w, const std::vector<Generator>& generators);

// The sublink of components with keep[i]: meridians of the other components
// are killed, which fills them back in. Components are renumbered in order.
LinkPresentation sublink(const LinkPresentation& link, const std::vector<bool>& keep);

// Symmetric, lk(K_i, K_j) off the diagonal, -sum_j lk(K_i, K_j) on it.
std::vector<std::vector<long>> linking_matrix(const LinkPresentation& link);
// |det| of the linking matrix with row and column `deleted` removed (d >= 2).
mpz_class hosokawa_at_1(const std::vector<std::vector<long>>& lk, std::size_t deleted = 0);

struct FoxJacobian {
  std::size_t nvars = 1;
  std::vector<std::vector<LaurentPoly>> rows;  // relators x generators
};
FoxJacobian fox_jacobian(const LinkPresentation& link);

// Multivariable Alexander polynomial (one variable per component), normalized
// up to units. For a knot this is the classical Delta(t).
LaurentPoly multivariable_alexander(const LinkPresentation& link, int degree_cap = 400);
// Univariate route for the dual-path check: the Fox minor after t_i -> t^{v_i}
// with column `column` and the first relator removed.
LaurentPoly specialized_minor(const LinkPresentation& link, const std::vector<long>& v, std::size_t column = 0);

}  // namespace iwtower
