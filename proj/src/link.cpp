#include "iwtower/link.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "iwtower/arith.hpp"
#include "iwtower/error.hpp"

namespace iwtower {

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

enum Role { kUnknown = 0, kIn = 1, kOut = 2 };
Role opposite(Role r) { return r == kIn ? kOut : kIn; }

}  // namespace

// ---------------------------------------------------------------- PD codes

LinkPresentation parse_pd(const PDCode& pd, const std::string& name) {
  LinkPresentation link;
  link.name = name;
  if (pd.empty()) {
    link.components = 1;
    link.generators.push_back({"x1", 0});
    return link;
  }

  // label -> its two (crossing, slot) occurrences
  std::map<int, std::vector<std::pair<std::size_t, int>>> occ;
  for (std::size_t c = 0; c < pd.size(); ++c)
    for (int s = 0; s < 4; ++s) occ[pd[c][static_cast<std::size_t>(s)]].emplace_back(c, s);
  for (const auto& [label, where] : occ)
    if (where.size() != 2)
      throw InputError("PD code: label " + std::to_string(label) + " occurs " + std::to_string(where.size()) +
                       " times (expected 2)");

  std::vector<std::array<Role, 4>> role(pd.size(), {kIn, kUnknown, kOut, kUnknown});
  std::deque<std::pair<std::size_t, int>> queue;
  for (std::size_t c = 0; c < pd.size(); ++c) {
    queue.emplace_back(c, 0);
    queue.emplace_back(c, 2);
  }
  auto assign = [&](std::size_t c, int s, Role r) {
    Role& cur = role[c][static_cast<std::size_t>(s)];
    if (cur == r) return;
    if (cur != kUnknown)
      throw InputError("PD code: inconsistent orientation at crossing " + std::to_string(c + 1));
    cur = r;
    queue.emplace_back(c, s);
  };
  auto propagate = [&]() {
    while (!queue.empty()) {
      auto [c, s] = queue.front();
      queue.pop_front();
      const Role r = role[c][static_cast<std::size_t>(s)];
      if (s == 1 || s == 3) assign(c, 4 - s, opposite(r));
      for (auto [c2, s2] : occ[pd[c][static_cast<std::size_t>(s)]])
        if (c2 != c || s2 != s) assign(c2, s2, opposite(r));
    }
  };
  propagate();
  // Components passing only over: orient by label order.
  for (std::size_t c = 0; c < pd.size(); ++c) {
    if (role[c][1] != kUnknown) continue;
    const int b = pd[c][1], d = pd[c][3];
    const bool d_in = (b == d + 1) || (d != b + 1 && b < d);
    assign(c, 3, d_in ? kIn : kOut);
    propagate();
  }

  // labels -> dense indices
  std::map<int, std::size_t> idx;
  for (const auto& [label, where] : occ) idx.emplace(label, idx.size());
  UnionFind comp(idx.size()), arc(idx.size());
  for (const auto& x : pd) {
    comp.unite(idx[x[0]], idx[x[2]]);
    comp.unite(idx[x[1]], idx[x[3]]);
    arc.unite(idx[x[1]], idx[x[3]]);
  }
  // number classes by their smallest label
  std::map<std::size_t, int> comp_id, arc_id;
  for (const auto& [label, i] : idx) {
    comp_id.try_emplace(comp.find(i), static_cast<int>(comp_id.size()));
    arc_id.try_emplace(arc.find(i), static_cast<int>(arc_id.size()));
  }
  link.components = static_cast<int>(comp_id.size());
  link.generators.resize(arc_id.size());
  for (const auto& [label, i] : idx) {
    const int g = arc_id[arc.find(i)];
    auto& gen = link.generators[static_cast<std::size_t>(g)];
    gen.id = "x" + std::to_string(g + 1);
    gen.component = comp_id[comp.find(i)];
  }
  auto arc_of = [&](int label) { return arc_id[arc.find(idx[label])]; };
  auto comp_of = [&](int label) { return comp_id[comp.find(idx[label])]; };

  for (std::size_t c = 0; c < pd.size(); ++c) {
    const auto& x = pd[c];
    PDCrossing cr;
    cr.labels = x;
    const bool d_in = role[c][3] == kIn;
    cr.over_in = d_in ? x[3] : x[1];
    cr.over_out = d_in ? x[1] : x[3];
    cr.sign = d_in ? 1 : -1;
    cr.under_component = comp_of(x[0]);
    cr.over_component = comp_of(x[1]);
    link.crossings.push_back(cr);
    const int a = arc_of(x[0]), b = arc_of(x[1]), cc = arc_of(x[2]);
    link.relators.push_back({{b, cr.sign}, {a, 1}, {b, -cr.sign}, {cc, -1}});
  }
  return link;
}

PDCode braid_closure_pd(int strands, const std::vector<int>& word, bool with_axis) {
  if (strands < 1) throw InputError("braid: need at least one strand");
  for (int l : word)
    if (l == 0 || std::abs(l) >= strands) throw InputError("braid: letter " + std::to_string(l) + " out of range");

  struct Passage {
    std::size_t crossing;
    int in, out;
  };
  const std::size_t s = static_cast<std::size_t>(strands);
  std::size_t ncross = word.size() + (with_axis ? 2 * s : 0);
  PDCode pd(ncross, {0, 0, 0, 0});
  const std::size_t front = word.size(), back = word.size() + s;  // belt crossing ids

  auto strand_path = [&](std::size_t pos, std::vector<Passage>& out) {
    if (with_axis) {
      out.push_back({front + pos, 0, 2});  // under the axis
      out.push_back({back + pos, 3, 1});   // over the axis
    }
    for (std::size_t k = 0; k < word.size(); ++k) {
      const std::size_t i = static_cast<std::size_t>(std::abs(word[k]) - 1);
      const bool positive = word[k] > 0;
      if (pos == i) {
        out.push_back(positive ? Passage{k, 3, 1} : Passage{k, 0, 2});
        pos = i + 1;
      } else if (pos == i + 1) {
        out.push_back(positive ? Passage{k, 0, 2} : Passage{k, 1, 3});
        pos = i;
      }
    }
    return pos;
  };

  std::vector<std::vector<Passage>> comps;
  std::vector<bool> seen(s, false);
  for (std::size_t x0 = 0; x0 < s; ++x0) {
    if (seen[x0]) continue;
    std::vector<Passage> path;
    std::size_t x = x0;
    do {
      seen[x] = true;
      x = strand_path(x, path);
    } while (x != x0);
    if (path.empty()) throw InputError("braid: a closed strand has no crossings");
    comps.push_back(std::move(path));
  }
  if (with_axis) {
    std::vector<Passage> axis;
    for (std::size_t x = 0; x < s; ++x) axis.push_back({front + x, 3, 1});
    for (std::size_t x = s; x-- > 0;) axis.push_back({back + x, 0, 2});
    comps.push_back(std::move(axis));
  }

  int label = 1;
  for (const auto& path : comps) {
    const std::size_t m = path.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Passage& cur = path[k];
      const Passage& nxt = path[(k + 1) % m];
      pd[cur.crossing][static_cast<std::size_t>(cur.out)] = label;
      pd[nxt.crossing][static_cast<std::size_t>(nxt.in)] = label;
      ++label;
    }
  }
  return pd;
}

// ---------------------------------------------------------------- words

Word parse_word(const std::string& text, const std::vector<Generator>& generators) {
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < generators.size(); ++i) ids[generators[i].id] = static_cast<int>(i);
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (auto it = ids.find(tok); it != ids.end()) {
      w.push_back({it->second, 1});
      continue;
    }
    std::string low = tok;
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char ch) { return std::tolower(ch); });
    auto it = ids.find(low);
    if (it == ids.end() || !std::isupper(static_cast<unsigned char>(tok[0])))
      throw InputError("unknown generator '" + tok + "' in word \"" + text + "\"");
    w.push_back({it->second, -1});
  }
  return w;
}

std::string word_to_string(const Word& w, const std::vector<Generator>& generators) {
  std::string s;
  for (const auto& l : w) {
    std::string id = generators.at(static_cast<std::size_t>(l.gen)).id;
    if (l.power < 0) std::transform(id.begin(), id.end(), id.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (!s.empty()) s += ' ';
    s += id;
  }
  return s;
}

LinkPresentation parse_wirtinger(const std::vector<Generator>& generators, const std::vector<std::string>& relators,
                                 const std::string& name) {
  if (generators.empty()) throw InputError("presentation: no generators");
  LinkPresentation link;
  link.name = name;
  int maxc = -1;
  std::map<std::string, int> seen;
  for (const auto& g : generators) {
    if (g.id.empty() || !std::islower(static_cast<unsigned char>(g.id[0])) ||
        !std::all_of(g.id.begin(), g.id.end(), [](unsigned char ch) { return std::islower(ch) || std::isdigit(ch) || ch == '_'; }))
      throw InputError("presentation: generator id '" + g.id + "' must be lowercase");
    if (!seen.emplace(g.id, 0).second) throw InputError("presentation: duplicate generator '" + g.id + "'");
    if (g.component < 0) throw InputError("presentation: negative component index");
    maxc = std::max(maxc, g.component);
  }
  link.components = maxc + 1;
  for (int c = 0; c < link.components; ++c)
    if (std::none_of(generators.begin(), generators.end(), [c](const Generator& g) { return g.component == c; }))
      throw InputError("presentation: component " + std::to_string(c) + " has no generator");
  link.generators = generators;
  for (const auto& r : relators) link.relators.push_back(parse_word(r, generators));
  return link;
}

LinkPresentation sublink(const LinkPresentation& link, const std::vector<bool>& keep) {
  const std::size_t d = static_cast<std::size_t>(link.components);
  if (keep.size() != d) throw InputError("sublink: selection has the wrong size");
  std::vector<int> comp(d, -1);
  int kept = 0;
  for (std::size_t i = 0; i < d; ++i)
    if (keep[i]) comp[i] = kept++;
  if (kept == 0) throw DomainError("sublink: no component selected");

  LinkPresentation out;
  out.name = link.name;
  out.components = kept;
  std::vector<int> gen(link.generators.size(), -1);
  for (std::size_t j = 0; j < link.generators.size(); ++j) {
    const int c = comp[static_cast<std::size_t>(link.generators[j].component)];
    if (c < 0) continue;
    gen[j] = static_cast<int>(out.generators.size());
    out.generators.push_back({link.generators[j].id, c});
  }
  for (const auto& r : link.relators) {
    Word w;
    for (const auto& l : r) {
      if (gen[static_cast<std::size_t>(l.gen)] < 0) continue;
      const Letter x{gen[static_cast<std::size_t>(l.gen)], l.power};
      if (!w.empty() && w.back().gen == x.gen && w.back().power == -x.power) w.pop_back();
      else w.push_back(x);
    }
    if (!w.empty()) out.relators.push_back(std::move(w));
  }
  for (const auto& c : link.crossings) {
    const int u = comp[static_cast<std::size_t>(c.under_component)];
    const int o = comp[static_cast<std::size_t>(c.over_component)];
    if (u < 0 || o < 0) continue;
    PDCrossing x = c;
    x.under_component = u;
    x.over_component = o;
    out.crossings.push_back(x);
  }
  if (link.linking) {
    std::vector<std::vector<long>> lk;
    for (std::size_t i = 0; i < d; ++i) {
      if (!keep[i]) continue;
      lk.emplace_back();
      for (std::size_t j = 0; j < d; ++j)
        if (keep[j]) lk.back().push_back(i == j ? 0 : (*link.linking)[i][j]);
    }
    out.linking = lk;
  }
  return out;
}

// ---------------------------------------------------------------- linking numbers

namespace {
void fill_diagonal(std::vector<std::vector<long>>& lk) {
  for (std::size_t i = 0; i < lk.size(); ++i) {
    long s = 0;
    for (std::size_t j = 0; j < lk.size(); ++j)
      if (j != i) s += lk[i][j];
    lk[i][i] = -s;
  }
}
}  // namespace

std::vector<std::vector<long>> linking_matrix(const LinkPresentation& link) {
  const std::size_t d = static_cast<std::size_t>(link.components);
  if (link.linking) {
    auto lk = *link.linking;
    if (lk.size() != d) throw InputError("linking table has the wrong size");
    for (std::size_t i = 0; i < d; ++i) {
      if (lk[i].size() != d) throw InputError("linking table has the wrong size");
      for (std::size_t j = 0; j < d; ++j)
        if (lk[i][j] != lk[j][i]) throw InputError("linking table is not symmetric");
    }
    auto filled = lk;
    fill_diagonal(filled);
    for (std::size_t i = 0; i < d; ++i)
      if (lk[i][i] != 0 && lk[i][i] != filled[i][i])
        throw InputError("linking table: diagonal entries must be 0 or minus the row sum");
    return filled;
  }
  std::vector<std::vector<long>> twice(d, std::vector<long>(d, 0));
  if (d > 1 && link.crossings.empty())
    throw DomainError("linking numbers need a PD code or an explicit linking table");
  for (const auto& c : link.crossings) {
    if (c.under_component == c.over_component) continue;
    twice[static_cast<std::size_t>(c.under_component)][static_cast<std::size_t>(c.over_component)] += c.sign;
    twice[static_cast<std::size_t>(c.over_component)][static_cast<std::size_t>(c.under_component)] += c.sign;
  }
  for (auto& row : twice)
    for (auto& x : row) {
      if (x % 2 != 0) throw InputError("PD code: odd signed crossing count between two components");
      x /= 2;
    }
  fill_diagonal(twice);
  return twice;
}

mpz_class hosokawa_at_1(const std::vector<std::vector<long>>& lk, std::size_t deleted) {
  const std::size_t d = lk.size();
  if (d < 2) throw DomainError("hosokawa_at_1: needs at least two components");
  if (deleted >= d) throw DomainError("hosokawa_at_1: deleted index out of range");
  IntMatrix m(d - 1, d - 1);
  for (std::size_t i = 0, r = 0; i < d; ++i) {
    if (i == deleted) continue;
    for (std::size_t j = 0, c = 0; j < d; ++j) {
      if (j == deleted) continue;
      m(r, c++) = lk[i][j];
    }
    ++r;
  }
  mpz_class det = 1;
  for (const auto& x : smith_normal_form(m)) det *= x;
  return det;
}

// ---------------------------------------------------------------- Fox calculus

FoxJacobian fox_jacobian(const LinkPresentation& link) {
  const std::size_t d = static_cast<std::size_t>(link.components);
  FoxJacobian J;
  J.nvars = d;
  for (const auto& w : link.relators) {
    std::vector<LaurentPoly> row(link.generators.size(), LaurentPoly(d));
    LaurentPoly::Exponent e(d, 0);
    for (const auto& l : w) {
      const std::size_t g = static_cast<std::size_t>(l.gen);
      const std::size_t c = static_cast<std::size_t>(link.generators.at(g).component);
      if (l.power > 0) {
        row[g].add_term(e, 1);
        e[c] += 1;
      } else {
        e[c] -= 1;
        row[g].add_term(e, -1);
      }
    }
    if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; }))
      throw InputError("presentation: a relator is not trivial in the abelianization");
    J.rows.push_back(std::move(row));
  }
  return J;
}

namespace {

std::vector<std::vector<LaurentPoly>> drop(const std::vector<std::vector<LaurentPoly>>& rows,
                                           const std::vector<std::size_t>& keep_rows, std::size_t column) {
  std::vector<std::vector<LaurentPoly>> out;
  for (std::size_t r : keep_rows) {
    std::vector<LaurentPoly> row;
    for (std::size_t j = 0; j < rows[r].size(); ++j)
      if (j != column) row.push_back(rows[r][j]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

LaurentPoly multivariable_alexander(const LinkPresentation& link, int degree_cap) {
  const auto J = fox_jacobian(link);
  const std::size_t d = J.nvars, n = link.generators.size(), r = J.rows.size();
  const std::size_t column = 0;
  if (n == 0) throw InputError("presentation: no generators");
  if (r + 1 < n) return LaurentPoly(d);

  // all (n-1)-subsets of the relators
  std::vector<bool> sel(r, false);
  std::fill(sel.begin(), sel.begin() + static_cast<long>(n - 1), true);
  LaurentPoly g(d);
  std::size_t count = 0;
  do {
    if (++count > 5000) throw LimitError("alexander: too many maximal minors");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < r; ++i)
      if (sel[i]) keep.push_back(i);
    LaurentPoly m = sparse_determinant(drop(J.rows, keep, column), d);
    if (m.is_zero()) continue;
    if (g.is_zero())
      g = m.normalized();
    else if (!divides(g, m))
      g = gcd(g, m, degree_cap);
  } while (std::prev_permutation(sel.begin(), sel.end()));

  if (g.is_zero()) return g;
  if (d >= 2) {
    const std::size_t c = static_cast<std::size_t>(link.generators[column].component);
    g = exact_divide(g, LaurentPoly::variable(d, c) - LaurentPoly::constant(d, 1));
  }
  return g.normalized();
}

LaurentPoly specialized_minor(const LinkPresentation& link, const std::vector<long>& v, std::size_t column) {
  const auto J = fox_jacobian(link);
  if (v.size() != J.nvars) throw InputError("specialized_minor: one exponent per component expected");
  std::vector<std::vector<LaurentPoly>> U;
  for (const auto& row : J.rows) {
    std::vector<LaurentPoly> urow;
    for (const auto& x : row) {
      auto [poly, shift] = x.specialize(v);
      LaurentPoly u(1);
      for (std::size_t i = 0; i < poly.coeffs().size(); ++i) u.add_term({static_cast<int>(shift + static_cast<long>(i))}, poly.coeffs()[i]);
      urow.push_back(std::move(u));
    }
    U.push_back(std::move(urow));
  }
  const std::size_t n = link.generators.size(), r = U.size();
  if (r + 1 < n) return LaurentPoly(1);
  std::vector<std::size_t> keep;
  for (std::size_t i = (r >= n ? 1 : 0); keep.size() + 1 < n; ++i) keep.push_back(i);
  return sparse_determinant(drop(U, keep, column), 1).normalized();
}

}  // namespace iwtower
