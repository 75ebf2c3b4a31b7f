#include "iwtower/io.hpp"

#include <fstream>
#include <sstream>

#include "iwtower/error.hpp"

namespace iwtower {
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw InputError(where + ": " + msg); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string sub(const std::string& where, const std::string& key) { return where + ": " + key; }
std::string idx(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

long as_long(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer, got " + j.dump());
  return j.get<long>();
}

bool as_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false, got " + j.dump());
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

// Integer given as a JSON number or a decimal string (for big values).
mpz_class as_mpz(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) fail(where, "not an integer: " + j.dump());
    return z;
  }
  fail(where, "expected an integer, got " + j.dump());
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array, got " + j.dump());
  return j;
}

std::vector<std::vector<long>> as_long_matrix(const Json& j, const std::string& where) {
  std::vector<std::vector<long>> rows;
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) {
    std::vector<long> r;
    for (std::size_t k = 0; k < as_array(j[i], idx(where, i)).size(); ++k) r.push_back(as_long(j[i][k], idx(idx(where, i), k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

void check_schema(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a JSON object");
  const Json& s = field(j, "schema", where);
  if (!(s == kSchemaVersion || s == 1)) fail(where, "unsupported schema " + s.dump() + " (expected \"1\")");
}

template <typename T>
std::optional<T> opt_long(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return static_cast<T>(as_long(j.at(key), sub(where, key)));
}

Json mpz_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

LaurentPoly alexander_from_json(const Json& j, std::size_t nvars, const std::string& where) {
  LaurentPoly out(nvars);
  for (std::size_t i = 0; i < as_array(j, where).size(); ++i) {
    const std::string w = idx(where, i);
    const Json& t = j[i];
    std::vector<int> e;
    const Json& ex = field(t, "exponent", w);
    if (ex.is_number_integer()) {
      e.push_back(static_cast<int>(ex.get<long>()));
    } else {
      for (std::size_t k = 0; k < as_array(ex, sub(w, "exponent")).size(); ++k)
        e.push_back(static_cast<int>(as_long(ex[k], idx(sub(w, "exponent"), k))));
    }
    if (e.size() != nvars) fail(w, "exponent has " + std::to_string(e.size()) + " entries, expected " + std::to_string(nvars));
    out.add_term(e, as_mpz(field(t, "coefficient", w), sub(w, "coefficient")));
  }
  return out;
}

std::string splitting_name(Splitting s) { return to_string(s); }

}  // namespace

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- links

LinkFile link_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a JSON object");
  const std::string name = j.contains("name") ? as_string(j["name"], sub(where, "name")) : "";
  int sources = j.contains("pd_code") + j.contains("braid") + j.contains("wirtinger");
  if (sources != 1) fail(where, "give exactly one of pd_code, braid, wirtinger");
  LinkFile out;
  try {
    if (j.contains("pd_code")) {
      const std::string w = sub(where, "pd_code");
      PDCode pd;
      for (std::size_t i = 0; i < as_array(j["pd_code"], w).size(); ++i) {
        const Json& c = j["pd_code"][i];
        if (!c.is_array() || c.size() != 4) fail(idx(w, i), "a crossing has four labels");
        std::array<int, 4> x{};
        for (std::size_t k = 0; k < 4; ++k) x[k] = static_cast<int>(as_long(c[k], idx(idx(w, i), k)));
        pd.push_back(x);
      }
      out.link = parse_pd(pd, name);
    } else if (j.contains("braid")) {
      const std::string w = sub(where, "braid");
      const Json& b = j["braid"];
      int strands = static_cast<int>(as_long(field(b, "strands", w), sub(w, "strands")));
      std::vector<int> word;
      const Json& wj = field(b, "word", w);
      for (std::size_t i = 0; i < as_array(wj, sub(w, "word")).size(); ++i)
        word.push_back(static_cast<int>(as_long(wj[i], idx(sub(w, "word"), i))));
      bool axis = b.contains("axis") && as_bool(b["axis"], sub(w, "axis"));
      out.link = parse_pd(braid_closure_pd(strands, word, axis), name);
    } else {
      const std::string w = sub(where, "wirtinger");
      const Json& wj = j["wirtinger"];
      std::vector<Generator> gens;
      const Json& gj = field(wj, "generators", w);
      for (std::size_t i = 0; i < as_array(gj, sub(w, "generators")).size(); ++i) {
        const std::string gw = idx(sub(w, "generators"), i);
        gens.push_back({as_string(field(gj[i], "id", gw), sub(gw, "id")),
                        static_cast<int>(as_long(field(gj[i], "component", gw), sub(gw, "component")))});
      }
      std::vector<std::string> rels;
      const Json& rj = field(wj, "relators", w);
      for (std::size_t i = 0; i < as_array(rj, sub(w, "relators")).size(); ++i)
        rels.push_back(as_string(rj[i], idx(sub(w, "relators"), i)));
      out.link = parse_wirtinger(gens, rels, name);
    }
  } catch (const InputError& e) {
    if (std::string(e.what()).rfind(where, 0) == 0) throw;
    fail(where, e.what());
  }
  if (j.contains("linking_matrix")) {
    const std::string w = sub(where, "linking_matrix");
    std::optional<std::vector<std::vector<long>>> drawn;
    if (!out.link.crossings.empty()) drawn = linking_matrix(out.link);
    out.link.linking = as_long_matrix(j["linking_matrix"], w);
    try {
      out.link.linking = linking_matrix(out.link);  // validates and fills the diagonal
    } catch (const Error& e) {
      fail(w, e.what());
    }
    if (drawn && *drawn != *out.link.linking) fail(w, "disagrees with the linking numbers of the diagram");
  }
  if (j.contains("provenance")) out.provenance = as_string(j["provenance"], sub(where, "provenance"));
  if (j.contains("multivariable_alexander"))
    out.alexander = alexander_from_json(j["multivariable_alexander"], static_cast<std::size_t>(out.link.components),
                                        sub(where, "multivariable_alexander"));
  return out;
}

LinkFile load_link(const fs::path& path) {
  Json j = read_json(path);
  check_schema(j, path.string());
  return link_from_json(j, path.string());
}

// ---------------------------------------------------------------- towers

TauMap tau_from_json(const Json& j, unsigned long p, int precision, int components, const std::string& where) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "tln")) return TauMap::tln(p, precision, components);
  if (!j.is_array()) fail(where, "expected an array of tau values or \"tln\"");
  if (j.size() != static_cast<std::size_t>(components))
    fail(where, std::to_string(j.size()) + " tau values for a " + std::to_string(components) + "-component link");
  bool all_int = true;
  for (const auto& x : j) all_int = all_int && x.is_number_integer();
  if (all_int) {
    std::vector<long> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_long(j[i], idx(where, i)));
    return TauMap::from_integers(p, precision, v);
  }
  TauMap t;
  t.roots.resize(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = idx(where, i);
    if (j[i].is_number_integer()) {
      t.values.emplace_back(p, precision, mpz_class(std::to_string(j[i].get<long>())));
      continue;
    }
    std::string s = as_string(j[i], w);
    try {
      if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
        mpz_class n;
        if (n.set_str(s.substr(5, s.size() - 6), 10) != 0) fail(w, "bad radicand in " + s);
        std::vector<mpz_class> poly = {-n, 0, 1};
        t.values.push_back(hensel_root(poly, p, precision));
        t.roots[i] = poly;
      } else {
        t.values.push_back(PAdicInt::from_digits(p, precision, s));
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      fail(w, e.what());
    }
  }
  return t;
}

TowerSpec tower_from_json(const Json& j, const fs::path& dir, const Overrides& o, const std::string& where) {
  TowerSpec s;
  s.name = j.contains("name") ? as_string(j["name"], sub(where, "name")) : "";
  s.p = o.p ? *o.p : static_cast<unsigned long>(as_long(field(j, "p", where), sub(where, "p")));
  require_prime(s.p);
  s.precision = o.precision ? *o.precision : opt_long<int>(j, "precision", where).value_or(64);
  s.truncation = o.truncation ? *o.truncation : opt_long<int>(j, "truncation", where).value_or(0);
  s.n_max = o.levels ? *o.levels : opt_long<int>(j, "n_max", where).value_or(3);
  s.oracle_max = o.oracle_max ? *o.oracle_max : opt_long<long>(j, "oracle_max", where).value_or(9);

  bool s3 = !j.contains("base") || j["base"] == "S3";
  if (!s3) {
    const std::string w = sub(where, "base");
    const Json& b = j["base"];
    QHSBase base;
    for (std::size_t i = 0; i < as_array(field(b, "h1", w), sub(w, "h1")).size(); ++i)
      base.h1.push_back(as_mpz(b["h1"][i], idx(sub(w, "h1"), i)));
    for (std::size_t i = 0; i < as_array(field(b, "lambda_element", w), sub(w, "lambda_element")).size(); ++i)
      base.lambda_element.push_back(as_mpz(b["lambda_element"][i], idx(sub(w, "lambda_element"), i)));
    s.base = base;
  }
  if (j.contains("link")) {
    LinkFile lf;
    const Json& l = j["link"];
    if (l.is_string()) {
      lf = load_link(dir / l.get<std::string>());
    } else {
      lf = link_from_json(l, sub(where, "link"));
    }
    if (j.contains("drop")) {
      if (lf.alexander) fail(sub(where, "drop"), "cannot drop components of a link with an Alexander override");
      std::vector<bool> keep(static_cast<std::size_t>(lf.link.components), true);
      const Json& d = j["drop"];
      for (std::size_t i = 0; i < as_array(d, sub(where, "drop")).size(); ++i) {
        long c = as_long(d[i], idx(sub(where, "drop"), i));
        if (c < 0 || c >= lf.link.components) fail(idx(sub(where, "drop"), i), "no component " + std::to_string(c));
        keep[static_cast<std::size_t>(c)] = false;
      }
      std::string name = lf.link.name;
      lf.link = sublink(lf.link, keep);
      lf.link.name = name;
    }
    s.link = lf.link;
    s.alexander = lf.alexander;
  } else if (s3) {
    fail(where, "missing field 'link'");
  }
  if (s.name.empty()) s.name = s.link.name;
  s.tau = tau_from_json(j.contains("tau") ? j["tau"] : Json(), s.p, s.precision, s.link.components, sub(where, "tau"));
  try {
    validate_spec(s);
  } catch (const InputError& e) {
    fail(where, e.what());
  }
  return s;
}

TowerSpec load_tower(const fs::path& path, const Overrides& o) {
  Json j = read_json(path);
  check_schema(j, path.string());
  return tower_from_json(j, path.parent_path(), o, path.string());
}

// ---------------------------------------------------------------- morphisms

MorphismFile load_morphism(const fs::path& path, const Overrides& o) {
  const std::string where = path.string();
  Json j = read_json(path);
  check_schema(j, where);
  const fs::path dir = path.parent_path();
  MorphismFile out;
  TowerMorphism& f = out.morphism;
  f.name = j.contains("name") ? as_string(j["name"], sub(where, "name")) : path.stem().string();
  f.target = load_tower(dir / as_string(field(j, "target_tower", where), sub(where, "target_tower")), o);
  f.source = load_tower(dir / as_string(field(j, "source_tower", where), sub(where, "source_tower")), o);
  f.degree = as_long(field(j, "degree", where), sub(where, "degree"));
  if (j.contains("iota")) f.iota = as_long(j["iota"], sub(where, "iota"));

  auto components = [](const Json& arr, const std::string& aw) {
    std::vector<BranchComponent> out;
    for (std::size_t i = 0; i < as_array(arr, aw).size(); ++i) {
      const std::string w = idx(aw, i);
      BranchComponent c;
      c.id = arr[i].contains("id") ? as_string(arr[i]["id"], sub(w, "id")) : "w" + std::to_string(i);
      c.e = as_long(field(arr[i], "e", w), sub(w, "e"));
      c.f = opt_long<long>(arr[i], "f", w).value_or(1);
      c.over = opt_long<std::size_t>(arr[i], "over", w).value_or(0);
      c.status = parse_splitting(as_string(field(arr[i], "status", w), sub(w, "status")));
      out.push_back(c);
    }
    return out;
  };
  // either the limit branch components directly, or a chain of degree-p steps
  std::vector<DegreePStep> steps;
  if (j.contains("steps")) {
    if (j.contains("branch_components")) fail(where, "give branch_components or steps, not both");
    const std::string sw = sub(where, "steps");
    for (std::size_t k = 0; k < as_array(j["steps"], sw).size(); ++k)
      steps.push_back({components(j["steps"][k], idx(sw, k))});
  } else {
    f.branch_components = components(field(j, "branch_components", where), sub(where, "branch_components"));
  }

  // linking data of S-bar against L, read off L u S-bar
  if (j.contains("branch_link")) {
    const std::string w = sub(where, "branch_link");
    const Json& b = j["branch_link"];
    LinkFile lf = load_link(dir / as_string(field(b, "link", w), sub(w, "link")));
    auto lk = linking_matrix(lf.link);
    std::vector<bool> is_sbar(lk.size(), false);
    std::vector<std::size_t> sbar;
    for (std::size_t i = 0; i < as_array(field(b, "s_bar", w), sub(w, "s_bar")).size(); ++i) {
      long c = as_long(b["s_bar"][i], idx(sub(w, "s_bar"), i));
      if (c < 0 || static_cast<std::size_t>(c) >= lk.size()) fail(idx(sub(w, "s_bar"), i), "no component " + std::to_string(c));
      is_sbar[static_cast<std::size_t>(c)] = true;
      sbar.push_back(static_cast<std::size_t>(c));
    }
    for (std::size_t c : sbar) {
      long total = 0;
      for (std::size_t k = 0; k < lk.size(); ++k)
        if (!is_sbar[k]) total += lk[c][k];
      f.s_bar_linking.push_back(total);
    }
    f.s_bar_components = sbar.size();
  }
  if (j.contains("s_bar_components")) f.s_bar_components = static_cast<std::size_t>(as_long(j["s_bar_components"], sub(where, "s_bar_components")));
  const std::string dec = as_string(field(j, "s_bar_decomposition", where), sub(where, "s_bar_decomposition"));
  if (dec == "finite") f.s_bar_decomposition = Decomposition::finite;
  else if (dec == "infinite") f.s_bar_decomposition = Decomposition::infinite;
  else fail(sub(where, "s_bar_decomposition"), "expected \"finite\" or \"infinite\"");

  if (j.contains("hypothesis_flags")) {
    const std::string w = sub(where, "hypothesis_flags");
    const Json& h = j["hypothesis_flags"];
    if (!h.is_object()) fail(w, "expected an object");
    for (auto it = h.begin(); it != h.end(); ++it) {
      bool v = as_bool(it.value(), sub(w, it.key()));
      if (it.key() == "s_bar_infinitely_inert") f.hypotheses.s_bar_infinitely_inert = v;
      else if (it.key() == "mu_target_zero") f.hypotheses.mu_target_zero = v;
      else if (it.key() == "none_inert_in_f0") f.hypotheses.none_inert_in_f0 = v;
      else if (it.key() == "qhs3_levels") f.hypotheses.qhs3_levels = v;
      else fail(w, "unknown flag '" + it.key() + "'");
    }
  }
  if (j.contains("steps")) {
    // an inert step raises DomainError here, reported as a Kida failure
    auto comp = compose_degree_p_steps(f.target.p, f.s_bar_components, steps);
    if (comp.degree != f.degree)
      fail(sub(where, "degree"), "steps compose to degree " + std::to_string(comp.degree));
    f.branch_components = comp.components;
  }
  out.lambda_target = opt_long<int>(j, "lambda_target", where);
  out.lambda_source = opt_long<int>(j, "lambda_source", where);
  return out;
}

// ---------------------------------------------------------------- modules

CyclicGModule module_from_json(const Json& j, const std::string& where) {
  CyclicGModule M;
  M.m = as_long(field(j, "m", where), sub(where, "m"));
  long rank = as_long(field(j, "ambient_rank", where), sub(where, "ambient_rank"));
  if (rank < 0) fail(sub(where, "ambient_rank"), "must be non-negative");
  M.rank = static_cast<std::size_t>(rank);
  auto sigma = as_long_matrix(field(j, "sigma", where), sub(where, "sigma"));
  if (sigma.size() != M.rank) fail(sub(where, "sigma"), "expected " + std::to_string(rank) + " rows");
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i].size() != M.rank) fail(idx(sub(where, "sigma"), i), "expected " + std::to_string(rank) + " entries");
  M.sigma = IntMatrix::from_rows(sigma, M.rank);
  // each relation is one vector of the ambient lattice, stored as a column
  auto rel = j.contains("relations") ? as_long_matrix(j["relations"], sub(where, "relations")) : std::vector<std::vector<long>>{};
  M.relations = IntMatrix(M.rank, rel.size());
  for (std::size_t c = 0; c < rel.size(); ++c) {
    if (rel[c].size() != M.rank) fail(idx(sub(where, "relations"), c), "expected " + std::to_string(rank) + " entries");
    for (std::size_t i = 0; i < M.rank; ++i) M.relations(i, c) = rel[c][i];
  }
  try {
    validate_module(M);
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return M;
}

CyclicGModule load_module(const fs::path& path) {
  Json j = read_json(path);
  check_schema(j, path.string());
  return module_from_json(j, path.string());
}

// ---------------------------------------------------------------- reports

Json group_json(const AbelianGroup& g) {
  Json f = Json::array();
  for (const auto& x : g.invariant_factors()) f.push_back(mpz_json(x));
  return {{"invariant_factors", f}, {"text", g.to_string()}, {"free_rank", g.free_rank()}};
}

Json link_report(const LinkFile& f, std::optional<unsigned long> p) {
  const auto& l = f.link;
  Json r;
  r["schema"] = kSchemaVersion;
  r["kind"] = "link";
  r["name"] = l.name;
  r["provenance"] = f.provenance;
  r["components"] = l.components;
  r["generators"] = l.generators.size();
  r["relators"] = l.relators.size();
  r["crossings"] = l.crossings.size();
  auto lk = linking_matrix(l);
  r["linking_matrix"] = lk;
  r["hosokawa_at_1"] = l.components >= 2 ? mpz_json(abs(hosokawa_at_1(lk))) : Json();
  LaurentPoly delta = f.alexander ? *f.alexander : multivariable_alexander(l);
  std::vector<std::string> names;
  if (l.components == 1) names = {"t"};
  r["alexander"] = delta.to_string(names);
  r["alexander_source"] = f.alexander ? "supplied" : "computed";
  if (p) {
    auto lam = tln_lambda_shortcut(l, *p);
    r["tln_lambda"] = {{"p", *p}, {"lambda", lam ? Json(*lam) : Json()}};
  }
  return r;
}

Json tower_report(const TowerReport& rep) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["kind"] = "tower";
  r["name"] = rep.name;
  r["p"] = rep.p;
  r["precision"] = rep.precision;
  r["truncation"] = rep.truncation;
  r["rebase_level"] = rep.rebase_level;
  r["characteristic_element"] = rep.delta;
  r["paths_agree"] = rep.paths_agree;
  Json ladder = Json::array();
  for (const auto& e : rep.ladder) {
    Json x;
    x["level"] = e.level;
    x["degree"] = e.degree;
    x["qhs3"] = e.qhs3;
    x["fast_exponent"] = e.fast ? Json(*e.fast) : Json();
    x["oracle_group"] = e.oracle ? group_json(*e.oracle) : Json();
    x["oracle_exponent"] = e.oracle_exponent ? Json(*e.oracle_exponent) : Json();
    std::string prov = e.fast && e.oracle ? "resultant+oracle" : e.fast ? "resultant" : e.oracle ? "oracle" : "none";
    x["provenance"] = prov;
    x["note"] = e.note;
    ladder.push_back(x);
  }
  r["ladder"] = ladder;
  if (rep.invariants) {
    const auto& iv = *rep.invariants;
    r["invariants"] = {{"lambda", iv.lambda},       {"mu", iv.mu},
                       {"nu", iv.nu},               {"n0", iv.n0},
                       {"exponents", iv.exponents}, {"qhs3_levels", iv.qhs3_levels},
                       {"precision", iv.precision}};
  } else {
    r["invariants"] = Json();
  }
  r["invariants_note"] = rep.invariants_note;
  return r;
}

Json kida_report(const TowerMorphism& f, const KidaVerdict& v) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["kind"] = "kida";
  r["name"] = f.name;
  r["p"] = f.target.p;
  r["degree"] = f.degree;
  Json hyp = Json::array();
  for (const auto& [name, ok] : v.hypotheses) hyp.push_back({{"hypothesis", name}, {"holds", ok}});
  r["hypotheses"] = hyp;
  auto lam = [](const LambdaInput& x) { return Json{{"value", x.value}, {"source", x.computed ? "computed" : "supplied"}}; };
  r["lambda_target"] = lam(v.lambda_target);
  r["lambda_source"] = lam(v.lambda_source);
  Json comps = Json::array();
  for (const auto& c : f.branch_components)
    comps.push_back({{"id", c.id}, {"e", c.e}, {"f", c.f}, {"over", c.over}, {"status", splitting_name(c.status)}});
  r["branch_components"] = comps;
  r["s_bar_linking"] = f.s_bar_linking;
  r["s_bar_decomposition"] = f.s_bar_decomposition == Decomposition::finite ? "finite" : "infinite";
  r["correction"] = v.correction;
  r["lhs"] = v.lhs;
  r["rhs"] = v.rhs;
  r["identity"] = std::to_string(v.lhs) + " = " + std::to_string(v.rhs - v.correction) + " + " + std::to_string(v.correction);
  r["identity_holds"] = v.identity_holds;
  r["residual"] = v.lhs - v.rhs;
  Json hb;
  hb["solved"] = v.hbar_solved ? Json(v.hbar_solved->get_str()) : Json();
  hb["model"] = v.hbar_model ? Json(*v.hbar_model) : Json();
  r["hbar_defect"] = hb;
  r["passed"] = v.passed();
  return r;
}

Json tate_report(const CyclicGModule& M, int i) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["kind"] = "tate";
  r["m"] = M.m;
  r["ambient_rank"] = M.rank;
  r["i"] = i;
  r["module"] = group_json(underlying_group(M));
  r["group"] = group_json(tate(M, i));
  r["h0"] = group_json(tate(M, 0));
  r["h1"] = group_json(tate(M, 1));
  try {
    r["herbrand_quotient"] = herbrand_quotient(M).get_str();
  } catch (const DomainError&) {
    r["herbrand_quotient"] = Json();
  }
  return r;
}

// ---------------------------------------------------------------- text

namespace {

std::string text_of(const Json& j) { return j.is_null() ? "-" : j.is_string() ? j.get<std::string>() : j.dump(); }

// Long p-adic series keep their head and tail terms; the JSON has them all.
std::string elide_terms(const std::string& s, std::size_t keep = 70) {
  if (s.size() <= 3 * keep) return s;
  std::size_t head = s.find(" ", keep), tail = s.rfind(" ", s.size() - keep);
  while (tail != std::string::npos && tail > 0 && s[tail - 1] != '+' && s[tail - 1] != '-') tail = s.rfind(" ", tail - 1);
  if (head == std::string::npos || tail == std::string::npos || tail <= head) return s;
  return s.substr(0, head) + " ... " + s.substr(tail - 1);
}

}  // namespace

std::string link_text(const Json& r) {
  std::ostringstream o;
  o << "link " << text_of(r["name"]) << ": " << r["components"] << " component(s), " << r["generators"]
    << " generators, " << r["relators"] << " relators\n";
  if (!r["provenance"].get<std::string>().empty()) o << "source: " << text_of(r["provenance"]) << "\n";
  o << "linking matrix:\n";
  for (const auto& row : r["linking_matrix"]) {
    o << " ";
    for (const auto& x : row) o << " " << x;
    o << "\n";
  }
  o << "|H_L(1)| = " << text_of(r["hosokawa_at_1"]) << "\n";
  o << "Delta = " << text_of(r["alexander"]) << " (" << text_of(r["alexander_source"]) << ")\n";
  if (r.contains("tln_lambda"))
    o << "TLN lambda at p = " << r["tln_lambda"]["p"] << ": " << text_of(r["tln_lambda"]["lambda"]) << "\n";
  return o.str();
}

std::string tower_text(const Json& r) {
  std::ostringstream o;
  o << "tower " << text_of(r["name"]) << " at p = " << r["p"] << " (precision " << r["precision"] << ", truncation "
    << r["truncation"] << ")\n";
  o << "characteristic element: " << elide_terms(text_of(r["characteristic_element"])) << "\n";
  if (r["rebase_level"] != 0) o << "exponents relative to level " << r["rebase_level"] << "\n";
  o << "level  degree  QHS3  fast  oracle  group\n";
  for (const auto& e : r["ladder"]) {
    o << "  " << e["level"] << "\t" << e["degree"] << "\t" << (e["qhs3"].get<bool>() ? "yes" : "no") << "\t"
      << text_of(e["fast_exponent"]) << "\t" << text_of(e["oracle_exponent"]) << "\t"
      << (e["oracle_group"].is_null() ? "-" : text_of(e["oracle_group"]["text"]));
    if (!e["note"].get<std::string>().empty()) o << "  (" << text_of(e["note"]) << ")";
    o << "\n";
  }
  if (!r["invariants"].is_null()) {
    const auto& iv = r["invariants"];
    o << "lambda = " << iv["lambda"] << ", mu = " << iv["mu"] << ", nu = " << iv["nu"] << ", exact from n0 = " << iv["n0"]
      << "\n";
  } else {
    o << "invariants: " << text_of(r["invariants_note"]) << "\n";
  }
  o << (r["paths_agree"].get<bool>() ? "fast path and oracle agree\n" : "FAST PATH AND ORACLE DISAGREE\n");
  return o.str();
}

std::string kida_text(const Json& r) {
  std::ostringstream o;
  o << "morphism " << text_of(r["name"]) << ": degree " << r["degree"] << " at p = " << r["p"] << "\n";
  for (const auto& h : r["hypotheses"])
    o << "  [" << (h["holds"].get<bool>() ? "x" : " ") << "] " << text_of(h["hypothesis"]) << "\n";
  o << "lambda(M~) = " << r["lambda_target"]["value"] << " (" << text_of(r["lambda_target"]["source"])
    << "), lambda(N~) = " << r["lambda_source"]["value"] << " (" << text_of(r["lambda_source"]["source"]) << ")\n";
  o << "lambda_N - 1 = deg (lambda_M - 1) + sum (e_w - 1): " << text_of(r["identity"])
    << (r["identity_holds"].get<bool>() ? "" : "  FAILS, residual " + r["residual"].dump()) << "\n";
  if (!r["hbar_defect"]["solved"].is_null())
    o << "hbar_2 - hbar_1: solved " << text_of(r["hbar_defect"]["solved"]) << ", model "
      << text_of(r["hbar_defect"]["model"]) << "\n";
  o << (r["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

std::string tate_text(const Json& r) {
  std::ostringstream o;
  o << "module over Z/" << r["m"] << ": " << text_of(r["module"]["text"]) << "\n";
  o << "H^" << r["i"] << " = " << text_of(r["group"]["text"]) << "\n";
  o << "H^0 = " << text_of(r["h0"]["text"]) << ", H^1 = " << text_of(r["h1"]["text"]) << ", Herbrand quotient "
    << text_of(r["herbrand_quotient"]) << "\n";
  return o.str();
}

}  // namespace iwtower
