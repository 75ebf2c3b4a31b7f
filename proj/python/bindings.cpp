// Python bindings. Reports cross the boundary as JSON text; the package
// wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iwtower/error.hpp"
#include "iwtower/io.hpp"
#include "iwtower/lambda.hpp"

namespace py = pybind11;
using namespace iwtower;

namespace {

py::int_ to_py(const mpz_class& z) { return py::int_(py::str(z.get_str())); }
mpz_class from_py(const py::int_& x) { return mpz_class(py::str(x).cast<std::string>()); }

std::vector<mpz_class> from_py(const std::vector<py::int_>& xs) {
  std::vector<mpz_class> out;
  for (const auto& x : xs) out.push_back(from_py(x));
  return out;
}

py::list to_py(const std::vector<mpz_class>& zs) {
  py::list out;
  for (const auto& z : zs) out.append(to_py(z));
  return out;
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace

PYBIND11_MODULE(_iwtower, m) {
  m.doc() = "Iwasawa invariants of branched Z_p-covers of links";

  // Python classes mirror the C++ hierarchy
  static py::exception<Error> base(m, "Error");
  static py::exception<InputError> input(m, "InputError", base.ptr());
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  static py::exception<PrecisionError> precision(m, "PrecisionError", base.ptr());
  static py::exception<LimitError> limit(m, "LimitError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      input(e.what());
    } catch (const DomainError& e) {
      domain(e.what());
    } catch (const PrecisionError& e) {
      precision(e.what());
    } catch (const LimitError& e) {
      limit(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.attr("schema_version") = kSchemaVersion;

  m.def(
      "inspect", [](const std::string& path, std::optional<unsigned long> p) { return dump(link_report(load_link(path), p)); },
      py::arg("path"), py::arg("p") = py::none());

  m.def(
      "link_report", [](const std::string& text, std::optional<unsigned long> p) {
        return dump(link_report(link_from_json(Json::parse(text), "link"), p));
      },
      py::arg("text"), py::arg("p") = py::none(), "Link report from the JSON text of a link file.");

  m.def(
      "tower",
      [](const std::string& path, bool oracle, std::optional<unsigned long> p, std::optional<int> precision,
         std::optional<int> truncation, std::optional<int> levels, std::optional<long> oracle_max) {
        auto spec = load_tower(path, {p, precision, truncation, levels, oracle_max});
        py::gil_scoped_release release;
        return dump(tower_report(compute_tower(spec, oracle)));
      },
      py::arg("path"), py::arg("oracle") = true, py::arg("p") = py::none(), py::arg("precision") = py::none(),
      py::arg("truncation") = py::none(), py::arg("levels") = py::none(), py::arg("oracle_max") = py::none());

  m.def(
      "kida",
      [](const std::string& path) {
        auto mf = load_morphism(path);
        auto v = kida_check(mf.morphism, resolve_lambda(mf.morphism.target, mf.lambda_target),
                            resolve_lambda(mf.morphism.source, mf.lambda_source));
        return dump(kida_report(mf.morphism, v));
      },
      py::arg("path"));

  m.def(
      "tate", [](const std::string& path, int i) { return dump(tate_report(load_module(path), i)); }, py::arg("path"),
      py::arg("i") = 0);

  m.def(
      "tate_report", [](const std::string& text, int i) {
        return dump(tate_report(module_from_json(Json::parse(text), "module"), i));
      },
      py::arg("text"), py::arg("i") = 0, "Tate report from the JSON text of a module file.");

  m.def(
      "hensel_root",
      [](const std::vector<py::int_>& f, const py::int_& x0, unsigned long p, int precision) {
        auto r = hensel_root(from_py(f), from_py(x0), p, precision);
        return py::make_tuple(to_py(r.residue()), r.digits());
      },
      py::arg("f"), py::arg("x0"), py::arg("p"), py::arg("precision"),
      "Root of f (coefficients low to high) lifted from x0 mod p: (residue, base-p digits).");

  m.def(
      "weierstrass",
      [](const std::vector<py::int_>& f, unsigned long p, int precision, int truncation) {
        auto w = weierstrass_prepare(LambdaElement::from_poly_T(p, precision, truncation, IntPoly(from_py(f))));
        py::dict d;
        d["mu"] = w.mu;
        d["lambda"] = w.lambda;
        d["distinguished"] = to_py(w.distinguished.residues());
        d["unit"] = to_py(w.unit.residues());
        d["precision"] = w.precision;
        d["unit_precision"] = w.unit_precision;
        return d;
      },
      py::arg("f"), py::arg("p"), py::arg("precision"), py::arg("truncation"),
      "Weierstrass preparation of a polynomial in T: p^mu * unit * distinguished.");
}
