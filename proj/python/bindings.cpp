#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cantor/attractor.hpp"
#include "cantor/dissection.hpp"
#include "cantor/errors.hpp"
#include "cantor/ifs.hpp"
#include "cantor/job.hpp"
#include "cantor/oracle.hpp"
#include "cantor/setops.hpp"

#include <sstream>

namespace py = pybind11;

// Rational <-> fractions.Fraction, BigInt <-> int. Floats are refused so that overloads fall through
// to the double versions.
namespace pybind11::detail {

template <>
struct type_caster<cantor::BigInt> {
  PYBIND11_TYPE_CASTER(cantor::BigInt, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    value = cantor::BigInt(py::str(src).cast<std::string>(), 10);
    return true;
  }
  static handle cast(const cantor::BigInt& v, return_value_policy, handle) {
    return PyLong_FromString(v.get_str().c_str(), nullptr, 10);
  }
};

template <>
struct type_caster<cantor::Rational> {
  PYBIND11_TYPE_CASTER(cantor::Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (PyLong_Check(src.ptr())) {
      value = cantor::Rational(cantor::BigInt(py::str(src).cast<std::string>(), 10));
      return true;
    }
    static const py::object fraction = py::module_::import("fractions").attr("Fraction");
    if (!py::isinstance(src, fraction)) return false;
    cantor::BigInt num(py::str(src.attr("numerator")).cast<std::string>(), 10);
    cantor::BigInt den(py::str(src.attr("denominator")).cast<std::string>(), 10);
    value = cantor::Rational(num, den);
    value.canonicalize();
    return true;
  }
  static handle cast(const cantor::Rational& v, return_value_policy, handle) {
    static const py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::int_ num = py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_num().get_str().c_str(), nullptr, 10));
    py::int_ den = py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_den().get_str().c_str(), nullptr, 10));
    return fraction(num, den).release();
  }
};

}  // namespace pybind11::detail

namespace {

using namespace cantor;

template <class T>
using Pair = std::pair<T, T>;

template <class T>
std::vector<Pair<T>> pairs(const IntervalUnion<T>& u) {
  std::vector<Pair<T>> v;
  for (const auto& iv : u) v.emplace_back(iv.lo, iv.hi);
  return v;
}

template <class T>
std::vector<Pair<T>> pairs(const std::vector<OpenInterval<T>>& gs) {
  std::vector<Pair<T>> v;
  for (const auto& g : gs) v.emplace_back(g.lo, g.hi);
  return v;
}

template <class T>
IntervalUnion<T> union_of(const std::vector<Pair<T>>& v) {
  std::vector<Interval<T>> ivs;
  for (const auto& [a, b] : v) ivs.emplace_back(a, b);
  return IntervalUnion<T>::from_pieces(std::move(ivs));
}

template <class T>
Ifs<T> ifs_of(const std::vector<Pair<T>>& maps) {
  std::vector<MapDescriptor<T>> ds;
  for (const auto& [s, o] : maps) ds.push_back(MapDescriptor<T>::affine(s, o));
  return Ifs<T>(std::move(ds));
}

Mode mode_of(const std::string& m) {
  if (m == "empirical") return Mode::empirical;
  if (m == "certified") return Mode::certified;
  throw InputError("mode must be \"empirical\" or \"certified\"");
}

template <class T>
py::dict attractor(const std::vector<Pair<T>>& maps, const T& alpha, const std::string& mode, double tol,
                   std::size_t extra_terms) {
  SecondGenSpec<T> spec{FirstGeneration<T>(ifs_of(maps)), alpha};
  AttractorOptions o;
  o.mode = mode_of(mode);
  o.tol = tol;
  o.extra_terms = extra_terms;
  AttractorResult<T> r;
  {
    py::gil_scoped_release unlocked;
    r = second_gen_attractor(spec, o);
  }
  py::dict d;
  d["intervals"] = pairs(r.set);
  d["n"] = r.n;
  d["stabilization_n"] = r.stabilization_n;
  d["depth"] = r.depth;
  d["guarantee"] = r.guarantee;
  d["displacements"] = r.displacements;
  d["sandwich"] = sandwich_check(spec, r.set, r.depth);
  return d;
}

template <class T>
std::vector<Pair<T>> neps(const std::vector<Pair<T>>& maps, const T& alpha, const T& eps, std::size_t depth) {
  return pairs(n_epsilon(FirstGeneration<T>(ifs_of(maps)), alpha, eps, depth));
}

template <class T>
void bind_construction(py::module_& m, const char* name) {
  using C = Construction<T>;
  py::class_<C, std::shared_ptr<C>>(m, name)
      .def("root", [](const C& c) { return Pair<T>(c.root().lo, c.root().hi); })
      .def("cover", [](const std::shared_ptr<C>& c, std::size_t n) { return pairs(cover<T>(c, n)); }, py::arg("n"))
      .def("ulbd_bound", [](const std::shared_ptr<C>& c, std::size_t depth) { return ulbd_bound<T>(c, depth).bound; },
           py::arg("depth") = 10)
      .def("max_gap", [](const std::shared_ptr<C>& c, std::size_t depth) { return max_gap<T>(c, depth).width; },
           py::arg("depth") = 10);
}

template <class T>
std::shared_ptr<Construction<T>> mutable_ptr(const ConstructionPtr<T>& c) {
  return std::const_pointer_cast<Construction<T>>(c);
}

template <class T>
std::vector<ConstructionPtr<T>> cptrs(const std::vector<std::shared_ptr<Construction<T>>>& cs) {
  return {cs.begin(), cs.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cantor set constructions, their sums and unions, and second-generation attractors.";

  auto base = py::register_exception<Error>(m, "CantorError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<OverlapError>(m, "OverlapError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<CertificateError>(m, "CertificateError", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<DegenerateAttractor>(m, "DegenerateAttractor", base.ptr());
  py::register_exception<UndefinedDistance>(m, "UndefinedDistance", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

  bind_construction<Rational>(m, "Construction");
  bind_construction<double>(m, "FloatConstruction");

  m.def("middle_third", [](const Rational& lo, const Rational& hi) { return mutable_ptr(middle_third(lo, hi)); },
        py::arg("lo"), py::arg("hi"));
  m.def("middle_third", [](double lo, double hi) { return mutable_ptr(middle_third(lo, hi)); }, py::arg("lo"),
        py::arg("hi"));
  m.def("rule",
        [](const Rational& lo, const Rational& hi, const Rational& left, const Rational& right) {
          return mutable_ptr(make_rule(Interval<Rational>(lo, hi), left, right));
        },
        py::arg("lo"), py::arg("hi"), py::arg("left"), py::arg("right"));
  m.def("union_construct",
        [](const std::shared_ptr<Construction<Rational>>& a, const std::shared_ptr<Construction<Rational>>& b) {
          return mutable_ptr(union_construct<Rational>(a, b));
        });

  m.def("aprime", &aprime<Rational>, py::arg("a"));
  m.def("aprime", &aprime<double>, py::arg("a"));
  m.def("a_m", &a_m<Rational>, py::arg("a"), py::arg("m"));
  m.def("a_m", &a_m<double>, py::arg("a"), py::arg("m"));
  m.def("cabrelli_value", &cabrelli_value<Rational>, py::arg("a"), py::arg("m"));
  m.def("cabrelli_value", &cabrelli_value<double>, py::arg("a"), py::arg("m"));
  m.def("cabrelli_check", &cabrelli_check<Rational>, py::arg("a"), py::arg("m"));
  m.def("cabrelli_check", &cabrelli_check<double>, py::arg("a"), py::arg("m"));
  m.def("geometric_count", &geometric_count<Rational>, py::arg("a1"), py::arg("a2"), py::arg("a"));

  m.def("compose_phi", &compose_phi<Rational>, py::arg("alpha"), py::arg("betas"), py::arg("x"));
  m.def("compose_phi", &compose_phi<double>, py::arg("alpha"), py::arg("betas"), py::arg("x"));

  m.def("ratio_floor", [](const std::vector<Pair<Rational>>& maps) { return ratio_floor(ifs_of(maps)); },
        py::arg("maps"));
  m.def("attractor_cover",
        [](const std::vector<Pair<Rational>>& maps, std::size_t depth) { return pairs(attractor_bounds(ifs_of(maps), depth).outer); },
        py::arg("maps"), py::arg("depth"));
  m.def("attractor_cover",
        [](const std::vector<Pair<double>>& maps, std::size_t depth) { return pairs(attractor_bounds(ifs_of(maps), depth).outer); },
        py::arg("maps"), py::arg("depth"));

  m.def("sum_is_interval",
        [](const std::vector<std::shared_ptr<Construction<Rational>>>& cs, const Rational& a, std::size_t depth) {
          auto c = sum_is_interval(cptrs(cs), a, depth);
          py::dict d;
          d["certified"] = c.certified;
          d["condition_value"] = c.condition_value;
          d["interval"] = c.interval ? py::cast(Pair<Rational>(c.interval->lo, c.interval->hi)) : py::none();
          d["reason"] = c.reason;
          return d;
        },
        py::arg("sets"), py::arg("a"), py::arg("depth") = 12);

  m.def("second_gen_attractor", &attractor<Rational>, py::arg("maps"), py::arg("alpha"), py::arg("mode") = "empirical",
        py::arg("tol") = 1e-9, py::arg("extra_terms") = 0);
  m.def("second_gen_attractor", &attractor<double>, py::arg("maps"), py::arg("alpha"), py::arg("mode") = "empirical",
        py::arg("tol") = 1e-6, py::arg("extra_terms") = 0);
  m.def("n_epsilon", &neps<Rational>, py::arg("maps"), py::arg("alpha"), py::arg("eps"), py::arg("depth") = 8);
  m.def("n_epsilon", &neps<double>, py::arg("maps"), py::arg("alpha"), py::arg("eps"), py::arg("depth") = 8);

  m.def("grid_second_gen",
        [](const std::vector<Pair<double>>& maps, double alpha, double h, std::size_t beta_depth) {
          auto f = ifs_of(maps);
          py::gil_scoped_release unlocked;
          return pairs(grid_second_gen(f, alpha, h, beta_depth).to_union());
        },
        py::arg("maps"), py::arg("alpha"), py::arg("h"), py::arg("beta_depth") = 8);
  m.def("hausdorff", [](const std::vector<Pair<Rational>>& a, const std::vector<Pair<Rational>>& b) {
    return hausdorff_distance(union_of(a), union_of(b));
  });
  m.def("hausdorff", [](const std::vector<Pair<double>>& a, const std::vector<Pair<double>>& b) {
    return hausdorff_distance(union_of(a), union_of(b));
  });

  m.def("run_job",
        [](const std::string& text, const std::filesystem::path& out_dir, std::optional<std::string> command,
           std::optional<std::string> alpha, std::optional<std::size_t> depth, bool svg) {
          job::Overrides o;
          o.command = std::move(command);
          o.alpha = std::move(alpha);
          o.depth = depth;
          o.svg = svg;
          std::ostringstream out, err;
          int code;
          {
            py::gil_scoped_release unlocked;
            code = job::run_document(text, o, out_dir, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("spec"), py::arg("out_dir"), py::arg("command") = py::none(), py::arg("alpha") = py::none(),
        py::arg("depth") = py::none(), py::arg("svg") = false);
}
