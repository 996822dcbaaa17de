// Python bindings. Sets cross the boundary as lists of ints (coordinate lists
// for vector groups); instances and reports cross as JSON text, which the
// package wrapper turns into dicts.
#include "hbsg/errors.hpp"
#include "hbsg/harness.hpp"
#include "hbsg/oracle.hpp"
#include "hbsg/selection.hpp"
#include "hbsg/sumset.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hbsg;

namespace {

GroupSpec group_of(const std::string& group_json) {
  if (group_json.empty()) {
    return GroupSpec::integer_window(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
  }
  return group_spec_from_json(Json::parse(group_json));
}

ElemSet set_of(const GroupSpec& g, const std::string& elements_json) {
  return elem_set_from_json(g, Json::parse(elements_json));
}

std::string elements_of(const ElemSet& s) { return to_json(s)["elements"].dump(); }

std::string run_instance_json(const std::string& spec, bool with_oracle) {
  auto report = harness::run_instance(Json::parse(spec), with_oracle);
  return report.report.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact sumset arithmetic and string-set extraction";

  // translators run newest first, so the base class goes first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SpecMismatch>(m, "SpecMismatch", PyExc_ValueError);
  py::register_exception<WindowOverflow>(m, "WindowOverflow", PyExc_OverflowError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("sumset", [](const std::string& g, const std::string& x, const std::string& y) {
    const GroupSpec spec = group_of(g);
    return elements_of(sumset(set_of(spec, x), set_of(spec, y)));
  });
  m.def("difference_set", [](const std::string& g, const std::string& x, const std::string& y) {
    const GroupSpec spec = group_of(g);
    return elements_of(difference_set(set_of(spec, x), set_of(spec, y)));
  });
  m.def("iterated_sumset", [](const std::string& g, const std::string& x, int ell) {
    return elements_of(iterated_sumset(set_of(group_of(g), x), ell));
  });
  m.def("additive_energy", [](const std::string& g, const std::string& x, const std::string& y) {
    const GroupSpec spec = group_of(g);
    return additive_energy(set_of(spec, x), set_of(spec, y));
  });
  m.def("doubling_constant", [](const std::string& g, const std::string& x) {
    return to_string(doubling_constant(set_of(group_of(g), x)));
  });
  m.def("plunnecke_check", [](const std::string& g, const std::string& x, int ell_max) {
    return to_json(plunnecke_check(set_of(group_of(g), x), ell_max)).dump();
  });
  m.def("ruzsa_triangle_check",
        [](const std::string& g, const std::string& x, const std::string& y, const std::string& z) {
          const GroupSpec spec = group_of(g);
          return to_json(ruzsa_triangle_check(set_of(spec, x), set_of(spec, y), set_of(spec, z)))
              .dump();
        });
  m.def("sigma", [](const std::string& g, const std::string& a, const std::string& strings) {
    const ElemSet ambient = set_of(group_of(g), a);
    return elements_of(sigma(string_set_from_json(ambient, Json::parse(strings))));
  });
  m.def("select_popular_intersector",
        [](std::size_t n, std::vector<std::vector<std::size_t>> members, const std::string& delta) {
          const auto cert =
              select_popular_intersector(FamilyOfSubsets(n, std::move(members)), parse_rational(delta));
          return to_json(cert).dump();
        });
  m.def("bsg_extract", [](const std::string& g, const std::string& x, const std::string& cfg) {
    const ElemSet set = set_of(group_of(g), x);
    PipelineParams p = params_from_json(Json{{"bsg", Json::parse(cfg)}});
    return to_json(bsg_extract(set, set, p.bsg)).dump();
  });
  m.def("best_subset_growth",
        [](const std::string& g, const std::string& a, int ell, std::size_t min_size) {
          const auto best = oracle::best_subset_growth(set_of(group_of(g), a), ell, min_size);
          return py::make_tuple(elements_of(best.best), best.size);
        });
  m.def("generate_instance", [](const std::string& spec) {
    return harness::materialize(harness::generate_instance(Json::parse(spec))).dump();
  });
  m.def("run_instance", &run_instance_json, py::arg("spec"), py::arg("oracle") = false,
        py::call_guard<py::gil_scoped_release>());
}
