// Python bindings. Elements cross the boundary as words in the group's
// generator names and come back as normal-form strings; reports come back
// as the same dicts the CLI writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "relfix/automorphism.hpp"
#include "relfix/cli.hpp"
#include "relfix/enumerate.hpp"
#include "relfix/fixlab.hpp"
#include "relfix/parse.hpp"
#include "relfix/suites.hpp"

namespace py = pybind11;
using namespace relfix;

namespace {

py::object to_python(Json const& j) { return py::module_::import("json").attr("loads")(j.dump()); }

class PyGroup {
 public:
  explicit PyGroup(GroupFile file) : file_(std::make_shared<GroupFile>(std::move(file))) {}

  GroupSpec const& spec() const { return file_->spec; }
  GroupFile const& file() const { return *file_; }

  NormalForm element(std::string const& word) const {
    return spec().normal_form(parse_word(word, spec()));
  }
  std::string format(NormalForm const& g) const { return spec().format(g); }

  Metrics const& metrics() const {
    if (!metrics_) metrics_ = std::make_shared<Metrics>(spec());
    return *metrics_;
  }

 private:
  std::shared_ptr<GroupFile> file_;
  mutable std::shared_ptr<Metrics> metrics_;
};

struct PyAutomorphism {
  PyGroup group;
  Automorphism phi;
};

DomainWindow window(std::size_t syl, Coord coord) { return {syl, coord}; }

std::vector<std::string> formatted(PyGroup const& g, std::vector<NormalForm> const& elements) {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (auto const& e : elements) out.push_back(g.format(e));
  return out;
}

}  // namespace

PYBIND11_MODULE(_relfix, m) {
  m.doc() = "Fixed subgroups of automorphisms of free products of abelian and free groups";
  m.attr("__version__") = tool_version();

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<CapExceeded>(m, "CapExceeded");
  py::register_exception<PreconditionError>(m, "PreconditionError");

  py::class_<PyGroup>(m, "Group")
      .def_static("from_text", [](std::string const& text) { return PyGroup(parse_group_file(text)); })
      .def_static("from_file",
                  [](std::string const& path) {
                    auto read = py::module_::import("pathlib").attr("Path")(path).attr("read_text")();
                    return PyGroup(parse_group_file(read.cast<std::string>()));
                  })
      .def_property_readonly("digest", [](PyGroup const& g) { return group_digest(g.spec()); })
      .def_property_readonly("automorphisms",
                             [](PyGroup const& g) {
                               std::vector<std::string> names;
                               for (auto const& d : g.file().automorphisms) names.push_back(d.name);
                               return names;
                             })
      .def("normal_form", [](PyGroup const& g, std::string const& w) { return g.format(g.element(w)); })
      .def("multiply",
           [](PyGroup const& g, std::vector<std::string> const& words) {
             auto out = g.spec().identity();
             for (auto const& w : words) out = g.spec().multiply(out, g.element(w));
             return g.format(out);
           })
      .def("inverse", [](PyGroup const& g, std::string const& w) { return g.format(g.spec().invert(g.element(w))); })
      .def("rel_length", [](PyGroup const& g, std::string const& w) { return g.metrics().rel_length(g.element(w)); })
      .def("x_length", [](PyGroup const& g, std::string const& w) { return g.metrics().x_length(g.element(w)); })
      .def("geodesic",
           [](PyGroup const& g, std::string const& from, std::string const& to) {
             return format_path(g.spec(), canonical_geodesic(g.metrics(), g.element(from), g.element(to)));
           })
      .def("window", [](PyGroup const& g, std::size_t syl, Coord coord) {
             return formatted(g, enumerate_domain(g.spec(), window(syl, coord)));
           }, py::arg("syl"), py::arg("coord"))
      .def("centralizer",
           [](PyGroup const& g, std::string const& w, std::size_t syl, Coord coord) {
             return formatted(g, centralizer_oracle(g.spec(), g.element(w), window(syl, coord)));
           },
           py::arg("word"), py::arg("syl"), py::arg("coord"))
      .def("automorphism",
           [](PyGroup const& g, std::string const& name) {
             auto const* def = g.file().find(name);
             if (!def) throw py::key_error(name);
             return PyAutomorphism{g, Automorphism::from_definition(g.spec(), *def)};
           })
      .def("inner", [](PyGroup const& g, std::string const& w) {
        return PyAutomorphism{g, Automorphism::inner(g.spec(), g.element(w))};
      });

  py::class_<PyAutomorphism>(m, "Automorphism")
      .def_property_readonly("name", [](PyAutomorphism const& a) { return a.phi.name(); })
      .def_property_readonly("S", [](PyAutomorphism const& a) { return a.phi.S(); })
      .def("__call__", [](PyAutomorphism const& a, std::string const& w) {
        return a.group.format(a.phi.apply(a.group.element(w)));
      })
      .def("inverse_image", [](PyAutomorphism const& a, std::string const& w) {
        return a.group.format(a.phi.apply_inverse(a.group.element(w)));
      })
      .def("is_fixed", [](PyAutomorphism const& a, std::string const& w) {
        return is_fixed(a.phi, a.group.element(w));
      })
      .def("fixed",
           [](PyAutomorphism const& a, std::size_t syl, Coord coord) {
             std::vector<NormalForm> out;
             {
               py::gil_scoped_release release;
               out = enumerate_fixed(a.phi, window(syl, coord)).elements;
             }
             return formatted(a.group, out);
           },
           py::arg("syl") = 3, py::arg("coord") = 3)
      .def("qc_profile",
           [](PyAutomorphism const& a, std::size_t syl, Coord coord, std::size_t cap) {
             return to_python(to_json(quasiconvexity_profile(a.phi, window(syl, coord), cap)));
           },
           py::arg("syl") = 3, py::arg("coord") = 3, py::arg("cap") = 64)
      .def("induced",
           [](PyAutomorphism const& a, std::size_t syl, Coord coord, std::size_t threshold) {
             return to_python(to_json(induced_peripherals(a.phi, window(syl, coord), threshold).report));
           },
           py::arg("syl") = 3, py::arg("coord") = 3, py::arg("threshold") = 0)
      .def("bounded_generation",
           [](PyAutomorphism const& a, std::size_t syl, Coord coord, Coord p) {
             return to_python(to_json(bounded_generation_check(a.phi, window(syl, coord), p)));
           },
           py::arg("syl") = 3, py::arg("coord") = 3, py::arg("p") = -1)
      .def("verify",
           [](PyAutomorphism const& a, std::string const& suite, std::size_t syl, Coord coord,
              std::uint64_t seed, std::size_t samples) {
             SuiteConfig config;
             config.window = window(syl, coord);
             config.seed = seed;
             config.samples = samples;
             std::vector<ProbeReport> reports;
             {
               py::gil_scoped_release release;
               reports = run_suite(suite, a.phi, config);
             }
             py::list out;
             for (auto const& r : reports) out.append(to_python(to_json(r)));
             return out;
           },
           py::arg("suite") = "all", py::arg("syl") = 3, py::arg("coord") = 3, py::arg("seed") = 42,
           py::arg("samples") = 200);

  m.def("suite_names", [] { return suite_names(); });
  m.def(
      "run_command",
      [](std::vector<std::string> const& args) {
        std::ostringstream out;
        std::ostringstream err;
        int status;
        {
          py::gil_scoped_release release;
          status = run_command(args, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      "CLI entry point: (exit status, stdout, stderr).");
}
