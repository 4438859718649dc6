#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seamlab/error.hpp"
#include "seamlab/injection.hpp"
#include "seamlab/machine.hpp"
#include "seamlab/testkit.hpp"

namespace py = pybind11;
using namespace seamlab;

namespace {

py::object to_py(const Value& v) {
    if (v.is_unset()) return py::none();
    if (v.is_number()) return py::float_(v.number());
    if (v.is_bool()) return py::bool_(v.boolean());
    if (v.is_string()) return py::str(v.string());
    if (v.is_array()) {
        py::list out;
        for (double d : v.array()) out.append(d);
        return out;
    }
    if (v.is_record()) {
        py::dict out;
        for (const auto& [k, val] : v.record().fields) out[py::str(k)] = to_py(val);
        return out;
    }
    if (v.is_handle()) return py::str("@" + v.handle().name);
    return py::str("<closure>");
}

Value from_py(const py::handle& obj) {
    if (obj.is_none()) return Value();
    if (py::isinstance<py::bool_>(obj)) return Value(obj.cast<bool>());
    if (py::isinstance<py::int_>(obj) || py::isinstance<py::float_>(obj))
        return Value(obj.cast<double>());
    if (py::isinstance<py::str>(obj)) return Value(obj.cast<std::string>());
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        Value::Array arr;
        for (const auto& item : obj) arr.push_back(item.cast<double>());
        return Value(std::move(arr));
    }
    if (py::isinstance<py::dict>(obj)) {
        Value::Record rec;
        for (const auto& [k, val] : obj.cast<py::dict>())
            rec.fields[k.cast<std::string>()] = from_py(val);
        return Value(std::move(rec));
    }
    throw py::type_error("cannot convert Python object to a seamlab value");
}

SiteSelector selector_from_py(const py::handle& obj) {
    if (py::isinstance<py::str>(obj))
        return SiteSelector::from_label(obj.cast<std::string>());
    if (py::isinstance<py::int_>(obj))
        return SiteSelector::from_line(obj.cast<int>());
    throw py::type_error("selector must be a label string or a line number");
}

Value::Closure closure_from_source(const std::string& expression) {
    std::string text = "@() " + expression;
    auto program = parse(tokenize(text), "<evalat>");
    const Expr& e = *program->script_body.front().rhs;
    Value::Closure c;
    c.params = e.params;
    c.body = e.args[0];
    c.captured = std::make_shared<const std::map<std::string, Value>>();
    return c;
}

py::dict result_to_py(const TestSuiteResult& r) {
    py::dict out;
    out["suite"] = r.suite;
    out["verdict"] = r.verdict == TestSuiteResult::Verdict::Pass    ? "pass"
                     : r.verdict == TestSuiteResult::Verdict::Fail ? "fail"
                                                                   : "error";
    out["assertions"] = r.assertion_count();
    out["failures"] = r.failure_count();
    py::list sections;
    for (const auto& s : r.sections) {
        py::dict sec;
        sec["name"] = s.name;
        py::list outcomes;
        for (const auto& o : s.outcomes) {
            py::dict od;
            od["passed"] = o.passed;
            od["actual"] = to_py(o.actual);
            od["expected"] = to_py(o.expected);
            od["line"] = o.line;
            outcomes.append(od);
        }
        sec["outcomes"] = outcomes;
        sections.append(sec);
    }
    out["sections"] = sections;
    out["diagnostics"] = r.diagnostics;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "seamlab: MiniScript interpreter with injection testing";

    py::register_exception<Error>(m, "SeamlabError");

    py::class_<Machine>(m, "Machine")
        .def(py::init([](const std::string& cache_dir, bool halt_on_injection_error) {
                 MachineConfig cfg;
                 if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
                 cfg.halt_on_injection_error = halt_on_injection_error;
                 return std::make_unique<Machine>(cfg);
             }),
             py::arg("cache_dir") = "", py::arg("halt_on_injection_error") = false)
        .def("load", &Machine::load, py::arg("path"))
        .def("load_source", &Machine::load_source, py::arg("source"), py::arg("path"))
        .def("call",
             [](Machine& m, const std::string& fn, const py::args& args) {
                 std::vector<Value> vargs;
                 for (const auto& a : args) vargs.push_back(from_py(a));
                 py::list out;
                 for (const auto& v : m.call(fn, vargs)) out.append(to_py(v));
                 return out;
             },
             py::arg("function"))
        .def_property_readonly("output",
                               [](const Machine& m) { return m.output(); })
        .def("clear_output", &Machine::clear_output)
        .def_property_readonly("diagnostics",
                               [](const Machine& m) { return m.diagnostics(); });

    m.def("gotoat", [](Machine& m, const std::string& fun, const py::handle& target) {
        gotoat(m, fun, selector_from_py(target));
    });
    m.def("assignat",
          [](Machine& m, const std::string& fun, const py::handle& at, const py::dict& pairs) {
              std::vector<std::pair<std::string, Value>> list;
              for (const auto& [k, v] : pairs)
                  list.emplace_back(k.cast<std::string>(), from_py(v));
              assignat(m, fun, selector_from_py(at), list);
          });
    m.def("captureat",
          [](Machine& m, const std::string& fun, const py::handle& at, const py::object& var) {
              std::optional<std::string> name;
              if (!var.is_none()) name = var.cast<std::string>();
              captureat(m, fun, selector_from_py(at), name);
          },
          py::arg("machine"), py::arg("fun"), py::arg("at"), py::arg("var") = py::none());
    m.def("captureat", [](Machine& m) { return to_py(Value(captureat(m))); });
    m.def("returnat", [](Machine& m, const std::string& fun, const py::handle& at) {
        returnat(m, fun, selector_from_py(at));
    });
    m.def("evalat",
          [](Machine& m, const std::string& fun, const py::handle& at,
             const std::string& expression) {
              evalat(m, fun, selector_from_py(at), closure_from_source(expression));
          });
    m.def("clearat", [](Machine& m) { clearat(m); });
    m.def("clearat", [](Machine& m, const std::string& fun) { clearat(m, fun); });

    m.def("run_suite", [](Machine& m, const std::string& path) {
        return result_to_py(run_suite(m, path));
    });

    m.def("serialize", [](const py::handle& v) { return serialize(from_py(v)); });
    m.def("deserialize", [](const std::string& text) { return to_py(deserialize(text)); });
}
