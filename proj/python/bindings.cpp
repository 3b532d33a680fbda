#include "cncsynth/checker.hpp"
#include "cncsynth/parser.hpp"
#include "cncsynth/reduction.hpp"
#include "cncsynth/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cncsynth;

namespace {

ScopeHints hints_of(std::optional<int> ports, std::optional<int> extra_names, std::optional<int> extra_types) {
    return ScopeHints{ports, extra_names, extra_types};
}

SolverConfig config_of(std::uint64_t seed, std::optional<double> timeout, const std::string& solver) {
    SolverConfig config;
    config.seed = seed;
    config.limits.seconds = timeout;
    if (!solver.empty() && solver != "internal") {
        config.engine = Engine::External;
        config.executable = solver;
    }
    return config;
}

py::dict stats_dict(const SynthStats& s) {
    py::dict d;
    d["variables"] = s.variables;
    d["clauses"] = s.clauses;
    d["encode_seconds"] = s.encode_seconds;
    d["solve_seconds"] = s.solve_seconds;
    d["conflicts"] = s.solver.conflicts;
    d["decisions"] = s.solver.decisions;
    d["scope"] = s.scope.describe();
    d["ports"] = s.scope.port_slots;
    return d;
}

std::string status_name(SolveStatus s) { return to_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Synthesis and checking of component-and-connector models";

    // Translators run newest first, so the base goes first.
    const auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
    py::register_exception<ScopeError>(m, "ScopeError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::enum_<Direction>(m, "Direction").value("IN", Direction::In).value("OUT", Direction::Out);

    py::class_<Port>(m, "Port")
        .def_readonly("name", &Port::name)
        .def_readonly("direction", &Port::direction)
        .def_readonly("type", &Port::type)
        .def("__repr__", [](const Port& p) {
            return "<Port " + to_string(p.direction) + " " + p.type + " " + p.name + ">";
        });

    py::class_<Component>(m, "Component")
        .def_readonly("name", &Component::name)
        .def_readonly("ports", &Component::ports)
        .def_readonly("subcomponents", &Component::subcomponents);

    py::class_<Connector>(m, "Connector")
        .def_property_readonly("source", [](const Connector& c) { return to_string(c.source); })
        .def_property_readonly("target", [](const Connector& c) { return to_string(c.target); })
        .def("__repr__", [](const Connector& c) { return "<Connector " + to_string(c.source) + " -> " + to_string(c.target) + ">"; });

    py::class_<CncModel>(m, "Model")
        .def_readonly("components", &CncModel::components)
        .def_readonly("connectors", &CncModel::connectors)
        .def_readonly("types", &CncModel::types)
        .def("tops", &CncModel::tops)
        .def("contains", [](const CncModel& model, const std::string& outer, const std::string& inner) {
            return contains_transitive(model, outer, inner);
        })
        .def("to_dot", [](const CncModel& model) { return export_dot(model); })
        .def("__str__", [](const CncModel& model) { return print_model(model); })
        .def("__eq__", [](const CncModel& a, const CncModel& b) { return structurally_equal(a, b); });

    py::class_<CncView>(m, "View")
        .def_readonly("name", &CncView::name)
        .def("__str__", [](const CncView& v) { return print_view(v); });

    py::class_<ResolvedSpec>(m, "Spec")
        .def_property_readonly("name", [](const ResolvedSpec& s) { return s.source.name; })
        .def_property_readonly("view_names", [](const ResolvedSpec& s) {
            std::vector<std::string> names;
            for (const auto& v : s.views) names.push_back(v.name);
            return names;
        })
        .def_readonly("components", &ResolvedSpec::components)
        .def_property_readonly("formula", [](const ResolvedSpec& s) { return s.formula.to_string(); })
        .def("__str__", [](const ResolvedSpec& s) { return print_spec(s.source); });

    py::class_<ViewViolation>(m, "ViewViolation")
        .def_property_readonly("kind", [](const ViewViolation& v) { return to_string(v.kind); })
        .def_readonly("subject", &ViewViolation::subject)
        .def_readonly("explanation", &ViewViolation::explanation);

    py::class_<SatisfactionResult>(m, "SatisfactionResult")
        .def_readonly("satisfied", &SatisfactionResult::satisfied)
        .def_readonly("violations", &SatisfactionResult::violations)
        .def("__bool__", [](const SatisfactionResult& r) { return r.satisfied; });

    py::class_<SpecEvaluation>(m, "SpecEvaluation")
        .def_readonly("overall", &SpecEvaluation::overall)
        .def_readonly("formula_holds", &SpecEvaluation::formula_holds)
        .def_readonly("per_view", &SpecEvaluation::per_view)
        .def_readonly("constraint_violations", &SpecEvaluation::constraint_violations);

    py::class_<SynthResult>(m, "SynthResult")
        .def_property_readonly("outcome", [](const SynthResult& r) { return to_string(r.outcome); })
        .def_readonly("model", &SynthResult::model)
        .def_property_readonly("per_view",
                               [](const SynthResult& r) {
                                   return r.verification ? r.verification->per_view : std::map<std::string, bool>{};
                               })
        .def_property_readonly("stats", [](const SynthResult& r) { return stats_dict(r.stats); });

    m.def("parse_model", [](const std::string& text, bool multi_top) {
        return parse_model(text, ParseOptions{"<input>", multi_top});
    }, py::arg("text"), py::arg("multi_top") = false);
    m.def("parse_view", [](const std::string& text) { return parse_view(text); }, py::arg("text"));
    m.def("load_model", &load_model, py::arg("path"), py::arg("multi_top") = false);
    m.def("load_view", &load_view, py::arg("path"));
    m.def("load_spec", [](const std::string& path, const std::string& style) {
        auto spec = load_spec(path);
        if (!style.empty()) spec.style = parse_style(style, ParseOptions{"style"});
        return resolve(spec);
    }, py::arg("path"), py::arg("style") = "", "Loads and resolves a specification and its view files.");

    m.def("validate_model", [](const CncModel& model, bool multi_top) {
        std::vector<std::string> out;
        for (const auto& v : validate_model(model, ValidationOptions{multi_top})) out.push_back(to_string(v.kind) + ": " + v.message);
        return out;
    }, py::arg("model"), py::arg("multi_top") = false);
    m.def("satisfies", py::overload_cast<const CncModel&, const CncView&>(&satisfies), py::arg("model"), py::arg("view"));
    m.def("evaluate", &evaluate_spec, py::arg("model"), py::arg("spec"));

    m.def("synthesize",
          [](const ResolvedSpec& spec, std::optional<int> ports, std::optional<int> extra_names,
             std::optional<int> extra_types, std::uint64_t seed, std::optional<double> timeout, const std::string& solver) {
              py::gil_scoped_release release;
              return synthesize(spec, hints_of(ports, extra_names, extra_types), config_of(seed, timeout, solver));
          },
          py::arg("spec"), py::arg("ports") = py::none(), py::arg("extra_names") = py::none(),
          py::arg("extra_types") = py::none(), py::arg("seed") = 0, py::arg("timeout") = py::none(),
          py::arg("solver") = "");

    m.def("enumerate",
          [](const ResolvedSpec& spec, int max_solutions, std::optional<int> ports, const std::string& projection,
             std::uint64_t seed, std::optional<double> timeout) {
              Enumeration e;
              {
                  py::gil_scoped_release release;
                  e = enumerate(spec, hints_of(ports, std::nullopt, std::nullopt), config_of(seed, timeout, ""),
                                max_solutions,
                                projection == "containment" ? Projection::Containment : Projection::Structure);
              }
              return py::make_tuple(e.solutions, e.exhausted);
          },
          py::arg("spec"), py::arg("max_solutions"), py::arg("ports") = py::none(), py::arg("projection") = "structure",
          py::arg("seed") = 0, py::arg("timeout") = py::none(),
          "Returns (solutions, exhausted).");

    m.def("emit_dimacs", [](const ResolvedSpec& spec, std::optional<int> ports) {
        return emit_dimacs(encode(spec, compute_scope(spec, merge_hints(spec.source.scope, hints_of(ports, {}, {})))).cnf);
    }, py::arg("spec"), py::arg("ports") = py::none());

    m.def("solve_dimacs", [](const std::string& text, std::uint64_t seed) {
        const auto cnf = parse_dimacs(text);
        SolverConfig config;
        config.seed = seed;
        const auto r = solve(cnf, config);
        std::vector<bool> values;
        for (int v = 1; r.status == SolveStatus::Sat && v <= cnf.num_vars; ++v) values.push_back(r.assignment.value(v));
        return py::make_tuple(status_name(r.status), values);
    }, py::arg("text"), py::arg("seed") = 0, "Returns (status, values of variables 1..n).");

    m.def("reduce_3sat", [](const std::string& dimacs, const std::string& name) {
        const auto spec = reduce_3sat(to_3cnf(parse_dimacs(dimacs)), name);
        std::map<std::string, std::string> views;
        for (const auto& [view_name, view] : spec.views) views[view_name] = print_view(view);
        return py::make_tuple(print_spec(spec), views);
    }, py::arg("dimacs"), py::arg("name") = "Reduction", "Returns (spec text, {view name: view text}).");

    m.def("extract_assignment", &extract_assignment, py::arg("model"), py::arg("num_vars"));

    m.def("audit_counters", [] {
        const auto a = audit_counters();
        py::dict d;
        d["models_verified"] = a.models_verified;
        d["closure_checks"] = a.closure_checks;
        d["closure_mismatches"] = a.closure_mismatches;
        d["soundness_failures"] = a.soundness_failures;
        return d;
    });
}
