// cncsynth command-line tool.
//
// Exit codes: 0 success (model found, check passed), 1 unsatisfiable within
// scope or check failed, 2 usage or input error, 3 internal or resource error.

#include "cncsynth/checker.hpp"
#include "cncsynth/parser.hpp"
#include "cncsynth/reduction.hpp"
#include "cncsynth/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace cncsynth;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

struct UsageError : Error {
    using Error::Error;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    if (!out) throw UsageError("cannot write '" + path + "'");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_table(const std::map<std::string, bool>& per_view, const std::vector<std::string>& order) {
    std::size_t width = 4;
    for (const auto& name : order) width = std::max(width, name.size());
    std::cout << "  " << std::left << std::setw(static_cast<int>(width)) << "view" << "  satisfied\n";
    for (const auto& name : order)
        std::cout << "  " << std::left << std::setw(static_cast<int>(width)) << name << "  " << yes_no(per_view.at(name))
                  << '\n';
}

std::vector<std::string> view_order(const ResolvedSpec& spec) {
    std::vector<std::string> order;
    for (const auto& v : spec.views) order.push_back(v.name);
    return order;
}

json scope_json(const Scope& s) {
    return {{"components", s.components},
            {"ports", s.port_slots},
            {"portLowerBound", s.port_lower_bound},
            {"names", s.names.size()},
            {"freshNames", s.fresh_names},
            {"types", s.types.size()},
            {"freshTypes", s.fresh_types}};
}

json stats_json(const SynthStats& s) {
    return {{"variables", s.variables},
            {"clauses", s.clauses},
            {"encodeSeconds", s.encode_seconds},
            {"solveSeconds", s.solve_seconds},
            {"conflicts", s.solver.conflicts},
            {"decisions", s.solver.decisions},
            {"propagations", s.solver.propagations},
            {"restarts", s.solver.restarts}};
}

json violation_json(const ViewViolation& v) {
    return {{"kind", to_string(v.kind)}, {"subject", v.subject}, {"explanation", v.explanation}};
}

void print_violations(const SatisfactionResult& r, const std::string& indent) {
    for (const auto& v : r.violations) {
        std::cout << indent << to_string(v.kind);
        for (std::size_t i = 0; i < v.subject.size(); ++i) std::cout << (i ? ", " : " ") << v.subject[i];
        std::cout << ": " << v.explanation << '\n';
    }
}

SolverConfig solver_config(const std::string& solver, std::uint64_t seed, double timeout) {
    SolverConfig config;
    config.seed = seed;
    std::string executable = solver;
    if (executable.empty())
        if (const char* env = std::getenv("CNCSYNTH_SOLVER")) executable = env;
    if (!executable.empty() && executable != "internal") {
        config.engine = Engine::External;
        config.executable = executable;
    }
    if (timeout > 0) config.limits.seconds = timeout;
    return config;
}

struct ScopeFlags {
    std::optional<int> ports;
    std::optional<int> extra_names;
    std::optional<int> extra_types;
    std::string style;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--ports", ports, "Port slots in the scope");
        cmd->add_option("--extra-names", extra_names, "Fresh port names beyond those in the views");
        cmd->add_option("--extra-types", extra_types, "Fresh types beyond those in the views");
        cmd->add_option("--style", style,
                        "Override the style: none, hierarchical, 'client-server(server = S, clients = A, B)' or "
                        "'layered([A, B]; [C])'");
    }

    ScopeHints hints() const { return ScopeHints{ports, extra_names, extra_types}; }

    ResolvedSpec load(const std::string& path) const {
        auto spec = load_spec(path);
        if (!style.empty()) spec.style = parse_style(style, ParseOptions{"--style"});
        return resolve(spec);
    }
};

// -- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string spec;
    ScopeFlags scope;
    std::string solver;
    std::uint64_t seed = 0;
    std::string out;
    std::string dot;
    int max_solutions = 1;
    std::string projection = "structure";
    double timeout = 0;
    bool json = false;
};

std::string numbered(const std::string& path, std::size_t i, std::size_t n) {
    if (n == 1) return path;
    const fs::path p(path);
    return (p.parent_path() / (p.stem().string() + "-" + std::to_string(i + 1) + p.extension().string())).string();
}

int cmd_synth(const SynthArgs& a) {
    const auto spec = a.scope.load(a.spec);
    const auto config = solver_config(a.solver, a.seed, a.timeout);
    if (a.max_solutions < 1) throw UsageError("--max-solutions must be at least 1");
    const Projection projection = a.projection == "containment" ? Projection::Containment : Projection::Structure;

    Enumeration found;
    if (a.max_solutions == 1) {
        auto r = synthesize(spec, a.scope.hints(), config);
        found.resource_limit = r.outcome == Outcome::ResourceLimit;
        found.exhausted = r.outcome == Outcome::UnsatWithinScope;
        found.solutions.push_back(std::move(r));
    } else {
        found = enumerate(spec, a.scope.hints(), config, a.max_solutions, projection);
    }

    std::vector<const SynthResult*> models;
    for (const auto& s : found.solutions)
        if (s.outcome == Outcome::Model) models.push_back(&s);
    const Scope scope = compute_scope(spec, merge_hints(spec.source.scope, a.scope.hints()));
    const std::string outcome = !models.empty()      ? to_string(Outcome::Model)
                                : found.resource_limit ? to_string(Outcome::ResourceLimit)
                                                       : to_string(Outcome::UnsatWithinScope);

    for (std::size_t i = 0; i < models.size(); ++i) {
        if (!a.out.empty()) write_file(numbered(a.out, i, models.size()), print_model(*models[i]->model));
        if (!a.dot.empty()) write_file(numbered(a.dot, i, models.size()), export_dot(*models[i]->model));
    }

    if (a.json) {
        json j;
        j["outcome"] = outcome;
        j["scope"] = scope_json(scope);
        j["perView"] = json::object();
        if (!models.empty()) j["perView"] = models.front()->verification->per_view;
        j["stats"] = found.solutions.empty() ? json::object() : stats_json(found.solutions.back().stats);
        j["solutions"] = models.size();
        j["exhausted"] = found.exhausted;
        json texts = json::array();
        for (const auto* m : models) texts.push_back(print_model(*m->model));
        j["models"] = texts;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << outcome << '\n' << "scope: " << scope.describe() << '\n';
        if (!found.solutions.empty()) {
            const auto& st = found.solutions.back().stats;
            std::cout << "encoding: " << st.variables << " variables, " << st.clauses << " clauses\n";
        }
        for (std::size_t i = 0; i < models.size(); ++i) {
            const auto& m = *models[i];
            if (models.size() > 1) std::cout << "solution " << i + 1 << '\n';
            print_table(m.verification->per_view, view_order(spec));
            if (a.out.empty()) std::cout << print_model(*m.model);
        }
        if (models.empty() && !found.resource_limit)
            std::cout << "unsatisfiable within scope (ports=" << scope.port_slots << ")\n";
        if (found.resource_limit && models.empty()) std::cout << "resource limit reached before a verdict\n";
        if (models.size() > 1 || a.max_solutions > 1)
            std::cout << models.size() << " solution(s)" << (found.exhausted ? ", search exhausted" : "") << '\n';
    }
    if (!models.empty()) return kOk;
    return found.resource_limit ? kInternal : kNegative;
}

// -- check / eval -----------------------------------------------------------

int cmd_check(const std::string& model_path, const std::string& view_path, bool multi_top, bool as_json) {
    const auto model = load_model(model_path, multi_top);
    const auto view = load_view(view_path);
    const auto r = satisfies(model, view);
    if (as_json) {
        json violations = json::array();
        for (const auto& v : r.violations) violations.push_back(violation_json(v));
        json witnesses = json::array();
        for (const auto& w : r.witnesses) {
            json chain = json::array();
            for (const auto& c : w.chain) chain.push_back(to_string(c.source) + " -> " + to_string(c.target));
            witnesses.push_back({{"connector", to_string(w.connector)}, {"chain", chain}});
        }
        std::cout << json{{"outcome", r.satisfied ? "SATISFIED" : "NOT_SATISFIED"},
                          {"view", view.name},
                          {"violations", violations},
                          {"witnesses", witnesses}}
                         .dump(2)
                  << '\n';
    } else if (r.satisfied) {
        std::cout << "satisfied: " << view.name << '\n';
        for (const auto& w : r.witnesses) {
            std::cout << "  " << to_string(w.connector) << " via";
            for (const auto& c : w.chain) std::cout << ' ' << to_string(c.source) << " -> " << to_string(c.target) << ';';
            std::cout << '\n';
        }
    } else {
        std::cout << "not satisfied: " << view.name << '\n';
        print_violations(r, "  ");
    }
    return r.satisfied ? kOk : kNegative;
}

int cmd_eval(const std::string& model_path, const std::string& spec_path, bool as_json) {
    const auto spec = resolve(load_spec(spec_path));
    const auto model = load_model(model_path, validation_options_for(spec.source.style).allow_multiple_tops);
    const auto e = evaluate_spec(model, spec);
    if (as_json) {
        json details = json::object();
        for (const auto& [name, r] : e.details) {
            json violations = json::array();
            for (const auto& v : r.violations) violations.push_back(violation_json(v));
            details[name] = violations;
        }
        std::cout << json{{"outcome", e.overall ? "SATISFIED" : "NOT_SATISFIED"},
                          {"formula", e.formula_holds},
                          {"perView", e.per_view},
                          {"violations", details},
                          {"constraints", e.constraint_violations}}
                         .dump(2)
                  << '\n';
    } else {
        print_table(e.per_view, view_order(spec));
        std::cout << "formula: " << (e.formula_holds ? "holds" : "fails") << '\n';
        for (const auto& v : e.constraint_violations) std::cout << "constraint: " << v << '\n';
        std::cout << "overall: " << (e.overall ? "satisfied" : "not satisfied") << '\n';
    }
    return e.overall ? kOk : kNegative;
}

// -- reduce3sat / emit-dimacs / export-dot / solve-dimacs -----------------

int cmd_reduce(const std::string& cnf_path, const std::string& dir, const std::string& name) {
    const auto formula = to_3cnf(parse_dimacs(read_file(cnf_path)));
    const auto spec = reduce_3sat(formula, name);
    fs::create_directories(dir);
    for (const auto& view_name : spec.view_names)
        write_file((fs::path(dir) / (view_name + ".cncview")).string(), print_view(spec.views.at(view_name)));
    write_file((fs::path(dir) / (name + ".cncspec")).string(), print_spec(spec));
    std::cout << "wrote " << spec.view_names.size() << " views and " << name << ".cncspec to " << dir << " ("
              << formula.num_vars << " variables, " << formula.clauses.size() << " clauses)\n";
    return kOk;
}

int cmd_emit(const std::string& spec_path, const ScopeFlags& flags, const std::string& out) {
    const auto spec = flags.load(spec_path);
    emit(out, emit_dimacs(encode(spec, compute_scope(spec, merge_hints(spec.source.scope, flags.hints()))).cnf));
    return kOk;
}

int cmd_dot(const std::string& model_path, const std::string& out, bool multi_top) {
    emit(out, export_dot(load_model(model_path, multi_top)));
    return kOk;
}

int cmd_solve_dimacs(const std::string& path, std::uint64_t seed) {
    const auto cnf = parse_dimacs(read_file(path));
    SolverConfig config;
    config.seed = seed;
    const auto r = solve(cnf, config);
    std::cout << format_dimacs_result(r, cnf.num_vars);
    switch (r.status) {
        case SolveStatus::Sat: return 10;
        case SolveStatus::Unsat: return 20;
        case SolveStatus::ResourceLimit: return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthesis and checking of component-and-connector models from view specifications"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cncsynth 1.0.0");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize a model satisfying a specification");
    synth_cmd->add_option("spec", synth.spec, "Specification file (.cncspec)")->required();
    synth.scope.add_to(synth_cmd);
    synth_cmd->add_option("--solver", synth.solver,
                          "External DIMACS solver executable; 'internal' forces the built-in solver "
                          "(default: $CNCSYNTH_SOLVER, else internal)");
    synth_cmd->add_option("--seed", synth.seed, "Seed for the internal solver");
    synth_cmd->add_option("--out", synth.out, "Write the model(s) to this .cnc file");
    synth_cmd->add_option("--dot", synth.dot, "Write the model(s) as DOT");
    synth_cmd->add_option("--max-solutions", synth.max_solutions, "Enumerate up to K distinct models");
    synth_cmd->add_option("--projection", synth.projection, "What distinguishes enumerated models")
        ->check(CLI::IsMember({"structure", "containment"}));
    synth_cmd->add_option("--timeout", synth.timeout, "Solver wall-clock limit in seconds");
    synth_cmd->add_flag("--json", synth.json, "Machine-readable output");

    std::string model_path, view_path, spec_path;
    bool multi_top = false, as_json = false;
    auto* check_cmd = app.add_subcommand("check", "Check a model against one view");
    check_cmd->add_option("model", model_path, "Model file (.cnc)")->required();
    check_cmd->add_option("view", view_path, "View file (.cncview)")->required();
    check_cmd->add_flag("--multi-top", multi_top, "Allow several top components");
    check_cmd->add_flag("--json", as_json, "Machine-readable output");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a specification on a model");
    eval_cmd->add_option("model", model_path, "Model file (.cnc)")->required();
    eval_cmd->add_option("spec", spec_path, "Specification file (.cncspec)")->required();
    eval_cmd->add_flag("--json", as_json, "Machine-readable output");

    std::string cnf_path, out_dir, reduction_name = "Reduction";
    auto* reduce_cmd = app.add_subcommand("reduce3sat", "Write the views specification of a 3SAT formula");
    reduce_cmd->add_option("cnf", cnf_path, "DIMACS CNF with clauses of at most three literals")->required();
    reduce_cmd->add_option("-o,--out", out_dir, "Output directory")->required();
    reduce_cmd->add_option("--name", reduction_name, "Specification name");

    ScopeFlags emit_flags;
    std::string out_file;
    auto* emit_cmd = app.add_subcommand("emit-dimacs", "Print the CNF encoding of a specification");
    emit_cmd->add_option("spec", spec_path, "Specification file (.cncspec)")->required();
    emit_flags.add_to(emit_cmd);
    emit_cmd->add_option("-o,--out", out_file, "Output file (default: stdout)");

    auto* dot_cmd = app.add_subcommand("export-dot", "Print a model as a DOT digraph");
    dot_cmd->add_option("model", model_path, "Model file (.cnc)")->required();
    dot_cmd->add_option("-o,--out", out_file, "Output file (default: stdout)");
    dot_cmd->add_flag("--multi-top", multi_top, "Allow several top components");

    std::uint64_t seed = 0;
    auto* solve_cmd = app.add_subcommand("solve-dimacs", "");  // empty description hides it
    solve_cmd->add_option("cnf", cnf_path)->required();
    solve_cmd->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*synth_cmd) return cmd_synth(synth);
        if (*check_cmd) return cmd_check(model_path, view_path, multi_top, as_json);
        if (*eval_cmd) return cmd_eval(model_path, spec_path, as_json);
        if (*reduce_cmd) return cmd_reduce(cnf_path, out_dir, reduction_name);
        if (*emit_cmd) return cmd_emit(spec_path, emit_flags, out_file);
        if (*dot_cmd) return cmd_dot(model_path, out_file, multi_top);
        if (*solve_cmd) return cmd_solve_dimacs(cnf_path, seed);
    } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const ResolutionError& e) {
        for (const auto& p : e.problems()) std::cerr << "error: " << p << '\n';
        return kUsage;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    } catch (const ScopeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
