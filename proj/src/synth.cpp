#include "cncsynth/synth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>

namespace cncsynth {

namespace {

std::atomic<std::uint64_t> g_models_verified{0};
std::atomic<std::uint64_t> g_closure_checks{0};
std::atomic<std::uint64_t> g_closure_mismatches{0};
std::atomic<std::uint64_t> g_soundness_failures{0};

constexpr std::uint64_t kFirstBudget = 4000;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::vector<bool>> closure(std::vector<std::vector<bool>> rel) {
    const std::size_t n = rel.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (rel[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (rel[k][j]) rel[i][j] = true;
    return rel;
}

[[noreturn]] void fail(const std::string& message) {
    ++g_soundness_failures;
    throw SoundnessError(message);
}

struct Prepared {
    Encoding encoding;
    double encode_seconds = 0.0;
};

Prepared prepare(const ResolvedSpec& spec, const ScopeHints& hints) {
    const auto start = std::chrono::steady_clock::now();
    Prepared p{encode(spec, compute_scope(spec, merge_hints(spec.source.scope, hints))), 0.0};
    p.encode_seconds = seconds_since(start);
    return p;
}

/// Decodes and runs the soundness gate; throws SoundnessError on failure.
SynthResult verified_model(const ResolvedSpec& spec, const Encoding& enc, const Assignment& a) {
    SynthResult result;
    result.outcome = Outcome::Model;

    const auto closures = check_closures(enc, a);
    ++g_closure_checks;
    g_closure_mismatches += static_cast<std::uint64_t>(closures.total());
    if (closures.total() != 0)
        fail("decoded closure differs from recomputed closure (" + std::to_string(closures.reach_mismatches) +
             " reach, " + std::to_string(closures.contains_mismatches) + " contains)");

    CncModel model = decode(enc, a);
    const auto report = validate_model(model, validation_options_for(spec.source.style));
    if (!report.empty()) fail("decoded model is ill-formed: " + report.front().message);

    auto evaluation = evaluate_spec(model, spec);
    if (!evaluation.overall) {
        std::string why = evaluation.formula_holds ? "" : "formula is false";
        for (const auto& v : evaluation.constraint_violations) why += (why.empty() ? "" : "; ") + v;
        fail("decoded model does not satisfy the specification: " + why);
    }
    for (std::size_t v = 0; v < enc.view_names.size(); ++v) {
        const bool encoded = a.holds(enc.vars.view(static_cast<int>(v)));
        if (encoded != evaluation.per_view.at(enc.view_names[v]))
            fail("encoded and checked satisfaction differ for view " + enc.view_names[v]);
    }
    ++g_models_verified;
    result.model = std::move(model);
    result.verification = std::move(evaluation);
    return result;
}

void fill_stats(SynthStats& stats, const Prepared& p, const SolveResult& solved, double solve_seconds) {
    stats.variables = p.encoding.cnf.num_vars;
    stats.clauses = p.encoding.cnf.clauses.size();
    stats.encode_seconds = p.encode_seconds;
    stats.solve_seconds = solve_seconds;
    stats.solver = solved.stats;
    stats.scope = p.encoding.scope;
}

/// The component hierarchy is decided before ports and connectors.
SolverConfig with_priorities(SolverConfig config, const VarMap& vars) {
    for (int c = 0; c < vars.components(); ++c) {
        config.priorities.emplace_back(vars.exists(c), 1);
        for (int d = 0; d < vars.components(); ++d)
            if (c != d) config.priorities.emplace_back(vars.parent(c, d), 1);
    }
    return config;
}

/// Internal engine: fresh attempts with successive seeds and growing
/// conflict budgets, so one unlucky search order cannot stall synthesis.
SolveResult solve_attempts(const CnfInstance& cnf, const SolverConfig& config) {
    if (config.engine != Engine::Internal) return solve(cnf, config);
    const auto start = std::chrono::steady_clock::now();
    SolverStats total;
    std::uint64_t budget = kFirstBudget;
    for (std::uint64_t attempt = 0;; ++attempt, budget *= 2) {
        SolverConfig c = config;
        c.seed = config.seed + attempt;
        c.limits.conflicts = budget;
        if (config.limits.conflicts) {
            if (total.conflicts >= *config.limits.conflicts) break;
            c.limits.conflicts = std::min(budget, *config.limits.conflicts - total.conflicts);
        }
        if (config.limits.seconds) {
            const double left = *config.limits.seconds - seconds_since(start);
            if (left <= 0) break;
            c.limits.seconds = left;
        }
        auto r = solve(cnf, c);
        total.decisions += r.stats.decisions;
        total.conflicts += r.stats.conflicts;
        total.propagations += r.stats.propagations;
        total.restarts += r.stats.restarts;
        total.random_decisions += r.stats.random_decisions;
        total.seconds = seconds_since(start);
        r.stats = total;
        if (r.status != SolveStatus::ResourceLimit) return r;
    }
    SolveResult out;
    out.stats = total;
    return out;
}

std::vector<int> projection_vars(const VarMap& vars, Projection projection) {
    if (projection == Projection::Structure) return vars.structural();
    std::vector<int> out;
    for (int c = 0; c < vars.components(); ++c) {
        out.push_back(vars.exists(c));
        for (int d = 0; d < vars.components(); ++d)
            if (c != d) out.push_back(vars.parent(c, d));
    }
    return out;
}

}  // namespace

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Model: return "MODEL";
        case Outcome::UnsatWithinScope: return "UNSAT_WITHIN_SCOPE";
        case Outcome::ResourceLimit: return "RESOURCE_LIMIT";
    }
    return "?";
}

CncModel decode(const Encoding& enc, const Assignment& a) {
    const auto& s = enc.scope;
    const auto& m = enc.vars;
    const int C = static_cast<int>(s.components.size());
    const int P = s.port_slots;

    CncModel model;
    std::vector<int> present;
    for (int c = 0; c < C; ++c)
        if (a.holds(m.exists(c))) present.push_back(c);
    std::vector<int> position(C, -1);
    for (int c : present) {
        position[c] = static_cast<int>(model.components.size());
        model.components.push_back(Component{s.components[c], {}, {}});
    }
    auto at = [&](int c) -> Component& { return model.components[position[c]]; };

    for (int child : present)
        for (int parent : present)
            if (child != parent && a.holds(m.parent(child, parent)))
                at(parent).subcomponents.push_back(s.components[child]);

    std::vector<int> owner(P, -1), name(P, -1);
    for (int p = 0; p < P; ++p) {
        if (!a.holds(m.used(p))) continue;
        Port port;
        for (int c = 0; c < C; ++c)
            if (a.holds(m.owner(p, c))) owner[p] = c;
        for (int n = 0; n < static_cast<int>(s.names.size()); ++n)
            if (a.holds(m.port_name(p, n))) name[p] = n;
        for (int t = 0; t < static_cast<int>(s.types.size()); ++t)
            if (a.holds(m.port_type(p, t))) port.type = s.types[t];
        if (owner[p] < 0 || name[p] < 0 || port.type.empty()) throw SoundnessError("port slot " + std::to_string(p) + " is incomplete");
        port.name = s.names[name[p]];
        port.direction = a.holds(m.port_in(p)) ? Direction::In : Direction::Out;
        at(owner[p]).ports.push_back(std::move(port));
    }

    for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q)
            if (p != q && a.holds(m.conn(p, q)))
                model.connectors.push_back({PortRef{s.components[owner[p]], s.names[name[p]]},
                                            PortRef{s.components[owner[q]], s.names[name[q]]}});
    model.refresh_types();
    return model;
}

ClosureReport check_closures(const Encoding& enc, const Assignment& a) {
    const auto& m = enc.vars;
    const int C = m.components();
    const int P = m.slots();
    ClosureReport report;

    std::vector<std::vector<bool>> conn(P, std::vector<bool>(P, false));
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q) conn[p][q] = p != q && a.holds(m.conn(p, q));
    const auto reach = closure(conn);
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q)
            if (reach[p][q] != a.holds(m.reach(p, q))) ++report.reach_mismatches;

    // contains(o, i) relates outer to inner; parent(i, o) relates inner to outer.
    std::vector<std::vector<bool>> up(C, std::vector<bool>(C, false));
    for (int i = 0; i < C; ++i)
        for (int o = 0; o < C; ++o) up[i][o] = i != o && a.holds(m.parent(i, o));
    const auto ancestors = closure(up);
    for (int o = 0; o < C; ++o)
        for (int i = 0; i < C; ++i)
            if (ancestors[i][o] != a.holds(m.contains(o, i))) ++report.contains_mismatches;
    return report;
}

SynthResult synthesize(const ResolvedSpec& spec, const ScopeHints& hints, const SolverConfig& config) {
    const auto prepared = prepare(spec, hints);
    const auto start = std::chrono::steady_clock::now();
    const auto solved = solve_attempts(prepared.encoding.cnf, with_priorities(config, prepared.encoding.vars));
    const double solve_seconds = seconds_since(start);

    SynthResult result;
    if (solved.status == SolveStatus::Sat) result = verified_model(spec, prepared.encoding, solved.assignment);
    else result.outcome = solved.status == SolveStatus::Unsat ? Outcome::UnsatWithinScope : Outcome::ResourceLimit;
    fill_stats(result.stats, prepared, solved, solve_seconds);
    return result;
}

Enumeration enumerate(const ResolvedSpec& spec, const ScopeHints& hints, const SolverConfig& config, int max_solutions,
                      Projection projection) {
    if (max_solutions < 1) throw Error("max_solutions must be at least 1");
    auto prepared = prepare(spec, hints);
    const auto projected = projection_vars(prepared.encoding.vars, projection);

    Enumeration out;
    const auto solver_config = with_priorities(config, prepared.encoding.vars);
    CnfInstance cnf = prepared.encoding.cnf;
    while (static_cast<int>(out.solutions.size()) < max_solutions) {
        const auto start = std::chrono::steady_clock::now();
        const auto solved = solve_attempts(cnf, solver_config);
        const double solve_seconds = seconds_since(start);
        if (solved.status == SolveStatus::Unsat) {
            out.exhausted = true;
            break;
        }
        if (solved.status == SolveStatus::ResourceLimit) {
            out.resource_limit = true;
            break;
        }
        auto result = verified_model(spec, prepared.encoding, solved.assignment);
        fill_stats(result.stats, prepared, solved, solve_seconds);
        out.solutions.push_back(std::move(result));
        cnf.add(blocking_clause(solved.assignment, projected));
    }
    return out;
}

AuditCounters audit_counters() {
    return AuditCounters{g_models_verified.load(), g_closure_checks.load(), g_closure_mismatches.load(),
                         g_soundness_failures.load()};
}

}  // namespace cncsynth
