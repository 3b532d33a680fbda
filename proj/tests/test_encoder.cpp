#include "doctest.h"

#include "cncsynth/checker.hpp"
#include "cncsynth/encoder.hpp"
#include "cncsynth/parser.hpp"
#include "cncsynth/reduction.hpp"
#include "cncsynth/synth.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cncsynth;

namespace {

const std::string kFixtures = CNCSYNTH_FIXTURES;

ResolvedSpec spec(const std::string& path) { return resolve(load_spec(kFixtures + "/" + path)); }

ResolvedSpec inline_spec(const std::string& spec_text, const std::vector<std::string>& view_texts) {
    auto s = parse_spec(spec_text);
    for (const auto& t : view_texts) {
        auto v = parse_view(t);
        s.views[v.name] = v;
    }
    return resolve(s);
}

struct Solved {
    Encoding encoding;
    SolveResult result;
};

Solved encode_and_solve(const ResolvedSpec& s, const ScopeHints& hints = {}) {
    Solved out{encode(s, compute_scope(s, merge_hints(s.source.scope, hints))), {}};
    out.result = solve(out.encoding.cnf);
    return out;
}

Formula random_formula(gen::Rng& rng, const std::vector<std::string>& views, int depth) {
    if (depth == 0 || gen::coin(rng, 0.3)) {
        auto v = Formula::var(gen::pick(rng, views));
        return gen::coin(rng, 0.3) ? Formula::negate(v) : v;
    }
    std::vector<Formula> ops{random_formula(rng, views, depth - 1), random_formula(rng, views, depth - 1)};
    switch (gen::uniform(rng, 0, 2)) {
        case 0: return Formula::all_of(ops);
        case 1: return Formula::any_of(ops);
        default: return Formula::negate(Formula::all_of(ops));
    }
}

}  // namespace

TEST_CASE("compute_scope") {
    SUBCASE("S1 components") {
        const auto s = spec("robot_arm/S1.cncspec");
        const auto scope = compute_scope(s, s.source.scope);
        for (const auto* name : {"RotationalJoint", "Body", "Cylinder", "Sensor", "Actuator", "ServoValve", "JointLimiter"})
            CHECK(std::find(scope.components.begin(), scope.components.end(), name) != scope.components.end());
        // BodySensorIn adds the Filter and Controller subcomponents of Body.
        CHECK(scope.components.size() == 9);
        CHECK(scope.port_slots == 19);
        CHECK(scope.port_lower_bound <= 19);
    }
    SUBCASE("one component without ports") {
        const auto s = inline_spec("spec P { views { V } formula: V; }", {"view V { component A; }"});
        const auto scope = compute_scope(s, {});
        CHECK(scope.port_lower_bound == 0);
        CHECK(scope.port_slots == 0);
        CHECK(scope.components == std::vector<std::string>{"A"});
    }
    SUBCASE("defaults") {
        const auto s = inline_spec("spec P { views { V } formula: V; }",
                                   {"view V { component A { port out int x; } component B; connect A.x -> B; }"});
        const auto scope = compute_scope(s, {});
        CHECK(scope.port_lower_bound == 1);
        CHECK(scope.port_slots == 3);
        CHECK(scope.fresh_types == 1);
        CHECK(scope.fresh_names == 3);
    }
    SUBCASE("hints below the lower bound") {
        const auto s = spec("robot_arm/S1.cncspec");
        CHECK_THROWS_AS(compute_scope(s, ScopeHints{0, {}, {}}), ScopeError);
        CHECK_THROWS_AS(compute_scope(s, ScopeHints{19, -1, {}}), ScopeError);
    }
}

TEST_CASE("a lone component") {
    const auto s = inline_spec("spec P { views { A } formula: A; }", {"view A { component A; }"});
    const auto solved = encode_and_solve(s);
    REQUIRE(solved.result.status == SolveStatus::Sat);
    const auto m = decode(solved.encoding, solved.result.assignment);
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].name == "A");
    CHECK(m.connectors.empty());
}

TEST_CASE("the variable gadget admits only one orientation") {
    Cnf3Formula f;
    f.num_vars = 1;
    f.clauses = {{1, 1, 1}};
    auto gadget = reduce_3sat(f);
    gadget.formula = Formula::all_of({Formula::var(true_view(1)), Formula::var(false_view(1))});
    const auto solved = encode_and_solve(resolve(gadget));
    CHECK(solved.result.status == SolveStatus::Unsat);
}

TEST_CASE("every atom is mapped and structural variables are atoms") {
    const auto s = spec("robot_arm/S1.cncspec");
    const auto enc = encode(s, compute_scope(s, s.source.scope));
    CHECK(enc.vars.atom_count() > 0);
    std::set<Atom> atoms;
    for (int v : enc.vars.structural()) {
        const auto a = enc.vars.atom(v);
        REQUIRE(a);
        CHECK(atoms.insert(*a).second);
    }
    CHECK(enc.view_names.size() == s.views.size());
    for (std::size_t v = 0; v < enc.view_names.size(); ++v)
        CHECK(enc.vars.atom(enc.vars.view(static_cast<int>(v)))->kind == AtomKind::ViewHolds);
    CHECK_FALSE(enc.cnf.groups.empty());
}

TEST_CASE("view variables are fixed by the structure") {
    for (const auto* path : {"lunar_lander/LunarLander.cncspec", "robot_arm/S1.cncspec", "styles/PumpStation.cncspec"}) {
        CAPTURE(path);
        const auto s = spec(path);
        const auto solved = encode_and_solve(s);
        REQUIRE(solved.result.status == SolveStatus::Sat);
        const auto& vars = solved.encoding.vars;
        std::vector<Lit> fixed;
        for (int v : vars.structural()) fixed.push_back(solved.result.assignment.value(v) ? v : -v);
        Solver solver;
        solver.add(solved.encoding.cnf);
        CHECK(solver.solve(fixed).status == SolveStatus::Sat);
        for (std::size_t k = 0; k < solved.encoding.view_names.size(); ++k) {
            const int view = vars.view(static_cast<int>(k));
            auto flipped = fixed;
            flipped.push_back(solved.result.assignment.value(view) ? -view : view);
            CHECK(solver.solve(flipped).status == SolveStatus::Unsat);
        }
    }
}

TEST_CASE("closure atoms are exact") {
    const auto s = spec("robot_arm/S1.cncspec");
    const auto solved = encode_and_solve(s);
    REQUIRE(solved.result.status == SolveStatus::Sat);
    const auto& a = solved.result.assignment;
    CHECK(check_closures(solved.encoding, a).total() == 0);

    // Flipping any reach or contains atom must be detected.
    std::vector<bool> values;
    for (int v = 0; v <= a.num_vars(); ++v) values.push_back(v > 0 && a.value(v));
    int flipped = 0;
    for (int v = 1; v <= a.num_vars(); ++v) {
        const auto atom = solved.encoding.vars.atom(v);
        if (!atom || (atom->kind != AtomKind::Reach && atom->kind != AtomKind::Contains)) continue;
        auto changed = values;
        changed[v] = !changed[v];
        CHECK(check_closures(solved.encoding, Assignment(changed)).total() == 1);
        if (++flipped == 200) break;
    }
    CHECK(flipped > 0);
}

TEST_CASE("decoded models agree with an independent reading of the atoms") {
    gen::Rng rng(89);
    for (const auto* path : {"robot_arm/S1.cncspec", "lunar_lander/LunarLander.cncspec"}) {
        const auto s = spec(path);
        const auto solved = encode_and_solve(s);
        REQUIRE(solved.result.status == SolveStatus::Sat);
        const auto& enc = solved.encoding;
        const auto& a = solved.result.assignment;
        const auto m = decode(enc, a);
        const int C = static_cast<int>(enc.scope.components.size());
        const int P = enc.scope.port_slots;
        std::size_t exist = 0, parents = 0, used = 0, conns = 0;
        for (int c = 0; c < C; ++c) {
            exist += a.holds(enc.vars.exists(c));
            for (int d = 0; d < C; ++d) parents += a.holds(enc.vars.parent(c, d));
        }
        for (int p = 0; p < P; ++p) {
            used += a.holds(enc.vars.used(p));
            for (int q = 0; q < P; ++q) conns += a.holds(enc.vars.conn(p, q));
        }
        std::size_t ports = 0, subs = 0;
        for (const auto& c : m.components) ports += c.ports.size(), subs += c.subcomponents.size();
        CHECK(m.components.size() == exist);
        CHECK(subs == parents);
        CHECK(ports == used);
        CHECK(m.connectors.size() == conns);
        // reach atoms match a DFS over the decoded connectors
        const auto g = port_chain_graph(m);
        std::size_t reach_true = 0;
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < P; ++q) reach_true += a.holds(enc.vars.reach(p, q));
        std::vector<std::vector<bool>> adj(g.ports.size(), std::vector<bool>(g.ports.size(), false));
        for (const auto& c : m.connectors) adj[*g.index_of(c.source)][*g.index_of(c.target)] = true;
        std::size_t dfs_true = 0;
        for (const auto& row : oracle::dfs_closure(adj)) dfs_true += std::count(row.begin(), row.end(), true);
        CHECK(reach_true == dfs_true);
    }
}

TEST_CASE("complete at tiny scope against exhaustive enumeration") {
    gen::Rng rng(97);
    gen::Universe u;
    u.components = {"A", "B"};
    u.port_names = {"p0", "p1"};
    u.types = {"t0"};
    u.max_total_ports = 2;
    std::vector<CncModel> models;
    gen::for_each_model_over(u, [&](const CncModel& m) { models.push_back(m); });
    REQUIRE(models.size() == 100);
    std::vector<oracle::Def1> refs;
    for (const auto& m : models) refs.emplace_back(m);

    int sat = 0, unsat = 0;
    for (int round = 0; round < 400; ++round) {
        ViewSpec vs;
        vs.name = "Tiny";
        const int n = gen::uniform(rng, 1, 3);
        bool typed = false;
        for (int k = 0; k < n; ++k) {
            auto v = gen::random_view(rng, {"A", "B"}, 1, 1, 1, false);
            v.name = "V" + std::to_string(k);
            typed = typed || !v.types.empty();
            vs.view_names.push_back(v.name);
            vs.views[v.name] = v;
        }
        vs.formula = random_formula(rng, vs.view_names, 2);
        const auto s = resolve(vs);
        Solved solved;
        try {
            solved = encode_and_solve(s, ScopeHints{2, std::nullopt, typed ? std::optional<int>{0} : std::optional<int>{1}});
        } catch (const ScopeError&) {
            continue;  // needs more than two ports
        }
        bool expected = false;
        std::size_t witness = 0;
        const std::set<std::string> universe(s.components.begin(), s.components.end());
        for (std::size_t i = 0; i < models.size() && !expected; ++i) {
            // The scope's components are exactly those the specification mentions.
            if (!std::all_of(models[i].components.begin(), models[i].components.end(),
                             [&](const Component& c) { return universe.count(c.name) > 0; }))
                continue;
            expected = s.formula.evaluate([&](const std::string& name) { return refs[i].satisfies(s.view(name)); });
            witness = i;
        }
        std::string text = print_spec(vs);
        for (const auto& [_, v] : vs.views) text += print_view(v);
        if (expected) text += "witness:\n" + print_model(models[witness]);
        CAPTURE(text);
        REQUIRE(solved.result.status != SolveStatus::ResourceLimit);
        CHECK((solved.result.status == SolveStatus::Sat) == expected);
        (expected ? sat : unsat)++;
        if (solved.result.status == SolveStatus::Sat) {
            const auto m = decode(solved.encoding, solved.result.assignment);
            CHECK(validate_model(m).empty());
            CHECK(evaluate_spec(m, s).overall);
        }
    }
    CHECK(sat > 20);
    CHECK(unsat > 20);
}

TEST_CASE("client-server forbids client to client chains") {
    const auto s = inline_spec(
        "spec CS { views { Direct } formula: Direct; style client-server(server = S, clients = A, B); scope { ports = 6; } }",
        {"view Direct { component S; component A { port out int o; } component B { port in int i; } connect A.o -> B.i; }"});
    CHECK(encode_and_solve(s).result.status == SolveStatus::Unsat);

    gen::Universe u;
    u.components = {"S", "A", "B"};
    u.required = {"S", "A", "B"};
    u.port_names = {"o", "i", "x"};
    u.types = {"int"};
    u.max_ports_per_component = 2;
    u.max_total_ports = 6;
    u.multi_top = true;
    std::size_t conforming = 0, satisfying = 0;
    const auto visited = gen::for_each_model_over(u, [&](const CncModel& m) {
        if (!check_style(m, s.source.style).empty()) return;
        ++conforming;
        satisfying += oracle::def1_satisfies(m, s.view("Direct"));
    });
    CHECK(visited > 1000);
    CHECK(conforming > 0);
    CHECK(satisfying == 0);
}

TEST_CASE("layered style") {
    const std::string style = "style layered([A]; [B]; [C]); scope { ports = 6; } }";
    const auto adjacent = inline_spec("spec L { views { Steps } formula: Steps; " + style,
                                      {"view Steps { component A; component B; component C; connect A -> B; connect B -> C; }"});
    const auto r = synthesize(adjacent);
    REQUIRE(r.outcome == Outcome::Model);
    CHECK(r.model->tops().size() == 3);
    CHECK(check_style(*r.model, adjacent.source.style).empty());

    // A chain between two tops is a single connector, so A -> C cannot be
    // routed through B and skipping a layer is impossible.
    const auto skip = inline_spec("spec L { views { Skip } formula: Skip; " + style,
                                  {"view Skip { component A; component B { component Relay; } component C; connect A -> C; }"});
    CHECK(synthesize(skip).outcome == Outcome::UnsatWithinScope);
    CHECK(synthesize(spec("styles/LayersSkip.cncspec")).outcome == Outcome::UnsatWithinScope);

    gen::Universe u;
    u.components = {"A", "B", "C", "Relay"};
    u.required = {"A", "B", "C"};
    u.port_names = {"x", "y"};
    u.types = {"int"};
    u.max_ports_per_component = 2;
    u.max_total_ports = 5;
    u.multi_top = true;
    std::size_t conforming = 0, satisfying = 0;
    gen::for_each_model_over(u, [&](const CncModel& m) {
        if (!check_style(m, skip.source.style).empty()) return;
        ++conforming;
        satisfying += oracle::def1_satisfies(m, skip.view("Skip"));
    });
    CHECK(conforming > 1000);
    CHECK(satisfying == 0);
}

TEST_CASE("library components get exactly their interface") {
    const auto s = inline_spec(
        "spec Lib { views { V } formula: V; library { component L { port in int a; port out int b; } } scope { ports = 5; } }",
        {"view V { component T { component L; component X; } connect X -> L; }"});
    const auto r = synthesize(s);
    REQUIRE(r.outcome == Outcome::Model);
    const auto& l = r.model->at("L");
    CHECK(l.subcomponents.empty());
    CHECK(l.ports.size() == 2);
    CHECK(l.find_port("a"));
    CHECK(l.find_port("b"));
}

TEST_CASE("budget overruns are reported") {
    const auto s = spec("robot_arm/S1.cncspec");
    CHECK_THROWS_AS(encode(s, compute_scope(s, ScopeHints{2000, {}, {}})), BudgetError);
}
