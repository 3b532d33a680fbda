#include "doctest.h"

#include "cncsynth/parser.hpp"
#include "cncsynth/synth.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

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

void check_sound(const SynthResult& r, const ResolvedSpec& s) {
    REQUIRE(r.model);
    REQUIRE(r.verification);
    CHECK(r.verification->overall);
    CHECK(validate_model(*r.model, validation_options_for(s.source.style)).empty());
    const oracle::Def1 ref(*r.model);
    CHECK(s.formula.evaluate([&](const std::string& v) { return ref.satisfies(s.view(v)); }));
}

}  // namespace

TEST_CASE("S1 at 19 ports") {
    const auto s = spec("robot_arm/S1.cncspec");
    const auto r = synthesize(s, ScopeHints{19, {}, {}});
    REQUIRE(r.outcome == Outcome::Model);
    check_sound(r, s);
    const auto& per_view = r.verification->per_view;
    for (const auto* v : {"RJFunction", "SensorConnections", "RJStructure"}) CHECK(per_view.at(v));
    CHECK((per_view.at("BodySensorIn") || per_view.at("BodySensorOut")));
    CHECK_FALSE(per_view.at("ASDependence"));
    CHECK(r.stats.scope.port_slots == 19);
    CHECK(r.stats.variables > 0);
    CHECK(r.stats.clauses > 0);
}

TEST_CASE("unsatisfiable specifications") {
    const auto s2 = synthesize(spec("robot_arm/S2.cncspec"));
    CHECK(s2.outcome == Outcome::UnsatWithinScope);
    CHECK_FALSE(s2.model);
    CHECK(s2.stats.scope.port_slots == 19);

    const auto contradiction = inline_spec("spec C { views { V } formula: V && !V; }", {"view V { component A; }"});
    CHECK(synthesize(contradiction).outcome == Outcome::UnsatWithinScope);
}

TEST_CASE("enumeration of S1 alternatives") {
    const auto s = spec("robot_arm/S1.cncspec");
    const auto e = enumerate(s, {}, {}, 10, Projection::Containment);
    REQUIRE(e.solutions.size() == 10);
    bool inside = false, outside = false;
    for (std::size_t i = 0; i < e.solutions.size(); ++i) {
        check_sound(e.solutions[i], s);
        const auto& m = *e.solutions[i].model;
        (contains_transitive(m, "ServoValve", "Sensor") ? inside : outside) = true;
        for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(structurally_equal(m, *e.solutions[j].model));
    }
    CHECK(inside);
    CHECK(outside);
}

TEST_CASE("enumeration boundaries") {
    const auto single = inline_spec("spec One { views { V } formula: V; scope { ports = 0; } }", {"view V { component A; }"});
    gen::Universe u;
    u.components = {"A"};
    std::size_t brute = 0;
    gen::for_each_model_over(u, [&](const CncModel& m) { brute += oracle::def1_satisfies(m, single.view("V")); });
    const auto e = enumerate(single, {}, {}, 5);
    CHECK(e.solutions.size() == brute);
    CHECK(e.exhausted);

    const auto unsat = enumerate(spec("robot_arm/S2.cncspec"), {}, {}, 1);
    CHECK(unsat.solutions.empty());
    CHECK(unsat.exhausted);
}

TEST_CASE("structure enumeration yields distinct models") {
    const auto s = spec("lunar_lander/LunarLander.cncspec");
    const auto e = enumerate(s, {}, {}, 15);
    CHECK(e.solutions.size() == 15);
    for (std::size_t i = 0; i < e.solutions.size(); ++i) {
        check_sound(e.solutions[i], s);
        for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(structurally_equal(*e.solutions[i].model, *e.solutions[j].model));
    }
}

TEST_CASE("scope monotonicity") {
    const auto lander = spec("lunar_lander/LunarLander.cncspec");
    CHECK(synthesize(lander, ScopeHints{5, {}, {}}).outcome == Outcome::UnsatWithinScope);
    for (int ports = 6; ports <= 9; ++ports) {
        CAPTURE(ports);
        CHECK(synthesize(lander, ScopeHints{ports, {}, {}}).outcome == Outcome::Model);
    }
    const auto s1 = spec("robot_arm/S1.cncspec");
    CHECK(synthesize(s1, ScopeHints{20, {}, {}}).outcome == Outcome::Model);
}

TEST_CASE("styles") {
    for (const auto* path : {"robot_arm/S1Hierarchical.cncspec", "styles/PumpStation.cncspec", "styles/Layers.cncspec"}) {
        CAPTURE(path);
        const auto s = spec(path);
        const auto r = synthesize(s);
        REQUIRE(r.outcome == Outcome::Model);
        check_sound(r, s);
        CHECK(check_style(*r.model, s.source.style).empty());
    }
    const auto pump = synthesize(spec("styles/PumpStation.cncspec"));
    auto tops = pump.model->tops();
    std::sort(tops.begin(), tops.end());
    CHECK(tops == std::vector<std::string>{"Pump", "Station", "Valve"});
}

TEST_CASE("library and pattern fixtures") {
    for (const auto* path : {"robot_arm/S1Library.cncspec", "robot_arm/S1Patterns.cncspec", "robot_arm/S1PatternsIn.cncspec",
                             "robot_arm/S2Float.cncspec"}) {
        CAPTURE(path);
        const auto s = spec(path);
        const auto r = synthesize(s);
        REQUIRE(r.outcome == Outcome::Model);
        check_sound(r, s);
    }
    const auto flat = synthesize(spec("robot_arm/S2Flat.cncspec"));
    CHECK(flat.outcome == Outcome::UnsatWithinScope);
}

TEST_CASE("fresh names and types") {
    const auto s = inline_spec("spec F { views { V } formula: V; }",
                               {"view V { component T { component A; component B; } connect A -> B; }"});
    const auto r = synthesize(s);
    REQUIRE(r.outcome == Outcome::Model);
    std::set<std::string> names, types;
    for (const auto& c : r.model->components)
        for (const auto& p : c.ports) names.insert(p.name), types.insert(p.type);
    CHECK(types == std::set<std::string>{"_T1"});
    for (const auto& n : names) CHECK(n.rfind("_p", 0) == 0);
}

TEST_CASE("determinism") {
    const auto s = spec("robot_arm/S1.cncspec");
    SolverConfig c;
    c.seed = 5;
    const auto a = synthesize(s, {}, c);
    const auto b = synthesize(s, {}, c);
    REQUIRE(a.model);
    REQUIRE(b.model);
    CHECK(print_model(*a.model) == print_model(*b.model));
}

TEST_CASE("resource limits") {
    SolverConfig c;
    c.limits.conflicts = 1;
    const auto r = synthesize(spec("robot_arm/S1.cncspec"), {}, c);
    CHECK(r.outcome == Outcome::ResourceLimit);
    CHECK(r.stats.solver.conflicts <= 1);
    CHECK_FALSE(r.model);
}

TEST_CASE("external solver") {
    const auto dir = std::filesystem::temp_directory_path() / ("cncsynth-ext-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto script = dir / "solver.sh";
    {
        std::ofstream out(script);
        out << "#!/bin/sh\nexec \"" << CNCSYNTH_CLI << "\" solve-dimacs \"$1\"\n";
    }
    std::filesystem::permissions(script, std::filesystem::perms::owner_all);
    SolverConfig c;
    c.engine = Engine::External;
    c.executable = script.string();

    const auto s = spec("lunar_lander/LunarLander.cncspec");
    const auto r = synthesize(s, {}, c);
    REQUIRE(r.outcome == Outcome::Model);
    check_sound(r, s);
    CHECK(synthesize(spec("robot_arm/S2.cncspec"), {}, c).outcome == Outcome::UnsatWithinScope);

    c.executable = (dir / "missing").string();
    CHECK_THROWS_AS(synthesize(s, {}, c), SolverError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("audit counters") {
    const auto before = audit_counters();
    synthesize(spec("lunar_lander/LunarLander.cncspec"));
    const auto after = audit_counters();
    CHECK(after.models_verified == before.models_verified + 1);
    CHECK(after.closure_checks == before.closure_checks + 1);
    CHECK(after.closure_mismatches == 0);
    CHECK(after.soundness_failures == 0);
}
