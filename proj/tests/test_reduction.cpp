#include "doctest.h"

#include "cncsynth/parser.hpp"
#include "cncsynth/reduction.hpp"
#include "cncsynth/synth.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cncsynth;

namespace {

Cnf3Formula formula(int vars, std::vector<std::array<int, 3>> clauses) {
    Cnf3Formula f;
    f.num_vars = vars;
    f.clauses = std::move(clauses);
    return f;
}

}  // namespace

TEST_CASE("construction for one clause") {
    const auto spec = reduce_3sat(formula(3, {{1, -2, 3}}));
    CHECK(spec.views.size() == 6);
    CHECK(spec.view_names.size() == 6);
    const auto r = resolve(spec);
    CHECK(r.components.size() == 6);
    const auto& vt = r.view(true_view(1));
    CHECK(vt.containment_closure() == std::set<std::pair<std::string, std::string>>{{"xF1", "xT1"}});
    const auto& vf = r.view(false_view(1));
    CHECK(vf.containment_closure() == std::set<std::pair<std::string, std::string>>{{"xT1", "xF1"}});
    for (const auto& v : r.views) {
        for (const auto& c : v.components) CHECK(c.ports.empty());
        CHECK(v.connectors.empty());
    }
    CHECK(spec.formula->to_string() == "(vT1 || vF1) && (vT2 || vF2) && (vT3 || vF3) && (vT1 || vF2 || vT3)");
    CHECK(spec.scope.ports == 0);
}

TEST_CASE("contradiction survives the reduction") {
    CnfInstance cnf;
    cnf.num_vars = 1;
    cnf.clauses = {{1}, {-1}};
    const auto f = to_3cnf(cnf);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::array<int, 3>{1, 1, 1});
    CHECK(synthesize(resolve(reduce_3sat(f))).outcome == Outcome::UnsatWithinScope);
}

TEST_CASE("to_3cnf") {
    CnfInstance cnf;
    cnf.num_vars = 3;
    cnf.clauses = {{1, -2}, {3, 2, 1}};
    const auto f = to_3cnf(cnf);
    CHECK(f.clauses[0] == std::array<int, 3>{1, -2, -2});
    CHECK(f.clauses[1] == std::array<int, 3>{3, 2, 1});
    cnf.clauses.push_back({1, 2, 3, -1});
    CHECK_THROWS_AS(to_3cnf(cnf), Error);
    cnf.clauses.back().clear();
    CHECK_THROWS_AS(to_3cnf(cnf), Error);
    CHECK_THROWS_AS(reduce_3sat(formula(1, {{1, 2, 1}})), Error);
}

TEST_CASE("pipeline agrees with truth tables") {
    gen::Rng rng(101);
    for (int i = 0; i < 60; ++i) {
        const int n = gen::uniform(rng, 1, 6);
        const auto cnf = gen::random_3sat(rng, n, gen::uniform(rng, 1, 5 * n));
        const auto f = to_3cnf(cnf);
        const auto expected = oracle::truth_table(f);
        const auto r = synthesize(resolve(reduce_3sat(f)));
        REQUIRE(r.outcome != Outcome::ResourceLimit);
        CHECK((r.outcome == Outcome::Model) == expected.has_value());
        if (!r.model) continue;
        const auto values = extract_assignment(*r.model, n);
        CHECK(f.evaluate(values));
        for (int v = 1; v <= n; ++v) {
            const bool t = contains_transitive(*r.model, false_component(v), true_component(v));
            const bool fl = contains_transitive(*r.model, true_component(v), false_component(v));
            CHECK(t != fl);
            CHECK(values[v] == t);
        }
    }
}

TEST_CASE("generated files parse back") {
    const auto spec = reduce_3sat(formula(2, {{1, 2, -1}, {-2, -2, 1}}), "Tiny");
    const auto text = print_spec(spec);
    auto back = parse_spec(text);
    for (const auto& [name, view] : spec.views) back.views[name] = parse_view(print_view(view));
    const auto a = resolve(spec), b = resolve(back);
    CHECK(a.formula == b.formula);
    CHECK(a.components == b.components);
}
