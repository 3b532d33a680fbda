#include "cncsynth/reduction.hpp"

#include <cstdlib>

namespace cncsynth {

bool Cnf3Formula::evaluate(const std::vector<bool>& values) const {
    for (const auto& clause : clauses) {
        bool sat = false;
        for (int lit : clause)
            if (values.at(static_cast<std::size_t>(std::abs(lit))) == (lit > 0)) sat = true;
        if (!sat) return false;
    }
    return true;
}

Cnf3Formula to_3cnf(const CnfInstance& cnf) {
    Cnf3Formula f;
    f.num_vars = cnf.num_vars;
    for (std::size_t i = 0; i < cnf.clauses.size(); ++i) {
        const auto& clause = cnf.clauses[i];
        if (clause.empty() || clause.size() > 3)
            throw Error("clause " + std::to_string(i + 1) + " has " + std::to_string(clause.size()) +
                        " literals; expected 1 to 3");
        std::array<int, 3> padded{};
        for (std::size_t k = 0; k < 3; ++k) padded[k] = clause[std::min(k, clause.size() - 1)];
        f.clauses.push_back(padded);
    }
    return f;
}

std::string true_component(int var) { return "xT" + std::to_string(var); }
std::string false_component(int var) { return "xF" + std::to_string(var); }
std::string true_view(int var) { return "vT" + std::to_string(var); }
std::string false_view(int var) { return "vF" + std::to_string(var); }

namespace {

CncView gadget(const std::string& name, const std::string& outer, const std::string& inner) {
    CncView v;
    v.name = name;
    v.components.push_back(ViewComponent{outer, {}, {inner}, false});
    v.components.push_back(ViewComponent{inner, {}, {}, false});
    return v;
}

}  // namespace

ViewSpec reduce_3sat(const Cnf3Formula& formula, const std::string& name) {
    ViewSpec spec;
    spec.name = name;
    std::vector<Formula> conjuncts;
    for (int i = 1; i <= formula.num_vars; ++i) {
        spec.view_names.push_back(true_view(i));
        spec.view_names.push_back(false_view(i));
        spec.views.emplace(true_view(i), gadget(true_view(i), false_component(i), true_component(i)));
        spec.views.emplace(false_view(i), gadget(false_view(i), true_component(i), false_component(i)));
        conjuncts.push_back(Formula::any_of({Formula::var(true_view(i)), Formula::var(false_view(i))}));
    }
    for (const auto& clause : formula.clauses) {
        std::vector<Formula> options;
        for (int lit : clause) {
            if (lit == 0 || std::abs(lit) > formula.num_vars)
                throw Error("literal " + std::to_string(lit) + " is out of range");
            auto view = Formula::var(lit > 0 ? true_view(lit) : false_view(-lit));
            if (std::find(options.begin(), options.end(), view) == options.end()) options.push_back(view);
        }
        conjuncts.push_back(Formula::any_of(std::move(options)));
    }
    if (conjuncts.empty()) throw Error("formula has no variables");
    spec.formula = Formula::all_of(std::move(conjuncts));
    spec.scope.ports = 0;
    spec.scope.extra_names = 0;
    spec.scope.extra_types = 0;
    return spec;
}

std::vector<bool> extract_assignment(const CncModel& model, int num_vars) {
    std::vector<bool> values(static_cast<std::size_t>(num_vars) + 1, false);
    for (int i = 1; i <= num_vars; ++i)
        values[static_cast<std::size_t>(i)] = contains_transitive(model, false_component(i), true_component(i));
    return values;
}

}  // namespace cncsynth
