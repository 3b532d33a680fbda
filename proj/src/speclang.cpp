#include "cncsynth/speclang.hpp"

#include <algorithm>

namespace cncsynth {

struct Formula::Node {
    Kind kind;
    std::string name;
    std::vector<Formula> operands;
};

Formula Formula::var(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Formula Formula::negate(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(f)}}));
}

Formula Formula::all_of(std::vector<Formula> operands) {
    if (operands.empty()) throw Error("empty conjunction");
    if (operands.size() == 1) return operands.front();
    return Formula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(operands)}));
}

Formula Formula::any_of(std::vector<Formula> operands) {
    if (operands.empty()) throw Error("empty disjunction");
    if (operands.size() == 1) return operands.front();
    return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(operands)}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Formula>& Formula::operands() const { return node_->operands; }

bool Formula::evaluate(const std::function<bool(const std::string&)>& value_of) const {
    switch (kind()) {
        case Kind::Var: return value_of(name());
        case Kind::Not: return !operands()[0].evaluate(value_of);
        case Kind::And:
            return std::all_of(operands().begin(), operands().end(),
                               [&](const Formula& f) { return f.evaluate(value_of); });
        case Kind::Or:
            return std::any_of(operands().begin(), operands().end(),
                               [&](const Formula& f) { return f.evaluate(value_of); });
    }
    return false;
}

void Formula::collect_vars(std::set<std::string>& out) const {
    if (kind() == Kind::Var) {
        out.insert(name());
        return;
    }
    for (const auto& f : operands()) f.collect_vars(out);
}

std::set<std::string> Formula::vars() const {
    std::set<std::string> out;
    collect_vars(out);
    return out;
}

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Or: return 1;
        case Formula::Kind::And: return 2;
        case Formula::Kind::Not: return 3;
        case Formula::Kind::Var: return 4;
    }
    return 0;
}

std::string render(const Formula& f, int context) {
    std::string s;
    switch (f.kind()) {
        case Formula::Kind::Var: return f.name();
        case Formula::Kind::Not: s = "!" + render(f.operands()[0], precedence(Formula::Kind::Not)); break;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            const char* op = f.kind() == Formula::Kind::And ? " && " : " || ";
            const int own = precedence(f.kind());
            for (std::size_t i = 0; i < f.operands().size(); ++i) {
                if (i) s += op;
                s += render(f.operands()[i], own + 1);
            }
            break;
        }
    }
    return precedence(f.kind()) < context ? "(" + s + ")" : s;
}

}  // namespace

std::string Formula::to_string() const { return render(*this, 0); }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name() || a.operands().size() != b.operands().size()) return false;
    for (std::size_t i = 0; i < a.operands().size(); ++i)
        if (!(a.operands()[i] == b.operands()[i])) return false;
    return true;
}

std::string to_string(const Pattern& p) {
    std::string s;
    switch (p.kind) {
        case PatternKind::Alt: s = "alt"; break;
        case PatternKind::Xalt: s = "xalt"; break;
        case PatternKind::Imp: s = "imp"; break;
        case PatternKind::NoComp: s = "nocomp"; break;
    }
    s += "(";
    for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) s += ", ";
        if (i == 1 && p.kind == PatternKind::Imp && p.negate_consequent) s += "!";
        s += p.args[i];
    }
    return s + ")";
}

std::string nocomp_view_name(const std::string& component) { return "NOCOMP(" + component + ")"; }

std::optional<std::vector<std::string>> StyleConfig::required_tops() const {
    switch (kind) {
        case StyleKind::ClientServer: {
            std::vector<std::string> tops{server};
            tops.insert(tops.end(), clients.begin(), clients.end());
            return tops;
        }
        case StyleKind::Layered: {
            std::vector<std::string> tops;
            for (const auto& layer : layers) tops.insert(tops.end(), layer.begin(), layer.end());
            return tops;
        }
        default: return std::nullopt;
    }
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : "; ") + i;
    return s;
}

bool mentioned_component(const ViewSpec& spec, const std::string& component) {
    for (const auto& [name, view] : spec.views)
        if (view.find(component)) return true;
    for (const auto& lib : spec.library)
        if (lib.component == component) return true;
    return false;
}

// Expands every pattern, appending problems instead of throwing.
std::optional<Formula> expand(const ViewSpec& spec, std::vector<std::string>& problems) {
    const std::set<std::string> known(spec.view_names.begin(), spec.view_names.end());
    auto check_view = [&](const std::string& v, const std::string& where) {
        if (!known.count(v)) problems.push_back("unknown view '" + v + "' in " + where);
    };

    if (!spec.formula) {
        problems.push_back("formula required");
        return std::nullopt;
    }
    for (const auto& v : spec.formula->vars()) check_view(v, "formula");

    std::vector<Formula> conjuncts{*spec.formula};
    for (const auto& p : spec.patterns) {
        const auto where = "pattern " + to_string(p);
        if (p.kind == PatternKind::NoComp) {
            if (p.args.size() != 1) {
                problems.push_back(where + " takes exactly one component");
                continue;
            }
            if (!mentioned_component(spec, p.args[0]))
                problems.push_back("unknown component '" + p.args[0] + "' in " + where);
            conjuncts.push_back(Formula::negate(Formula::var(nocomp_view_name(p.args[0]))));
            continue;
        }
        for (const auto& a : p.args) check_view(a, where);
        std::vector<Formula> vs;
        for (const auto& a : p.args) vs.push_back(Formula::var(a));
        switch (p.kind) {
            case PatternKind::Alt:
                if (vs.empty()) {
                    problems.push_back(where + " needs at least one view");
                    continue;
                }
                conjuncts.push_back(Formula::any_of(vs));
                break;
            case PatternKind::Xalt: {
                if (vs.empty()) {
                    problems.push_back(where + " needs at least one view");
                    continue;
                }
                conjuncts.push_back(Formula::any_of(vs));
                for (std::size_t i = 0; i < vs.size(); ++i)
                    for (std::size_t j = i + 1; j < vs.size(); ++j)
                        conjuncts.push_back(Formula::negate(Formula::all_of({vs[i], vs[j]})));
                break;
            }
            case PatternKind::Imp: {
                if (vs.size() != 2) {
                    problems.push_back(where + " takes exactly two views");
                    continue;
                }
                auto consequent = p.negate_consequent ? Formula::negate(vs[1]) : vs[1];
                conjuncts.push_back(Formula::any_of({Formula::negate(vs[0]), consequent}));
                break;
            }
            case PatternKind::NoComp: break;
        }
    }
    return Formula::all_of(std::move(conjuncts));
}

}  // namespace

ResolutionError::ResolutionError(std::vector<std::string> problems)
    : Error("specification does not resolve: " + join(problems)), problems_(std::move(problems)) {}

const CncView& ResolvedSpec::view(const std::string& name) const {
    for (const auto& v : views)
        if (v.name == name) return v;
    throw LookupError("unknown view '" + name + "'");
}

const LibraryDecl* ResolvedSpec::library_decl(const std::string& component) const {
    for (const auto& lib : source.library)
        if (lib.component == component) return &lib;
    return nullptr;
}

Formula expand_patterns(const ViewSpec& spec) {
    std::vector<std::string> problems;
    auto f = expand(spec, problems);
    if (!problems.empty()) throw ResolutionError(std::move(problems));
    return *f;
}

ResolvedSpec resolve(const ViewSpec& spec) {
    std::vector<std::string> problems;

    std::set<std::string> listed;
    for (const auto& v : spec.view_names) {
        if (!listed.insert(v).second) problems.push_back("view '" + v + "' listed twice");
        auto it = spec.views.find(v);
        if (it == spec.views.end()) {
            problems.push_back("view '" + v + "' has no definition");
            continue;
        }
        if (it->second.name != v)
            problems.push_back("view '" + v + "' is defined under the name '" + it->second.name + "'");
        for (const auto& violation : validate_view(it->second))
            problems.push_back("view '" + v + "': " + violation.message);
    }

    auto formula = expand(spec, problems);

    std::vector<std::string> components;
    std::set<std::string> seen_components;
    auto note = [&](const std::string& c) {
        if (seen_components.insert(c).second) components.push_back(c);
    };

    ResolvedSpec resolved{spec, {}, formula.value_or(Formula::var("")), {}, {}};
    for (const auto& v : spec.view_names) {
        auto it = spec.views.find(v);
        if (it == spec.views.end()) continue;
        resolved.views.push_back(it->second);
        for (const auto& c : it->second.components) {
            note(c.name);
            if (c.interface_complete) {
                resolved.interface_complete.emplace_back(v, c.name);
                for (const auto& p : c.ports)
                    if (!p.name)
                        problems.push_back("interface-complete component '" + c.name + "' in view '" + v +
                                           "' has a port without a name");
            }
        }
    }
    for (const auto& p : spec.patterns) {
        if (p.kind != PatternKind::NoComp || p.args.size() != 1) continue;
        const auto name = nocomp_view_name(p.args[0]);
        if (std::any_of(resolved.views.begin(), resolved.views.end(), [&](const CncView& v) { return v.name == name; }))
            continue;
        CncView implicit;
        implicit.name = name;
        implicit.components.push_back(ViewComponent{p.args[0], {}, {}, false});
        resolved.views.push_back(std::move(implicit));
        note(p.args[0]);
    }

    std::set<std::string> library_names;
    for (const auto& lib : spec.library) {
        if (!library_names.insert(lib.component).second)
            problems.push_back("library component '" + lib.component + "' declared twice");
        note(lib.component);
        std::set<std::string> port_names;
        for (const auto& p : lib.interface)
            if (!port_names.insert(p.name).second)
                problems.push_back("library component '" + lib.component + "' declares port '" + p.name + "' twice");
        for (const auto& [vname, view] : spec.views) {
            const auto* vc = view.find(lib.component);
            if (vc && !vc->subcomponents.empty())
                problems.push_back("library component '" + lib.component + "' has a subcomponent in view '" + vname +
                                   "'");
        }
    }

    const auto& style = spec.style;
    if (auto tops = style.required_tops()) {
        std::set<std::string> uniq;
        for (const auto& c : *tops) {
            if (!uniq.insert(c).second)
                problems.push_back("style names component '" + c + "' more than once");
            if (!mentioned_component(spec, c)) problems.push_back("style references unknown component '" + c + "'");
        }
        if (style.kind == StyleKind::ClientServer && style.clients.empty())
            problems.push_back("client-server style needs at least one client");
        if (style.kind == StyleKind::Layered) {
            if (style.layers.size() < 2) problems.push_back("layered style needs at least two layers");
            for (const auto& layer : style.layers)
                if (layer.empty()) problems.push_back("layered style has an empty layer");
        }
    }

    if (!problems.empty()) throw ResolutionError(std::move(problems));
    resolved.components = std::move(components);
    return resolved;
}

}  // namespace cncsynth
