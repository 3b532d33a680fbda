#include "cncsynth/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace cncsynth {

std::string to_string(ViewViolationKind kind) {
    switch (kind) {
        case ViewViolationKind::MissingType: return "MISSING_TYPE";
        case ViewViolationKind::MissingComponent: return "MISSING_COMPONENT";
        case ViewViolationKind::Containment: return "CONTAINMENT";
        case ViewViolationKind::Independence: return "INDEPENDENCE";
        case ViewViolationKind::PortMismatch: return "PORT_MISMATCH";
        case ViewViolationKind::NoChain: return "NO_CHAIN";
    }
    return "?";
}

namespace {

std::string describe(const WellFormednessReport& report) {
    std::string s = "model is not well-formed";
    for (const auto& v : report) s += "; " + v.message;
    return s;
}

std::string describe(const ViewPort& p, const std::string& owner) {
    return to_string(p.direction) + " port " + owner + "." + p.name.value_or("?") + " : " + p.type.value_or("?");
}

bool port_matches(const Port& mp, const ViewPort& vp) {
    return (!vp.name || *vp.name == mp.name) && vp.direction == mp.direction && (!vp.type || *vp.type == mp.type);
}

bool endpoint_matches(const Port& p, const std::optional<std::string>& name, const std::optional<std::string>& type) {
    return (!name || *name == p.name) && (!type || *type == p.type);
}

std::optional<std::vector<Connector>> find_chain(const ModelIndex& index, const PortGraph& graph,
                                                 const AbstractConnector& ac) {
    const auto src = index.component_id(ac.source_component);
    const auto tgt = index.component_id(ac.target_component);
    if (!src || !tgt) return std::nullopt;

    std::vector<bool> is_target(graph.ports.size(), false);
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < graph.ports.size(); ++i) {
        const auto& ref = graph.ports[i];
        const auto id = *index.port_id(ref);
        const auto& port = index.port(id);
        if (ref.component == ac.source_component && endpoint_matches(port, ac.source_port, ac.source_type))
            sources.push_back(i);
        if (ref.component == ac.target_component && endpoint_matches(port, ac.target_port, ac.target_type))
            is_target[i] = true;
    }

    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pred(graph.ports.size(), none);
    std::vector<bool> visited(graph.ports.size(), false);
    std::deque<std::size_t> queue;
    for (auto s : sources) {
        visited[s] = true;
        queue.push_back(s);
    }

    auto path_to = [&](std::size_t p) {
        std::vector<std::size_t> rev{p};
        while (pred[rev.back()] != none) rev.push_back(pred[rev.back()]);
        return std::vector<std::size_t>(rev.rbegin(), rev.rend());
    };

    while (!queue.empty()) {
        const auto p = queue.front();
        queue.pop_front();
        for (auto q : graph.successors[p]) {
            if (is_target[q]) {
                auto ports = path_to(p);
                ports.push_back(q);
                std::vector<Connector> chain;
                for (std::size_t i = 0; i + 1 < ports.size(); ++i)
                    chain.push_back({graph.ports[ports[i]], graph.ports[ports[i + 1]]});
                return chain;
            }
            if (!visited[q]) {
                visited[q] = true;
                pred[q] = p;
                queue.push_back(q);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

IllFormedModelError::IllFormedModelError(WellFormednessReport report)
    : Error(describe(report)), report_(std::move(report)) {}

SatisfactionResult satisfies(const CncModel& model, const CncView& view) {
    auto report = validate_model(model, {.allow_multiple_tops = true});
    if (!report.empty()) throw IllFormedModelError(std::move(report));
    ModelIndex index(model);
    return satisfies(index, port_chain_graph(model), view);
}

SatisfactionResult satisfies(const ModelIndex& index, const PortGraph& graph, const CncView& view) {
    const auto& model = index.model();
    SatisfactionResult result;
    auto violate = [&](ViewViolationKind kind, std::vector<std::string> subject, std::string explanation) {
        result.violations.push_back({kind, std::move(subject), std::move(explanation)});
    };

    for (const auto& t : view.types)
        if (!model.types.count(t)) violate(ViewViolationKind::MissingType, {t}, "type '" + t + "' does not occur in the model");

    for (const auto& vc : view.components) {
        const auto id = index.component_id(vc.name);
        if (!id) {
            violate(ViewViolationKind::MissingComponent, {vc.name}, "component '" + vc.name + "' is missing");
            continue;
        }
        const auto& mc = model.components[*id];
        for (const auto& vp : vc.ports) {
            const bool found = std::any_of(mc.ports.begin(), mc.ports.end(),
                                           [&](const Port& mp) { return port_matches(mp, vp); });
            if (!found)
                violate(ViewViolationKind::PortMismatch, {vc.name, vp.name.value_or("?")},
                        "no " + describe(vp, vc.name) + " in the model");
        }
    }

    const auto view_contains = view.containment_closure();
    for (const auto& outer : view.components) {
        for (const auto& inner : view.components) {
            if (outer.name == inner.name) continue;
            const auto o = index.component_id(outer.name);
            const auto i = index.component_id(inner.name);
            if (!o || !i) continue;
            const bool wanted = view_contains.count({outer.name, inner.name}) > 0;
            const bool actual = index.contains(*o, *i);
            if (wanted && !actual)
                violate(ViewViolationKind::Containment, {outer.name, inner.name},
                        "'" + outer.name + "' does not contain '" + inner.name + "'");
            else if (!wanted && actual)
                violate(ViewViolationKind::Independence, {outer.name, inner.name},
                        "'" + outer.name + "' contains '" + inner.name + "' but the view does not nest them");
        }
    }

    for (const auto& ac : view.connectors) {
        if (auto chain = find_chain(index, graph, ac))
            result.witnesses.push_back({ac, std::move(*chain)});
        else
            violate(ViewViolationKind::NoChain, {ac.source_component, ac.target_component},
                    "no connector chain implements " + to_string(ac));
    }

    result.satisfied = result.violations.empty();
    return result;
}

ValidationOptions validation_options_for(const StyleConfig& style) {
    return {.allow_multiple_tops = style.required_tops().has_value()};
}

std::set<std::pair<std::string, std::string>> end_to_end_relation(const CncModel& model) {
    const auto graph = port_chain_graph(model);
    std::vector<bool> has_in(graph.ports.size(), false), has_out(graph.ports.size(), false);
    for (std::size_t p = 0; p < graph.ports.size(); ++p) {
        if (!graph.successors[p].empty()) has_out[p] = true;
        for (auto q : graph.successors[p]) has_in[q] = true;
    }
    std::set<std::pair<std::string, std::string>> rel;
    for (std::size_t s = 0; s < graph.ports.size(); ++s) {
        if (has_in[s]) continue;
        for (std::size_t r = 0; r < graph.ports.size(); ++r)
            if (!has_out[r] && graph.reaches(s, r)) rel.emplace(graph.ports[s].component, graph.ports[r].component);
    }
    return rel;
}

namespace {

bool has_cycle(const std::set<std::pair<std::string, std::string>>& rel) {
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& [a, b] : rel) succ[a].push_back(b);
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
        state[n] = 1;
        for (const auto& m : succ[n]) {
            if (state[m] == 1) return true;
            if (state[m] == 0 && dfs(m)) return true;
        }
        state[n] = 2;
        return false;
    };
    for (const auto& [n, _] : succ)
        if (state[n] == 0 && dfs(n)) return true;
    return false;
}

std::vector<std::string> check_tops(const CncModel& model, const std::vector<std::string>& required) {
    std::vector<std::string> problems;
    auto tops = model.tops();
    std::set<std::string> actual(tops.begin(), tops.end());
    std::set<std::string> wanted(required.begin(), required.end());
    for (const auto& w : wanted)
        if (!actual.count(w)) problems.push_back("'" + w + "' must be a top component");
    for (const auto& a : actual)
        if (!wanted.count(a)) problems.push_back("'" + a + "' must not be a top component");
    return problems;
}

std::string top_ancestor(const ModelIndex& index, std::size_t c) {
    while (auto p = index.parent(c)) c = *p;
    return index.model().components[c].name;
}

}  // namespace

std::vector<std::string> check_style(const CncModel& model, const StyleConfig& style) {
    std::vector<std::string> problems;
    switch (style.kind) {
        case StyleKind::None: break;
        case StyleKind::Hierarchical:
            if (has_cycle(end_to_end_relation(model)))
                problems.push_back("hierarchical style: end-to-end communication has a cycle");
            break;
        case StyleKind::ClientServer: {
            problems = check_tops(model, *style.required_tops());
            const std::set<std::string> clients(style.clients.begin(), style.clients.end());
            for (const auto& client : style.clients) {
                const bool linked = std::any_of(model.connectors.begin(), model.connectors.end(), [&](const Connector& c) {
                    return (c.source.component == style.server && c.target.component == client) ||
                           (c.source.component == client && c.target.component == style.server);
                });
                if (!linked) problems.push_back("client '" + client + "' is not directly connected to the server");
            }
            for (const auto& c : model.connectors)
                if (c.source.component != c.target.component && clients.count(c.source.component) &&
                    clients.count(c.target.component))
                    problems.push_back("clients '" + c.source.component + "' and '" + c.target.component +
                                       "' communicate directly");
            break;
        }
        case StyleKind::Layered: {
            problems = check_tops(model, *style.required_tops());
            std::map<std::string, std::size_t> layer_of;
            for (std::size_t i = 0; i < style.layers.size(); ++i)
                for (const auto& c : style.layers[i]) layer_of[c] = i;
            ModelIndex index(model);
            for (const auto& con : model.connectors) {
                const auto a = index.component_id(con.source.component);
                const auto b = index.component_id(con.target.component);
                if (!a || !b) continue;
                auto la = layer_of.find(top_ancestor(index, *a));
                auto lb = layer_of.find(top_ancestor(index, *b));
                if (la == layer_of.end() || lb == layer_of.end()) continue;
                const auto gap = la->second > lb->second ? la->second - lb->second : lb->second - la->second;
                if (gap > 1)
                    problems.push_back("connector " + to_string(con.source) + " -> " + to_string(con.target) +
                                       " skips a layer");
            }
            break;
        }
    }
    return problems;
}

namespace {

template <class PortLike, class Match>
void check_exact_interface(const Component& mc, const std::vector<PortLike>& declared, const std::string& what,
                           Match match, std::vector<std::string>& problems) {
    if (mc.ports.size() != declared.size())
        problems.push_back(what + " '" + mc.name + "' has " + std::to_string(mc.ports.size()) + " ports, expected " +
                           std::to_string(declared.size()));
    for (const auto& d : declared)
        if (std::none_of(mc.ports.begin(), mc.ports.end(), [&](const Port& p) { return match(p, d); }))
            problems.push_back(what + " '" + mc.name + "' lacks a declared port");
}

}  // namespace

SpecEvaluation evaluate_spec(const CncModel& model, const ResolvedSpec& spec) {
    auto report = validate_model(model, validation_options_for(spec.source.style));
    if (!report.empty()) throw IllFormedModelError(std::move(report));

    SpecEvaluation eval;
    ModelIndex index(model);
    const auto graph = port_chain_graph(model);
    for (const auto& view : spec.views) {
        auto r = satisfies(index, graph, view);
        eval.per_view[view.name] = r.satisfied;
        eval.details.emplace(view.name, std::move(r));
    }
    eval.formula_holds = spec.formula.evaluate([&](const std::string& v) { return eval.per_view.at(v); });

    eval.constraint_violations = check_style(model, spec.source.style);

    for (const auto& lib : spec.source.library) {
        const auto* mc = model.find(lib.component);
        if (!mc) continue;
        if (!mc->subcomponents.empty())
            eval.constraint_violations.push_back("library component '" + lib.component + "' has subcomponents");
        check_exact_interface(*mc, lib.interface, "library component",
                              [](const Port& p, const Port& d) { return p == d; }, eval.constraint_violations);
    }
    for (const auto& [vname, cname] : spec.interface_complete) {
        const auto* mc = model.find(cname);
        if (!mc) continue;
        const auto* vc = spec.view(vname).find(cname);
        check_exact_interface(*mc, vc->ports, "interface-complete component",
                              [](const Port& p, const ViewPort& d) { return port_matches(p, d); },
                              eval.constraint_violations);
    }

    eval.overall = eval.formula_holds && eval.constraint_violations.empty();
    return eval;
}

}  // namespace cncsynth
