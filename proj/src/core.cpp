#include "cncsynth/core.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace cncsynth {

std::string to_string(Direction dir) { return dir == Direction::In ? "in" : "out"; }

std::string to_string(const PortRef& ref) { return ref.component + "." + ref.port; }

std::string to_string(const AbstractConnector& ac) {
    std::string s = ac.source_component;
    if (ac.source_port) s += "." + *ac.source_port;
    s += " -> " + ac.target_component;
    if (ac.target_port) s += "." + *ac.target_port;
    return s;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DuplicateComponent: return "duplicate component";
        case ViolationKind::DuplicatePort: return "duplicate port";
        case ViolationKind::UnknownComponent: return "unknown component";
        case ViolationKind::UnknownPort: return "unknown port";
        case ViolationKind::MissingName: return "missing name";
        case ViolationKind::MissingType: return "missing type";
        case ViolationKind::MultipleParents: return "multiple parents";
        case ViolationKind::ContainmentCycle: return "containment cycle";
        case ViolationKind::TopComponent: return "top component";
        case ViolationKind::TypeMismatch: return "type mismatch";
        case ViolationKind::IllegalConnectorLocality: return "illegal connector locality";
        case ViolationKind::IllegalConnectorDirection: return "illegal connector direction";
        case ViolationKind::MultipleIncoming: return "two incoming connectors";
    }
    return "?";
}

const Port* Component::find_port(const std::string& port_name) const {
    for (const auto& p : ports)
        if (p.name == port_name) return &p;
    return nullptr;
}

const Component* CncModel::find(const std::string& name) const {
    for (const auto& c : components)
        if (c.name == name) return &c;
    return nullptr;
}

const Component& CncModel::at(const std::string& name) const {
    if (const auto* c = find(name)) return *c;
    throw LookupError("unknown component '" + name + "'");
}

std::vector<std::string> CncModel::tops() const {
    std::set<std::string> children;
    for (const auto& c : components)
        children.insert(c.subcomponents.begin(), c.subcomponents.end());
    std::vector<std::string> result;
    for (const auto& c : components)
        if (!children.count(c.name)) result.push_back(c.name);
    return result;
}

void CncModel::refresh_types() {
    types.clear();
    for (const auto& c : components)
        for (const auto& p : c.ports)
            if (!p.type.empty()) types.insert(p.type);
}

namespace {

using PortKey = std::tuple<std::string, Direction, std::string>;

struct CanonicalModel {
    std::set<std::string> types;
    std::map<std::string, std::pair<std::set<PortKey>, std::set<std::string>>> components;
    std::multiset<Connector> connectors;

    friend bool operator==(const CanonicalModel&, const CanonicalModel&) = default;
};

CanonicalModel canonical(const CncModel& m) {
    CanonicalModel c;
    c.types = m.types;
    for (const auto& comp : m.components) {
        auto& entry = c.components[comp.name];
        for (const auto& p : comp.ports) entry.first.emplace(p.name, p.direction, p.type);
        entry.second.insert(comp.subcomponents.begin(), comp.subcomponents.end());
    }
    c.connectors.insert(m.connectors.begin(), m.connectors.end());
    return c;
}

}  // namespace

bool structurally_equal(const CncModel& a, const CncModel& b) { return canonical(a) == canonical(b); }

const ViewPort* ViewComponent::find_port(const std::string& port_name) const {
    for (const auto& p : ports)
        if (p.name && *p.name == port_name) return &p;
    return nullptr;
}

const ViewComponent* CncView::find(const std::string& name) const {
    for (const auto& c : components)
        if (c.name == name) return &c;
    return nullptr;
}

std::set<std::pair<std::string, std::string>> CncView::containment_closure() const {
    std::map<std::string, std::set<std::string>> direct;
    for (const auto& c : components)
        direct[c.name].insert(c.subcomponents.begin(), c.subcomponents.end());

    std::set<std::pair<std::string, std::string>> closure;
    for (const auto& c : components) {
        std::deque<std::string> work(direct[c.name].begin(), direct[c.name].end());
        std::set<std::string> seen;
        while (!work.empty()) {
            auto next = work.front();
            work.pop_front();
            if (!seen.insert(next).second) continue;
            closure.emplace(c.name, next);
            for (const auto& s : direct[next]) work.push_back(s);
        }
    }
    return closure;
}

void CncView::refresh_types() {
    types.clear();
    for (const auto& c : components)
        for (const auto& p : c.ports)
            if (p.type) types.insert(*p.type);
    for (const auto& ac : connectors) {
        if (ac.source_type) types.insert(*ac.source_type);
        if (ac.target_type) types.insert(*ac.target_type);
    }
}

// ---------------------------------------------------------------------------

WellFormednessReport validate_model(const CncModel& model, const ValidationOptions& options) {
    WellFormednessReport report;
    auto add = [&](ViolationKind kind, std::string subject, std::string message) {
        report.push_back({kind, std::move(subject), std::move(message)});
    };

    std::map<std::string, const Component*> by_name;
    for (const auto& c : model.components) {
        if (c.name.empty()) add(ViolationKind::MissingName, "", "component without a name");
        if (!by_name.emplace(c.name, &c).second)
            add(ViolationKind::DuplicateComponent, c.name, "component '" + c.name + "' declared twice");

        std::set<std::string> port_names;
        for (const auto& p : c.ports) {
            if (p.name.empty()) add(ViolationKind::MissingName, c.name, "port of '" + c.name + "' has no name");
            if (p.type.empty())
                add(ViolationKind::MissingType, c.name + "." + p.name, "port '" + c.name + "." + p.name + "' has no type");
            else if (!model.types.count(p.type))
                add(ViolationKind::MissingType, p.type, "type '" + p.type + "' is not in the model's type set");
            if (!port_names.insert(p.name).second)
                add(ViolationKind::DuplicatePort, c.name + "." + p.name,
                    "port name '" + p.name + "' is not unique within '" + c.name + "'");
        }
    }

    std::map<std::string, std::string> parent_of;
    for (const auto& c : model.components) {
        for (const auto& s : c.subcomponents) {
            if (!by_name.count(s)) {
                add(ViolationKind::UnknownComponent, s, "subcomponent '" + s + "' of '" + c.name + "' is not declared");
                continue;
            }
            auto [it, inserted] = parent_of.emplace(s, c.name);
            if (!inserted)
                add(ViolationKind::MultipleParents, s,
                    "'" + s + "' is a subcomponent of both '" + it->second + "' and '" + c.name + "'");
        }
    }

    std::set<std::string> on_cycle;
    for (const auto& c : model.components) {
        std::set<std::string> seen;
        std::string cur = c.name;
        while (true) {
            auto it = parent_of.find(cur);
            if (it == parent_of.end()) break;
            cur = it->second;
            if (cur == c.name) {
                if (on_cycle.insert(c.name).second)
                    add(ViolationKind::ContainmentCycle, c.name, "containment cycle through '" + c.name + "'");
                break;
            }
            if (!seen.insert(cur).second) break;
        }
    }

    std::vector<std::string> tops;
    for (const auto& c : model.components)
        if (!parent_of.count(c.name)) tops.push_back(c.name);
    if (model.components.empty())
        add(ViolationKind::TopComponent, "", "model has no components");
    else if (tops.empty())
        add(ViolationKind::TopComponent, "", "model has no top component");
    else if (tops.size() > 1 && !options.allow_multiple_tops)
        add(ViolationKind::TopComponent, tops[1],
            "model has " + std::to_string(tops.size()) + " top components ('" + tops[0] + "', '" + tops[1] + "', ...)");

    auto parent_name = [&](const std::string& c) -> std::optional<std::string> {
        auto it = parent_of.find(c);
        if (it == parent_of.end()) return std::nullopt;
        return it->second;
    };

    std::map<PortRef, int> incoming;
    for (const auto& con : model.connectors) {
        const std::string label = to_string(con.source) + " -> " + to_string(con.target);
        const Port* ends[2] = {nullptr, nullptr};
        const PortRef* refs[2] = {&con.source, &con.target};
        bool ok = true;
        for (int i = 0; i < 2; ++i) {
            auto it = by_name.find(refs[i]->component);
            if (it == by_name.end()) {
                add(ViolationKind::UnknownComponent, refs[i]->component,
                    "connector " + label + " references unknown component '" + refs[i]->component + "'");
                ok = false;
                continue;
            }
            ends[i] = it->second->find_port(refs[i]->port);
            if (!ends[i]) {
                add(ViolationKind::UnknownPort, to_string(*refs[i]),
                    "connector " + label + " references unknown port '" + to_string(*refs[i]) + "'");
                ok = false;
            }
        }
        if (!ok) continue;

        if (++incoming[con.target] == 2)
            add(ViolationKind::MultipleIncoming, to_string(con.target),
                "port '" + to_string(con.target) + "' has two incoming connectors");

        if (ends[0]->type != ends[1]->type)
            add(ViolationKind::TypeMismatch, label,
                "connector " + label + " joins types '" + ends[0]->type + "' and '" + ends[1]->type + "'");

        const auto& a = con.source.component;
        const auto& b = con.target.component;
        auto pa = parent_name(a);
        auto pb = parent_name(b);
        Direction want_src, want_tgt;
        if (a != b && pa == pb) {
            want_src = Direction::Out;
            want_tgt = Direction::In;
        } else if (pb && *pb == a) {
            want_src = Direction::In;
            want_tgt = Direction::In;
        } else if (pa && *pa == b) {
            want_src = Direction::Out;
            want_tgt = Direction::Out;
        } else {
            add(ViolationKind::IllegalConnectorLocality, label,
                "connector " + label + " joins components that are neither siblings nor parent and child");
            continue;
        }
        if (ends[0]->direction != want_src || ends[1]->direction != want_tgt)
            add(ViolationKind::IllegalConnectorDirection, label,
                "connector " + label + " must go from an " + to_string(want_src) + " port to an " +
                    to_string(want_tgt) + " port");
    }
    return report;
}

WellFormednessReport validate_view(const CncView& view) {
    WellFormednessReport report;
    std::set<std::string> names;
    for (const auto& c : view.components) {
        if (!names.insert(c.name).second)
            report.push_back({ViolationKind::DuplicateComponent, c.name, "component '" + c.name + "' declared twice"});
        std::set<std::string> port_names;
        for (const auto& p : c.ports)
            if (p.name && !port_names.insert(*p.name).second)
                report.push_back({ViolationKind::DuplicatePort, c.name + "." + *p.name,
                                  "port name '" + *p.name + "' is not unique within '" + c.name + "'"});
    }
    for (const auto& c : view.components)
        for (const auto& s : c.subcomponents)
            if (!names.count(s))
                report.push_back({ViolationKind::UnknownComponent, s, "subcomponent '" + s + "' is not declared"});
    for (const auto& [outer, inner] : view.containment_closure())
        if (outer == inner)
            report.push_back({ViolationKind::ContainmentCycle, outer, "containment cycle through '" + outer + "'"});
    for (const auto& ac : view.connectors)
        for (const auto* name : {&ac.source_component, &ac.target_component})
            if (!names.count(*name))
                report.push_back({ViolationKind::UnknownComponent, *name,
                                  "abstract connector " + to_string(ac) + " references unknown component '" + *name + "'"});
    return report;
}

// ---------------------------------------------------------------------------

ModelIndex::ModelIndex(const CncModel& model) : model_(&model) {
    const auto n = model.components.size();
    for (std::size_t i = 0; i < n; ++i) component_ids_.emplace(model.components[i].name, i);
    parent_.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& s : model.components[i].subcomponents)
            if (auto it = component_ids_.find(s); it != component_ids_.end() && !parent_[it->second])
                parent_[it->second] = i;

    descendants_.assign(n, std::vector<bool>(n, false));
    for (std::size_t c = 0; c < n; ++c) {
        auto cur = parent_[c];
        for (std::size_t steps = 0; cur && steps < n; ++steps) {
            descendants_[*cur][c] = true;
            cur = parent_[*cur];
        }
    }

    component_ports_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : model.components[i].ports) {
            PortRef ref{model.components[i].name, p.name};
            if (port_ids_.count(ref)) continue;
            port_ids_.emplace(ref, ports_.size());
            component_ports_[i].push_back(ports_.size());
            ports_.push_back({ref, &p, i});
        }
    }
}

std::optional<std::size_t> ModelIndex::component_id(const std::string& name) const {
    auto it = component_ids_.find(name);
    if (it == component_ids_.end()) return std::nullopt;
    return it->second;
}

bool ModelIndex::contains(std::size_t ancestor, std::size_t child) const { return descendants_[ancestor][child]; }

std::optional<std::size_t> ModelIndex::port_id(const PortRef& ref) const {
    auto it = port_ids_.find(ref);
    if (it == port_ids_.end()) return std::nullopt;
    return it->second;
}

bool contains_transitive(const CncModel& model, const std::string& parent, const std::string& child) {
    ModelIndex index(model);
    auto p = index.component_id(parent);
    auto c = index.component_id(child);
    if (!p) throw LookupError("unknown component '" + parent + "'");
    if (!c) throw LookupError("unknown component '" + child + "'");
    return index.contains(*p, *c);
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> PortGraph::index_of(const PortRef& ref) const {
    auto it = std::lower_bound(ports.begin(), ports.end(), ref);
    if (it == ports.end() || *it != ref) return std::nullopt;
    return static_cast<std::size_t>(it - ports.begin());
}

bool PortGraph::reaches(std::size_t from, std::size_t to) const {
    std::vector<bool> seen(ports.size(), false);
    std::deque<std::size_t> work{from};
    while (!work.empty()) {
        auto p = work.front();
        work.pop_front();
        for (auto q : successors[p]) {
            if (q == to) return true;
            if (!seen[q]) {
                seen[q] = true;
                work.push_back(q);
            }
        }
    }
    return false;
}

PortGraph port_chain_graph(const CncModel& model) {
    PortGraph g;
    for (const auto& c : model.components)
        for (const auto& p : c.ports) g.ports.push_back({c.name, p.name});
    std::sort(g.ports.begin(), g.ports.end());
    g.ports.erase(std::unique(g.ports.begin(), g.ports.end()), g.ports.end());
    g.successors.resize(g.ports.size());
    for (const auto& con : model.connectors) {
        auto s = g.index_of(con.source);
        auto t = g.index_of(con.target);
        if (!s || !t) continue;
        g.successors[*s].push_back(*t);
        ++g.edge_count;
    }
    for (auto& succ : g.successors) std::sort(succ.begin(), succ.end());
    return g;
}

}  // namespace cncsynth
