#pragma once

// Hand-rolled random and exhaustive generators for models, views and CNF.

#include "cncsynth/core.hpp"
#include "cncsynth/sat.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace cncsynth;
using Rng = std::mt19937;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

inline std::vector<std::string> component_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
    return out;
}

inline std::vector<std::string> type_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
    return out;
}

inline std::string port_name(int i) { return "p" + std::to_string(i); }

/// Connectors that may legally join two ports of `model`.
inline std::vector<Connector> legal_connectors(const CncModel& model) {
    std::map<std::string, std::string> parent;
    for (const auto& c : model.components)
        for (const auto& s : c.subcomponents) parent[s] = c.name;
    auto parent_of = [&](const std::string& c) {
        auto it = parent.find(c);
        return it == parent.end() ? std::string("<top>") : it->second;
    };
    std::vector<Connector> out;
    for (const auto& a : model.components)
        for (const auto& pa : a.ports)
            for (const auto& b : model.components)
                for (const auto& pb : b.ports) {
                    if (a.name == b.name || pa.type != pb.type) continue;
                    const bool siblings = parent_of(a.name) == parent_of(b.name);
                    const bool down = parent_of(b.name) == a.name;
                    const bool up = parent_of(a.name) == b.name;
                    const bool ok = (siblings && pa.direction == Direction::Out && pb.direction == Direction::In) ||
                                    (down && pa.direction == Direction::In && pb.direction == Direction::In) ||
                                    (up && pa.direction == Direction::Out && pb.direction == Direction::Out);
                    if (ok) out.push_back({{a.name, pa.name}, {b.name, pb.name}});
                }
    return out;
}

/// A random well-formed model with a single top component.
inline CncModel random_model(Rng& rng, int max_components, int max_ports, int types) {
    const int n = uniform(rng, 1, max_components);
    auto names = component_names(n);
    std::shuffle(names.begin(), names.end(), rng);
    const auto ts = type_names(types);
    CncModel m;
    for (int i = 0; i < n; ++i) {
        Component c{names[i], {}, {}};
        const int ports = uniform(rng, 0, max_ports);
        for (int k = 0; k < ports; ++k)
            c.ports.push_back({port_name(k), coin(rng) ? Direction::In : Direction::Out, pick(rng, ts)});
        m.components.push_back(std::move(c));
    }
    for (int i = 1; i < n; ++i) m.components[uniform(rng, 0, i - 1)].subcomponents.push_back(names[i]);
    std::shuffle(m.components.begin(), m.components.end(), rng);
    auto candidates = legal_connectors(m);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::set<PortRef> targets;
    for (const auto& c : candidates)
        if (coin(rng) && targets.insert(c.target).second) m.connectors.push_back(c);
    m.refresh_types();
    return m;
}

/// A random view over `names` (possibly mentioning an extra component).
inline CncView random_view(Rng& rng, const std::vector<std::string>& names, int types, int max_ports = 2,
                           int max_connectors = 2, bool outsider = true) {
    auto pool = names;
    if (outsider) pool.push_back("Z");
    std::shuffle(pool.begin(), pool.end(), rng);
    const int n = uniform(rng, 0, std::min<int>(3, static_cast<int>(pool.size())));
    const auto ts = type_names(types);
    CncView v;
    v.name = "V";
    for (int i = 0; i < n; ++i) {
        ViewComponent c{pool[i], {}, {}, false};
        const int ports = uniform(rng, 0, max_ports);
        for (int k = 0; k < ports; ++k) {
            ViewPort p;
            p.direction = coin(rng) ? Direction::In : Direction::Out;
            if (coin(rng, 0.7)) p.type = pick(rng, ts);
            if (coin(rng, 0.6)) {
                const auto name = port_name(uniform(rng, 0, 1));
                if (!c.find_port(name)) p.name = name;
            }
            c.ports.push_back(std::move(p));
        }
        v.components.push_back(std::move(c));
    }
    // Nesting only from earlier to later components keeps it acyclic.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng, 0.3)) v.components[i].subcomponents.push_back(pool[j]);
    const int acs = n == 0 ? 0 : uniform(rng, 0, max_connectors);
    for (int k = 0; k < acs; ++k) {
        AbstractConnector ac;
        const auto& s = v.components[uniform(rng, 0, n - 1)];
        const auto& t = v.components[uniform(rng, 0, n - 1)];
        ac.source_component = s.name;
        ac.target_component = t.name;
        auto named = [&](const ViewComponent& c, std::optional<std::string>& port, std::optional<std::string>& type) {
            std::vector<const ViewPort*> candidates;
            for (const auto& p : c.ports)
                if (p.name) candidates.push_back(&p);
            if (!candidates.empty() && coin(rng)) {
                const auto* p = pick(rng, candidates);
                port = p->name;
                type = p->type;
            }
        };
        named(s, ac.source_port, ac.source_type);
        named(t, ac.target_port, ac.target_type);
        v.connectors.push_back(std::move(ac));
    }
    v.refresh_types();
    return v;
}

inline CnfInstance random_3sat(Rng& rng, int vars, int clauses) {
    CnfInstance cnf;
    cnf.num_vars = vars;
    for (int i = 0; i < clauses; ++i) {
        std::vector<Lit> c;
        for (int k = 0; k < 3; ++k) c.push_back(uniform(rng, 1, vars) * (coin(rng) ? 1 : -1));
        cnf.add(std::move(c));
    }
    return cnf;
}

inline CnfInstance random_cnf(Rng& rng, int vars, int clauses, int max_width) {
    CnfInstance cnf;
    cnf.num_vars = vars;
    for (int i = 0; i < clauses; ++i) {
        std::vector<Lit> c;
        const int w = uniform(rng, 1, max_width);
        for (int k = 0; k < w; ++k) c.push_back(uniform(rng, 1, vars) * (coin(rng) ? 1 : -1));
        cnf.add(std::move(c));
    }
    return cnf;
}

/// Calls `visit` on every well-formed single-top model whose components are a
/// nonempty subset of the first `max_components` names, each with at most
/// `max_ports` ports (named p0, p1, ...) over `types` types, and every legal
/// connector set. Returns the number of models visited.
inline std::size_t for_each_model(int max_components, int max_ports, int types,
                                  const std::function<void(const CncModel&)>& visit) {
    const auto all = component_names(max_components);
    const auto ts = type_names(types);
    std::vector<std::vector<Port>> interfaces{{}};
    for (int k = 1; k <= max_ports; ++k) {
        std::vector<std::vector<Port>> next;
        for (const auto& base : interfaces)
            if (static_cast<int>(base.size()) == k - 1)
                for (auto dir : {Direction::In, Direction::Out})
                    for (const auto& t : ts) {
                        auto ports = base;
                        ports.push_back({port_name(k - 1), dir, t});
                        next.push_back(std::move(ports));
                    }
        interfaces.insert(interfaces.end(), next.begin(), next.end());
    }

    std::size_t count = 0;
    for (unsigned mask = 1; mask < (1u << max_components); ++mask) {
        std::vector<std::string> comps;
        for (int i = 0; i < max_components; ++i)
            if (mask & (1u << i)) comps.push_back(all[i]);
        const int n = static_cast<int>(comps.size());
        // parent[i] in [-1, n): -1 marks the top.
        std::vector<int> parent(n, -1);
        std::function<void(int)> trees = [&](int i) {
            if (i == n) {
                int tops = 0;
                for (int p : parent) tops += p < 0;
                if (tops != 1) return;
                for (int c = 0; c < n; ++c) {
                    int x = c, steps = 0;
                    while (x >= 0 && steps <= n) x = parent[x], ++steps;
                    if (x >= 0) return;
                }
                std::vector<std::size_t> choice(n, 0);
                for (;;) {
                    CncModel m;
                    for (int c = 0; c < n; ++c) m.components.push_back({comps[c], interfaces[choice[c]], {}});
                    for (int c = 0; c < n; ++c)
                        if (parent[c] >= 0) m.components[parent[c]].subcomponents.push_back(comps[c]);
                    m.refresh_types();
                    const auto legal = legal_connectors(m);
                    std::map<PortRef, std::vector<const Connector*>> by_target;
                    for (const auto& c : legal) by_target[c.target].push_back(&c);
                    std::vector<std::vector<const Connector*>> options;
                    for (auto& [_, list] : by_target) options.push_back(list);
                    std::vector<std::size_t> sel(options.size(), 0);  // 0 = none, k = options[k - 1]
                    for (;;) {
                        CncModel with = m;
                        for (std::size_t t = 0; t < options.size(); ++t)
                            if (sel[t]) with.connectors.push_back(*options[t][sel[t] - 1]);
                        visit(with);
                        ++count;
                        std::size_t t = 0;
                        while (t < options.size() && ++sel[t] > options[t].size()) sel[t++] = 0;
                        if (t == options.size()) break;
                    }
                    int c = 0;
                    while (c < n && ++choice[c] == interfaces.size()) choice[c++] = 0;
                    if (c == n) break;
                }
                return;
            }
            for (int p = -1; p < n; ++p)
                if (p != i) {
                    parent[i] = p;
                    trees(i + 1);
                }
        };
        trees(0);
    }
    return count;
}

struct Universe {
    std::vector<std::string> components;
    std::vector<std::string> port_names;
    std::vector<std::string> types;
    int max_ports_per_component = 2;
    int max_total_ports = 4;
    bool multi_top = false;
    /// Components that every model must contain.
    std::vector<std::string> required;
};

/// Calls `visit` on every well-formed model over `u`: each subset of the
/// components, every containment forest (a single tree unless multi_top),
/// every port set drawn from the port names with every direction and type,
/// and every legal connector set. Returns the number of models visited.
inline std::size_t for_each_model_over(const Universe& u, const std::function<void(const CncModel&)>& visit) {
    // Port sets per component: name subsets in order, each with direction and type.
    std::vector<std::vector<Port>> interfaces;
    std::function<void(std::size_t, std::vector<Port>&)> ports = [&](std::size_t next, std::vector<Port>& cur) {
        interfaces.push_back(cur);
        if (static_cast<int>(cur.size()) == u.max_ports_per_component) return;
        for (std::size_t n = next; n < u.port_names.size(); ++n)
            for (auto dir : {Direction::In, Direction::Out})
                for (const auto& t : u.types) {
                    cur.push_back({u.port_names[n], dir, t});
                    ports(n + 1, cur);
                    cur.pop_back();
                }
    };
    std::vector<Port> scratch;
    ports(0, scratch);

    std::size_t count = 0;
    const int all = static_cast<int>(u.components.size());
    for (unsigned mask = 1; mask < (1u << all); ++mask) {
        std::vector<std::string> comps;
        for (int i = 0; i < all; ++i)
            if (mask & (1u << i)) comps.push_back(u.components[i]);
        if (!std::all_of(u.required.begin(), u.required.end(), [&](const std::string& r) {
                return std::find(comps.begin(), comps.end(), r) != comps.end();
            }))
            continue;
        const int n = static_cast<int>(comps.size());
        std::vector<int> parent(n, -1);
        std::function<void(int)> forests = [&](int i) {
            if (i < n) {
                for (int p = -1; p < n; ++p)
                    if (p != i) {
                        parent[i] = p;
                        forests(i + 1);
                    }
                return;
            }
            int tops = 0;
            for (int p : parent) tops += p < 0;
            if (tops != 1 && !u.multi_top) return;
            for (int c = 0; c < n; ++c) {
                int x = c, steps = 0;
                while (x >= 0 && steps <= n) x = parent[x], ++steps;
                if (x >= 0) return;
            }
            std::vector<std::size_t> choice(n, 0);
            for (;;) {
                int total = 0;
                for (int c = 0; c < n; ++c) total += static_cast<int>(interfaces[choice[c]].size());
                if (total <= u.max_total_ports) {
                    CncModel m;
                    for (int c = 0; c < n; ++c) m.components.push_back({comps[c], interfaces[choice[c]], {}});
                    for (int c = 0; c < n; ++c)
                        if (parent[c] >= 0) m.components[parent[c]].subcomponents.push_back(comps[c]);
                    m.refresh_types();
                    const auto legal = legal_connectors(m);
                    std::map<PortRef, std::vector<const Connector*>> by_target;
                    for (const auto& c : legal) by_target[c.target].push_back(&c);
                    std::vector<std::vector<const Connector*>> options;
                    for (auto& [_, list] : by_target) options.push_back(list);
                    std::vector<std::size_t> sel(options.size(), 0);
                    for (;;) {
                        CncModel with = m;
                        for (std::size_t t = 0; t < options.size(); ++t)
                            if (sel[t]) with.connectors.push_back(*options[t][sel[t] - 1]);
                        visit(with);
                        ++count;
                        std::size_t t = 0;
                        while (t < options.size() && ++sel[t] > options[t].size()) sel[t++] = 0;
                        if (t == options.size()) break;
                    }
                }
                int c = 0;
                while (c < n && ++choice[c] == interfaces.size()) choice[c++] = 0;
                if (c == n) break;
            }
        };
        forests(0);
    }
    return count;
}

}  // namespace gen
