#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's checker, encoder or solver.

#include "cncsynth/core.hpp"
#include "cncsynth/reduction.hpp"
#include "cncsynth/sat.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace cncsynth;

// Satisfaction by direct reading of the definition: ancestors by walking
// parent links, chains by a fixpoint over the connector list.
class Def1 {
public:
    explicit Def1(const CncModel& m) : model_(m) {
        for (const auto& c : m.components) {
            names_.insert(c.name);
            for (const auto& s : c.subcomponents) parent_[s] = c.name;
            for (const auto& p : c.ports) ports_.push_back({c.name, p});
        }
        const std::size_t n = ports_.size();
        reach_.assign(n, std::vector<char>(n, 0));
        for (const auto& con : m.connectors) reach_[index(con.source)][index(con.target)] = 1;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& con : m.connectors) {
                const std::size_t a = index(con.source), b = index(con.target);
                for (std::size_t s = 0; s < n; ++s)
                    if (reach_[s][a] && !reach_[s][b]) reach_[s][b] = changed = 1;
            }
        }
    }

    bool ancestor(const std::string& outer, const std::string& inner) const {
        for (auto it = parent_.find(inner); it != parent_.end(); it = parent_.find(it->second))
            if (it->second == outer) return true;
        return false;
    }

    bool satisfies(const CncView& v) const {
        for (const auto& t : v.types)
            if (!model_.types.count(t)) return false;
        for (const auto& c : v.components)
            if (!names_.count(c.name)) return false;

        std::map<std::string, std::set<std::string>> below;
        for (const auto& c : v.components) below[c.name].insert(c.subcomponents.begin(), c.subcomponents.end());
        for (bool changed = true; changed;) {
            changed = false;
            for (auto& [outer, inner] : below) {
                std::set<std::string> add;
                for (const auto& i : inner)
                    for (const auto& j : below[i]) add.insert(j);
                const auto before = inner.size();
                inner.insert(add.begin(), add.end());
                changed = changed || inner.size() != before;
            }
        }
        for (const auto& a : v.components)
            for (const auto& b : v.components)
                if (a.name != b.name && (below[a.name].count(b.name) > 0) != ancestor(a.name, b.name)) return false;

        for (const auto& c : v.components)
            for (const auto& vp : c.ports) {
                bool found = false;
                for (const auto& [owner, p] : ports_)
                    if (owner == c.name && p.direction == vp.direction && (!vp.name || *vp.name == p.name) &&
                        (!vp.type || *vp.type == p.type))
                        found = true;
                if (!found) return false;
            }

        for (const auto& ac : v.connectors) {
            bool found = false;
            for (std::size_t s = 0; s < ports_.size() && !found; ++s) {
                if (!endpoint(ports_[s], ac.source_component, ac.source_port, ac.source_type)) continue;
                for (std::size_t t = 0; t < ports_.size() && !found; ++t)
                    if (reach_[s][t] && endpoint(ports_[t], ac.target_component, ac.target_port, ac.target_type))
                        found = true;
            }
            if (!found) return false;
        }
        return true;
    }

private:
    using Owned = std::pair<std::string, Port>;

    static bool endpoint(const Owned& p, const std::string& comp, const std::optional<std::string>& name,
                         const std::optional<std::string>& type) {
        return p.first == comp && (!name || *name == p.second.name) && (!type || *type == p.second.type);
    }

    std::size_t index(const PortRef& r) const {
        for (std::size_t i = 0; i < ports_.size(); ++i)
            if (ports_[i].first == r.component && ports_[i].second.name == r.port) return i;
        return ports_.size();
    }

    const CncModel& model_;
    std::set<std::string> names_;
    std::map<std::string, std::string> parent_;
    std::vector<Owned> ports_;
    std::vector<std::vector<char>> reach_;
};

inline bool def1_satisfies(const CncModel& m, const CncView& v) { return Def1(m).satisfies(v); }

// Truth-table satisfiability; returns a model when one exists.
inline std::optional<std::vector<bool>> truth_table(const CnfInstance& cnf) {
    const int n = cnf.num_vars;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<bool> values(static_cast<std::size_t>(n) + 1, false);
        for (int v = 1; v <= n; ++v) values[v] = (bits >> (v - 1)) & 1;
        bool all = true;
        for (const auto& c : cnf.clauses) {
            bool any = false;
            for (int l : c) any = any || (l > 0 ? values[l] : !values[-l]);
            if (!any) {
                all = false;
                break;
            }
        }
        if (all) return values;
    }
    return std::nullopt;
}

inline std::optional<std::vector<bool>> truth_table(const Cnf3Formula& f) {
    CnfInstance cnf;
    cnf.num_vars = f.num_vars;
    for (const auto& c : f.clauses) cnf.add({c[0], c[1], c[2]});
    return truth_table(cnf);
}

// Number of assignments of the first `vars` variables that extend to a model.
inline std::size_t projected_count(const CnfInstance& cnf, int vars) {
    std::set<std::vector<bool>> seen;
    const int n = cnf.num_vars;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<bool> values(static_cast<std::size_t>(n) + 1, false);
        for (int v = 1; v <= n; ++v) values[v] = (bits >> (v - 1)) & 1;
        bool all = true;
        for (const auto& c : cnf.clauses) {
            bool any = false;
            for (int l : c) any = any || (l > 0 ? values[l] : !values[-l]);
            all = all && any;
        }
        if (all) seen.insert(std::vector<bool>(values.begin() + 1, values.begin() + 1 + vars));
    }
    return seen.size();
}

// Depth-first reachability over an adjacency matrix.
inline std::vector<std::vector<bool>> dfs_closure(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (adj[u][v] && !out[s][v]) {
                    out[s][v] = true;
                    stack.push_back(v);
                }
        }
    }
    return out;
}

// Cycle detection on a component relation by repeated removal of sinks.
inline bool acyclic(const std::set<std::pair<std::string, std::string>>& rel) {
    std::set<std::pair<std::string, std::string>> edges = rel;
    for (bool removed = true; removed;) {
        removed = false;
        std::set<std::string> sources;
        for (const auto& e : edges) sources.insert(e.first);
        for (auto it = edges.begin(); it != edges.end();) {
            if (!sources.count(it->second)) {
                it = edges.erase(it);
                removed = true;
            } else {
                ++it;
            }
        }
    }
    return edges.empty();
}

}  // namespace oracle
