#include "cncsynth/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cncsynth {

namespace {

constexpr int kTrue = 1;
constexpr int kFalse = -1;
constexpr int kMaxVariables = 5'000'000;
constexpr std::size_t kMaxClauses = 15'000'000;

void collect_polarity(const Formula& f, bool positive, std::set<std::string>& pos, std::set<std::string>& neg) {
    switch (f.kind()) {
        case Formula::Kind::Var: (positive ? pos : neg).insert(f.name()); break;
        case Formula::Kind::Not: collect_polarity(f.operands()[0], !positive, pos, neg); break;
        default:
            for (const auto& g : f.operands()) collect_polarity(g, positive, pos, neg);
    }
}

void note(std::vector<std::string>& list, const std::string& item) {
    if (std::find(list.begin(), list.end(), item) == list.end()) list.push_back(item);
}

std::vector<std::string> fresh(const std::string& prefix, int count, const std::vector<std::string>& taken) {
    std::vector<std::string> out;
    for (int i = 1; static_cast<int>(out.size()) < count; ++i) {
        auto candidate = prefix + std::to_string(i);
        if (std::find(taken.begin(), taken.end(), candidate) == taken.end()) out.push_back(candidate);
    }
    return out;
}

int index_of(const std::vector<std::string>& list, const std::string& item) {
    auto it = std::find(list.begin(), list.end(), item);
    if (it == list.end()) throw InternalError("'" + item + "' is not in the encoding scope");
    return static_cast<int>(it - list.begin());
}

}  // namespace

std::string Scope::describe() const {
    std::ostringstream out;
    out << "components=" << components.size() << ", ports=" << port_slots << " (lower bound " << port_lower_bound
        << "), names=" << names.size() << " (" << fresh_names << " fresh), types=" << types.size() << " ("
        << fresh_types << " fresh)";
    return out.str();
}

ScopeHints merge_hints(const ScopeHints& base, const ScopeHints& override_hints) {
    ScopeHints h = base;
    if (override_hints.ports) h.ports = override_hints.ports;
    if (override_hints.extra_names) h.extra_names = override_hints.extra_names;
    if (override_hints.extra_types) h.extra_types = override_hints.extra_types;
    return h;
}

Scope compute_scope(const ResolvedSpec& spec, const ScopeHints& hints) {
    Scope scope;
    scope.components = spec.components;

    std::set<std::string> positive, negative;
    collect_polarity(spec.formula, true, positive, negative);

    std::set<std::pair<std::string, std::string>> required_ports;
    int abstract_connectors = 0;
    int unnamed_endpoints = 0;
    for (const auto& view : spec.views) {
        for (const auto& c : view.components) {
            for (const auto& p : c.ports) {
                if (p.name) {
                    note(scope.names, *p.name);
                    if (positive.count(view.name)) required_ports.emplace(c.name, *p.name);
                }
                if (p.type) note(scope.types, *p.type);
            }
        }
        for (const auto& ac : view.connectors) {
            ++abstract_connectors;
            for (const auto* n : {&ac.source_port, &ac.target_port}) {
                if (*n)
                    note(scope.names, **n);
                else
                    ++unnamed_endpoints;
            }
            for (const auto* t : {&ac.source_type, &ac.target_type})
                if (*t) note(scope.types, **t);
        }
    }
    for (const auto& lib : spec.source.library) {
        for (const auto& p : lib.interface) {
            note(scope.names, p.name);
            note(scope.types, p.type);
        }
    }

    scope.port_lower_bound = static_cast<int>(required_ports.size());
    if (hints.ports && *hints.ports < scope.port_lower_bound)
        throw ScopeError("port scope " + std::to_string(*hints.ports) + " is below the lower bound " +
                         std::to_string(scope.port_lower_bound));
    if ((hints.ports && *hints.ports < 0) || (hints.extra_names && *hints.extra_names < 0) ||
        (hints.extra_types && *hints.extra_types < 0))
        throw ScopeError("scope hints must be non-negative");
    scope.port_slots = hints.ports.value_or(scope.port_lower_bound + 2 * abstract_connectors);

    scope.fresh_names = hints.extra_names.value_or(std::max(unnamed_endpoints, scope.port_slots));
    scope.fresh_types = hints.extra_types.value_or(1);
    for (auto& n : fresh("_p", scope.fresh_names, scope.names)) scope.names.push_back(std::move(n));
    for (auto& t : fresh("_T", scope.fresh_types, scope.types)) scope.types.push_back(std::move(t));
    return scope;
}

std::string to_string(AtomKind kind) {
    switch (kind) {
        case AtomKind::Exists: return "exists";
        case AtomKind::Parent: return "parent";
        case AtomKind::Contains: return "contains";
        case AtomKind::Used: return "used";
        case AtomKind::Owner: return "owner";
        case AtomKind::PortName: return "pname";
        case AtomKind::PortType: return "ptype";
        case AtomKind::PortIn: return "pin";
        case AtomKind::Conn: return "conn";
        case AtomKind::Reach: return "reach";
        case AtomKind::ViewHolds: return "view";
    }
    return "?";
}

VarMap::VarMap(int components, int slots, int names, int types, int views)
    : components_(components), slots_(slots), names_(names), types_(types) {
    const auto cc = static_cast<std::size_t>(components) * components;
    const auto pp = static_cast<std::size_t>(slots) * slots;
    exists_.assign(components, kFalse);
    parent_.assign(cc, kFalse);
    contains_.assign(cc, kFalse);
    used_.assign(slots, kFalse);
    owner_.assign(static_cast<std::size_t>(slots) * components, kFalse);
    pname_.assign(static_cast<std::size_t>(slots) * names, kFalse);
    ptype_.assign(static_cast<std::size_t>(slots) * types, kFalse);
    port_in_.assign(slots, kFalse);
    conn_.assign(pp, kFalse);
    reach_.assign(pp, kFalse);
    view_.assign(views, kFalse);
}

std::optional<Atom> VarMap::atom(int var) const {
    auto it = atoms_.find(var);
    if (it == atoms_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> VarMap::structural() const {
    std::vector<int> out;
    for (const auto& [var, atom] : atoms_) {
        switch (atom.kind) {
            case AtomKind::Exists:
            case AtomKind::Parent:
            case AtomKind::Used:
            case AtomKind::Owner:
            case AtomKind::PortName:
            case AtomKind::PortType:
            case AtomKind::PortIn:
            case AtomKind::Conn: out.push_back(var); break;
            default: break;
        }
    }
    return out;
}

std::vector<std::string> VarMap::describe(const Scope& scope, const std::vector<std::string>& view_names) const {
    std::vector<std::string> lines;
    for (const auto& [var, a] : atoms_) {
        std::string args;
        switch (a.kind) {
            case AtomKind::Exists: args = scope.components[a.first]; break;
            case AtomKind::Parent:
            case AtomKind::Contains: args = scope.components[a.first] + " " + scope.components[a.second]; break;
            case AtomKind::Used:
            case AtomKind::PortIn: args = std::to_string(a.first); break;
            case AtomKind::Owner: args = std::to_string(a.first) + " " + scope.components[a.second]; break;
            case AtomKind::PortName: args = std::to_string(a.first) + " " + scope.names[a.second]; break;
            case AtomKind::PortType: args = std::to_string(a.first) + " " + scope.types[a.second]; break;
            case AtomKind::Conn:
            case AtomKind::Reach: args = std::to_string(a.first) + " " + std::to_string(a.second); break;
            case AtomKind::ViewHolds: args = view_names[a.first]; break;
        }
        lines.push_back("varmap " + std::to_string(var) + " " + to_string(a.kind) + " " + args);
    }
    return lines;
}

// ---------------------------------------------------------------------------

class Encoder {
public:
    Encoder(const ResolvedSpec& spec, const Scope& scope) : spec_(spec), scope_(scope) {
        C_ = static_cast<int>(scope.components.size());
        P_ = scope.port_slots;
        N_ = static_cast<int>(scope.names.size());
        T_ = static_cast<int>(scope.types.size());
        for (const auto& v : spec.views) view_names_.push_back(v.name);
        vars_ = VarMap(C_, P_, N_, T_, static_cast<int>(view_names_.size()));
    }

    Encoding run() {
        const int t = cnf_.new_var();
        if (t != kTrue) throw InternalError("constant variable must be 1");
        cnf_.add({kTrue});

        // Chain closure dominates: cubic in port slots, quadratic in both.
        const double p = P_, c = C_;
        const double estimate = p * p * p + 4 * p * p * c * c + p * p * (N_ + T_);
        if (estimate > static_cast<double>(kMaxClauses))
            throw BudgetError("scope needs about " + std::to_string(static_cast<long long>(estimate)) +
                              " clauses, over the budget of " + std::to_string(kMaxClauses) + "; reduce the scope");

        allocate_structure();
        cnf_.begin_group("meta-model");
        encode_meta_model();
        cnf_.end_group();
        check_budget();

        cnf_.begin_group("chain-closure");
        encode_chain_closure();
        cnf_.end_group();
        check_budget();

        cnf_.begin_group("views");
        for (std::size_t v = 0; v < spec_.views.size(); ++v) encode_view(static_cast<int>(v), spec_.views[v]);
        cnf_.end_group();
        check_budget();

        cnf_.begin_group("library");
        encode_library();
        cnf_.end_group();

        cnf_.begin_group("style");
        encode_style(spec_.source.style, scope_, vars_, cnf_);
        cnf_.end_group();
        check_budget();

        cnf_.begin_group("formula");
        cnf_.add({formula_literal(spec_.formula)});
        cnf_.end_group();

        cnf_.comments.push_back("cncsynth encoding of spec " + spec_.source.name);
        cnf_.comments.push_back("scope " + scope_.describe());
        for (auto& line : vars_.describe(scope_, view_names_)) cnf_.comments.push_back(std::move(line));

        return Encoding{std::move(cnf_), std::move(vars_), scope_, view_names_};
    }

private:
    // -- clause helpers ------------------------------------------------------

    void add(std::vector<int> clause) {
        std::vector<int> kept;
        kept.reserve(clause.size());
        for (int l : clause) {
            if (l == kTrue) return;
            if (l != kFalse) kept.push_back(l);
        }
        cnf_.add(std::move(kept));
    }

    int atom_var(AtomKind kind, int first = -1, int second = -1) {
        const int v = cnf_.new_var();
        vars_.atoms_.emplace(v, Atom{kind, first, second});
        return v;
    }

    void at_most_one(const std::vector<int>& lits) {
        for (std::size_t i = 0; i < lits.size(); ++i)
            for (std::size_t j = i + 1; j < lits.size(); ++j) add({-lits[i], -lits[j]});
    }

    /// Fresh variable equivalent to the conjunction of `lits`.
    int define_and(const std::vector<int>& lits) {
        std::vector<int> kept;
        for (int l : lits) {
            if (l == kFalse) return kFalse;
            if (l != kTrue) kept.push_back(l);
        }
        if (kept.empty()) return kTrue;
        if (kept.size() == 1) return kept[0];
        const int x = cnf_.new_var();
        std::vector<int> back{x};
        for (int l : kept) {
            add({-x, l});
            back.push_back(-l);
        }
        add(std::move(back));
        return x;
    }

    /// Fresh variable equivalent to the disjunction of `lits`.
    int define_or(const std::vector<int>& lits) {
        std::vector<int> negated;
        for (int l : lits) negated.push_back(-l);
        return -define_and(negated);
    }

    void check_budget() const {
        if (cnf_.num_vars > kMaxVariables || cnf_.clauses.size() > kMaxClauses)
            throw BudgetError("encoding exceeds the variable budget (" + std::to_string(cnf_.num_vars) + " variables, " +
                             std::to_string(cnf_.clauses.size()) + " clauses); reduce the scope");
    }

    // -- structure -----------------------------------------------------------

    void allocate_structure() {
        auto& m = vars_;
        for (int c = 0; c < C_; ++c) m.exists_[c] = atom_var(AtomKind::Exists, c);
        for (int c = 0; c < C_; ++c)
            for (int d = 0; d < C_; ++d)
                if (c != d) m.parent_[c * C_ + d] = atom_var(AtomKind::Parent, c, d);
        for (int p = 0; p < P_; ++p) m.used_[p] = atom_var(AtomKind::Used, p);
        for (int p = 0; p < P_; ++p)
            for (int c = 0; c < C_; ++c) m.owner_[p * C_ + c] = atom_var(AtomKind::Owner, p, c);
        for (int p = 0; p < P_; ++p)
            for (int n = 0; n < N_; ++n) m.pname_[p * N_ + n] = atom_var(AtomKind::PortName, p, n);
        for (int p = 0; p < P_; ++p)
            for (int t = 0; t < T_; ++t) m.ptype_[p * T_ + t] = atom_var(AtomKind::PortType, p, t);
        for (int p = 0; p < P_; ++p) m.port_in_[p] = atom_var(AtomKind::PortIn, p);
        for (int p = 0; p < P_; ++p)
            for (int q = 0; q < P_; ++q)
                if (p != q) m.conn_[p * P_ + q] = atom_var(AtomKind::Conn, p, q);
        for (int o = 0; o < C_; ++o)
            for (int i = 0; i < C_; ++i) m.contains_[o * C_ + i] = atom_var(AtomKind::Contains, o, i);
        for (std::size_t v = 0; v < view_names_.size(); ++v)
            m.view_[v] = atom_var(AtomKind::ViewHolds, static_cast<int>(v));
    }

    void encode_meta_model() {
        const auto& m = vars_;
        const auto required_tops = spec_.source.style.required_tops();

        // Containment: a forest of existing components.
        for (int c = 0; c < C_; ++c) {
            std::vector<int> parents;
            for (int d = 0; d < C_; ++d) {
                if (c == d) continue;
                add({-m.parent(c, d), m.exists(c)});
                add({-m.parent(c, d), m.exists(d)});
                parents.push_back(m.parent(c, d));
            }
            at_most_one(parents);
        }

        // top(c) <-> exists(c) and no parent.
        top_.assign(C_, kFalse);
        for (int c = 0; c < C_; ++c) {
            const int top = cnf_.new_var();
            top_[c] = top;
            add({-top, m.exists(c)});
            std::vector<int> back{-m.exists(c), top};
            for (int d = 0; d < C_; ++d) {
                if (c == d) continue;
                add({-top, -m.parent(c, d)});
                back.push_back(m.parent(c, d));
            }
            add(std::move(back));
        }
        if (required_tops) {
            std::vector<bool> required(C_, false);
            for (const auto& name : *required_tops) required[index_of(scope_.components, name)] = true;
            for (int c = 0; c < C_; ++c) add({required[c] ? top_[c] : -top_[c]});
        } else {
            add(top_);
            at_most_one(top_);
        }

        // contains(o, i) is the exact transitive closure of parent; it is
        // irreflexive, which makes containment acyclic.
        for (int o = 0; o < C_; ++o) {
            for (int i = 0; i < C_; ++i) {
                const int ci = m.contains(o, i);
                std::vector<int> support{-ci};
                if (o != i) {
                    add({-m.parent(i, o), ci});
                    support.push_back(m.parent(i, o));
                }
                for (int mid = 0; mid < C_; ++mid) {
                    if (mid == i || mid == o) continue;
                    add({-m.parent(i, mid), -m.contains(o, mid), ci});
                    const int step = cnf_.new_var();
                    add({-step, m.parent(i, mid)});
                    add({-step, m.contains(o, mid)});
                    support.push_back(step);
                }
                add(std::move(support));
            }
            add({-m.contains(o, o)});
        }

        // Port slots: used slots first, each with one owner, name, type.
        for (int p = 0; p < P_; ++p) {
            if (p + 1 < P_) add({-m.used(p + 1), m.used(p)});
            std::vector<int> owners, names, types;
            for (int c = 0; c < C_; ++c) {
                add({-m.owner(p, c), m.used(p)});
                add({-m.owner(p, c), m.exists(c)});
                owners.push_back(m.owner(p, c));
            }
            for (int n = 0; n < N_; ++n) {
                add({-m.port_name(p, n), m.used(p)});
                names.push_back(m.port_name(p, n));
            }
            for (int t = 0; t < T_; ++t) {
                add({-m.port_type(p, t), m.used(p)});
                types.push_back(m.port_type(p, t));
            }
            add({-m.port_in(p), m.used(p)});
            for (auto* group : {&owners, &names, &types}) {
                std::vector<int> alo{-m.used(p)};
                alo.insert(alo.end(), group->begin(), group->end());
                add(std::move(alo));
                at_most_one(*group);
            }
        }

        // same_(p, q) iff p and q are used and have the same owner.
        same_.assign(static_cast<std::size_t>(P_) * P_, kFalse);
        for (int p = 0; p < P_; ++p) {
            for (int q = p + 1; q < P_; ++q) {
                const int s = cnf_.new_var();
                same_[p * P_ + q] = same_[q * P_ + p] = s;
                add({-s, m.used(p)});
                add({-s, m.used(q)});
                for (int c = 0; c < C_; ++c) {
                    add({-m.owner(p, c), -m.owner(q, c), s});
                    add({-s, -m.owner(p, c), m.owner(q, c)});
                }
                for (int n = 0; n < N_; ++n) add({-s, -m.port_name(p, n), -m.port_name(q, n)});
            }
        }

        // Slot symmetry breaking: owners nondecreasing, names increasing
        // within an owner, fresh names and types introduced in order.
        for (int p = 0; p + 1 < P_; ++p) {
            for (int c = 0; c < C_; ++c) {
                std::vector<int> clause{-m.owner(p + 1, c)};
                for (int d = 0; d <= c; ++d) clause.push_back(m.owner(p, d));
                add(std::move(clause));
            }
            for (int n = 0; n < N_; ++n) {
                std::vector<int> clause{-same_[p * P_ + p + 1], -m.port_name(p + 1, n)};
                for (int k = 0; k < n; ++k) clause.push_back(m.port_name(p, k));
                add(std::move(clause));
            }
        }
        // The k-th fresh-named port of a component is named with the k-th
        // fresh name.
        const int first_fresh_name = N_ - scope_.fresh_names;
        for (int n = first_fresh_name + 1; n < N_; ++n) {
            add({-m.port_name(0, n)});
            for (int p = 1; p < P_; ++p) {
                add({-m.port_name(p, n), same_[(p - 1) * P_ + p]});
                add({-m.port_name(p, n), m.port_name(p - 1, n - 1)});
            }
        }
        // Fresh-named ports of one component are interchangeable: inputs
        // come first, then types ascend.
        if (scope_.fresh_names > 0) {
            std::vector<int> fresh(P_);
            for (int p = 0; p < P_; ++p) {
                std::vector<int> named;
                for (int n = first_fresh_name; n < N_; ++n) named.push_back(m.port_name(p, n));
                fresh[p] = define_or(named);
            }
            for (int p = 1; p < P_; ++p) {
                const std::vector<int> both{-same_[(p - 1) * P_ + p], -fresh[p - 1], -fresh[p]};
                auto clause = [&](std::vector<int> tail) {
                    tail.insert(tail.end(), both.begin(), both.end());
                    add(std::move(tail));
                };
                clause({-m.port_in(p), m.port_in(p - 1)});
                for (int t = 0; t < T_; ++t) {
                    for (bool in : {true, false}) {
                        std::vector<int> c{in ? -m.port_in(p - 1) : m.port_in(p - 1), in ? -m.port_in(p) : m.port_in(p),
                                           -m.port_type(p, t)};
                        for (int u = 0; u <= t; ++u) c.push_back(m.port_type(p - 1, u));
                        clause(std::move(c));
                    }
                }
            }
        }
        const int first_fresh_type = T_ - scope_.fresh_types;
        for (int t = first_fresh_type + 1; t < T_; ++t) {
            for (int p = 0; p < P_; ++p) {
                std::vector<int> clause{-m.port_type(p, t)};
                for (int q = 0; q < p; ++q) clause.push_back(m.port_type(q, t - 1));
                add(std::move(clause));
            }
        }

        // Siblings: distinct components sharing a parent, or two tops.
        sib_.assign(static_cast<std::size_t>(C_) * C_, kFalse);
        for (int a = 0; a < C_; ++a) {
            for (int b = a + 1; b < C_; ++b) {
                const int s = cnf_.new_var();
                sib_[a * C_ + b] = sib_[b * C_ + a] = s;
                std::vector<int> witnesses{-s};
                for (int e = 0; e < C_; ++e) {
                    if (e == a || e == b) continue;
                    const int shared = cnf_.new_var();
                    add({-shared, m.parent(a, e)});
                    add({-shared, m.parent(b, e)});
                    witnesses.push_back(shared);
                }
                if (required_tops) {
                    const int both = cnf_.new_var();
                    add({-both, top_[a]});
                    add({-both, top_[b]});
                    witnesses.push_back(both);
                }
                add(std::move(witnesses));
            }
        }

        // Connectors.
        for (int q = 0; q < P_; ++q) {
            std::vector<int> incoming;
            for (int p = 0; p < P_; ++p) {
                if (p == q) continue;
                const int c = m.conn(p, q);
                incoming.push_back(c);
                add({-c, m.used(p)});
                add({-c, m.used(q)});
                for (int t = 0; t < T_; ++t) add({-c, -m.port_type(p, t), m.port_type(q, t)});

                // Exactly one of: sibling (out -> in), parent to child
                // (in -> in), child to parent (out -> out).
                const int ks = cnf_.new_var();
                const int kd = cnf_.new_var();
                const int ku = cnf_.new_var();
                add({-c, ks, kd, ku});
                for (int k : {ks, kd, ku}) {
                    add({-k, c});
                    add({-k, -same_[p * P_ + q]});
                }
                add({-ks, -m.port_in(p)});
                add({-ks, m.port_in(q)});
                add({-kd, m.port_in(p)});
                add({-kd, m.port_in(q)});
                add({-ku, -m.port_in(p)});
                add({-ku, -m.port_in(q)});
                for (int a = 0; a < C_; ++a) {
                    for (int b = 0; b < C_; ++b) {
                        if (a == b) continue;
                        const int oa = m.owner(p, a);
                        const int ob = m.owner(q, b);
                        add({-ks, -oa, -ob, sib_[a * C_ + b]});
                        add({-kd, -oa, -ob, m.parent(b, a)});
                        add({-ku, -oa, -ob, m.parent(a, b)});
                    }
                }
            }
            at_most_one(incoming);
        }
    }

    // reach = exact transitive closure of conn. Well-formed connector
    // graphs are acyclic (a chain only climbs, crosses once, then descends)
    // and every port has at most one incoming connector, so reach(p, q)
    // holds iff q's predecessor is p or is reached from p.
    void encode_chain_closure() {
        auto& m = vars_;
        for (int p = 0; p < P_; ++p)
            for (int q = 0; q < P_; ++q)
                if (p != q) m.reach_[p * P_ + q] = atom_var(AtomKind::Reach, p, q);

        for (int p = 0; p < P_; ++p) {
            for (int q = 0; q < P_; ++q) {
                if (p == q) continue;
                const int r_pq = m.reach(p, q);
                add({-m.conn(p, q), r_pq});
                std::vector<int> has_pred{-r_pq}, has_succ{-r_pq};
                for (int r = 0; r < P_; ++r) {
                    if (r == q) continue;
                    has_pred.push_back(m.conn(r, q));
                    if (r != p) {
                        add({-m.conn(r, q), -m.reach(p, r), r_pq});
                        add({-r_pq, -m.conn(r, q), m.reach(p, r)});
                    }
                }
                for (int r = 0; r < P_; ++r)
                    if (r != p) has_succ.push_back(m.conn(p, r));
                add(std::move(has_pred));
                add(std::move(has_succ));
            }
        }
        // Chain shape: a chain climbs, crosses to a sibling at most once,
        // then descends. Relate its endpoints' owners accordingly.
        for (int p = 0; p < P_; ++p) {
            for (int q = 0; q < P_; ++q) {
                if (p == q) continue;
                const int r = m.reach(p, q);
                add({-r, -m.port_in(p), m.port_in(q)});
                for (int a = 0; a < C_; ++a) {
                    const int oa = m.owner(p, a);
                    add({-r, -oa, -m.owner(q, a), m.port_in(p), -m.port_in(q)});
                    for (int b = 0; b < C_; ++b) {
                        if (a == b) continue;
                        const int ob = m.owner(q, b);
                        add({-r, -oa, -ob, -m.port_in(p), m.contains(a, b)});
                        add({-r, -oa, -ob, m.port_in(q), m.contains(b, a)});
                        add({-r, -oa, -ob, m.port_in(p), -m.port_in(q), -m.contains(a, b)});
                        add({-r, -oa, -ob, m.port_in(p), -m.port_in(q), -m.contains(b, a)});
                    }
                }
            }
        }
        // Ports reaching a common port lie on one chain.
        for (int q = 0; q < P_; ++q)
            for (int p = 0; p < P_; ++p)
                for (int r = p + 1; r < P_; ++r)
                    if (p != q && r != q) add({-m.reach(p, q), -m.reach(r, q), m.reach(p, r), m.reach(r, p)});
    }

    // -- views ---------------------------------------------------------------

    int component(const std::string& name) const { return index_of(scope_.components, name); }

    /// Slot p is a port of component c matching the optional name/type and
    /// optional direction.
    int slot_matches(int p, int c, const std::optional<std::string>& name, const std::optional<std::string>& type,
                     std::optional<Direction> dir) {
        const auto& m = vars_;
        std::vector<int> parts{m.owner(p, c)};
        if (name) parts.push_back(m.port_name(p, index_of(scope_.names, *name)));
        if (type) parts.push_back(m.port_type(p, index_of(scope_.types, *type)));
        if (dir) parts.push_back(*dir == Direction::In ? m.port_in(p) : -m.port_in(p));
        return define_and(parts);
    }

    int has_port(int c, const std::optional<std::string>& name, const std::optional<std::string>& type,
                 Direction dir) {
        std::vector<int> slots;
        for (int p = 0; p < P_; ++p) slots.push_back(slot_matches(p, c, name, type, dir));
        return define_or(slots);
    }

    int connected(const AbstractConnector& ac) {
        const auto& m = vars_;
        const int src = component(ac.source_component);
        const int tgt = component(ac.target_component);
        std::vector<int> src_ok, tgt_ok;
        for (int p = 0; p < P_; ++p) {
            src_ok.push_back(slot_matches(p, src, ac.source_port, ac.source_type, std::nullopt));
            tgt_ok.push_back(slot_matches(p, tgt, ac.target_port, ac.target_type, std::nullopt));
        }
        std::vector<int> pairs;
        for (int p = 0; p < P_; ++p)
            for (int q = 0; q < P_; ++q) pairs.push_back(define_and({src_ok[p], tgt_ok[q], m.reach(p, q)}));
        return define_or(pairs);
    }

    void encode_view(int index, const CncView& view) {
        const auto& m = vars_;
        std::vector<int> atoms;
        for (const auto& vc : view.components) atoms.push_back(m.exists(component(vc.name)));

        const auto closure = view.containment_closure();
        for (const auto& outer : view.components) {
            for (const auto& inner : view.components) {
                if (outer.name == inner.name) continue;
                const int lit = m.contains(component(outer.name), component(inner.name));
                atoms.push_back(closure.count({outer.name, inner.name}) ? lit : -lit);
            }
        }
        for (const auto& vc : view.components)
            for (const auto& vp : vc.ports) atoms.push_back(has_port(component(vc.name), vp.name, vp.type, vp.direction));
        for (const auto& ac : view.connectors) atoms.push_back(connected(ac));

        const int holds = define_and(atoms);
        add({-m.view(index), holds});
        add({m.view(index), -holds});
    }

    // -- library and interface-complete ---------------------------------------

    template <class PortLike>
    void exact_interface(int c, const std::vector<PortLike>& declared) {
        const auto& m = vars_;
        std::vector<int> declared_names;
        for (const auto& d : declared) {
            const auto name = *std::optional<std::string>(d.name);
            const auto type = std::optional<std::string>(d.type);
            add({-m.exists(c), has_port(c, name, type, d.direction)});
            const int n = index_of(scope_.names, name);
            declared_names.push_back(n);
            for (int p = 0; p < P_; ++p) {
                add({-m.owner(p, c), -m.port_name(p, n), d.direction == Direction::In ? m.port_in(p) : -m.port_in(p)});
                if (type) add({-m.owner(p, c), -m.port_name(p, n), m.port_type(p, index_of(scope_.types, *type))});
            }
        }
        for (int p = 0; p < P_; ++p) {
            std::vector<int> clause{-m.owner(p, c)};
            for (int n : declared_names) clause.push_back(m.port_name(p, n));
            add(std::move(clause));
        }
    }

    void encode_library() {
        const auto& m = vars_;
        for (const auto& lib : spec_.source.library) {
            const int c = component(lib.component);
            for (int x = 0; x < C_; ++x)
                if (x != c) add({-m.parent(x, c)});
            exact_interface(c, lib.interface);
        }
        for (const auto& [vname, cname] : spec_.interface_complete) {
            const auto* vc = spec_.view(vname).find(cname);
            exact_interface(component(cname), vc->ports);
        }
    }

    // -- formula ---------------------------------------------------------------

    int formula_literal(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Var: return vars_.view(index_of(view_names_, f.name()));
            case Formula::Kind::Not: return -formula_literal(f.operands()[0]);
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                std::vector<int> lits;
                for (const auto& g : f.operands()) lits.push_back(formula_literal(g));
                return f.kind() == Formula::Kind::And ? define_and(lits) : define_or(lits);
            }
        }
        return kFalse;
    }

    const ResolvedSpec& spec_;
    const Scope& scope_;
    int C_ = 0, P_ = 0, N_ = 0, T_ = 0;
    std::vector<std::string> view_names_;
    CnfInstance cnf_;
    VarMap vars_;
    std::vector<int> top_, same_, sib_;
};

Encoding encode(const ResolvedSpec& spec, const Scope& scope) { return Encoder(spec, scope).run(); }

// ---------------------------------------------------------------------------

void encode_style(const StyleConfig& style, const Scope& scope, const VarMap& m, CnfInstance& cnf) {
    const int C = m.components();
    const int P = m.slots();
    auto add = [&](std::vector<int> clause) {
        std::vector<int> kept;
        for (int l : clause) {
            if (l == kTrue) return;
            if (l != kFalse) kept.push_back(l);
        }
        cnf.add(std::move(kept));
    };

    switch (style.kind) {
        case StyleKind::None: break;

        case StyleKind::Hierarchical: {
            // has_in(p) / has_out(p): exact, since they appear negated below.
            std::vector<int> has_in(P), has_out(P);
            for (int p = 0; p < P; ++p) {
                for (auto [vec, incoming] : {std::pair{&has_in, true}, std::pair{&has_out, false}}) {
                    const int x = cnf.new_var();
                    (*vec)[p] = x;
                    std::vector<int> back{-x};
                    for (int q = 0; q < P; ++q) {
                        if (q == p) continue;
                        const int c = incoming ? m.conn(q, p) : m.conn(p, q);
                        add({-c, x});
                        back.push_back(c);
                    }
                    add(std::move(back));
                }
            }
            // end_to_end(a, b) is forced by every start-to-end chain; talks
            // over-approximates its closure, which must stay irreflexive.
            std::vector<int> e2e(static_cast<std::size_t>(C) * C), talks(static_cast<std::size_t>(C) * C);
            for (auto& v : e2e) v = cnf.new_var();
            for (auto& v : talks) v = cnf.new_var();
            for (int s = 0; s < P; ++s)
                for (int r = 0; r < P; ++r)
                    for (int a = 0; a < C; ++a)
                        for (int b = 0; b < C; ++b)
                            add({-m.owner(s, a), -m.owner(r, b), has_in[s], has_out[r], -m.reach(s, r), e2e[a * C + b]});
            for (int a = 0; a < C; ++a) {
                for (int b = 0; b < C; ++b) {
                    add({-e2e[a * C + b], talks[a * C + b]});
                    for (int c = 0; c < C; ++c) add({-talks[a * C + b], -e2e[b * C + c], talks[a * C + c]});
                }
                add({-talks[a * C + a]});
            }
            break;
        }

        case StyleKind::ClientServer: {
            const int server = index_of(scope.components, style.server);
            std::vector<int> clients;
            for (const auto& name : style.clients) clients.push_back(index_of(scope.components, name));
            for (int client : clients) {
                std::vector<int> links;
                for (int p = 0; p < P; ++p) {
                    for (int q = 0; q < P; ++q) {
                        if (p == q) continue;
                        for (auto [from, to] : {std::pair{server, client}, std::pair{client, server}}) {
                            const int link = cnf.new_var();
                            add({-link, m.conn(p, q)});
                            add({-link, m.owner(p, from)});
                            add({-link, m.owner(q, to)});
                            links.push_back(link);
                        }
                    }
                }
                add(std::move(links));
            }
            for (int a : clients)
                for (int b : clients)
                    if (a != b)
                        for (int p = 0; p < P; ++p)
                            for (int q = 0; q < P; ++q)
                                if (p != q) add({-m.conn(p, q), -m.owner(p, a), -m.owner(q, b)});
            break;
        }

        case StyleKind::Layered: {
            const int L = static_cast<int>(style.layers.size());
            // in_layer(x, i): x is a layer-i member or inside one (forced).
            std::vector<int> in_layer(static_cast<std::size_t>(C) * L);
            for (auto& v : in_layer) v = cnf.new_var();
            for (int i = 0; i < L; ++i) {
                for (const auto& name : style.layers[i]) {
                    const int t = index_of(scope.components, name);
                    add({in_layer[t * L + i]});
                    for (int x = 0; x < C; ++x)
                        if (x != t) add({-m.contains(t, x), in_layer[x * L + i]});
                }
            }
            std::vector<int> port_layer(static_cast<std::size_t>(P) * L);
            for (auto& v : port_layer) v = cnf.new_var();
            for (int p = 0; p < P; ++p)
                for (int x = 0; x < C; ++x)
                    for (int i = 0; i < L; ++i) add({-m.owner(p, x), -in_layer[x * L + i], port_layer[p * L + i]});
            for (int p = 0; p < P; ++p)
                for (int q = 0; q < P; ++q) {
                    if (p == q) continue;
                    for (int i = 0; i < L; ++i)
                        for (int j = 0; j < L; ++j)
                            if (std::abs(i - j) > 1)
                                add({-m.conn(p, q), -port_layer[p * L + i], -port_layer[q * L + j]});
                }
            break;
        }
    }
}

}  // namespace cncsynth
