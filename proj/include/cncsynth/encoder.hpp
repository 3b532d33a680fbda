#pragma once

// Compiles a resolved specification into CNF whose satisfying assignments
// are the well-formed models (within a bounded scope) that satisfy it.

#include "cncsynth/sat.hpp"
#include "cncsynth/speclang.hpp"

namespace cncsynth {

/// Raised for invalid scope hints.
class ScopeError : public Error {
public:
    using Error::Error;
};

/// Raised when an encoding grows past the variable or clause budget.
class BudgetError : public ScopeError {
public:
    using ScopeError::ScopeError;
};

struct Scope {
    /// Fixed component universe; each may be present or absent.
    std::vector<std::string> components;
    int port_slots = 0;
    /// Named (component, port) pairs declared by positively used views.
    int port_lower_bound = 0;
    /// Port names mentioned by the specification followed by fresh names.
    std::vector<std::string> names;
    int fresh_names = 0;
    /// Types mentioned by the specification followed by fresh types.
    std::vector<std::string> types;
    int fresh_types = 0;

    std::string describe() const;
};

/// Combines hints: entries in `override_hints` win over `base`.
ScopeHints merge_hints(const ScopeHints& base, const ScopeHints& override_hints);

Scope compute_scope(const ResolvedSpec& spec, const ScopeHints& hints);

enum class AtomKind { Exists, Parent, Contains, Used, Owner, PortName, PortType, PortIn, Conn, Reach, ViewHolds };

std::string to_string(AtomKind kind);

/// An architectural fact bound to a SAT variable. Indices refer to the
/// scope's components, port slots, names and types, or the view list.
struct Atom {
    AtomKind kind;
    int first = -1;
    int second = -1;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Bidirectional map between SAT variables and architectural atoms.
/// Variables not in the map are auxiliary (Tseitin and closure helpers).
class VarMap {
public:
    VarMap() = default;
    VarMap(int components, int slots, int names, int types, int views);

    int components() const { return components_; }
    int slots() const { return slots_; }

    // Literal getters. Pairs that cannot hold (self-parent, self-connector)
    // return the constant-false literal.
    int exists(int c) const { return exists_[c]; }
    /// `child`'s immediate parent is `parent`.
    int parent(int child, int parent) const { return parent_[child * components_ + parent]; }
    /// `outer` transitively contains `inner`.
    int contains(int outer, int inner) const { return contains_[outer * components_ + inner]; }
    int used(int p) const { return used_[p]; }
    int owner(int p, int c) const { return owner_[p * components_ + c]; }
    int port_name(int p, int n) const { return pname_[p * names_ + n]; }
    int port_type(int p, int t) const { return ptype_[p * types_ + t]; }
    int port_in(int p) const { return port_in_[p]; }
    int conn(int p, int q) const { return conn_[p * slots_ + q]; }
    /// Chain closure; a literal (possibly a constant) for every pair.
    int reach(int p, int q) const { return reach_[p * slots_ + q]; }
    int view(int v) const { return view_[v]; }
    /// Variable fixed to true by a unit clause; its negation is "false".
    int constant_true() const { return 1; }

    std::optional<Atom> atom(int var) const;
    std::size_t atom_count() const { return atoms_.size(); }

    /// Variables whose values determine the decoded model.
    std::vector<int> structural() const;

    /// One line per atom: "varmap <var> <kind> <args>".
    std::vector<std::string> describe(const Scope& scope, const std::vector<std::string>& view_names) const;

private:
    friend class Encoder;

    int components_ = 0, slots_ = 0, names_ = 0, types_ = 0;
    std::vector<int> exists_, parent_, contains_, used_, owner_, pname_, ptype_, port_in_, conn_, reach_, view_;
    std::map<int, Atom> atoms_;
};

struct Encoding {
    CnfInstance cnf;
    VarMap vars;
    Scope scope;
    /// View names in VarMap view order.
    std::vector<std::string> view_names;
};

Encoding encode(const ResolvedSpec& spec, const Scope& scope);

/// Appends the clauses for `style` to an encoding in progress. Exposed for
/// testing the style constraints in isolation.
void encode_style(const StyleConfig& style, const Scope& scope, const VarMap& vars, CnfInstance& cnf);

}  // namespace cncsynth
