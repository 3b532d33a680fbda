#pragma once

// Views specifications: Boolean formulas over named views, specification
// patterns, library components, interface-complete markings and
// architectural styles.

#include "cncsynth/core.hpp"

#include <functional>
#include <memory>

namespace cncsynth {

/// Immutable Boolean formula over view names.
class Formula {
public:
    enum class Kind { Var, Not, And, Or };

    static Formula var(std::string name);
    static Formula negate(Formula f);
    /// Conjunction; a single operand is returned unchanged.
    static Formula all_of(std::vector<Formula> operands);
    /// Disjunction; a single operand is returned unchanged.
    static Formula any_of(std::vector<Formula> operands);

    Kind kind() const;
    const std::string& name() const;  // Var only
    const std::vector<Formula>& operands() const;

    bool evaluate(const std::function<bool(const std::string&)>& value_of) const;
    void collect_vars(std::set<std::string>& out) const;
    std::set<std::string> vars() const;

    /// Renders with `!`, `&&`, `||` and minimal parentheses.
    std::string to_string() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

enum class PatternKind { Alt, Xalt, Imp, NoComp };

struct Pattern {
    PatternKind kind;
    /// View names (ALT, XALT, IMP) or the single component name (NOCOMP).
    std::vector<std::string> args;
    /// IMP(a, !b)
    bool negate_consequent = false;
};

std::string to_string(const Pattern& p);

/// Name of the implicit single-component view generated for NOCOMP(component).
std::string nocomp_view_name(const std::string& component);

struct LibraryDecl {
    std::string component;
    std::vector<Port> interface;
};

enum class StyleKind { None, Hierarchical, ClientServer, Layered };

struct StyleConfig {
    StyleKind kind = StyleKind::None;
    std::string server;
    std::vector<std::string> clients;
    std::vector<std::vector<std::string>> layers;

    /// Components that must be exactly the top components, if the style
    /// replaces the single-top rule.
    std::optional<std::vector<std::string>> required_tops() const;
};

struct ScopeHints {
    std::optional<int> ports;
    std::optional<int> extra_names;
    std::optional<int> extra_types;
};

struct ViewSpec {
    std::string name;
    std::vector<std::string> view_names;
    /// Loaded views keyed by name.
    std::map<std::string, CncView> views;
    std::optional<Formula> formula;
    std::vector<Pattern> patterns;
    std::vector<LibraryDecl> library;
    StyleConfig style;
    ScopeHints scope;
};

/// Raised by resolve/expand_patterns; carries every problem found.
class ResolutionError : public Error {
public:
    explicit ResolutionError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// A name-resolved specification ready for checking and encoding.
struct ResolvedSpec {
    ViewSpec source;
    /// Declared views followed by the implicit NOCOMP views.
    std::vector<CncView> views;
    /// The specification formula conjoined with every expanded pattern.
    Formula formula;
    /// Every component name mentioned by a view, a pattern, the library or
    /// the style, in order of first appearance.
    std::vector<std::string> components;
    /// (view, component) pairs marked interface-complete.
    std::vector<std::pair<std::string, std::string>> interface_complete;

    const CncView& view(const std::string& name) const;
    const LibraryDecl* library_decl(const std::string& component) const;
};

/// Conjoins the specification formula with the expansion of every pattern.
Formula expand_patterns(const ViewSpec& spec);

/// Binds all names and checks library and style declarations.
ResolvedSpec resolve(const ViewSpec& spec);

}  // namespace cncsynth
