#pragma once

// Domain types for component-and-connector (C&C) models and views.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cncsynth {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a component or port name does not resolve.
class LookupError : public Error {
public:
    using Error::Error;
};

/// An encoding or decoding bug detected by a post-hoc check. Never expected.
class InternalError : public Error {
public:
    using Error::Error;
};

enum class Direction { In, Out };

std::string to_string(Direction dir);

// ---------------------------------------------------------------------------
// Models

struct Port {
    std::string name;
    Direction direction = Direction::In;
    std::string type;

    friend bool operator==(const Port&, const Port&) = default;
};

struct Component {
    std::string name;
    std::vector<Port> ports;
    /// Immediate subcomponents, by name.
    std::vector<std::string> subcomponents;

    const Port* find_port(const std::string& port_name) const;
};

struct PortRef {
    std::string component;
    std::string port;

    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

std::string to_string(const PortRef& ref);

struct Connector {
    PortRef source;
    PortRef target;

    friend auto operator<=>(const Connector&, const Connector&) = default;
};

/// A complete C&C model. The top component is implied by containment: it is
/// the unique component that is nobody's subcomponent.
struct CncModel {
    std::set<std::string> types;
    std::vector<Component> components;
    std::vector<Connector> connectors;

    const Component* find(const std::string& name) const;
    const Component& at(const std::string& name) const;

    /// Components that have no parent, in declaration order.
    std::vector<std::string> tops() const;

    /// Recomputes `types` from the port declarations.
    void refresh_types();
};

/// Equality up to declaration order of components, ports, subcomponents and
/// connectors.
bool structurally_equal(const CncModel& a, const CncModel& b);

// ---------------------------------------------------------------------------
// Views

struct ViewPort {
    std::optional<std::string> name;
    Direction direction = Direction::In;
    std::optional<std::string> type;

    friend bool operator==(const ViewPort&, const ViewPort&) = default;
};

struct ViewComponent {
    std::string name;
    std::vector<ViewPort> ports;
    /// Declared subcomponents. In a view these mean (possibly non-immediate)
    /// containment.
    std::vector<std::string> subcomponents;
    bool interface_complete = false;

    const ViewPort* find_port(const std::string& port_name) const;
};

struct AbstractConnector {
    std::string source_component;
    std::optional<std::string> source_port;
    std::optional<std::string> source_type;
    std::string target_component;
    std::optional<std::string> target_port;
    std::optional<std::string> target_type;

    friend bool operator==(const AbstractConnector&, const AbstractConnector&) = default;
};

std::string to_string(const AbstractConnector& ac);

struct CncView {
    std::string name;
    std::set<std::string> types;
    std::vector<ViewComponent> components;
    std::vector<AbstractConnector> connectors;

    const ViewComponent* find(const std::string& name) const;

    /// Transitive closure of the declared subcomponent edges, as
    /// (container, contained) pairs.
    std::set<std::pair<std::string, std::string>> containment_closure() const;

    void refresh_types();
};

// ---------------------------------------------------------------------------
// Well-formedness

enum class ViolationKind {
    DuplicateComponent,
    DuplicatePort,
    UnknownComponent,
    UnknownPort,
    MissingName,
    MissingType,
    MultipleParents,
    ContainmentCycle,
    TopComponent,
    TypeMismatch,
    IllegalConnectorLocality,
    IllegalConnectorDirection,
    MultipleIncoming,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject;
    std::string message;
};

using WellFormednessReport = std::vector<Violation>;

struct ValidationOptions {
    /// Client-server and layered architectures have several top components.
    bool allow_multiple_tops = false;
};

WellFormednessReport validate_model(const CncModel& model, const ValidationOptions& options = {});

/// Violations of the view structure rules (dangling names, cyclic containment).
WellFormednessReport validate_view(const CncView& view);

/// Read-only index over a model: component ids, parent links, port ids.
class ModelIndex {
public:
    explicit ModelIndex(const CncModel& model);

    const CncModel& model() const { return *model_; }

    std::optional<std::size_t> component_id(const std::string& name) const;
    std::size_t component_count() const { return model_->components.size(); }

    /// Immediate parent of a component, if any.
    std::optional<std::size_t> parent(std::size_t component) const { return parent_[component]; }

    /// True iff `child` is a strict (transitive) descendant of `ancestor`.
    bool contains(std::size_t ancestor, std::size_t child) const;

    std::size_t port_count() const { return ports_.size(); }
    std::optional<std::size_t> port_id(const PortRef& ref) const;
    const PortRef& port_ref(std::size_t id) const { return ports_[id].ref; }
    const Port& port(std::size_t id) const { return *ports_[id].port; }
    std::size_t port_owner(std::size_t id) const { return ports_[id].owner; }
    const std::vector<std::size_t>& ports_of(std::size_t component) const { return component_ports_[component]; }

private:
    struct PortEntry {
        PortRef ref;
        const Port* port;
        std::size_t owner;
    };

    const CncModel* model_;
    std::map<std::string, std::size_t> component_ids_;
    std::vector<std::optional<std::size_t>> parent_;
    std::vector<std::vector<bool>> descendants_;
    std::vector<PortEntry> ports_;
    std::map<PortRef, std::size_t> port_ids_;
    std::vector<std::vector<std::size_t>> component_ports_;
};

/// True iff `child` is in the transitive closure of `parent`'s immediate
/// subcomponents. Throws LookupError for unknown names.
bool contains_transitive(const CncModel& model, const std::string& parent, const std::string& child);

/// Directed graph over the ports of a model: one edge per connector.
struct PortGraph {
    std::vector<PortRef> ports;  // sorted
    std::vector<std::vector<std::size_t>> successors;  // sorted, by port index
    std::size_t edge_count = 0;

    std::optional<std::size_t> index_of(const PortRef& ref) const;
    bool reaches(std::size_t from, std::size_t to) const;  // path of length >= 1
};

PortGraph port_chain_graph(const CncModel& model);

}  // namespace cncsynth
