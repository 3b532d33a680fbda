#pragma once

// Polynomial-time satisfaction checking of models against views and
// specifications.

#include "cncsynth/core.hpp"
#include "cncsynth/speclang.hpp"

namespace cncsynth {

enum class ViewViolationKind { MissingType, MissingComponent, Containment, Independence, PortMismatch, NoChain };

std::string to_string(ViewViolationKind kind);

struct ViewViolation {
    ViewViolationKind kind;
    std::vector<std::string> subject;
    std::string explanation;
};

/// A concrete connector chain implementing one abstract connector.
struct ChainWitness {
    AbstractConnector connector;
    std::vector<Connector> chain;
};

struct SatisfactionResult {
    bool satisfied = true;
    std::vector<ViewViolation> violations;
    /// One entry per abstract connector that has a chain.
    std::vector<ChainWitness> witnesses;
};

/// Raised when a checker input model is not well-formed.
class IllFormedModelError : public Error {
public:
    explicit IllFormedModelError(WellFormednessReport report);
    const WellFormednessReport& report() const { return report_; }

private:
    WellFormednessReport report_;
};

/// Decides whether `model` satisfies `view`. Chains are searched
/// breadth-first, so every witness is a shortest chain; ties go to the
/// lexicographically smaller port.
SatisfactionResult satisfies(const CncModel& model, const CncView& view);

/// Same as above, reusing a prebuilt index and port graph.
SatisfactionResult satisfies(const ModelIndex& index, const PortGraph& graph, const CncView& view);

struct SpecEvaluation {
    bool overall = false;
    bool formula_holds = false;
    std::map<std::string, bool> per_view;
    std::map<std::string, SatisfactionResult> details;
    /// Style, library and interface-complete violations.
    std::vector<std::string> constraint_violations;
};

/// Evaluates the expanded specification formula on `model` and checks the
/// style, library and interface-complete constraints.
SpecEvaluation evaluate_spec(const CncModel& model, const ResolvedSpec& spec);

/// Validation options implied by a specification's style.
ValidationOptions validation_options_for(const StyleConfig& style);

/// Component-level end-to-end communication relation: (a, b) when a chain
/// starts at a port of `a` with no incoming connector and ends at a port of
/// `b` with no outgoing connector.
std::set<std::pair<std::string, std::string>> end_to_end_relation(const CncModel& model);

/// Style conformance problems; empty when the model obeys the style.
std::vector<std::string> check_style(const CncModel& model, const StyleConfig& style);

}  // namespace cncsynth
