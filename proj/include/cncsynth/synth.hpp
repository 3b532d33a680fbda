#pragma once

// Synthesis pipeline: scope, encode, solve, decode, verify.

#include "cncsynth/checker.hpp"
#include "cncsynth/encoder.hpp"
#include "cncsynth/sat.hpp"

namespace cncsynth {

enum class Outcome { Model, UnsatWithinScope, ResourceLimit };

/// "MODEL", "UNSAT_WITHIN_SCOPE" or "RESOURCE_LIMIT".
std::string to_string(Outcome outcome);

struct SynthStats {
    int variables = 0;
    std::size_t clauses = 0;
    double encode_seconds = 0.0;
    double solve_seconds = 0.0;
    SolverStats solver;
    Scope scope;
};

struct SynthResult {
    Outcome outcome = Outcome::ResourceLimit;
    std::optional<CncModel> model;
    /// evaluate_spec on the decoded model; present iff outcome is Model.
    std::optional<SpecEvaluation> verification;
    SynthStats stats;
};

/// A decoded model failed validation or verification. Always an encoder bug.
class SoundnessError : public InternalError {
public:
    using InternalError::InternalError;
};

/// Synthesizes one model. `hints` override the specification's own scope
/// block.
SynthResult synthesize(const ResolvedSpec& spec, const ScopeHints& hints = {}, const SolverConfig& config = {});

/// Which variables distinguish enumerated solutions.
enum class Projection {
    /// Every structural variable: components, containment, ports, connectors.
    Structure,
    /// Component presence and immediate containment only.
    Containment,
};

struct Enumeration {
    std::vector<SynthResult> solutions;
    /// True when the search space was exhausted before the limit.
    bool exhausted = false;
    bool resource_limit = false;
};

/// Up to `max_solutions` models, pairwise distinct on the projection.
Enumeration enumerate(const ResolvedSpec& spec, const ScopeHints& hints, const SolverConfig& config, int max_solutions,
                      Projection projection = Projection::Structure);

/// Reads a model off a satisfying assignment of `encoding`.
CncModel decode(const Encoding& encoding, const Assignment& assignment);

struct ClosureReport {
    int reach_mismatches = 0;
    int contains_mismatches = 0;
    int total() const { return reach_mismatches + contains_mismatches; }
};

/// Compares the assignment's reach and contains atoms with closures
/// recomputed from its conn and parent atoms.
ClosureReport check_closures(const Encoding& encoding, const Assignment& assignment);

/// Process-wide tallies of the checks run on every decoded model.
struct AuditCounters {
    std::uint64_t models_verified = 0;
    std::uint64_t closure_checks = 0;
    std::uint64_t closure_mismatches = 0;
    std::uint64_t soundness_failures = 0;
};

AuditCounters audit_counters();

}  // namespace cncsynth
