#pragma once

// CNF instances, an internal CDCL solver, DIMACS interop and blocking
// clauses for solution enumeration.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cncsynth {

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Lit = int;

struct ClauseGroup {
    std::string name;
    std::size_t first = 0;  // clause index range [first, last)
    std::size_t last = 0;
};

struct CnfInstance {
    int num_vars = 0;
    std::vector<std::vector<Lit>> clauses;
    std::vector<ClauseGroup> groups;
    /// Free-form comment lines emitted ahead of the header (without "c ").
    std::vector<std::string> comments;

    int new_var() { return ++num_vars; }
    void add(std::vector<Lit> clause) { clauses.push_back(std::move(clause)); }

    void begin_group(std::string name);
    void end_group();
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Engine { Internal, External };

struct SolverLimits {
    std::optional<std::uint64_t> conflicts;
    std::optional<double> seconds;
};

struct SolverConfig {
    Engine engine = Engine::Internal;
    std::string executable;
    std::uint64_t seed = 0;
    SolverLimits limits;
    /// Decision priorities for the internal engine (variable, priority).
    std::vector<std::pair<int, int>> priorities;
};

enum class SolveStatus { Sat, Unsat, ResourceLimit };

std::string to_string(SolveStatus status);

/// Total assignment; index 0 is unused.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

    int num_vars() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
    bool value(int var) const { return values_.at(static_cast<std::size_t>(var)); }
    bool holds(Lit lit) const { return lit > 0 ? value(lit) : !value(-lit); }
    bool satisfies(const CnfInstance& cnf) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<bool> values_;
};

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    std::uint64_t random_decisions = 0;
    double seconds = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::ResourceLimit;
    Assignment assignment;  // Sat only
    SolverStats stats;
};

/// Incremental CDCL solver: watched literals, first-UIP learning, VSIDS with
/// ascending-index tie breaking, phase saving and Luby restarts.
class Solver {
public:
    explicit Solver(std::uint64_t seed = 0);
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    void reserve_vars(int num_vars);
    /// Variables with a higher priority are always decided first.
    void set_priority(int var, int priority);
    /// Adds a clause; may be called between solve() calls.
    void add_clause(const std::vector<Lit>& clause);
    void add(const CnfInstance& cnf);

    SolveResult solve(const std::vector<Lit>& assumptions = {}, const SolverLimits& limits = {});

    int num_vars() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Solves with the configured engine. SAT answers are re-verified against
/// every clause before returning.
SolveResult solve(const CnfInstance& cnf, const SolverConfig& config = {});

/// Adds the clause that excludes `assignment` restricted to `projection`.
CnfInstance block(const CnfInstance& cnf, const Assignment& assignment, const std::vector<int>& projection);

/// Clause excluding `assignment` on `projection` (the body of block()).
std::vector<Lit> blocking_clause(const Assignment& assignment, const std::vector<int>& projection);

std::string emit_dimacs(const CnfInstance& cnf);

/// Parses DIMACS CNF text; comment lines are kept.
CnfInstance parse_dimacs(const std::string& text);

struct DimacsResult {
    SolveStatus status = SolveStatus::ResourceLimit;
    Assignment assignment;
};

/// Parses solver output (`s SATISFIABLE` / `s UNSATISFIABLE` / `v` lines).
/// Variables not mentioned in `v` lines default to false.
DimacsResult parse_dimacs_result(const std::string& text, int num_vars);

/// Renders a result in the same competition format.
std::string format_dimacs_result(const SolveResult& result, int num_vars);

}  // namespace cncsynth
