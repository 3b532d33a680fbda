#pragma once

// Views specifications generated from 3SAT formulas: a formula is
// satisfiable iff the generated specification has a satisfying model.

#include "cncsynth/sat.hpp"
#include "cncsynth/speclang.hpp"

#include <array>

namespace cncsynth {

struct Cnf3Formula {
    int num_vars = 0;
    /// Signed variable indices, three per clause.
    std::vector<std::array<int, 3>> clauses;

    /// `values[i]` is the value of variable i; index 0 is unused.
    bool evaluate(const std::vector<bool>& values) const;
};

/// Converts DIMACS CNF; clauses shorter than three literals are padded by
/// repeating their last literal. Empty or longer clauses are rejected.
Cnf3Formula to_3cnf(const CnfInstance& cnf);

std::string true_component(int var);   // "xT<i>"
std::string false_component(int var);  // "xF<i>"
std::string true_view(int var);         // "vT<i>"
std::string false_view(int var);        // "vF<i>"

/// Two components and two views per variable; the formula requires one
/// view per variable and one per clause. Views have no ports and the port
/// scope is zero.
ViewSpec reduce_3sat(const Cnf3Formula& formula, const std::string& name = "Reduction");

/// Reads a valuation off a model of the reduction: variable i is true iff
/// xF_i contains xT_i. Index 0 is unused.
std::vector<bool> extract_assignment(const CncModel& model, int num_vars);

}  // namespace cncsynth
