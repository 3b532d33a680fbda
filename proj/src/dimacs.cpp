#include "cncsynth/sat.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace cncsynth {

void CnfInstance::begin_group(std::string name) { groups.push_back({std::move(name), clauses.size(), clauses.size()}); }

void CnfInstance::end_group() {
    if (!groups.empty()) groups.back().last = clauses.size();
}

bool Assignment::satisfies(const CnfInstance& cnf) const {
    if (num_vars() < cnf.num_vars) return false;
    for (const auto& clause : cnf.clauses) {
        bool sat = false;
        for (Lit l : clause)
            if (holds(l)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

std::vector<Lit> blocking_clause(const Assignment& assignment, const std::vector<int>& projection) {
    if (projection.empty()) throw SolverError("blocking projection is empty");
    std::vector<Lit> clause;
    clause.reserve(projection.size());
    for (int v : projection) clause.push_back(assignment.value(v) ? -v : v);
    return clause;
}

CnfInstance block(const CnfInstance& cnf, const Assignment& assignment, const std::vector<int>& projection) {
    for (int v : projection)
        if (v < 1 || v > cnf.num_vars) throw SolverError("projection variable " + std::to_string(v) + " out of range");
    CnfInstance extended = cnf;
    extended.add(blocking_clause(assignment, projection));
    return extended;
}

std::string emit_dimacs(const CnfInstance& cnf) {
    std::ostringstream out;
    for (const auto& c : cnf.comments) out << "c " << c << '\n';
    for (const auto& g : cnf.groups) out << "c group " << g.name << ' ' << g.first << ' ' << g.last << '\n';
    out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses) {
        for (Lit l : clause) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

CnfInstance parse_dimacs(const std::string& text) {
    CnfInstance cnf;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::vector<Lit> current;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == 'c') {
            auto body = line.substr(first + 1);
            if (!body.empty() && body.front() == ' ') body.erase(0, 1);
            if (body.rfind("group ", 0) != 0) cnf.comments.push_back(body);
            continue;
        }
        if (line[first] == '%') break;
        std::istringstream tokens(line);
        if (line[first] == 'p') {
            std::string p, fmt;
            long vars = -1, count = -1;
            tokens >> p >> fmt >> vars >> count;
            if (fmt != "cnf" || vars < 0 || count < 0 || header)
                throw SolverError("line " + std::to_string(line_no) + ": malformed DIMACS header");
            cnf.num_vars = static_cast<int>(vars);
            declared_clauses = static_cast<std::size_t>(count);
            header = true;
            continue;
        }
        if (!header) throw SolverError("line " + std::to_string(line_no) + ": clause before DIMACS header");
        long lit;
        while (tokens >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::labs(lit) > cnf.num_vars)
                throw SolverError("line " + std::to_string(line_no) + ": literal " + std::to_string(lit) +
                                  " exceeds the declared variable count");
            current.push_back(static_cast<Lit>(lit));
        }
        if (!tokens.eof()) throw SolverError("line " + std::to_string(line_no) + ": malformed clause");
    }
    if (!header) throw SolverError("missing DIMACS header");
    if (!current.empty()) cnf.clauses.push_back(std::move(current));
    if (cnf.clauses.size() != declared_clauses)
        throw SolverError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                          std::to_string(cnf.clauses.size()));
    return cnf;
}

DimacsResult parse_dimacs_result(const std::string& text, int num_vars) {
    DimacsResult result;
    std::vector<bool> values(static_cast<std::size_t>(num_vars) + 1, false);
    bool have_status = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("s ", 0) == 0) {
            const auto word = line.substr(2);
            if (word == "SATISFIABLE")
                result.status = SolveStatus::Sat;
            else if (word == "UNSATISFIABLE")
                result.status = SolveStatus::Unsat;
            else if (word == "UNKNOWN")
                result.status = SolveStatus::ResourceLimit;
            else
                throw SolverError("malformed solver status line: " + line);
            have_status = true;
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream tokens(line.substr(1));
            long lit;
            while (tokens >> lit) {
                if (lit == 0) continue;
                if (std::labs(lit) > num_vars) throw SolverError("solver assigned unknown variable " + std::to_string(lit));
                values[static_cast<std::size_t>(std::labs(lit))] = lit > 0;
            }
            if (!tokens.eof()) throw SolverError("malformed value line: " + line);
        }
    }
    if (!have_status) throw SolverError("solver output has no status line");
    if (result.status == SolveStatus::Sat) result.assignment = Assignment(std::move(values));
    return result;
}

std::string format_dimacs_result(const SolveResult& result, int num_vars) {
    std::ostringstream out;
    switch (result.status) {
        case SolveStatus::Sat: out << "s SATISFIABLE\n"; break;
        case SolveStatus::Unsat: out << "s UNSATISFIABLE\n"; break;
        case SolveStatus::ResourceLimit: out << "s UNKNOWN\n"; break;
    }
    if (result.status == SolveStatus::Sat) {
        out << "v";
        for (int v = 1; v <= num_vars; ++v) {
            out << ' ' << (result.assignment.value(v) ? v : -v);
            if (v % 20 == 0 && v != num_vars) out << "\nv";
        }
        out << " 0\n";
    }
    return out.str();
}

namespace {

SolveResult solve_external(const CnfInstance& cnf, const SolverConfig& config) {
    namespace fs = std::filesystem;
    if (config.executable.empty()) throw SolverError("no external solver configured");

    std::string pattern = (fs::temp_directory_path() / "cncsynth-XXXXXX.cnf").string();
    const int fd = mkstemps(pattern.data(), 4);
    if (fd < 0) throw SolverError("cannot create a temporary CNF file");
    close(fd);
    const fs::path path(pattern);
    {
        std::ofstream out(path);
        out << emit_dimacs(cnf);
    }

    const auto start = std::chrono::steady_clock::now();
    std::string command = "'" + config.executable + "' '" + path.string() + "' 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        fs::remove(path);
        throw SolverError("cannot start external solver '" + config.executable + "'");
    }
    std::string output;
    std::array<char, 4096> buffer{};
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), n);
    const int status = pclose(pipe);
    fs::remove(path);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
        throw SolverError("external solver '" + config.executable + "' not found");
    if (WIFSIGNALED(status)) throw SolverError("external solver '" + config.executable + "' crashed");

    auto parsed = parse_dimacs_result(output, cnf.num_vars);
    SolveResult result;
    result.status = parsed.status;
    result.assignment = std::move(parsed.assignment);
    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

SolveResult solve(const CnfInstance& cnf, const SolverConfig& config) {
    SolveResult result;
    if (config.engine == Engine::External) {
        result = solve_external(cnf, config);
    } else {
        Solver solver(config.seed);
        solver.add(cnf);
        for (const auto& [var, priority] : config.priorities) solver.set_priority(var, priority);
        result = solver.solve({}, config.limits);
    }
    if (result.status == SolveStatus::Sat && !result.assignment.satisfies(cnf))
        throw SolverError("solver returned an assignment that violates the instance");
    return result;
}

}  // namespace cncsynth
