#include "cncsynth/sat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace cncsynth {

namespace {

// Internal literal: 2 * var + sign, var 0-based.
inline int to_internal(Lit l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
inline int var_of(int l) { return l >> 1; }
inline int negate(int l) { return l ^ 1; }
inline bool is_negative(int l) { return l & 1; }

constexpr int kNoReason = -1;

double luby(double y, int x) {
    int size = 1, seq = 0;
    for (; size < x + 1; seq++, size = 2 * size + 1) {}
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return std::pow(y, seq);
}

}  // namespace

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Sat: return "SAT";
        case SolveStatus::Unsat: return "UNSAT";
        case SolveStatus::ResourceLimit: return "RESOURCE_LIMIT";
    }
    return "?";
}

struct Solver::Impl {
    // Clauses live in one arena: [size, flags, activity bits, lits...].
    // flags: bit 0 learnt, bit 1 deleted, bits 2.. lbd.
    static constexpr int kHeader = 3;
    struct Watch {
        int cref;
        int blocker;
    };

    std::vector<int> arena;
    std::size_t wasted = 0;
    std::vector<int> learnts;
    std::vector<std::vector<Watch>> watches;  // by literal that is watched

    std::vector<std::int8_t> assigns;  // 0 unassigned, 1 true, -1 false (per var)
    std::vector<int> level;
    std::vector<int> reason;
    std::vector<bool> polarity;  // saved phase: true = positive
    std::vector<double> activity;
    std::vector<int> priority;
    std::vector<char> seen;
    std::vector<int> analyze_stack;
    std::vector<int> analyze_clear;
    std::vector<unsigned> level_stamp;
    unsigned stamp = 0;

    std::vector<int> trail;
    std::vector<int> trail_lim;
    std::size_t qhead = 0;

    // Binary max-heap of variables by activity; ties prefer the lower index.
    std::vector<int> heap;
    std::vector<int> heap_pos;  // -1 when not in heap

    double var_inc = 1.0;
    double random_freq = 0.02;
    double var_decay = 0.95;
    float cla_inc = 1.0f;
    float cla_decay = 0.999f;
    std::uint64_t next_reduce = 2000;
    std::uint64_t reduce_step = 300;

    bool ok = true;
    std::mt19937_64 rng;
    SolverStats stats;

    explicit Impl(std::uint64_t seed) : rng(seed) { seeded = seed != 0; }
    bool seeded = false;

    int nvars() const { return static_cast<int>(assigns.size()); }

    int size(int cref) const { return arena[cref]; }
    int* lits(int cref) { return &arena[cref + kHeader]; }
    const int* lits(int cref) const { return &arena[cref + kHeader]; }
    bool is_learnt(int cref) const { return arena[cref + 1] & 1; }
    bool deleted(int cref) const { return arena[cref + 1] & 2; }
    unsigned lbd(int cref) const { return static_cast<unsigned>(arena[cref + 1]) >> 2; }
    void set_lbd(int cref, unsigned l) { arena[cref + 1] = static_cast<int>((l << 2) | (arena[cref + 1] & 3)); }
    float clause_activity(int cref) const { return std::bit_cast<float>(arena[cref + 2]); }
    void set_clause_activity(int cref, float a) { arena[cref + 2] = std::bit_cast<int>(a); }

    int new_clause(const std::vector<int>& ls, bool is_learnt, unsigned l) {
        const int cref = static_cast<int>(arena.size());
        arena.push_back(static_cast<int>(ls.size()));
        arena.push_back(static_cast<int>((l << 2) | (is_learnt ? 1u : 0u)));
        arena.push_back(std::bit_cast<int>(0.0f));
        arena.insert(arena.end(), ls.begin(), ls.end());
        return cref;
    }

    int value(int lit) const {
        const int a = assigns[var_of(lit)];
        return is_negative(lit) ? -a : a;
    }

    int decision_level() const { return static_cast<int>(trail_lim.size()); }

    bool heap_less(int a, int b) const {
        if (priority[a] != priority[b]) return priority[a] > priority[b];
        return activity[a] > activity[b] || (activity[a] == activity[b] && a < b);
    }

    void heap_up(std::size_t i) {
        const int v = heap[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!heap_less(v, heap[parent])) break;
            heap[i] = heap[parent];
            heap_pos[heap[i]] = static_cast<int>(i);
            i = parent;
        }
        heap[i] = v;
        heap_pos[v] = static_cast<int>(i);
    }

    void heap_down(std::size_t i) {
        const int v = heap[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap.size()) break;
            if (child + 1 < heap.size() && heap_less(heap[child + 1], heap[child])) ++child;
            if (!heap_less(heap[child], v)) break;
            heap[i] = heap[child];
            heap_pos[heap[i]] = static_cast<int>(i);
            i = child;
        }
        heap[i] = v;
        heap_pos[v] = static_cast<int>(i);
    }

    void heap_insert(int v) {
        if (heap_pos[v] >= 0) return;
        heap.push_back(v);
        heap_up(heap.size() - 1);
    }

    int heap_pop() {
        const int top = heap.front();
        heap_pos[top] = -1;
        const int last = heap.back();
        heap.pop_back();
        if (!heap.empty()) {
            heap[0] = last;
            heap_pos[last] = 0;
            heap_down(0);
        }
        return top;
    }

    void grow(int n) {
        if (n <= nvars()) return;
        const int old = nvars();
        assigns.resize(n, 0);
        level.resize(n, 0);
        reason.resize(n, kNoReason);
        polarity.resize(n, false);
        activity.resize(n, 0.0);
        priority.resize(n, 0);
        seen.resize(n, 0);
        heap_pos.resize(n, -1);
        level_stamp.resize(static_cast<std::size_t>(n) + 1, 0);
        watches.resize(2 * static_cast<std::size_t>(n));
        std::uniform_real_distribution<double> jitter(0.0, 1e-5);
        for (int v = old; v < n; ++v) {
            if (seeded) activity[v] = jitter(rng);
            heap_insert(v);
        }
    }

    void enqueue(int lit, int from) {
        const int v = var_of(lit);
        assigns[v] = is_negative(lit) ? -1 : 1;
        level[v] = decision_level();
        reason[v] = from;
        trail.push_back(lit);
    }

    void attach(int cref) {
        const int* c = lits(cref);
        watches[c[0]].push_back({cref, c[1]});
        watches[c[1]].push_back({cref, c[0]});
    }

    bool add_clause(std::vector<int> ls) {
        if (!ok) return false;
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        std::vector<int> kept;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i + 1 < ls.size() && ls[i + 1] == negate(ls[i])) return true;  // tautology
            const int val = value(ls[i]);
            if (val == 1) return true;
            if (val == 0) kept.push_back(ls[i]);
        }
        if (kept.empty()) return ok = false;
        if (kept.size() == 1) {
            if (decision_level() > 0) cancel_until(0);
            enqueue(kept[0], kNoReason);
            if (propagate() != kNoReason) ok = false;
            return ok;
        }
        attach(new_clause(kept, false, 0));
        return true;
    }

    int propagate() {
        int conflict = kNoReason;
        while (qhead < trail.size()) {
            const int p = trail[qhead++];
            const int false_lit = negate(p);
            auto& ws = watches[false_lit];
            ++stats.propagations;
            Watch* i = ws.data();
            Watch* j = i;
            Watch* const end = i + ws.size();
            while (i != end) {
                const Watch w = *i;
                if (value(w.blocker) == 1) {
                    *j++ = *i++;
                    continue;
                }
                if (deleted(w.cref)) {
                    ++i;
                    continue;
                }
                int* c = lits(w.cref);
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                const int first = c[0];
                ++i;
                if (first != w.blocker && value(first) == 1) {
                    *j++ = {w.cref, first};
                    continue;
                }
                const int n = size(w.cref);
                bool moved = false;
                for (int k = 2; k < n; ++k) {
                    if (value(c[k]) != -1) {
                        std::swap(c[1], c[k]);
                        watches[c[1]].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                *j++ = {w.cref, first};
                if (value(first) == -1) {
                    conflict = w.cref;
                    qhead = trail.size();
                    while (i != end) *j++ = *i++;
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(static_cast<std::size_t>(j - ws.data()));
            if (conflict != kNoReason) break;
        }
        return conflict;
    }

    void bump_var(int v) {
        if ((activity[v] += var_inc) > 1e100) {
            for (auto& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
        if (heap_pos[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos[v]));
    }

    void bump_clause(int cref) {
        const float a = clause_activity(cref) + cla_inc;
        set_clause_activity(cref, a);
        if (a > 1e20f) {
            for (int l : learnts) set_clause_activity(l, clause_activity(l) * 1e-20f);
            cla_inc *= 1e-20f;
        }
    }

    void cancel_until(int target) {
        if (decision_level() <= target) return;
        for (std::size_t i = trail.size(); i-- > static_cast<std::size_t>(trail_lim[target]);) {
            const int v = var_of(trail[i]);
            assigns[v] = 0;
            reason[v] = kNoReason;
            polarity[v] = !is_negative(trail[i]);
            heap_insert(v);
        }
        trail.resize(trail_lim[target]);
        trail_lim.resize(target);
        qhead = trail.size();
    }

    unsigned abstract_level(int v) const { return 1u << (level[v] & 31); }

    // True when `lit` is implied by literals already marked in the clause.
    bool redundant(int lit, unsigned levels) {
        analyze_stack.clear();
        analyze_stack.push_back(lit);
        const std::size_t top = analyze_clear.size();
        while (!analyze_stack.empty()) {
            const int r = reason[var_of(analyze_stack.back())];
            analyze_stack.pop_back();
            const int* c = lits(r);
            for (int k = 1; k < size(r); ++k) {
                const int v = var_of(c[k]);
                if (seen[v] || level[v] == 0) continue;
                if (reason[v] != kNoReason && (abstract_level(v) & levels) != 0) {
                    seen[v] = 1;
                    analyze_stack.push_back(c[k]);
                    analyze_clear.push_back(c[k]);
                } else {
                    for (std::size_t i = top; i < analyze_clear.size(); ++i) seen[var_of(analyze_clear[i])] = 0;
                    analyze_clear.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    // First-UIP conflict analysis; returns the learnt clause (asserting
    // literal first) and the backjump level.
    std::pair<std::vector<int>, int> analyze(int conflict) {
        std::vector<int> learnt{0};
        int path = 0;
        int p = -1;
        std::size_t index = trail.size();
        do {
            if (is_learnt(conflict)) bump_clause(conflict);
            const int* c = lits(conflict);
            for (int j = (p == -1) ? 0 : 1; j < size(conflict); ++j) {
                const int q = c[j];
                const int v = var_of(q);
                if (!seen[v] && level[v] > 0) {
                    bump_var(v);
                    seen[v] = 1;
                    if (level[v] >= decision_level())
                        ++path;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen[var_of(trail[--index])]) {}
            p = trail[index];
            conflict = reason[var_of(p)];
            seen[var_of(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = negate(p);

        analyze_clear.assign(learnt.begin(), learnt.end());
        unsigned levels = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var_of(learnt[i]));
        std::size_t kept = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            if (reason[var_of(learnt[i])] == kNoReason || !redundant(learnt[i], levels)) learnt[kept++] = learnt[i];
        learnt.resize(kept);
        for (int l : analyze_clear) seen[var_of(l)] = 0;

        int back = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level[var_of(learnt[i])] > level[var_of(learnt[max_i])]) max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            back = level[var_of(learnt[1])];
        }
        return {std::move(learnt), back};
    }

    unsigned compute_lbd(const int* ls, int n) {
        ++stamp;
        unsigned count = 0;
        for (int i = 0; i < n; ++i) {
            const int l = level[var_of(ls[i])];
            if (level_stamp[l] != stamp) {
                level_stamp[l] = stamp;
                ++count;
            }
        }
        return count;
    }

    bool locked(int cref) const {
        const int v = var_of(lits(cref)[0]);
        return reason[v] == cref && value(lits(cref)[0]) == 1;
    }

    void remove_clause(int cref) {
        arena[cref + 1] |= 2;
        wasted += static_cast<std::size_t>(size(cref) + kHeader);
    }

    // Keeps glue clauses (lbd <= 2) and the better half of the rest, ranked
    // by lbd then activity.
    void reduce_db() {
        std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
            if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
            return clause_activity(a) < clause_activity(b);
        });
        std::vector<int> kept;
        const std::size_t half = learnts.size() / 2;
        for (std::size_t i = 0; i < learnts.size(); ++i) {
            const int cref = learnts[i];
            if (i < half && lbd(cref) > 2 && size(cref) > 2 && !locked(cref))
                remove_clause(cref);
            else
                kept.push_back(cref);
        }
        learnts = std::move(kept);
        if (wasted * 2 > arena.size()) collect_garbage();
    }

    void collect_garbage() {
        std::vector<int> fresh;
        fresh.reserve(arena.size() - wasted);
        std::vector<std::pair<int, int>> moves;
        for (std::size_t cref = 0; cref < arena.size();) {
            const int n = arena[cref];
            if (!(arena[cref + 1] & 2)) {
                moves.emplace_back(static_cast<int>(cref), static_cast<int>(fresh.size()));
                fresh.insert(fresh.end(), arena.begin() + static_cast<std::ptrdiff_t>(cref),
                             arena.begin() + static_cast<std::ptrdiff_t>(cref) + kHeader + n);
            }
            cref += static_cast<std::size_t>(kHeader + n);
        }
        auto relocate = [&](int cref) {
            const auto it = std::lower_bound(moves.begin(), moves.end(), std::make_pair(cref, -1));
            return it != moves.end() && it->first == cref ? it->second : kNoReason;
        };
        for (int l : trail) {
            int& r = reason[var_of(l)];
            if (r != kNoReason) r = relocate(r);
        }
        for (int& l : learnts) l = relocate(l);
        for (auto& ws : watches) {
            std::size_t j = 0;
            for (const auto& w : ws) {
                const int moved = relocate(w.cref);
                if (moved != kNoReason) ws[j++] = {moved, w.blocker};
            }
            ws.resize(j);
        }
        arena = std::move(fresh);
        wasted = 0;
    }

    int pick_branch() {
        if (!heap.empty() && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < random_freq) {
            // Random pick within the highest pending priority class.
            const int v = heap[std::uniform_int_distribution<std::size_t>(0, heap.size() - 1)(rng)];
            if (assigns[v] == 0 && priority[v] == priority[heap.front()]) {
                ++stats.random_decisions;
                return polarity[v] ? 2 * v : 2 * v + 1;
            }
        }
        while (!heap.empty()) {
            const int v = heap_pop();
            if (assigns[v] == 0) return polarity[v] ? 2 * v : 2 * v + 1;
        }
        return -1;
    }

    SolveStatus search(int conflict_budget, const std::vector<int>& assumptions, std::vector<bool>& model,
                       const SolverLimits& limits, std::uint64_t start_conflicts,
                       std::chrono::steady_clock::time_point start) {
        int conflicts_here = 0;
        for (;;) {
            const int conflict = propagate();
            if (conflict != kNoReason) {
                ++stats.conflicts;
                ++conflicts_here;
                if (decision_level() == 0) return SolveStatus::Unsat;
                auto [learnt, back] = analyze(conflict);
                cancel_until(back);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    const unsigned l = compute_lbd(learnt.data(), static_cast<int>(learnt.size()));
                    const int cref = new_clause(learnt, true, l);
                    learnts.push_back(cref);
                    attach(cref);
                    bump_clause(cref);
                    enqueue(learnt[0], cref);
                }
                var_inc /= var_decay;
                cla_inc /= cla_decay;

                if (limits.conflicts && stats.conflicts - start_conflicts >= *limits.conflicts)
                    return SolveStatus::ResourceLimit;
                if (limits.seconds && (stats.conflicts & 255) == 0) {
                    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                    if (elapsed.count() >= *limits.seconds) return SolveStatus::ResourceLimit;
                }
                continue;
            }

            if (conflicts_here >= conflict_budget) {
                cancel_until(0);
                ++stats.restarts;
                return SolveStatus::ResourceLimit;  // restart marker, handled by caller
            }
            if (stats.conflicts >= next_reduce) {
                reduce_db();
                next_reduce = stats.conflicts + 2000 + reduce_step;
                reduce_step += 300;
            }

            int next = -1;
            while (decision_level() < static_cast<int>(assumptions.size())) {
                const int a = assumptions[static_cast<std::size_t>(decision_level())];
                if (value(a) == 1) {
                    trail_lim.push_back(static_cast<int>(trail.size()));
                } else if (value(a) == -1) {
                    return SolveStatus::Unsat;
                } else {
                    next = a;
                    break;
                }
            }
            if (next == -1) {
                next = pick_branch();
                if (next == -1) {
                    model.assign(static_cast<std::size_t>(nvars()) + 1, false);
                    for (int v = 0; v < nvars(); ++v) model[static_cast<std::size_t>(v) + 1] = assigns[v] == 1;
                    return SolveStatus::Sat;
                }
            }
            ++stats.decisions;
            trail_lim.push_back(static_cast<int>(trail.size()));
            enqueue(next, kNoReason);
        }
    }

    SolveResult solve(const std::vector<Lit>& assumptions, const SolverLimits& limits) {
        const auto start = std::chrono::steady_clock::now();
        SolveResult result;
        std::vector<int> internal_assumptions;
        for (Lit a : assumptions) {
            grow(std::abs(a));
            internal_assumptions.push_back(to_internal(a));
        }
        const auto start_conflicts = stats.conflicts;
        if (!ok) {
            result.status = SolveStatus::Unsat;
        } else {
            std::vector<bool> model;
            SolveStatus status = SolveStatus::ResourceLimit;
            for (int round = 0;; ++round) {
                const auto budget = static_cast<int>(luby(2.0, round) * 100.0);
                const auto before = stats.restarts;
                status = search(budget, internal_assumptions, model, limits, start_conflicts, start);
                if (status != SolveStatus::ResourceLimit || stats.restarts == before) break;
            }
            result.status = status;
            if (status == SolveStatus::Sat) result.assignment = Assignment(std::move(model));
            if (status == SolveStatus::Unsat && assumptions.empty()) ok = false;
            cancel_until(0);
        }
        stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.stats = stats;
        return result;
    }
};

Solver::Solver(std::uint64_t seed) : impl_(std::make_unique<Impl>(seed)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::reserve_vars(int num_vars) { impl_->grow(num_vars); }

void Solver::set_priority(int var, int priority) {
    if (var < 1) throw SolverError("variable " + std::to_string(var) + " out of range");
    impl_->grow(var);
    const int v = var - 1;
    impl_->priority[v] = priority;
    if (impl_->heap_pos[v] >= 0) {
        impl_->heap_up(static_cast<std::size_t>(impl_->heap_pos[v]));
        impl_->heap_down(static_cast<std::size_t>(impl_->heap_pos[v]));
    }
}

void Solver::add_clause(const std::vector<Lit>& clause) {
    std::vector<int> lits;
    lits.reserve(clause.size());
    for (Lit l : clause) {
        if (l == 0) throw SolverError("literal 0 in clause");
        impl_->grow(std::abs(l));
        lits.push_back(to_internal(l));
    }
    impl_->add_clause(std::move(lits));
}

void Solver::add(const CnfInstance& cnf) {
    reserve_vars(cnf.num_vars);
    for (const auto& c : cnf.clauses) add_clause(c);
}

SolveResult Solver::solve(const std::vector<Lit>& assumptions, const SolverLimits& limits) {
    auto result = impl_->solve(assumptions, limits);
    // Variables never mentioned in a clause still get a value.
    return result;
}

int Solver::num_vars() const { return impl_->nvars(); }

}  // namespace cncsynth
