#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_set>
#include <vector>

#include "arm/model.hpp"

namespace arm::engine {

struct TooLarge : DomainError {
    using DomainError::DomainError;
};

enum class Outcome { Satisfied, Violated, Undetermined };

namespace detail {

enum class PosStatus { Known, Undetermined, Impossible };

struct PosResult {
    PosStatus status;
    int index = -1;
};

/// Position of a participant's True cell. Impossible when the whole row is
/// False, Undetermined while Unknown cells remain and no True is set.
inline PosResult position_of(const Assignment& a, int p) {
    if (auto q = a.true_position(p)) return {PosStatus::Known, *q};
    for (int q = 0; q < a.position_count(); ++q)
        if (a.at(p, q) == CellState::Unknown) return {PosStatus::Undetermined};
    return {PosStatus::Impossible};
}

// Tri-state fold: conjunction over a set of outcomes.
inline Outcome all_of(const std::vector<Outcome>& os) {
    bool undet = false;
    for (Outcome o : os) {
        if (o == Outcome::Violated) return Outcome::Violated;
        if (o == Outcome::Undetermined) undet = true;
    }
    return undet ? Outcome::Undetermined : Outcome::Satisfied;
}

inline Outcome any_of(const std::vector<Outcome>& os) {
    bool undet = false;
    for (Outcome o : os) {
        if (o == Outcome::Satisfied) return Outcome::Satisfied;
        if (o == Outcome::Undetermined) undet = true;
    }
    return undet ? Outcome::Undetermined : Outcome::Violated;
}

inline Outcome negate(Outcome o) {
    if (o == Outcome::Satisfied) return Outcome::Violated;
    if (o == Outcome::Violated) return Outcome::Satisfied;
    return Outcome::Undetermined;
}

}  // namespace detail

inline Outcome evaluate(const LogicalFunction& f, const Assignment& a);

namespace detail {

inline std::vector<Outcome> evaluate_set(const std::vector<LogicalFunction>& fs,
                                         const Assignment& a) {
    std::vector<Outcome> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(evaluate(f, a));
    return out;
}

struct Evaluator {
    const Assignment& a;

    Outcome operator()(const Relational& r) const {
        PosResult l = position_of(a, r.p1);
        PosResult rr = position_of(a, r.p2);
        if (l.status == PosStatus::Impossible || rr.status == PosStatus::Impossible)
            return Outcome::Violated;
        if (l.status == PosStatus::Undetermined || rr.status == PosStatus::Undetermined)
            return Outcome::Undetermined;
        int i = l.index, j = rr.index;
        bool ok = false;
        switch (r.kind) {
            case RelKind::Before: ok = i < j; break;
            case RelKind::After: ok = i > j; break;
            case RelKind::Last: ok = j - i == 1; break;
            case RelKind::Next: ok = i - j == 1; break;
            case RelKind::Adjacent: ok = (i - j == 1) || (j - i == 1); break;
            case RelKind::Same: ok = i == j; break;
            case RelKind::Different: ok = i != j; break;
            case RelKind::BeforeEqual: ok = i <= j; break;
            case RelKind::AfterEqual: ok = i >= j; break;
        }
        return ok ? Outcome::Satisfied : Outcome::Violated;
    }

    Outcome operator()(const ToFn& t) const {
        CellState c = a.at(t.participant, t.position);
        if (c == CellState::Unknown) return Outcome::Undetermined;
        bool assigned = c == CellState::True;
        bool ok = (t.polarity == Polarity::Positive) ? assigned : !assigned;
        return ok ? Outcome::Satisfied : Outcome::Violated;
    }

    Outcome operator()(const Counting& c) const {
        PosResult p = position_of(a, c.participant);
        if (p.status == PosStatus::Impossible) return Outcome::Violated;
        if (p.status == PosStatus::Undetermined) return Outcome::Undetermined;
        bool ok = (c.kind == CountKind::FirstPos)
                      ? p.index < c.m
                      : p.index >= a.position_count() - c.m;
        return ok ? Outcome::Satisfied : Outcome::Violated;
    }

    Outcome operator()(const Compositional& c) const {
        std::vector<Outcome> o1 = evaluate_set(c.set1, a);
        std::vector<Outcome> o2 = evaluate_set(c.set2, a);
        Outcome all1 = all_of(o1);
        Outcome all2 = all_of(o2);
        switch (c.kind) {
            case CompKind::IfThen:
                // Violated iff premise holds and any consequent is violated.
                if (all1 == Outcome::Violated) return Outcome::Satisfied;
                if (all1 == Outcome::Satisfied) return all2;
                return all2 == Outcome::Satisfied ? Outcome::Satisfied : Outcome::Undetermined;
            case CompKind::IFF:
                if (all1 == Outcome::Undetermined || all2 == Outcome::Undetermined)
                    return Outcome::Undetermined;
                return all1 == all2 ? Outcome::Satisfied : Outcome::Violated;
            case CompKind::And: {
                std::vector<Outcome> both = o1;
                both.insert(both.end(), o2.begin(), o2.end());
                return all_of(both);
            }
            case CompKind::Or: {
                std::vector<Outcome> both = o1;
                both.insert(both.end(), o2.begin(), o2.end());
                return any_of(both);
            }
            case CompKind::Unless: {
                // Violated iff every set2 function is violated and some set1
                // function is violated. Tri-state: yes=Satisfied, no=Violated.
                auto every_violated = [](const std::vector<Outcome>& os) {
                    bool undet = false;
                    for (Outcome o : os) {
                        if (o == Outcome::Satisfied) return Outcome::Violated;
                        if (o == Outcome::Undetermined) undet = true;
                    }
                    return undet ? Outcome::Undetermined : Outcome::Satisfied;
                };
                auto some_violated = [](const std::vector<Outcome>& os) {
                    bool undet = false;
                    for (Outcome o : os) {
                        if (o == Outcome::Violated) return Outcome::Satisfied;
                        if (o == Outcome::Undetermined) undet = true;
                    }
                    return undet ? Outcome::Undetermined : Outcome::Violated;
                };
                Outcome escape_dead = every_violated(o2);
                Outcome primary_broken = some_violated(o1);
                if (escape_dead == Outcome::Satisfied && primary_broken == Outcome::Satisfied)
                    return Outcome::Violated;
                if (escape_dead == Outcome::Violated || primary_broken == Outcome::Violated)
                    return Outcome::Satisfied;
                return Outcome::Undetermined;
            }
            case CompKind::Neither: {
                std::vector<Outcome> both = o1;
                both.insert(both.end(), o2.begin(), o2.end());
                bool undet = false;
                for (Outcome o : both) {
                    if (o == Outcome::Satisfied) return Outcome::Violated;
                    if (o == Outcome::Undetermined) undet = true;
                }
                return undet ? Outcome::Undetermined : Outcome::Satisfied;
            }
        }
        return Outcome::Undetermined;
    }
};

}  // namespace detail

/// Three-valued execution of a constraint against a (partial) assignment.
inline Outcome evaluate(const LogicalFunction& f, const Assignment& a) {
    return std::visit(detail::Evaluator{a}, f.node);
}

/// Participant ids referenced by f, recursively.
inline void collect_participants(const LogicalFunction& f, std::set<int>& out) {
    struct V {
        std::set<int>& out;
        void operator()(const Relational& r) const {
            out.insert(r.p1);
            out.insert(r.p2);
        }
        void operator()(const ToFn& t) const { out.insert(t.participant); }
        void operator()(const Counting& c) const { out.insert(c.participant); }
        void operator()(const Compositional& c) const {
            for (const auto& g : c.set1) collect_participants(g, out);
            for (const auto& g : c.set2) collect_participants(g, out);
        }
    };
    std::visit(V{out}, f.node);
}

/// Participants referenced by f and not yet bound.
inline std::set<int> new_participants(const LogicalFunction& f, const std::set<int>& bound) {
    std::set<int> refs;
    collect_participants(f, refs);
    std::set<int> fresh;
    std::set_difference(refs.begin(), refs.end(), bound.begin(), bound.end(),
                        std::inserter(fresh, fresh.begin()));
    return fresh;
}

namespace detail {

/// Legal ways to complete participant p's row: pick one True column and fill
/// the rest False, consistent with pre-set cells and game-type column rules.
inline std::vector<Assignment> row_completions(const Assignment& a, int p, GameType gt,
                                               const std::map<int, int>& capacities) {
    std::vector<Assignment> out;
    const int npos = a.position_count();

    auto column_allows = [&](int q) {
        if (gt == GameType::Ordering) {
            for (int r = 0; r < a.participant_count(); ++r)
                if (r != p && a.at(r, q) == CellState::True) return false;
            return true;
        }
        if (gt == GameType::Grouping) {
            auto it = capacities.find(q);
            if (it == capacities.end()) return true;
            int used = 0;
            for (int r = 0; r < a.participant_count(); ++r)
                if (r != p && a.at(r, q) == CellState::True) ++used;
            return used < it->second;
        }
        return true;  // Assignment game: no column constraint
    };

    if (auto q = a.true_position(p)) {
        if (gt != GameType::Assignment && a.count_in_row(p, CellState::True) > 1) return out;
        if (!column_allows(*q)) return out;
        Assignment b = a;
        for (int j = 0; j < npos; ++j)
            if (b.at(p, j) == CellState::Unknown) b.set(p, j, CellState::False);
        out.push_back(std::move(b));
        return out;
    }
    for (int q = 0; q < npos; ++q) {
        if (a.at(p, q) == CellState::False) continue;
        if (!column_allows(q)) continue;
        Assignment b = a;
        for (int j = 0; j < npos; ++j)
            b.set(p, j, j == q ? CellState::True : CellState::False);
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace detail

/// Cartesian expansion of the fresh participants' rows into every structurally
/// legal completion; other rows unchanged. Empty list if no legal completion.
inline std::vector<Assignment> gen_all_assignments(const Assignment& a,
                                                   const std::set<int>& fresh, GameType gt,
                                                   const std::map<int, int>& capacities) {
    std::vector<Assignment> frontier{a};
    for (int p : fresh) {
        std::vector<Assignment> next;
        for (const Assignment& cur : frontier) {
            auto rows = detail::row_completions(cur, p, gt, capacities);
            next.insert(next.end(), rows.begin(), rows.end());
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return frontier;
}

struct TraceRecord {
    int depth;
    int function_index;
    int child_count;
};

struct DeductionResult {
    std::vector<Assignment> legitimate;
    long nodes_expanded = 0;
    bool capped = false;
    std::vector<TraceRecord> trace;
};

constexpr long kDefaultNodeCap = 200000;

namespace detail {

struct TreeState {
    const std::vector<LogicalFunction>& functions;
    GameType gt;
    const std::map<int, int>& capacities;
    long node_cap;
    DeductionResult result;
    std::unordered_set<Assignment, Assignment::Hash> seen;

    void expand(const Assignment& a, const std::set<int>& bound, int depth) {
        if (result.capped) return;
        if (++result.nodes_expanded > node_cap) {
            result.capped = true;
            return;
        }
        const int n = static_cast<int>(functions.size());
        if (depth == n) {
            std::set<int> unbound;
            for (int p = 0; p < a.participant_count(); ++p)
                if (!bound.count(p)) unbound.insert(p);
            auto leaves = gen_all_assignments(a, unbound, gt, capacities);
            result.trace.push_back({depth, -1, static_cast<int>(leaves.size())});
            for (Assignment& leaf : leaves) {
                bool ok = true;
                for (const auto& f : functions)
                    if (evaluate(f, leaf) != Outcome::Satisfied) {
                        ok = false;
                        break;
                    }
                if (ok && seen.insert(leaf).second)
                    result.legitimate.push_back(std::move(leaf));
            }
            return;
        }
        const LogicalFunction& f = functions[depth];
        std::set<int> fresh = new_participants(f, bound);
        std::vector<Assignment> children = gen_all_assignments(a, fresh, gt, capacities);
        std::set<int> next_bound = bound;
        next_bound.insert(fresh.begin(), fresh.end());
        std::vector<Assignment> kept;
        for (Assignment& c : children)
            if (evaluate(f, c) != Outcome::Violated) kept.push_back(std::move(c));
        result.trace.push_back({depth, depth, static_cast<int>(kept.size())});
        for (const Assignment& c : kept) expand(c, next_bound, depth + 1);
    }
};

}  // namespace detail

/// Depth-first deduction tree: at depth d expand the fresh participants of
/// functions[d], prune children violating it, then complete remaining rows and
/// re-check every function. Undetermined children are kept; the final re-check
/// restores soundness for functions whose references were unbound at their depth.
inline DeductionResult construct_tree(const Assignment& a0,
                                      const std::vector<LogicalFunction>& functions, GameType gt,
                                      const std::map<int, int>& capacities,
                                      long node_cap = kDefaultNodeCap) {
    detail::TreeState st{functions, gt, capacities, node_cap, {}, {}};
    std::set<int> bound;
    // participants whose rows are already fully determined by facts
    for (int p = 0; p < a0.participant_count(); ++p)
        if (a0.row_completed(p)) bound.insert(p);
    st.expand(a0, bound, 0);
    return std::move(st.result);
}

/// Greedy stable order: repeatedly take the function introducing the fewest
/// fresh participants given those already placed; ties keep original order.
inline std::vector<LogicalFunction> rank_functions(const std::vector<LogicalFunction>& functions) {
    std::vector<LogicalFunction> out;
    std::vector<bool> used(functions.size(), false);
    std::set<int> bound;
    for (std::size_t step = 0; step < functions.size(); ++step) {
        std::size_t best = functions.size();
        std::size_t best_fresh = 0;
        for (std::size_t i = 0; i < functions.size(); ++i) {
            if (used[i]) continue;
            std::size_t fresh = new_participants(functions[i], bound).size();
            if (best == functions.size() || fresh < best_fresh) {
                best = i;
                best_fresh = fresh;
            }
        }
        used[best] = true;
        out.push_back(functions[best]);
        std::set<int> refs;
        collect_participants(functions[best], refs);
        bound.insert(refs.begin(), refs.end());
    }
    return out;
}

/// Independent oracle: enumerate every structurally legal completed assignment
/// of ctx's initial assignment and keep those satisfying all functions.
inline std::vector<Assignment> brute_force_oracle(const ScenarioContext& ctx,
                                                  const std::vector<LogicalFunction>& functions,
                                                  long guard = 10000000) {
    Assignment a0 = initial_assignment(ctx);
    // completions upper bound: product of per-row non-False counts
    long total = 1;
    for (int p = 0; p < a0.participant_count(); ++p) {
        int choices = 0;
        for (int q = 0; q < a0.position_count(); ++q)
            if (a0.at(p, q) != CellState::False) ++choices;
        if (choices == 0) return {};
        total *= choices;
        if (total > guard) throw TooLarge("assignment space exceeds enumeration guard");
    }
    std::set<int> all;
    for (int p = 0; p < a0.participant_count(); ++p) all.insert(p);
    std::vector<Assignment> completions =
        gen_all_assignments(a0, all, ctx.game_type, ctx.group_capacities);
    std::vector<Assignment> out;
    std::unordered_set<Assignment, Assignment::Hash> seen;
    for (Assignment& a : completions) {
        bool ok = true;
        for (const auto& f : functions)
            if (evaluate(f, a) != Outcome::Satisfied) {
                ok = false;
                break;
            }
        if (ok && seen.insert(a).second) out.push_back(std::move(a));
    }
    return out;
}

}  // namespace arm::engine
