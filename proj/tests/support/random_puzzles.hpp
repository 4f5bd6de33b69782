#pragma once

// Test-only generator of small structured puzzles (no text): used to check
// the deduction tree against exhaustive enumeration.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "arm/model.hpp"

namespace arm::testing {

struct RandomPuzzle {
    ScenarioContext ctx;
    std::vector<LogicalFunction> functions;
};

inline int pick(std::mt19937& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
}

inline LogicalFunction random_atom(std::mt19937& rng, int nparts, int npos) {
    if (pick(rng, 0, 1) == 0 && nparts >= 2) {
        int p1 = pick(rng, 0, nparts - 1);
        int p2 = pick(rng, 0, nparts - 1);
        while (p2 == p1) p2 = pick(rng, 0, nparts - 1);
        auto kind = static_cast<RelKind>(pick(rng, 0, 8));
        return LogicalFunction{Relational{kind, p1, p2}};
    }
    Polarity pol = pick(rng, 0, 3) == 0 ? Polarity::Negated : Polarity::Positive;
    return LogicalFunction{ToFn{pick(rng, 0, nparts - 1), pick(rng, 0, npos - 1), pol}};
}

inline LogicalFunction random_function(std::mt19937& rng, int nparts, int npos) {
    int roll = pick(rng, 0, 9);
    if (roll < 4) return random_atom(rng, nparts, npos);
    if (roll < 5) {
        auto kind = pick(rng, 0, 1) == 0 ? CountKind::FirstPos : CountKind::LastPos;
        return LogicalFunction{Counting{kind, pick(rng, 0, nparts - 1), pick(rng, 1, npos)}};
    }
    Compositional c;
    c.kind = static_cast<CompKind>(pick(rng, 0, 5));
    int n1 = pick(rng, 1, 2), n2 = pick(rng, 1, 2);
    for (int i = 0; i < n1; ++i) c.set1.push_back(random_atom(rng, nparts, npos));
    for (int i = 0; i < n2; ++i) c.set2.push_back(random_atom(rng, nparts, npos));
    return LogicalFunction{std::move(c)};
}

inline RandomPuzzle make_random_puzzle(std::mt19937& rng) {
    RandomPuzzle pz;
    int nparts = pick(rng, 2, 5);
    int npos = pick(rng, 2, 5);
    pz.ctx.game_type = static_cast<GameType>(pick(rng, 0, 2));
    for (int p = 0; p < nparts; ++p)
        pz.ctx.participants.push_back({p, "P" + std::to_string(p), EntityKind::Participant});
    for (int q = 0; q < npos; ++q)
        pz.ctx.positions.push_back({q, "S" + std::to_string(q), EntityKind::Position});
    if (pz.ctx.game_type == GameType::Grouping && pick(rng, 0, 1) == 0) {
        int cap = pick(rng, 1, nparts);
        for (int q = 0; q < npos; ++q) pz.ctx.group_capacities[q] = cap;
    }
    int nfacts = pick(rng, 0, 2);
    std::set<std::pair<int, int>> cells;
    for (int i = 0; i < nfacts; ++i) {
        int p = pick(rng, 0, nparts - 1), q = pick(rng, 0, npos - 1);
        if (!cells.insert({p, q}).second) continue;
        pz.ctx.facts.push_back({p, q, pick(rng, 0, 2) != 0});
    }
    int nfuncs = pick(rng, 0, 4);
    for (int i = 0; i < nfuncs; ++i)
        pz.functions.push_back(random_function(rng, nparts, npos));
    return pz;
}

}  // namespace arm::testing
