#include "doctest.h"

#include "arm/model.hpp"

using namespace arm;

namespace {

ScenarioContext committee_ctx() {
    ScenarioContext ctx;
    ctx.game_type = GameType::Grouping;
    const char* people[] = {"A", "B", "C", "D", "E", "F", "G"};
    for (int i = 0; i < 7; ++i)
        ctx.participants.push_back({i, people[i], EntityKind::Participant});
    ctx.positions.push_back({0, "X", EntityKind::Position});
    ctx.positions.push_back({1, "Y", EntityKind::Position});
    return ctx;
}

}  // namespace

TEST_CASE("initial_assignment carries fact cells, rest Unknown") {
    ScenarioContext ctx = committee_ctx();
    ctx.facts.push_back({3, 0, true});  // D on X
    ctx.facts.push_back({5, 0, true});  // F on X
    Assignment a = initial_assignment(ctx);
    CHECK(a.participant_count() == 7);
    CHECK(a.position_count() == 2);
    CHECK(a.at(3, 0) == CellState::True);
    CHECK(a.at(5, 0) == CellState::True);
    int unknown = 0;
    for (int p = 0; p < 7; ++p)
        for (int q = 0; q < 2; ++q)
            if (a.at(p, q) == CellState::Unknown) ++unknown;
    CHECK(unknown == 12);
}

TEST_CASE("initial_assignment with no facts is all Unknown") {
    ScenarioContext ctx = committee_ctx();
    Assignment a = initial_assignment(ctx);
    for (int p = 0; p < 7; ++p)
        for (int q = 0; q < 2; ++q) CHECK(a.at(p, q) == CellState::Unknown);
}

TEST_CASE("conflicting facts on one cell throw") {
    ScenarioContext ctx = committee_ctx();
    ctx.facts.push_back({0, 0, true});
    ctx.facts.push_back({0, 0, false});
    CHECK_THROWS_AS(initial_assignment(ctx), ConflictingFacts);
}

TEST_CASE("duplicate identical facts are fine") {
    ScenarioContext ctx = committee_ctx();
    ctx.facts.push_back({0, 0, true});
    ctx.facts.push_back({0, 0, true});
    Assignment a = initial_assignment(ctx);
    CHECK(a.at(0, 0) == CellState::True);
}

TEST_CASE("initial_assignment is deterministic and unknown count matches") {
    ScenarioContext ctx = committee_ctx();
    ctx.facts.push_back({1, 1, false});
    ctx.facts.push_back({2, 0, true});
    Assignment a = initial_assignment(ctx);
    Assignment b = initial_assignment(ctx);
    CHECK(a == b);
    int unknown = 0;
    for (int p = 0; p < 7; ++p)
        for (int q = 0; q < 2; ++q)
            if (a.at(p, q) == CellState::Unknown) ++unknown;
    CHECK(unknown == 7 * 2 - 2);
}

TEST_CASE("assignment equality and hashing are cell-wise") {
    Assignment a(2, 2), b(2, 2);
    CHECK(a == b);
    CHECK(Assignment::Hash{}(a) == Assignment::Hash{}(b));
    a.set(0, 1, CellState::True);
    CHECK(a != b);
}
