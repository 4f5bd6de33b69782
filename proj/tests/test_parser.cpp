#include <cstdio>

#include "doctest.h"

#include "arm/parser.hpp"

using namespace arm;
using parser::TriggerKind;
using parser::TriggerLexicon;

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

const Relational* as_rel(const LogicalFunction& f) { return std::get_if<Relational>(&f.node); }
const ToFn* as_to(const LogicalFunction& f) { return std::get_if<ToFn>(&f.node); }
const Compositional* as_comp(const LogicalFunction& f) {
    return std::get_if<Compositional>(&f.node);
}
const Counting* as_count(const LogicalFunction& f) { return std::get_if<Counting>(&f.node); }

}  // namespace

TEST_CASE("match_triggers prefers the longest phrase") {
    auto ms = parser::match_triggers("A is immediately before B.");
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].kind == TriggerKind::Last);
    CHECK(ms[0].trigger_text == "immediately before");

    auto ms2 = parser::match_triggers("A is no earlier than B.");
    REQUIRE(ms2.size() == 1);
    CHECK(ms2[0].kind == TriggerKind::AfterEqual);
}

TEST_CASE("match_triggers binds the number placeholder") {
    auto ms = parser::match_triggers("A is one of the first two students.");
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].kind == TriggerKind::FirstPos);
    CHECK(ms[0].number == 2);
}

TEST_CASE("match_triggers applies light morphology") {
    auto ms = parser::match_triggers("A precedes B.");
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].kind == TriggerKind::Before);
}

TEST_CASE("bind_arguments picks the nearest mentions around the trigger") {
    ScenarioContext ctx = committee_ctx();
    auto ms = parser::match_triggers("A is before B.");
    REQUIRE(ms.size() == 1);
    auto fn = parser::bind_arguments("A is before B.", ms[0], ctx);
    const Relational* r = as_rel(fn);
    REQUIRE(r);
    CHECK(r->kind == RelKind::Before);
    CHECK(r->p1 == 0);
    CHECK(r->p2 == 1);
}

TEST_CASE("parse_rule handles plain relational and counting sentences") {
    ScenarioContext ctx = committee_ctx();
    SUBCASE("earlier maps to Before") {
        auto fns = parser::parse_rule("C is earlier than D.", ctx);
        REQUIRE(fns.size() == 1);
        const Relational* r = as_rel(fns[0]);
        REQUIRE(r);
        CHECK(r->kind == RelKind::Before);
        CHECK(r->p1 == 2);
        CHECK(r->p2 == 3);
    }
    SUBCASE("both relational arguments on the left") {
        auto fns = parser::parse_rule("A and B serve on different committees.", ctx);
        REQUIRE(fns.size() == 1);
        const Relational* r = as_rel(fns[0]);
        REQUIRE(r);
        CHECK(r->kind == RelKind::Different);
        CHECK(r->p1 == 0);
        CHECK(r->p2 == 1);
    }
    SUBCASE("counting with spelled-out bound") {
        auto fns = parser::parse_rule("E is one of the last two choices.", ctx);
        REQUIRE(fns.size() == 1);
        const Counting* c = as_count(fns[0]);
        REQUIRE(c);
        CHECK(c->kind == CountKind::LastPos);
        CHECK(c->participant == 4);
        CHECK(c->m == 2);
    }
}

TEST_CASE("parse_rule builds conditional functions") {
    ScenarioContext ctx = committee_ctx();
    auto fns = parser::parse_rule("If A serves on X, then B serves on Y.", ctx);
    REQUIRE(fns.size() == 1);
    const Compositional* c = as_comp(fns[0]);
    REQUIRE(c);
    CHECK(c->kind == CompKind::IfThen);
    REQUIRE(c->set1.size() == 1);
    REQUIRE(c->set2.size() == 1);
    const ToFn* prem = as_to(c->set1[0]);
    const ToFn* cons = as_to(c->set2[0]);
    REQUIRE(prem);
    REQUIRE(cons);
    CHECK(prem->participant == 0);
    CHECK(prem->position == 0);
    CHECK(cons->participant == 1);
    CHECK(cons->position == 1);
}

TEST_CASE("parse_rule clones the predicate for 'so does' consequents") {
    ScenarioContext ctx = committee_ctx();
    auto fns = parser::parse_rule("If G serves on X, so does B.", ctx);
    REQUIRE(fns.size() == 1);
    const Compositional* c = as_comp(fns[0]);
    REQUIRE(c);
    CHECK(c->kind == CompKind::IfThen);
    REQUIRE(c->set1.size() == 1);
    REQUIRE(c->set2.size() == 1);
    const ToFn* cons = as_to(c->set2[0]);
    REQUIRE(cons);
    CHECK(cons->participant == 1);  // B
    CHECK(cons->position == 0);     // X, copied from the premise
    CHECK(cons->polarity == Polarity::Positive);
}

TEST_CASE("parse_rule covers IFF, Unless, Or, Neither and negated To") {
    ScenarioContext ctx = committee_ctx();
    SUBCASE("if and only if") {
        auto fns = parser::parse_rule("A serves on X if and only if B serves on Y.", ctx);
        REQUIRE(fns.size() == 1);
        const Compositional* c = as_comp(fns[0]);
        REQUIRE(c);
        CHECK(c->kind == CompKind::IFF);
    }
    SUBCASE("unless") {
        auto fns = parser::parse_rule("A serves on X unless B serves on Y.", ctx);
        REQUIRE(fns.size() == 1);
        const Compositional* c = as_comp(fns[0]);
        REQUIRE(c);
        CHECK(c->kind == CompKind::Unless);
        CHECK(c->set1.size() == 1);
        CHECK(c->set2.size() == 1);
    }
    SUBCASE("or between two clauses") {
        auto fns = parser::parse_rule("A serves on X or B serves on Y.", ctx);
        REQUIRE(fns.size() == 1);
        const Compositional* c = as_comp(fns[0]);
        REQUIRE(c);
        CHECK(c->kind == CompKind::Or);
    }
    SUBCASE("neither nor") {
        auto fns = parser::parse_rule("Neither A nor B serves on X.", ctx);
        REQUIRE(fns.size() == 1);
        const Compositional* c = as_comp(fns[0]);
        REQUIRE(c);
        CHECK(c->kind == CompKind::Neither);
        REQUIRE(c->set1.size() == 1);
        REQUIRE(c->set2.size() == 1);
        const ToFn* t1 = as_to(c->set1[0]);
        const ToFn* t2 = as_to(c->set2[0]);
        REQUIRE(t1);
        REQUIRE(t2);
        CHECK(t1->participant == 0);
        CHECK(t2->participant == 1);
        CHECK(t1->position == 0);
        CHECK(t2->position == 0);
    }
    SUBCASE("negated To") {
        auto fns = parser::parse_rule("A does not serve on X.", ctx);
        REQUIRE(fns.size() == 1);
        const ToFn* t = as_to(fns[0]);
        REQUIRE(t);
        CHECK(t->polarity == Polarity::Negated);
        CHECK(t->participant == 0);
        CHECK(t->position == 0);
    }
}

TEST_CASE("coordinated subjects fold into a conjunction") {
    ScenarioContext ctx = committee_ctx();
    auto fns = parser::parse_rule("C and D serve on Y.", ctx);
    REQUIRE(fns.size() == 1);
    const Compositional* c = as_comp(fns[0]);
    REQUIRE(c);
    CHECK(c->kind == CompKind::And);
    REQUIRE(c->set1.size() == 1);
    REQUIRE(c->set2.size() == 1);
    const ToFn* t1 = as_to(c->set1[0]);
    const ToFn* t2 = as_to(c->set2[0]);
    REQUIRE(t1);
    REQUIRE(t2);
    CHECK(t1->participant == 2);
    CHECK(t2->participant == 3);
    CHECK(t1->position == 1);
    CHECK(t2->position == 1);
}

TEST_CASE("parse_rule keeps independent atoms when nothing composes") {
    ScenarioContext ctx = committee_ctx();
    auto fns = parser::parse_rule("A serves on X with B on Y.", ctx);
    REQUIRE(fns.size() == 2);
    const ToFn* t1 = as_to(fns[0]);
    const ToFn* t2 = as_to(fns[1]);
    REQUIRE(t1);
    REQUIRE(t2);
    CHECK(t1->participant == 0);
    CHECK(t1->position == 0);
    CHECK(t2->participant == 1);
    CHECK(t2->position == 1);
}

TEST_CASE("parse_rule reports uncovered sentences with an empty result") {
    ScenarioContext ctx = committee_ctx();
    CHECK(parser::parse_rule("G is popular.", ctx).empty());
    CHECK(parser::parse_rule("There are at least two empty seats.", ctx).empty());
}

TEST_CASE("parse_option dispatches between facts and functions") {
    ScenarioContext ctx = committee_ctx();
    SUBCASE("bare To and And phrasing stays assignment-based") {
        auto opt = parser::parse_option("A and C both serve on the X committee", ctx);
        CHECK(opt.kind == parser::OptionInterpretation::Kind::AssignmentBased);
        REQUIRE(opt.facts.size() == 2);
        CHECK(opt.facts[0] == Fact{0, 0, true});
        CHECK(opt.facts[1] == Fact{2, 0, true});
    }
    SUBCASE("relational phrasing becomes a function") {
        auto opt = parser::parse_option("A is before B", ctx);
        CHECK(opt.kind == parser::OptionInterpretation::Kind::FunctionBased);
        REQUIRE(opt.functions.size() == 1);
        CHECK(as_rel(opt.functions[0]) != nullptr);
    }
    SUBCASE("negated assignment option") {
        auto opt = parser::parse_option("B does not serve on Y", ctx);
        CHECK(opt.kind == parser::OptionInterpretation::Kind::AssignmentBased);
        REQUIRE(opt.facts.size() == 1);
        CHECK(opt.facts[0] == Fact{1, 1, false});
    }
    SUBCASE("unreadable option flagged uncovered") {
        auto opt = parser::parse_option("none of the above", ctx);
        CHECK(opt.uncovered);
    }
}

TEST_CASE("lexicon file round-trip preserves matching behavior") {
    std::string path = "lexicon_roundtrip.tsv";
    TriggerLexicon::defaults().save(path);
    TriggerLexicon loaded = TriggerLexicon::load(path);
    std::remove(path.c_str());

    const char* samples[] = {
        "A is immediately before B.",
        "A is one of the first two students.",
        "If A serves on X, then B serves on Y.",
        "Neither A nor B serves on X.",
        "A is no earlier than B.",
    };
    for (const char* s : samples) {
        auto base = parser::match_triggers(s, TriggerLexicon::defaults());
        auto round = parser::match_triggers(s, loaded);
        REQUIRE(base.size() == round.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(base[i].kind == round[i].kind);
            CHECK(base[i].tok_begin == round[i].tok_begin);
            CHECK(base[i].number == round[i].number);
        }
    }
}

TEST_CASE("lexicon load rejects malformed rows") {
    std::string path = "lexicon_bad.tsv";
    {
        std::ofstream out(path);
        out << "Before before, earlier\n";  // missing TAB
    }
    CHECK_THROWS_AS(TriggerLexicon::load(path), DomainError);
    std::remove(path.c_str());
}

TEST_CASE("mentions honor longest surface and uppercase single letters") {
    ScenarioContext ctx;
    ctx.participants.push_back({0, "A", EntityKind::Participant});
    ctx.participants.push_back({1, "Mary Lou", EntityKind::Participant});
    ctx.positions.push_back({0, "X", EntityKind::Position});
    auto ms = find_mentions("Mary Lou and A arrive, a bit late, at X.", ctx);
    REQUIRE(ms.size() == 3);
    CHECK(ms[0].entity_id == 1);
    CHECK(ms[0].kind == EntityKind::Participant);
    CHECK(ms[1].entity_id == 0);
    CHECK(ms[2].kind == EntityKind::Position);
}

TEST_CASE("parse_fact pairs pending participants with the next position") {
    ScenarioContext ctx = committee_ctx();
    auto facts = extractor::parse_fact("D and F serve on X, and B serves on Y.", ctx);
    REQUIRE(facts.size() == 3);
    CHECK(facts[0] == Fact{3, 0, true});
    CHECK(facts[1] == Fact{5, 0, true});
    CHECK(facts[2] == Fact{1, 1, true});
}

TEST_CASE("parse_fact strict mode rejects unknown names") {
    ScenarioContext ctx = committee_ctx();
    CHECK_THROWS_AS(extractor::parse_fact("Today Theresa serves on X again.", ctx),
                    extractor::UnresolvedEntity);
    CHECK(extractor::parse_fact("Today Theresa serves on X again.", ctx, false).empty());
}

TEST_CASE("parse_fact resolves ordinal position phrases") {
    ScenarioContext ctx;
    ctx.game_type = GameType::Ordering;
    ctx.participants.push_back({0, "Quinn", EntityKind::Participant});
    for (int i = 0; i < 4; ++i)
        ctx.positions.push_back({i, "day " + std::to_string(i + 1), EntityKind::Position});
    auto facts = extractor::parse_fact("Quinn is serviced on the second day.", ctx);
    REQUIRE(facts.size() == 1);
    CHECK(facts[0] == Fact{0, 1, true});
    auto last = extractor::parse_fact("Quinn is serviced on the last day.", ctx);
    REQUIRE(last.size() == 1);
    CHECK(last[0] == Fact{0, 3, true});
}
