// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Fixture files are located through the ARM_FIXTURE_DIR environment variable
// (set by CMake to <source>/tests/fixtures). An optional ARM_DATASET variable
// may point to a full benchmark dataset; when present the evaluation accuracy
// must beat the 20% random-guess baseline.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "arm/engine.hpp"
#include "arm/extractor.hpp"
#include "arm/harness.hpp"
#include "arm/lexicon.hpp"
#include "arm/parser.hpp"
#include "arm/selector.hpp"

#include "support/random_puzzles.hpp"

using namespace arm;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture_dir() {
    const char* dir = std::getenv("ARM_FIXTURE_DIR");
    return dir ? dir : "tests/fixtures";
}

bool same_set(const std::vector<Assignment>& a, const std::vector<Assignment>& b) {
    if (a.size() != b.size()) return false;
    std::unordered_set<Assignment, Assignment::Hash> sa(a.begin(), a.end());
    for (const Assignment& x : b)
        if (!sa.count(x)) return false;
    return true;
}

ScenarioContext two_by_two(GameType gt) {
    ScenarioContext ctx;
    ctx.game_type = gt;
    ctx.participants = {{0, "Ann", EntityKind::Participant}, {1, "Bob", EntityKind::Participant}};
    ctx.positions = {{0, "X", EntityKind::Position}, {1, "Y", EntityKind::Position}};
    return ctx;
}

// --- criterion 1: deduction tree matches exhaustive enumeration ------------

bool check_oracle_equivalence(std::string& note) {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20260823u);
    const int trials = 500;
    for (int i = 0; i < trials; ++i) {
        auto pz = arm::testing::make_random_puzzle(rng);
        Assignment a0 = initial_assignment(pz.ctx);
        auto tree = engine::construct_tree(a0, engine::rank_functions(pz.functions),
                                           pz.ctx.game_type, pz.ctx.group_capacities);
        auto oracle = engine::brute_force_oracle(pz.ctx, pz.functions);
        if (tree.capped) {
            note = "trial " + std::to_string(i) + " hit the node cap";
            return false;
        }
        if (!same_set(tree.legitimate, oracle)) {
            note = "trial " + std::to_string(i) + " diverged from the oracle";
            return false;
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << trials << " random puzzles in " << secs << "s";
    note = os.str();
    return secs < 60.0;
}

// --- criterion 2: conditional rules prune exactly the violating branch -----

bool check_conditional_pruning(std::string& note) {
    ScenarioContext ctx = two_by_two(GameType::Assignment);
    Compositional c;
    c.kind = CompKind::IfThen;
    c.set1 = {LogicalFunction{ToFn{0, 0, Polarity::Positive}}};  // Ann on X
    c.set2 = {LogicalFunction{ToFn{1, 1, Polarity::Positive}}};  // Bob on Y
    LogicalFunction rule{c};

    // Expand both fresh participants over both positions: four branches.
    int violated = 0, kept = 0;
    bool bad_branch_pruned = false;
    for (int pa = 0; pa < 2; ++pa) {
        for (int pb = 0; pb < 2; ++pb) {
            Assignment a = initial_assignment(ctx);
            a.set(0, pa, CellState::True);
            a.set(0, 1 - pa, CellState::False);
            a.set(1, pb, CellState::True);
            a.set(1, 1 - pb, CellState::False);
            if (engine::evaluate(rule, a) == engine::Outcome::Violated) {
                ++violated;
                if (pa == 0 && pb != 1) bad_branch_pruned = true;  // Ann on X, Bob not on Y
            } else {
                ++kept;
            }
        }
    }
    auto tree =
        engine::construct_tree(initial_assignment(ctx), {rule}, ctx.game_type, {});
    auto oracle = engine::brute_force_oracle(ctx, {rule});
    note = std::to_string(kept) + " of 4 branches kept, " +
           std::to_string(tree.legitimate.size()) + " legitimate";
    return violated == 1 && kept == 3 && bad_branch_pruned && tree.legitimate.size() == 3 &&
           same_set(tree.legitimate, oracle);
}

// --- criterion 3: every trigger lexicon row parses to its kind -------------

std::string fill_placeholders(std::string phrase) {
    auto n = phrase.find("(number)");
    if (n != std::string::npos) phrase.replace(n, 8, "two");
    return phrase;
}

std::string template_sentence(parser::TriggerKind kind, const std::string& phrase) {
    using parser::TriggerKind;
    switch (kind) {
        case TriggerKind::Before:
        case TriggerKind::After:
        case TriggerKind::Last:
        case TriggerKind::Next:
        case TriggerKind::Adjacent:
        case TriggerKind::Different:
        case TriggerKind::Same:
        case TriggerKind::BeforeEqual:
        case TriggerKind::AfterEqual:
            return "Ann is " + phrase + " Bob.";
        case TriggerKind::To:
            return "Ann " + phrase + " X.";
        case TriggerKind::IfThen:
            return "If Ann serves on X, then Bob serves on Y.";
        case TriggerKind::IFF:
            return "Ann serves on X if and only if Bob serves on Y.";
        case TriggerKind::And:
            return "Ann serves on X and Bob serves on Y.";
        case TriggerKind::Or:
            return "Ann serves on X or Bob serves on Y.";
        case TriggerKind::Unless:
            return "Ann serves on X unless Bob serves on Y.";
        case TriggerKind::Neither:
            return "Neither Ann nor Bob serves on X.";
        case TriggerKind::FirstPos:
        case TriggerKind::LastPos:
            return "Ann is " + fill_placeholders(phrase) + " people placed.";
    }
    return "";
}

bool parses_to_kind(const std::vector<LogicalFunction>& fns, parser::TriggerKind kind) {
    using parser::TriggerKind;
    for (const LogicalFunction& f : fns) {
        if (kind == TriggerKind::To && std::holds_alternative<ToFn>(f.node)) return true;
        if (const auto* r = std::get_if<Relational>(&f.node)) {
            if ((kind == TriggerKind::Before && r->kind == RelKind::Before) ||
                (kind == TriggerKind::After && r->kind == RelKind::After) ||
                (kind == TriggerKind::Last && r->kind == RelKind::Last) ||
                (kind == TriggerKind::Next && r->kind == RelKind::Next) ||
                (kind == TriggerKind::Adjacent && r->kind == RelKind::Adjacent) ||
                (kind == TriggerKind::Same && r->kind == RelKind::Same) ||
                (kind == TriggerKind::Different && r->kind == RelKind::Different) ||
                (kind == TriggerKind::BeforeEqual && r->kind == RelKind::BeforeEqual) ||
                (kind == TriggerKind::AfterEqual && r->kind == RelKind::AfterEqual))
                return true;
        }
        if (const auto* c = std::get_if<Compositional>(&f.node)) {
            if ((kind == TriggerKind::IfThen && c->kind == CompKind::IfThen) ||
                (kind == TriggerKind::IFF && c->kind == CompKind::IFF) ||
                (kind == TriggerKind::And && c->kind == CompKind::And) ||
                (kind == TriggerKind::Or && c->kind == CompKind::Or) ||
                (kind == TriggerKind::Unless && c->kind == CompKind::Unless) ||
                (kind == TriggerKind::Neither && c->kind == CompKind::Neither))
                return true;
        }
        if (const auto* n = std::get_if<Counting>(&f.node)) {
            if ((kind == TriggerKind::FirstPos && n->kind == CountKind::FirstPos) ||
                (kind == TriggerKind::LastPos && n->kind == CountKind::LastPos))
                return true;
        }
    }
    return false;
}

bool check_lexicon_coverage(std::string& note) {
    auto lex = parser::TriggerLexicon::defaults();
    ScenarioContext ctx = two_by_two(GameType::Grouping);
    int covered = 0;
    for (const auto& [kind, phrase] : lex.entries) {
        std::string sentence = template_sentence(kind, phrase);
        auto fns = parser::parse_rule(sentence, ctx, lex);
        if (parses_to_kind(fns, kind)) {
            ++covered;
        } else {
            note = "row '" + phrase + "' did not parse to " + parser::to_string(kind);
            return false;
        }
    }

    // Named mappings that must hold exactly.
    ScenarioContext named = two_by_two(GameType::Grouping);
    named.participants.push_back({2, "G", EntityKind::Participant});
    auto before1 = parser::parse_rule("Ann is before Bob.", named, lex);
    auto before2 = parser::parse_rule("Ann is earlier than Bob.", named, lex);
    LogicalFunction want_before{Relational{RelKind::Before, 0, 1}};
    if (before1.size() != 1 || !(before1[0] == want_before) || before2.size() != 1 ||
        !(before2[0] == want_before)) {
        note = "before/earlier did not map to the ordering relation";
        return false;
    }

    auto ifthen = parser::parse_rule("If Ann serves on X, then Bob serves on Y.", named, lex);
    Compositional want_c;
    want_c.kind = CompKind::IfThen;
    want_c.set1 = {LogicalFunction{ToFn{0, 0, Polarity::Positive}}};
    want_c.set2 = {LogicalFunction{ToFn{1, 1, Polarity::Positive}}};
    if (ifthen.size() != 1 || !(ifthen[0] == LogicalFunction{want_c})) {
        note = "if/then sentence did not build the expected conditional";
        return false;
    }

    auto sodoes = parser::parse_rule("If G serves on X, so does Bob.", named, lex);
    Compositional want_s;
    want_s.kind = CompKind::IfThen;
    want_s.set1 = {LogicalFunction{ToFn{2, 0, Polarity::Positive}}};
    want_s.set2 = {LogicalFunction{ToFn{1, 0, Polarity::Positive}}};
    if (sodoes.size() != 1 || !(sodoes[0] == LogicalFunction{want_s})) {
        note = "'so does' sentence did not clone the antecedent position";
        return false;
    }

    note = std::to_string(covered) + " lexicon rows covered";
    return true;
}

// --- criterion 4: scoring rules on a hand-enumerated legitimate set --------

bool check_scoring_rules(std::string& note) {
    ScenarioContext ctx = two_by_two(GameType::Grouping);
    auto lex = parser::TriggerLexicon::defaults();

    // Hand-enumerated: Ann pinned to X, Bob free.
    auto make = [&](int bob_pos) {
        Assignment a = initial_assignment(ctx);
        a.set(0, 0, CellState::True);
        a.set(0, 1, CellState::False);
        a.set(1, bob_pos, CellState::True);
        a.set(1, 1 - bob_pos, CellState::False);
        return a;
    };
    std::vector<Assignment> legit = {make(0), make(1)};

    selector::ScoringInput in;
    in.ctx = &ctx;
    in.a0 = initial_assignment(ctx);
    in.question = "Which one of the following must be true?";

    auto score = [&](const std::string& option, selector::QuestionType qt) {
        auto interp = parser::parse_option(option, ctx, lex);
        return selector::score_option(interp, option, legit, qt, in);
    };

    selector::QuestionType must{selector::BaseType::MustBeTrue, false};
    selector::QuestionType could{selector::BaseType::CouldBeTrue, false};
    selector::QuestionType must_false{selector::BaseType::MustBeTrue, true};

    // Sum rule: +1 per matching legitimate assignment, -1 per mismatch.
    bool sum_ok = score("Ann serves on X", must) == 2.0 &&
                  score("Bob serves on X", must) == 0.0 &&
                  score("Ann serves on Y", must) == -2.0;
    // Max rule: possible anywhere scores +1, impossible scores -1.
    bool max_ok = score("Bob serves on X", could) == 1.0 &&
                  score("Ann serves on X", could) == 1.0 &&
                  score("Ann serves on Y", could) == -1.0;
    // Negation flips the sign, so the argmax lands on the impossible option.
    std::vector<selector::ScoredOption> neg;
    std::vector<std::string> options = {"Ann serves on X", "Bob serves on X", "Ann serves on Y"};
    for (int i = 0; i < 3; ++i) {
        selector::ScoredOption so;
        so.index = i;
        so.interpretation = parser::parse_option(options[i], ctx, lex);
        so.score = selector::score_option(so.interpretation, options[i], legit, must_false, in);
        neg.push_back(so);
    }
    bool neg_ok = neg[2].score == 2.0 && selector::select_answer(neg) == 2;

    note = "sum/max/negation rules verified on 2 hand-built assignments";
    return sum_ok && max_ok && neg_ok;
}

// --- criterion 5: authored end-to-end puzzles -------------------------------

bool check_end_to_end(std::string& note) {
    auto records = harness::load_dataset(fixture_dir() + "/puzzles.json");
    auto t0 = std::chrono::steady_clock::now();
    auto report = harness::evaluate(records);
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << report.correct << "/" << report.total << " in " << secs << "s";
    note = os.str();
    return report.total == 20 && report.correct == report.total && secs < 10.0;
}

// --- criterion 6: entity extraction fixtures (+ optional full dataset) -----

bool check_extraction(std::string& note) {
    std::string path = fixture_dir() + "/extraction.json";
    std::ifstream inf(path);
    if (!inf) {
        note = "cannot open " + path;
        return false;
    }
    json doc;
    inf >> doc;
    int total = 0, matched = 0;
    for (const json& p : doc["passages"]) {
        ++total;
        std::vector<std::string> expected = p["participants"].get<std::vector<std::string>>();
        try {
            auto got = extractor::extract_entity_groups(p["passage"].get<std::string>());
            std::vector<std::string> surfaces;
            for (const Entity& e : got.participants) surfaces.push_back(e.surface);
            if (surfaces == expected) ++matched;
        } catch (const extractor::ExtractionFailed&) {
        }
    }
    double rate = total ? static_cast<double>(matched) / total : 0.0;
    std::ostringstream os;
    os << matched << "/" << total << " exact participant lists";

    const char* dataset = std::getenv("ARM_DATASET");
    if (dataset && *dataset) {
        auto records = harness::load_dataset(dataset);
        harness::EvalOptions opt;
        opt.jobs = 8;
        auto report = harness::evaluate(records, opt);
        os << "; dataset accuracy " << report.accuracy;
        note = os.str();
        return total == 50 && rate >= 0.90 && report.accuracy > 0.20;
    }
    os << "; no dataset provided";
    note = os.str();
    return total == 50 && rate >= 0.90;
}

// --- criterion 7: parallel evaluation is byte-identical to serial ----------

bool check_parallel_determinism(std::string& note) {
    auto records = harness::load_dataset(fixture_dir() + "/puzzles.json");
    harness::EvalOptions serial;
    serial.jobs = 1;
    serial.want_trace = true;
    harness::EvalOptions parallel;
    parallel.jobs = 8;
    parallel.want_trace = true;
    auto a = harness::evaluate(records, serial);
    auto b = harness::evaluate(records, parallel);
    std::string ja = harness::to_json(a).dump();
    std::string jb = harness::to_json(b).dump();
    bool traces_equal = a.traces == b.traces;
    note = "report " + std::to_string(ja.size()) + " bytes";
    return ja == jb && traces_equal;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*run)(std::string&);
    };
    const Criterion criteria[] = {
        {"deduction tree matches the exhaustive oracle", check_oracle_equivalence},
        {"conditional rules prune exactly the violating branch", check_conditional_pruning},
        {"trigger lexicon rows all parse to their kinds", check_lexicon_coverage},
        {"scoring rules on a hand-enumerated legitimate set", check_scoring_rules},
        {"authored end-to-end puzzles all answered correctly", check_end_to_end},
        {"entity extraction fixtures meet the match threshold", check_extraction},
        {"parallel evaluation is byte-identical to serial", check_parallel_determinism},
    };

    bool all = true;
    int i = 0;
    for (const Criterion& c : criteria) {
        ++i;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << " [" << i << "/7] " << c.name
                  << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    }
    return all ? 0 : 1;
}
