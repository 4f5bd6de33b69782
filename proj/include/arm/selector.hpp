#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "arm/engine.hpp"
#include "arm/facts.hpp"
#include "arm/mentions.hpp"
#include "arm/model.hpp"
#include "arm/parser.hpp"
#include "arm/text.hpp"

namespace arm::selector {

struct EmptyLegitimateSet : DomainError {
    using DomainError::DomainError;
};

enum class BaseType {
    AcceptableSolution,
    CompleteList,
    CouldBeTrue,
    MustBeTrue,
    Substitution,
    ConditionForDetermined,
    Calculation,
    EarliestLatestPosition,
    MaxMinMembers,
};

/// Negation composes with the base type as a polarity flag.
struct QuestionType {
    BaseType base = BaseType::AcceptableSolution;
    bool negated = false;

    bool operator==(const QuestionType&) const = default;
};

inline std::string to_string(QuestionType qt) {
    const char* base = "";
    switch (qt.base) {
        case BaseType::AcceptableSolution: base = "acceptable-solution"; break;
        case BaseType::CompleteList: base = "complete-list"; break;
        case BaseType::CouldBeTrue: base = qt.negated ? "could-be-false" : "could-be-true"; break;
        case BaseType::MustBeTrue: base = qt.negated ? "must-be-false" : "must-be-true"; break;
        case BaseType::Substitution: base = "substitution"; break;
        case BaseType::ConditionForDetermined: base = "condition-for-determined"; break;
        case BaseType::Calculation: base = "calculation"; break;
        case BaseType::EarliestLatestPosition: base = "earliest-latest-position"; break;
        case BaseType::MaxMinMembers: base = "max-min-members"; break;
    }
    if (qt.negated &&
        (qt.base != BaseType::CouldBeTrue && qt.base != BaseType::MustBeTrue))
        return std::string("negated-") + base;
    return base;
}

/// Keyword dispatch over the question stem (hypothesis clause already split
/// off by the caller).
inline QuestionType classify_question(const std::string& stem) {
    std::string q = text::lower(stem);
    auto has = [&](const char* phrase) { return q.find(phrase) != std::string::npos; };
    auto has_word = [&](const char* word) {
        for (const auto& t : text::tokenize(q))
            if (t.value == word) return true;
        return false;
    };

    QuestionType qt;
    bool neg = has_word("cannot") || has_word("except") || has_word("not");
    if (has("false")) neg = !neg;
    qt.negated = neg;

    if (has("substituted") || has("substitute"))
        qt.base = BaseType::Substitution;
    else if (has("fully and uniquely determined") || has("uniquely determined"))
        qt.base = BaseType::ConditionForDetermined;
    else if (has("how many"))
        qt.base = BaseType::Calculation;
    else if (has("minimum number") || has("maximum number"))
        qt.base = BaseType::MaxMinMembers;
    else if (has("earliest") || has("latest"))
        qt.base = BaseType::EarliestLatestPosition;
    else if (has("complete and accurate list"))
        qt.base = BaseType::CompleteList;
    else if (has("could be the schedule") || has("could be the order") ||
             has("could be the assignment") || has("could be an accurate") ||
             has("acceptable"))
        qt.base = BaseType::AcceptableSolution;
    else if (has("must be") || has("must the"))
        qt.base = BaseType::MustBeTrue;
    else if (has("could be") || has("can be") || has("cannot be"))
        qt.base = BaseType::CouldBeTrue;
    else
        qt.base = BaseType::AcceptableSolution;
    return qt;
}

/// +1 accord, -1 conflict, 0 only for an empty option. a must be completed.
inline int match_assignment(const std::vector<Fact>& facts, const Assignment& a) {
    if (facts.empty()) return 0;
    for (const Fact& f : facts) {
        CellState want = f.state ? CellState::True : CellState::False;
        if (a.at(f.participant, f.position) != want) return -1;
    }
    return 1;
}

/// +1 if all option functions hold on the completed assignment, else -1.
inline int match_function(const std::vector<LogicalFunction>& fns, const Assignment& a) {
    for (const auto& f : fns)
        if (engine::evaluate(f, a) != engine::Outcome::Satisfied) return -1;
    return 1;
}

inline int match_option(const parser::OptionInterpretation& opt, const Assignment& a) {
    if (opt.kind == parser::OptionInterpretation::Kind::FunctionBased)
        return match_function(opt.functions, a);
    return match_assignment(opt.facts, a);
}

/// Everything score_option may need beyond the legitimate set: the scenario,
/// the per-rule parsed functions (for substitution), and deduction knobs.
struct ScoringInput {
    const ScenarioContext* ctx = nullptr;
    Assignment a0;  // initial assignment incl. hypothesis facts
    std::vector<LogicalFunction> functions;  // all active functions
    // parallel to ctx->rules: the functions parsed from each rule sentence
    std::vector<std::vector<LogicalFunction>> rule_functions;
    std::vector<LogicalFunction> hypothesis_functions;
    std::string question;  // full stem text
    long node_cap = engine::kDefaultNodeCap;
};

namespace detail {

inline std::optional<int> first_number(const std::string& s) {
    for (const auto& t : text::tokenize(s)) {
        if (auto n = text::parse_number(t.value)) return n;
        if (auto n = text::parse_ordinal(t.value); n && *n > 0) return n;
    }
    return std::nullopt;
}

inline std::optional<Mention> first_mention(const std::string& s, const ScenarioContext& ctx,
                                            EntityKind kind) {
    for (const Mention& m : find_mentions(s, ctx))
        if (m.kind == kind) return m;
    return std::nullopt;
}

inline std::vector<Assignment> rededuce(const ScoringInput& in,
                                        std::vector<LogicalFunction> fns) {
    fns = engine::rank_functions(fns);
    return engine::construct_tree(in.a0, fns, in.ctx->game_type, in.ctx->group_capacities,
                                  in.node_cap)
        .legitimate;
}

inline bool same_set(const std::vector<Assignment>& a, const std::vector<Assignment>& b) {
    if (a.size() != b.size()) return false;
    std::unordered_set<Assignment, Assignment::Hash> sa(a.begin(), a.end());
    for (const Assignment& x : b)
        if (!sa.count(x)) return false;
    return true;
}

/// Token overlap between a rule sentence and the question stem, used to find
/// the rule a substitution question quotes.
inline int token_overlap(const std::string& rule, const std::string& stem) {
    std::unordered_set<std::string> stem_words;
    for (const auto& t : text::tokenize(text::lower(stem))) stem_words.insert(t.value);
    int n = 0;
    for (const auto& t : text::tokenize(text::lower(rule)))
        if (t.value.size() > 2 && stem_words.count(t.value)) ++n;
    return n;
}

inline std::vector<LogicalFunction> option_functions(const parser::OptionInterpretation& opt) {
    if (opt.kind == parser::OptionInterpretation::Kind::FunctionBased) return opt.functions;
    std::vector<LogicalFunction> fns;
    for (const Fact& f : opt.facts)
        fns.push_back(LogicalFunction{
            ToFn{f.participant, f.position, f.state ? Polarity::Positive : Polarity::Negated}});
    return fns;
}

}  // namespace detail

/// Appendix-style scoring: sum rule for must-questions, max rule for
/// could-questions, negated absolute differences for the numeric types,
/// re-deduction for substitution and determined-solution questions. The
/// negation flag negates the base score so argmax flips to argmin.
inline double score_option(const parser::OptionInterpretation& opt,
                           const std::string& option_text,
                           const std::vector<Assignment>& legitimate, QuestionType qt,
                           const ScoringInput& in, std::vector<int>* detail_out = nullptr) {
    if (legitimate.empty()) throw EmptyLegitimateSet("no legitimate assignment to score against");

    std::vector<int> detail(legitimate.size(), 0);
    for (std::size_t i = 0; i < legitimate.size(); ++i)
        detail[i] = match_option(opt, legitimate[i]);
    if (detail_out) *detail_out = detail;

    double score = 0;
    switch (qt.base) {
        case BaseType::MustBeTrue: {
            for (int d : detail) score += d;
            break;
        }
        case BaseType::CouldBeTrue:
        case BaseType::AcceptableSolution:
        case BaseType::CompleteList: {
            score = *std::max_element(detail.begin(), detail.end());
            break;
        }
        case BaseType::MaxMinMembers: {
            auto pos = detail::first_mention(in.question, *in.ctx, EntityKind::Position);
            auto n = detail::first_number(option_text);
            if (!pos || !n) {
                score = -1e6;
                break;
            }
            bool want_max = text::lower(in.question).find("maximum") != std::string::npos;
            int extremal = want_max ? 0 : std::numeric_limits<int>::max();
            for (const Assignment& a : legitimate) {
                int count = a.count_in_column(pos->entity_id, CellState::True);
                extremal = want_max ? std::max(extremal, count) : std::min(extremal, count);
            }
            score = -std::abs(extremal - *n);
            break;
        }
        case BaseType::EarliestLatestPosition: {
            auto part = detail::first_mention(in.question, *in.ctx, EntityKind::Participant);
            if (!part) {
                score = -1e6;
                break;
            }
            bool latest = text::lower(in.question).find("latest") != std::string::npos;
            int extremal = latest ? 0 : std::numeric_limits<int>::max();
            for (const Assignment& a : legitimate) {
                auto q = a.true_position(part->entity_id);
                if (!q) continue;
                extremal = latest ? std::max(extremal, *q) : std::min(extremal, *q);
            }
            // option value: a named position's index, else a 1-based slot number
            if (auto m = detail::first_mention(option_text, *in.ctx, EntityKind::Position)) {
                score = -std::abs(extremal - m->entity_id);
            } else if (auto n = detail::first_number(option_text)) {
                score = -std::abs((extremal + 1) - *n);
            } else {
                score = -1e6;
            }
            break;
        }
        case BaseType::Calculation: {
            auto n = detail::first_number(option_text);
            if (!n) {
                score = -1e6;
                break;
            }
            int count = 0;
            if (auto pos = detail::first_mention(in.question, *in.ctx, EntityKind::Position)) {
                // distinct participants ever placed there
                std::set<int> seen;
                for (const Assignment& a : legitimate)
                    for (int p = 0; p < a.participant_count(); ++p)
                        if (a.at(p, pos->entity_id) == CellState::True) seen.insert(p);
                count = static_cast<int>(seen.size());
            } else if (auto part =
                           detail::first_mention(in.question, *in.ctx, EntityKind::Participant)) {
                std::set<int> seen;
                for (const Assignment& a : legitimate)
                    if (auto q = a.true_position(part->entity_id)) seen.insert(*q);
                count = static_cast<int>(seen.size());
            } else {
                score = -1e6;
                break;
            }
            score = -std::abs(count - *n);
            break;
        }
        case BaseType::Substitution: {
            // the question quotes the rule to replace: highest token overlap wins
            if (in.ctx->rules.empty() ||
                opt.kind != parser::OptionInterpretation::Kind::FunctionBased) {
                score = -1;
                break;
            }
            std::size_t target = 0;
            int best = -1;
            for (std::size_t i = 0; i < in.ctx->rules.size(); ++i) {
                int ov = detail::token_overlap(in.ctx->rules[i], in.question);
                if (ov > best) {
                    best = ov;
                    target = i;
                }
            }
            std::vector<LogicalFunction> fns;
            for (std::size_t i = 0; i < in.rule_functions.size(); ++i) {
                if (i == target) continue;
                fns.insert(fns.end(), in.rule_functions[i].begin(), in.rule_functions[i].end());
            }
            fns.insert(fns.end(), in.hypothesis_functions.begin(),
                       in.hypothesis_functions.end());
            fns.insert(fns.end(), opt.functions.begin(), opt.functions.end());
            score = detail::same_set(detail::rededuce(in, std::move(fns)), legitimate) ? 1 : -1;
            break;
        }
        case BaseType::ConditionForDetermined: {
            std::vector<LogicalFunction> fns = in.functions;
            auto extra = detail::option_functions(opt);
            if (extra.empty()) {
                score = -1;
                break;
            }
            fns.insert(fns.end(), extra.begin(), extra.end());
            score = detail::rededuce(in, std::move(fns)).size() == 1 ? 1 : -1;
            break;
        }
    }
    if (qt.negated) score = -score;
    return score;
}

/// An answer option with its interpretation and matching score.
struct ScoredOption {
    int index = 0;
    parser::OptionInterpretation interpretation;
    double score = 0;
    std::vector<int> detail;  // per-assignment match vector
};

/// Argmax of score; ties break to the lowest index.
inline int select_answer(const std::vector<ScoredOption>& scored) {
    int best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i)
        if (scored[i].score > scored[best].score) best = static_cast<int>(i);
    return best;
}

}  // namespace arm::selector
