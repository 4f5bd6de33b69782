#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "arm/facts.hpp"
#include "arm/lexicon.hpp"
#include "arm/mentions.hpp"
#include "arm/model.hpp"
#include "arm/parser.hpp"
#include "arm/text.hpp"

namespace arm::extractor {

struct ExtractionFailed : DomainError {
    using DomainError::DomainError;
};

enum class SentenceRole { LeadIn, Fact, Rule };

inline const char* to_string(SentenceRole r) {
    switch (r) {
        case SentenceRole::LeadIn: return "lead-in";
        case SentenceRole::Fact: return "fact";
        case SentenceRole::Rule: return "rule";
    }
    return "?";
}

namespace detail {

inline const std::vector<std::string>& weekdays() {
    static const std::vector<std::string> days = {"monday", "tuesday",  "wednesday", "thursday",
                                                  "friday", "saturday", "sunday"};
    return days;
}

inline const std::vector<std::string>& months() {
    static const std::vector<std::string> ms = {"january", "february", "march",     "april",
                                                "may",     "june",     "july",      "august",
                                                "september", "october", "november", "december"};
    return ms;
}

inline std::optional<int> sequence_index(const std::vector<std::string>& seq,
                                         const std::string& word) {
    std::string l = text::lower(word);
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i] == l) return static_cast<int>(i);
    return std::nullopt;
}

inline bool is_group_connector(const std::string& w) {
    std::string l = text::lower(w);
    return l == "," || l == "and" || l == "or" || l == "the" || l == "either" || l == "nor" ||
           l == "both";
}

/// A raw extracted entity group: surfaces in order of appearance.
struct Group {
    std::vector<std::string> surfaces;
    std::string head_noun;  // shared trailing noun, e.g. "committee" in "X committee"
};

inline bool known_candidate_word(const std::string& w) {
    // capitalized, not a function word, not a quantity
    if (!text::starts_with_upper(w)) return false;
    if (capitalized_stopwords().count(text::lower(w))) return false;
    if (text::parse_number(w) || text::parse_ordinal(w)) return false;
    return true;
}

/// Enumeration groups in one sentence: runs of candidate names separated only
/// by list connectors (optionally a shared head noun), plus dash-delimited
/// lowercase enumerations and "X through Y" ranges.
inline std::vector<Group> find_groups(const std::string& sentence) {
    auto tokens = text::tokenize(sentence);
    std::vector<Group> groups;
    Group cur;
    bool gap_clean = true;
    std::size_t last_name_end = 0;

    auto close = [&]() {
        if (!cur.surfaces.empty()) groups.push_back(cur);
        cur = Group{};
    };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& w = tokens[i].value;

        // dash-delimited lowercase enumeration: "-- sedan, roadster, van --"
        if (w == "--") {
            std::vector<std::string> names;
            std::size_t j = i + 1;
            bool expect_name = true;
            while (j < tokens.size() && tokens[j].value != "--") {
                const std::string& t = tokens[j].value;
                if (expect_name && std::isalpha(static_cast<unsigned char>(t[0]))) {
                    if (is_group_connector(t)) {
                        ++j;
                        continue;
                    }
                    names.push_back(t);
                    expect_name = false;
                } else if (t == "," || text::lower(t) == "and" || text::lower(t) == "or") {
                    expect_name = true;
                } else {
                    names.clear();
                    break;
                }
                ++j;
            }
            if (names.size() >= 2 && j < tokens.size()) {
                close();
                Group g;
                g.surfaces = names;
                groups.push_back(g);
                i = j;  // skip past the closing dash
                gap_clean = false;
                continue;
            }
        }

        // "Monday through Wednesday" / "1 through 5" ranges
        if (text::lower(w) == "through" && i > 0 && i + 1 < tokens.size()) {
            const std::string& a = tokens[i - 1].value;
            const std::string& b = tokens[i + 1].value;
            for (const auto* seq : {&weekdays(), &months()}) {
                auto ia = sequence_index(*seq, a);
                auto ib = sequence_index(*seq, b);
                if (ia && ib && *ia < *ib) {
                    if (!cur.surfaces.empty() && cur.surfaces.back() == a)
                        cur.surfaces.pop_back();
                    close();
                    Group g;
                    for (int k = *ia; k <= *ib; ++k) {
                        std::string name = (*seq)[k];
                        name[0] = static_cast<char>(std::toupper(name[0]));
                        g.surfaces.push_back(name);
                    }
                    groups.push_back(g);
                    ++i;
                    gap_clean = false;
                    goto next_token;
                }
            }
            {
                auto na = text::parse_number(a);
                auto nb = text::parse_number(b);
                if (na && nb && *na < *nb && i >= 2) {
                    std::string noun = text::lower(tokens[i - 2].value);
                    if (!noun.empty() && noun.back() == 's') noun.pop_back();
                    if (!noun.empty() && std::isalpha(static_cast<unsigned char>(noun[0]))) {
                        close();
                        Group g;
                        for (int k = *na; k <= *nb; ++k)
                            g.surfaces.push_back(noun + " " + std::to_string(k));
                        groups.push_back(g);
                        ++i;
                        gap_clean = false;
                        goto next_token;
                    }
                }
            }
        }

        if (known_candidate_word(w) && i > 0) {
            if (cur.surfaces.empty() || gap_clean) {
                cur.surfaces.push_back(w);
            } else {
                close();
                cur.surfaces.push_back(w);
            }
            gap_clean = true;
            last_name_end = i + 1;
            // absorb a shared head noun: "X committee ... Y committee"
            if (i + 1 < tokens.size()) {
                std::string next = text::lower(tokens[i + 1].value);
                if (!next.empty() && std::islower(static_cast<unsigned char>(tokens[i + 1].value[0])) &&
                    std::isalpha(static_cast<unsigned char>(next[0])) &&
                    (cur.head_noun.empty() || cur.head_noun == next)) {
                    if (cur.head_noun.empty() && cur.surfaces.size() == 1) cur.head_noun = next;
                }
            }
            continue;
        }

        if (!cur.surfaces.empty() && i >= last_name_end) {
            bool connector = is_group_connector(w) ||
                             (!cur.head_noun.empty() && text::lower(w) == cur.head_noun);
            if (!connector) gap_clean = false;
        }
    next_token:;
    }
    close();

    // drop stray one-name groups produced by mid-sentence proper nouns when
    // larger groups exist
    std::size_t max_size = 0;
    for (const auto& g : groups) max_size = std::max(max_size, g.surfaces.size());
    if (max_size >= 2) {
        std::vector<Group> kept;
        for (auto& g : groups)
            if (g.surfaces.size() >= 2) kept.push_back(std::move(g));
        if (kept.size() >= 2) return kept;
        // keep singletons only after the first multi-member group
        return groups;
    }
    return groups;
}

inline std::vector<Entity> to_entities(const std::vector<std::string>& surfaces,
                                       EntityKind kind) {
    std::vector<Entity> out;
    std::unordered_set<std::string> seen;
    for (const std::string& s : surfaces) {
        std::string key = text::lower(s);
        if (!seen.insert(key).second) continue;  // unique per kind, case-insensitive
        out.push_back({static_cast<int>(out.size()), s, kind});
    }
    return out;
}

}  // namespace detail

struct ExtractedEntities {
    std::vector<Entity> participants;
    std::vector<Entity> positions;
    std::size_t lead_in_count = 1;  // leading sentences consumed by extraction
};

/// Entity groups from the leading sentence(s): the first group becomes the
/// participants, later groups the positions. Three or more groups fold the
/// trailing groups into a product position space.
inline ExtractedEntities extract_entity_groups(const std::string& passage) {
    auto sentences = text::split_sentences(passage);
    if (sentences.empty()) throw ExtractionFailed("empty passage");

    std::vector<detail::Group> groups;
    std::size_t used = 0;
    for (std::size_t s = 0; s < sentences.size() && s < 2; ++s) {
        auto found = detail::find_groups(sentences[s]);
        for (auto& g : found)
            if (!g.surfaces.empty()) groups.push_back(std::move(g));
        used = s + 1;
        if (groups.size() >= 2) break;
    }
    if (groups.size() < 2)
        throw ExtractionFailed("no two entity groups found in the leading sentences");

    auto participants = detail::to_entities(groups[0].surfaces, EntityKind::Participant);
    std::vector<Entity> positions;
    if (groups.size() == 2) {
        positions = detail::to_entities(groups[1].surfaces, EntityKind::Position);
    } else {
        // product space over the remaining groups, pairwise
        std::vector<std::string> combined = groups[1].surfaces;
        for (std::size_t g = 2; g < groups.size(); ++g) {
            std::vector<std::string> next;
            for (const auto& a : combined)
                for (const auto& b : groups[g].surfaces) next.push_back(a + "/" + b);
            combined = std::move(next);
        }
        positions = detail::to_entities(combined, EntityKind::Position);
    }
    if (participants.empty() || positions.empty())
        throw ExtractionFailed("an entity group collapsed to empty");
    return {std::move(participants), std::move(positions), used};
}

/// Spec-shaped wrapper over extract_entity_groups.
inline std::pair<std::vector<Entity>, std::vector<Entity>> extract_entities(
    const std::string& passage) {
    auto e = extract_entity_groups(passage);
    return {std::move(e.participants), std::move(e.positions)};
}

namespace detail {

inline bool has_rule_trigger(const std::vector<text::Token>& tokens, const parser::TriggerLexicon& lex) {
    static const std::unordered_set<std::string> modals = {"if",   "unless", "must", "cannot",
                                                           "then", "neither", "nor"};
    for (const auto& t : tokens)
        if (modals.count(text::lower(t.value))) return true;
    for (const auto& m : parser::match_triggers(tokens, lex))
        if (parser::is_relational(m.kind) || parser::is_counting(m.kind) ||
            m.kind == parser::TriggerKind::Unless || m.kind == parser::TriggerKind::IFF ||
            m.kind == parser::TriggerKind::Or)
            return true;
    return false;
}

}  // namespace detail

/// Every sentence gets exactly one role. Lead-in enumeration sentences come
/// first; a trigger-free sentence naming a participant and a position is a
/// Fact; everything else defaults to Rule.
inline std::vector<std::pair<std::string, SentenceRole>> classify_sentences(
    const std::string& passage, const ScenarioContext& ctx, std::size_t lead_in_count = 1,
    const parser::TriggerLexicon& lex = parser::TriggerLexicon::defaults()) {
    auto sentences = text::split_sentences(passage);
    std::vector<std::pair<std::string, SentenceRole>> out;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const std::string& sent = sentences[s];
        auto tokens = text::tokenize(sent);
        if (s < lead_in_count) {
            out.emplace_back(sent, SentenceRole::LeadIn);
            continue;
        }
        if (detail::has_rule_trigger(tokens, lex)) {
            out.emplace_back(sent, SentenceRole::Rule);
            continue;
        }
        auto mentions = find_mentions(tokens, ctx);
        bool has_p = false, has_q = false;
        for (const auto& m : mentions) {
            if (m.kind == EntityKind::Participant) has_p = true;
            if (m.kind == EntityKind::Position) has_q = true;
        }
        if (!has_q) {
            // ordinal position references count ("A is tested on the second day")
            std::vector<bool> covered(tokens.size(), false);
            for (const Mention& m : mentions)
                for (std::size_t j = m.tok_begin; j < m.tok_end; ++j) covered[j] = true;
            for (std::size_t i = 0; i < tokens.size() && !has_q; ++i)
                if (!covered[i] && detail::ordinal_position(tokens, i, ctx)) has_q = true;
        }
        out.emplace_back(sent, has_p && has_q ? SentenceRole::Fact : SentenceRole::Rule);
    }
    return out;
}

/// Splits the question's leading conditional clause off. The clause becomes
/// facts when it reads as a determined assignment, or a rule sentence when it
/// carries a constraint trigger. Returns the remaining stem via out-param.
inline std::pair<std::vector<Fact>, std::vector<std::string>> extract_hypothesis(
    const std::string& question, const ScenarioContext& ctx, std::string* stem_out = nullptr,
    const parser::TriggerLexicon& lex = parser::TriggerLexicon::defaults()) {
    std::string q = question;
    std::size_t b = q.find_first_not_of(" \t\n");
    if (b != std::string::npos) q = q.substr(b);
    if (stem_out) *stem_out = q;
    if (q.size() < 3 || text::lower(q.substr(0, 3)) != "if ") return {{}, {}};

    std::size_t cut = q.find(',');
    if (cut == std::string::npos) return {{}, {}};
    std::string clause = q.substr(3, cut - 3);
    std::string stem = q.substr(cut + 1);
    if (stem_out) {
        std::size_t sb = stem.find_first_not_of(" \t\n");
        *stem_out = sb == std::string::npos ? stem : stem.substr(sb);
        if (text::lower(stem_out->substr(0, 5)) == "then ") *stem_out = stem_out->substr(5);
    }

    auto tokens = text::tokenize(clause);
    bool rule_like = false;
    for (const auto& m : parser::match_triggers(tokens, lex))
        if (parser::is_relational(m.kind) || parser::is_counting(m.kind) ||
            parser::is_compositional(m.kind))
            rule_like = true;
    if (rule_like) {
        auto fns = parser::parse_rule(clause, ctx, lex);
        if (!fns.empty()) return {{}, {clause}};
    }
    auto facts = parse_fact(clause, ctx, /*strict=*/false);
    if (facts.empty()) return {{}, {clause}};
    return {facts, {}};
}

namespace detail {

inline bool sequence_like_positions(const std::vector<Entity>& positions) {
    for (const Entity& e : positions) {
        std::string l = text::lower(e.surface);
        bool seq = sequence_index(weekdays(), l).has_value() ||
                   sequence_index(months(), l).has_value();
        if (!seq) {
            // "slot 3" style
            auto toks = text::tokenize(l);
            for (const auto& t : toks)
                if (text::parse_number(t.value)) seq = true;
        }
        if (!seq) return false;
    }
    return !positions.empty();
}

inline bool grouping_nouns_present(const std::string& s) {
    static const std::unordered_set<std::string> nouns = {"committee", "committees", "group",
                                                          "groups",    "team",       "teams",
                                                          "panel",     "panels",     "class",
                                                          "classes"};
    for (const auto& t : text::tokenize(s))
        if (nouns.count(text::lower(t.value))) return true;
    return false;
}

/// "exactly three members each" / "each committee has two members" in the
/// lead-in sets a uniform capacity on every group.
inline std::optional<int> uniform_capacity(const std::string& lead_in) {
    auto tokens = text::tokenize(lead_in);
    bool has_each = false;
    for (const auto& t : tokens)
        if (text::lower(t.value) == "each" || text::lower(t.value) == "every") has_each = true;
    if (!has_each) return std::nullopt;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        auto n = text::parse_number(tokens[i].value);
        if (!n) continue;
        std::string next = text::lower(tokens[i + 1].value);
        if (next == "members" || next == "member" || next == "people" || next == "persons" ||
            next == "participants")
            return n;
    }
    return std::nullopt;
}

}  // namespace detail

/// Full rule-based scenario understanding for one passage.
inline ScenarioContext build_context(const std::string& passage,
                                     const parser::TriggerLexicon& lex =
                                         parser::TriggerLexicon::defaults()) {
    ScenarioContext ctx;
    auto extracted = extract_entity_groups(passage);
    ctx.participants = std::move(extracted.participants);
    ctx.positions = std::move(extracted.positions);

    // game type: product spaces read as assignment games, sequence positions
    // as ordering, group nouns as grouping
    bool product = false;
    for (const Entity& e : ctx.positions)
        if (e.surface.find('/') != std::string::npos) product = true;
    if (product)
        ctx.game_type = GameType::Assignment;
    else if (detail::sequence_like_positions(ctx.positions))
        ctx.game_type = GameType::Ordering;
    else if (detail::grouping_nouns_present(passage))
        ctx.game_type = GameType::Grouping;
    else
        ctx.game_type = ctx.positions.size() < ctx.participants.size() ? GameType::Grouping
                                                                       : GameType::Ordering;

    auto classified = classify_sentences(passage, ctx, extracted.lead_in_count, lex);
    for (const auto& [sentence, role] : classified) {
        switch (role) {
            case SentenceRole::LeadIn: {
                if (ctx.game_type == GameType::Grouping) {
                    if (auto cap = detail::uniform_capacity(sentence))
                        for (const Entity& e : ctx.positions) ctx.group_capacities[e.id] = *cap;
                }
                break;
            }
            case SentenceRole::Fact: {
                auto facts = parse_fact(sentence, ctx, /*strict=*/false);
                if (facts.empty())
                    ctx.rules.push_back(sentence);  // unreadable facts degrade to rules
                else
                    ctx.facts.insert(ctx.facts.end(), facts.begin(), facts.end());
                break;
            }
            case SentenceRole::Rule: ctx.rules.push_back(sentence); break;
        }
    }
    return ctx;
}

}  // namespace arm::extractor
