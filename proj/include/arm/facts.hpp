#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "arm/mentions.hpp"
#include "arm/model.hpp"
#include "arm/text.hpp"

namespace arm::extractor {

struct UnresolvedEntity : DomainError {
    using DomainError::DomainError;
};

namespace detail {

inline bool is_negation_token(const std::string& w) {
    std::string l = text::lower(w);
    if (l == "not" || l == "cannot" || l == "never") return true;
    return l.size() > 3 && l.compare(l.size() - 3, 3, "n't") == 0;
}

inline const std::unordered_set<std::string>& position_nouns() {
    static const std::unordered_set<std::string> nouns = {
        "day",  "slot", "position", "space", "week",  "spot",  "place", "rank",
        "chair", "shelf", "stop",   "stage", "month", "year",  "hour",  "floor",
        "lane", "seat", "room",     "group", "committee", "team", "session",
    };
    return nouns;
}

/// "the second day" / "day 2" / "slot 3" -> position id by index when the
/// surface forms themselves do not match. n is 1-based; "last" maps to the
/// final position.
inline std::optional<int> ordinal_position(const std::vector<text::Token>& tokens, std::size_t i,
                                           const ScenarioContext& ctx) {
    const std::size_t npos = ctx.positions.size();
    std::optional<int> n = text::parse_ordinal(tokens[i].value);
    if (!n) n = text::parse_number(tokens[i].value);
    if (!n) return std::nullopt;
    bool noun_near = false;
    if (i + 1 < tokens.size() && position_nouns().count(text::lower(tokens[i + 1].value)))
        noun_near = true;
    if (i > 0 && position_nouns().count(text::lower(tokens[i - 1].value))) noun_near = true;
    if (!noun_near) return std::nullopt;
    if (*n == -1) return static_cast<int>(npos) - 1;
    if (*n >= 1 && *n <= static_cast<int>(npos)) return *n - 1;
    return std::nullopt;
}

inline const std::unordered_set<std::string>& capitalized_stopwords() {
    static const std::unordered_set<std::string> words = {
        "the", "a", "an", "if", "then", "each", "every", "both", "neither", "either",
        "exactly", "no", "all", "some", "of", "and", "or", "nor", "on", "in", "at",
        "is", "are", "was", "were", "does", "do", "not", "which", "what", "who",
        "whom", "when", "where", "must", "cannot", "can", "could", "would", "should",
        "will", "there", "this", "that", "these", "those", "it", "they", "he", "she",
        "but", "for", "with", "from", "to", "by", "as", "so", "unless", "while",
        "except", "only", "following", "true", "false", "none", "any", "how", "many",
    };
    return words;
}

}  // namespace detail

/// One Fact per (participant, position) pair co-occurring in the sentence:
/// pending participants pair with the next position mention; negation tokens
/// flip the state to False. In strict mode an unmatched capitalized name
/// raises UnresolvedEntity.
inline std::vector<Fact> parse_fact(const std::string& sentence, const ScenarioContext& ctx,
                                    bool strict = true) {
    auto tokens = text::tokenize(sentence);
    auto mentions = find_mentions(tokens, ctx);

    // inject pseudo-mentions for "the second day" style position references
    std::vector<bool> covered(tokens.size(), false);
    for (const Mention& m : mentions)
        for (std::size_t j = m.tok_begin; j < m.tok_end; ++j) covered[j] = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (covered[i]) continue;
        if (auto pos = detail::ordinal_position(tokens, i, ctx)) {
            mentions.push_back({*pos, EntityKind::Position, i, i + 1});
            covered[i] = true;
        }
    }
    std::sort(mentions.begin(), mentions.end(),
              [](const Mention& a, const Mention& b) { return a.tok_begin < b.tok_begin; });

    if (strict) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (covered[i] || i == 0) continue;
            const std::string& w = tokens[i].value;
            if (!text::starts_with_upper(w)) continue;
            if (detail::capitalized_stopwords().count(text::lower(w))) continue;
            if (text::parse_number(w) || text::parse_ordinal(w)) continue;
            throw UnresolvedEntity("name '" + w + "' matches no extracted entity in: " +
                                   sentence);
        }
    }

    std::vector<Fact> facts;
    std::vector<int> pending;       // participants awaiting a position
    std::vector<int> last_group;    // participants paired with the previous position
    bool negated = false;
    bool paired_since_participant = false;

    std::size_t mi = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (mi < mentions.size() && mentions[mi].tok_begin == i) {
            const Mention& m = mentions[mi++];
            if (m.kind == EntityKind::Participant) {
                if (paired_since_participant) {
                    pending.clear();
                    negated = false;
                    paired_since_participant = false;
                }
                pending.push_back(m.entity_id);
            } else {
                const std::vector<int>& group = pending.empty() ? last_group : pending;
                for (int p : group) facts.push_back({p, m.entity_id, !negated});
                if (!pending.empty()) last_group = pending;
                pending.clear();
                paired_since_participant = true;
            }
            i = m.tok_end - 1;
            continue;
        }
        if (detail::is_negation_token(tokens[i].value)) negated = true;
    }
    return facts;
}

}  // namespace arm::extractor
