#pragma once

#include <string>
#include <vector>

#include "arm/model.hpp"
#include "arm/text.hpp"

namespace arm {

struct Mention {
    int entity_id = -1;
    EntityKind kind = EntityKind::Participant;
    std::size_t tok_begin = 0;  // token index range [tok_begin, tok_end)
    std::size_t tok_end = 0;
};

namespace detail {

/// Entity surface pre-tokenized for matching.
struct SurfacePattern {
    int entity_id;
    EntityKind kind;
    std::vector<std::string> words;  // lowercase
    bool single_letter;              // matched case-sensitively to dodge the article "a"
};

inline std::vector<SurfacePattern> surface_patterns(const std::vector<Entity>& entities,
                                                    EntityKind kind) {
    std::vector<SurfacePattern> out;
    for (const Entity& e : entities) {
        SurfacePattern p;
        p.entity_id = e.id;
        p.kind = kind;
        for (const auto& t : text::tokenize(e.surface)) p.words.push_back(text::lower(t.value));
        p.single_letter = p.words.size() == 1 && p.words[0].size() == 1 &&
                          std::isalpha(static_cast<unsigned char>(p.words[0][0]));
        out.push_back(std::move(p));
    }
    // longest surface first so multi-word surfaces win over prefixes
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.words.size() > b.words.size();
    });
    return out;
}

}  // namespace detail

/// Case-insensitive word-boundary matches of entity surfaces, longest first,
/// non-overlapping, in textual order. Single-letter surfaces must appear
/// uppercase in the text.
inline std::vector<Mention> find_mentions(const std::vector<text::Token>& tokens,
                                          const ScenarioContext& ctx) {
    auto pats = detail::surface_patterns(ctx.participants, EntityKind::Participant);
    auto pos_pats = detail::surface_patterns(ctx.positions, EntityKind::Position);
    pats.insert(pats.end(), pos_pats.begin(), pos_pats.end());
    std::stable_sort(pats.begin(), pats.end(), [](const auto& a, const auto& b) {
        return a.words.size() > b.words.size();
    });

    std::vector<Mention> out;
    std::vector<bool> taken(tokens.size(), false);
    for (const auto& p : pats) {
        if (p.words.empty()) continue;
        for (std::size_t i = 0; i + p.words.size() <= tokens.size(); ++i) {
            bool ok = true;
            for (std::size_t j = 0; j < p.words.size() && ok; ++j) {
                if (taken[i + j] || text::lower(tokens[i + j].value) != p.words[j]) ok = false;
            }
            if (ok && p.single_letter &&
                !std::isupper(static_cast<unsigned char>(tokens[i].value[0])))
                ok = false;
            if (!ok) continue;
            for (std::size_t j = 0; j < p.words.size(); ++j) taken[i + j] = true;
            out.push_back({p.entity_id, p.kind, i, i + p.words.size()});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Mention& a, const Mention& b) { return a.tok_begin < b.tok_begin; });
    return out;
}

inline std::vector<Mention> find_mentions(const std::string& sentence,
                                          const ScenarioContext& ctx) {
    return find_mentions(text::tokenize(sentence), ctx);
}

}  // namespace arm
