#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "arm/facts.hpp"
#include "arm/lexicon.hpp"
#include "arm/mentions.hpp"
#include "arm/model.hpp"
#include "arm/text.hpp"

namespace arm::parser {

struct BindingFailed : DomainError {
    using DomainError::DomainError;
};

struct TriggerMatch {
    TriggerKind kind;
    std::size_t tok_begin = 0;  // token index range [tok_begin, tok_end)
    std::size_t tok_end = 0;
    int number = -1;  // bound cardinal for counting patterns
    std::string trigger_text;
};

namespace detail {

struct AnchorWord {
    std::string word;  // lowercase literal, or empty when number placeholder
    bool number = false;
};

/// Anchor = the phrase text before the first "..." gap; that prefix is what
/// gets matched against tokens.
inline std::vector<AnchorWord> anchor_words(const std::string& phrase) {
    std::vector<AnchorWord> out;
    for (const auto& tok : text::tokenize(phrase)) {
        std::string w = text::lower(tok.value);
        if (w == "." || (!w.empty() && static_cast<unsigned char>(w[0]) == 0xE2))
            break;  // "..." or a UTF-8 ellipsis marks the gap
        if (w == "(") continue;
        if (w == ")") continue;
        if (w == "number") {
            out.push_back({"", true});
            continue;
        }
        out.push_back({w, false});
    }
    return out;
}

inline bool word_matches(const std::string& token_lower, const std::string& trigger_word) {
    if (token_lower == trigger_word) return true;
    // light morphology: precede/precedes/preceded, neighboring etc.
    if (token_lower.size() > trigger_word.size() &&
        token_lower.compare(0, trigger_word.size(), trigger_word) == 0) {
        std::string rest = token_lower.substr(trigger_word.size());
        return rest == "s" || rest == "es" || rest == "d" || rest == "ed" || rest == "ing";
    }
    return false;
}

inline int tie_priority(TriggerKind k) {
    if (is_relational(k) || k == TriggerKind::To) return 0;
    if (is_counting(k)) return 1;
    return 2;
}

}  // namespace detail

/// All lexicon matches in left-to-right order; overlaps resolved longest-first,
/// ties relational > counting > compositional, then leftmost.
inline std::vector<TriggerMatch> match_triggers(const std::vector<text::Token>& tokens,
                                                const TriggerLexicon& lex) {
    struct Cand {
        TriggerKind kind;
        std::size_t b, e;
        int number;
        int prio;
    };
    std::vector<Cand> cands;
    for (const auto& [kind, phrase] : lex.entries) {
        auto anchor = detail::anchor_words(phrase);
        if (anchor.empty()) continue;
        for (std::size_t i = 0; i + anchor.size() <= tokens.size(); ++i) {
            bool ok = true;
            int number = -1;
            for (std::size_t j = 0; j < anchor.size() && ok; ++j) {
                std::string tl = text::lower(tokens[i + j].value);
                if (anchor[j].number) {
                    auto n = text::parse_number(tokens[i + j].value);
                    if (n)
                        number = *n;
                    else
                        ok = false;
                } else if (!detail::word_matches(tl, anchor[j].word)) {
                    ok = false;
                }
            }
            if (ok)
                cands.push_back({kind, i, i + anchor.size(), number, detail::tie_priority(kind)});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        std::size_t la = a.e - a.b, lb = b.e - b.b;
        if (la != lb) return la > lb;
        if (a.prio != b.prio) return a.prio < b.prio;
        if (a.b != b.b) return a.b < b.b;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    std::vector<Cand> accepted;
    for (const Cand& c : cands) {
        bool overlap = false;
        for (const Cand& a : accepted)
            if (c.b < a.e && a.b < c.e) {
                overlap = true;
                break;
            }
        if (!overlap) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Cand& a, const Cand& b) { return a.b < b.b; });
    std::vector<TriggerMatch> out;
    for (const Cand& c : accepted) {
        std::string txt;
        for (std::size_t i = c.b; i < c.e; ++i) {
            if (!txt.empty()) txt += ' ';
            txt += tokens[i].value;
        }
        out.push_back({c.kind, c.b, c.e, c.number, txt});
    }
    return out;
}

inline std::vector<TriggerMatch> match_triggers(const std::string& sentence,
                                                const TriggerLexicon& lex =
                                                    TriggerLexicon::defaults()) {
    return match_triggers(text::tokenize(sentence), lex);
}

// ---------------------------------------------------------------------------
// Argument binding
// ---------------------------------------------------------------------------

/// A bound function together with where it sits in the sentence.
struct Atom {
    LogicalFunction fn;
    std::size_t trig_begin = 0;
    std::size_t trig_end = 0;
    std::size_t span_begin = 0;  // covers trigger and bound argument mentions
    std::size_t span_end = 0;
    int coord_group = -1;  // atoms expanded from one coordinated clause
    TriggerKind coord_conn = TriggerKind::And;
};

namespace detail {

inline std::optional<Mention> nearest_left(const std::vector<Mention>& mentions, std::size_t pos,
                                           EntityKind kind) {
    std::optional<Mention> best;
    for (const Mention& m : mentions)
        if (m.kind == kind && m.tok_end <= pos && (!best || m.tok_end > best->tok_end)) best = m;
    return best;
}

inline std::optional<Mention> nearest_right(const std::vector<Mention>& mentions, std::size_t pos,
                                            EntityKind kind) {
    std::optional<Mention> best;
    for (const Mention& m : mentions)
        if (m.kind == kind && m.tok_begin >= pos && (!best || m.tok_begin < best->tok_begin))
            best = m;
    return best;
}

inline bool is_chain_connector(const std::string& w) {
    std::string l = text::lower(w);
    return l == "," || l == "and" || l == "or" || l == "nor" || l == "both" || l == "either" ||
           l == "neither" || l == "the";
}

/// Maximal coordinated chain of same-kind mentions ending at `m`, e.g.
/// "A, B, and C". Returns mentions in textual order plus the connective seen.
inline std::pair<std::vector<Mention>, TriggerKind> chain_left(
    const std::vector<text::Token>& tokens, const std::vector<Mention>& mentions,
    const Mention& m) {
    std::vector<Mention> chain{m};
    TriggerKind conn = TriggerKind::And;
    Mention cur = m;
    while (true) {
        std::optional<Mention> prev;
        for (const Mention& c : mentions)
            if (c.kind == m.kind && c.tok_end <= cur.tok_begin &&
                (!prev || c.tok_end > prev->tok_end))
                prev = c;
        if (!prev) break;
        bool clean = true;
        for (std::size_t i = prev->tok_end; i < cur.tok_begin; ++i) {
            std::string l = text::lower(tokens[i].value);
            if (!is_chain_connector(l)) {
                clean = false;
                break;
            }
            if (l == "or") conn = TriggerKind::Or;
            if (l == "nor" || l == "neither") conn = TriggerKind::Neither;
        }
        if (!clean) break;
        chain.insert(chain.begin(), *prev);
        cur = *prev;
    }
    // "neither" may sit just before the first chain member
    std::size_t fb = chain.front().tok_begin;
    if (fb > 0 && text::lower(tokens[fb - 1].value) == "neither") conn = TriggerKind::Neither;
    return {chain, conn};
}

inline std::pair<std::vector<Mention>, TriggerKind> chain_right(
    const std::vector<text::Token>& tokens, const std::vector<Mention>& mentions,
    const Mention& m) {
    std::vector<Mention> chain{m};
    TriggerKind conn = TriggerKind::And;
    Mention cur = m;
    while (true) {
        std::optional<Mention> next;
        for (const Mention& c : mentions)
            if (c.kind == m.kind && c.tok_begin >= cur.tok_end &&
                (!next || c.tok_begin < next->tok_begin))
                next = c;
        if (!next) break;
        bool clean = true;
        for (std::size_t i = cur.tok_end; i < next->tok_begin; ++i) {
            std::string l = text::lower(tokens[i].value);
            if (!is_chain_connector(l)) {
                clean = false;
                break;
            }
            if (l == "or") conn = TriggerKind::Or;
            if (l == "nor") conn = TriggerKind::Neither;
        }
        if (!clean) break;
        chain.push_back(*next);
        cur = *next;
    }
    return {chain, conn};
}

inline bool clause_negated(const std::vector<text::Token>& tokens, std::size_t trig_begin) {
    // comma-delimited clause containing the trigger
    std::size_t lo = 0, hi = tokens.size();
    for (std::size_t i = trig_begin; i-- > 0;)
        if (tokens[i].value == ",") {
            lo = i + 1;
            break;
        }
    for (std::size_t i = trig_begin; i < tokens.size(); ++i)
        if (tokens[i].value == ",") {
            hi = i;
            break;
        }
    for (std::size_t i = lo; i < hi; ++i)
        if (extractor::detail::is_negation_token(tokens[i].value)) return true;
    return false;
}

inline Atom make_atom(LogicalFunction fn, const TriggerMatch& t, std::size_t span_b,
                      std::size_t span_e) {
    return Atom{std::move(fn), t.tok_begin, t.tok_end, std::min(span_b, t.tok_begin),
                std::max(span_e, t.tok_end)};
}

/// Bind one trigger to zero or more atoms. Coordinated participants or
/// positions sharing the predicate expand into one atom each, tagged with a
/// shared coord_group so compose can fold them.
inline std::vector<Atom> bind_atoms(const std::vector<text::Token>& tokens,
                                    const std::vector<Mention>& mentions, const TriggerMatch& t,
                                    const ScenarioContext& ctx, int& next_group) {
    std::vector<Atom> out;
    if (is_relational(t.kind)) {
        auto left = nearest_left(mentions, t.tok_begin, EntityKind::Participant);
        auto right = nearest_right(mentions, t.tok_end, EntityKind::Participant);
        if (left && right) {
            LogicalFunction fn{Relational{rel_kind(t.kind), left->entity_id, right->entity_id}};
            out.push_back(make_atom(std::move(fn), t, left->tok_begin, right->tok_end));
            return out;
        }
        if (left) {
            // "A and B are in different groups": both arguments sit left
            auto [chain, conn] = chain_left(tokens, mentions, *left);
            (void)conn;
            if (chain.size() >= 2) {
                const Mention& a = chain[chain.size() - 2];
                const Mention& b = chain.back();
                LogicalFunction fn{Relational{rel_kind(t.kind), a.entity_id, b.entity_id}};
                out.push_back(make_atom(std::move(fn), t, a.tok_begin, b.tok_end));
                return out;
            }
        }
        throw BindingFailed("relational trigger '" + t.trigger_text + "' lacks arguments");
    }
    if (is_counting(t.kind)) {
        auto left = nearest_left(mentions, t.tok_begin, EntityKind::Participant);
        if (!left) throw BindingFailed("counting trigger lacks a participant");
        if (t.number < 1 || t.number > static_cast<int>(ctx.positions.size()))
            throw BindingFailed("counting bound out of range");
        CountKind ck = t.kind == TriggerKind::FirstPos ? CountKind::FirstPos : CountKind::LastPos;
        LogicalFunction fn{Counting{ck, left->entity_id, t.number}};
        out.push_back(make_atom(std::move(fn), t, left->tok_begin, t.tok_end));
        return out;
    }
    if (t.kind == TriggerKind::To) {
        auto left = nearest_left(mentions, t.tok_begin, EntityKind::Participant);
        auto right = nearest_right(mentions, t.tok_end, EntityKind::Position);
        if (!left || !right) throw BindingFailed("To trigger lacks arguments");
        Polarity pol =
            clause_negated(tokens, t.tok_begin) ? Polarity::Negated : Polarity::Positive;
        auto [pchain, pconn] = chain_left(tokens, mentions, *left);
        auto [qchain, qconn] = chain_right(tokens, mentions, *right);
        TriggerKind conn = pconn;
        if (qchain.size() > 1) conn = qconn;
        int group = -1;
        if (pchain.size() * qchain.size() > 1) group = next_group++;
        for (const Mention& p : pchain)
            for (const Mention& q : qchain) {
                LogicalFunction fn{ToFn{p.entity_id, q.entity_id, pol}};
                Atom a = make_atom(std::move(fn), t, p.tok_begin, q.tok_end);
                a.coord_group = group;
                a.coord_conn = conn;
                out.push_back(std::move(a));
            }
        return out;
    }
    throw BindingFailed("compositional trigger has no direct arguments");
}

}  // namespace detail

/// Spec-shaped single-trigger binding: nearest mentions around the trigger.
inline LogicalFunction bind_arguments(const std::string& sentence, const TriggerMatch& trigger,
                                      const ScenarioContext& ctx) {
    auto tokens = text::tokenize(sentence);
    auto mentions = find_mentions(tokens, ctx);
    int g = 0;
    auto atoms = detail::bind_atoms(tokens, mentions, trigger, ctx, g);
    if (atoms.empty()) throw BindingFailed("trigger bound no arguments");
    return atoms.front().fn;
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<LogicalFunction> fns_of(const std::vector<Atom>& atoms) {
    std::vector<LogicalFunction> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(a.fn);
    return out;
}

/// Fold coordination groups into And/Or atoms. Neither-connected groups stay
/// unfolded; the Neither grammar pattern consumes them.
inline std::vector<Atom> fold_coordination(std::vector<Atom> atoms) {
    std::vector<Atom> out;
    std::vector<bool> done(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (done[i]) continue;
        if (atoms[i].coord_group < 0 || atoms[i].coord_conn == TriggerKind::Neither) {
            out.push_back(atoms[i]);
            continue;
        }
        std::vector<std::size_t> members;
        for (std::size_t j = i; j < atoms.size(); ++j)
            if (!done[j] && atoms[j].coord_group == atoms[i].coord_group) {
                members.push_back(j);
                done[j] = true;
            }
        if (members.size() == 1) {
            out.push_back(atoms[i]);
            continue;
        }
        Compositional c;
        c.kind = atoms[i].coord_conn == TriggerKind::Or ? CompKind::Or : CompKind::And;
        c.set1.push_back(atoms[members[0]].fn);
        for (std::size_t k = 1; k < members.size(); ++k) c.set2.push_back(atoms[members[k]].fn);
        Atom folded = atoms[members[0]];
        for (std::size_t j : members) {
            folded.span_begin = std::min(folded.span_begin, atoms[j].span_begin);
            folded.span_end = std::max(folded.span_end, atoms[j].span_end);
        }
        folded.fn = LogicalFunction{std::move(c)};
        folded.coord_group = -1;
        out.push_back(std::move(folded));
    }
    return out;
}

inline std::optional<std::size_t> find_token(const std::vector<text::Token>& tokens,
                                             std::size_t from, const std::string& word) {
    for (std::size_t i = from; i < tokens.size(); ++i)
        if (text::lower(tokens[i].value) == word) return i;
    return std::nullopt;
}

}  // namespace detail

/// Group bound atoms into compositional functions via clause patterns
/// ("If P, then Q", IFF/Unless/Neither splits, And/Or between atoms).
/// Atoms outside any pattern pass through unchanged.
inline std::vector<LogicalFunction> compose(const std::vector<text::Token>& tokens,
                                            const std::vector<TriggerMatch>& comp_matches,
                                            std::vector<Atom> atoms,
                                            const std::vector<Mention>& mentions) {
    using detail::fns_of;
    atoms = detail::fold_coordination(std::move(atoms));
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.trig_begin < b.trig_begin; });

    auto match_of = [&](TriggerKind k) -> const TriggerMatch* {
        for (const auto& m : comp_matches)
            if (m.kind == k) return &m;
        return nullptr;
    };
    auto split_atoms = [&](std::size_t lo, std::size_t hi) {
        std::pair<std::vector<Atom>, std::vector<Atom>> parts;
        for (const Atom& a : atoms) {
            if (a.trig_begin < lo)
                parts.first.push_back(a);
            else if (a.trig_begin >= hi)
                parts.second.push_back(a);
        }
        return parts;
    };

    if (const TriggerMatch* iff = match_of(TriggerKind::IFF)) {
        auto [l, r] = split_atoms(iff->tok_begin, iff->tok_end);
        if (!l.empty() && !r.empty())
            return {LogicalFunction{Compositional{CompKind::IFF, fns_of(l), fns_of(r)}}};
    }

    if (const TriggerMatch* ifm = match_of(TriggerKind::IfThen)) {
        std::size_t premise_end = tokens.size();
        std::size_t consequent_begin = tokens.size();
        if (auto then_pos = detail::find_token(tokens, ifm->tok_end, "then")) {
            premise_end = *then_pos;
            consequent_begin = *then_pos + 1;
        } else {
            for (std::size_t i = ifm->tok_end; i < tokens.size(); ++i)
                if (tokens[i].value == ",") {
                    premise_end = i;
                    consequent_begin = i + 1;
                    break;
                }
        }
        std::vector<Atom> premise, consequent, outside;
        for (const Atom& a : atoms) {
            if (a.trig_begin >= ifm->tok_end && a.trig_begin < premise_end)
                premise.push_back(a);
            else if (a.trig_begin >= consequent_begin)
                consequent.push_back(a);
            else
                outside.push_back(a);
        }
        if (!premise.empty() && consequent.empty() && !outside.empty() &&
            ifm->tok_begin > 0) {
            // inverted form: "Q if P"
            consequent = outside;
            outside.clear();
        }
        if (!premise.empty() && consequent.empty()) {
            // "If G serves on X, so does B": clone the premise predicate
            bool has_so = false;
            for (std::size_t i = consequent_begin; i < tokens.size(); ++i) {
                std::string l = text::lower(tokens[i].value);
                if (l == "so" || l == "too") has_so = true;
            }
            const ToFn* tmpl = nullptr;
            for (auto it = premise.rbegin(); it != premise.rend() && !tmpl; ++it)
                tmpl = std::get_if<ToFn>(&it->fn.node);
            if (has_so && tmpl) {
                for (const Mention& m : mentions) {
                    if (m.kind != EntityKind::Participant || m.tok_begin < consequent_begin)
                        continue;
                    Atom a;
                    a.fn = LogicalFunction{ToFn{m.entity_id, tmpl->position, tmpl->polarity}};
                    a.trig_begin = m.tok_begin;
                    consequent.push_back(std::move(a));
                }
            }
        }
        if (!premise.empty() && !consequent.empty()) {
            std::vector<LogicalFunction> out{LogicalFunction{
                Compositional{CompKind::IfThen, fns_of(premise), fns_of(consequent)}}};
            for (const Atom& a : outside) out.push_back(a.fn);
            return out;
        }
    }

    if (const TriggerMatch* un = match_of(TriggerKind::Unless)) {
        auto [l, r] = split_atoms(un->tok_begin, un->tok_end);
        if (!l.empty() && !r.empty())
            return {LogicalFunction{Compositional{CompKind::Unless, fns_of(l), fns_of(r)}}};
    }

    if (match_of(TriggerKind::Neither) != nullptr ||
        std::any_of(atoms.begin(), atoms.end(),
                    [](const Atom& a) { return a.coord_conn == TriggerKind::Neither &&
                                               a.coord_group >= 0; })) {
        if (atoms.size() >= 2) {
            std::vector<LogicalFunction> s1{atoms.front().fn};
            std::vector<LogicalFunction> s2;
            for (std::size_t i = 1; i < atoms.size(); ++i) s2.push_back(atoms[i].fn);
            return {LogicalFunction{Compositional{CompKind::Neither, s1, s2}}};
        }
    }

    // standalone and/or between two bound atoms
    for (TriggerKind k : {TriggerKind::Or, TriggerKind::And}) {
        const TriggerMatch* m = match_of(k);
        if (!m) continue;
        std::vector<Atom> l, r;
        bool inside = false;
        for (const Atom& a : atoms) {
            if (a.span_end <= m->tok_begin)
                l.push_back(a);
            else if (a.span_begin >= m->tok_end)
                r.push_back(a);
            else
                inside = true;
        }
        if (!inside && !l.empty() && !r.empty()) {
            CompKind ck = k == TriggerKind::Or ? CompKind::Or : CompKind::And;
            return {LogicalFunction{Compositional{ck, fns_of(l), fns_of(r)}}};
        }
    }

    return fns_of(atoms);
}

/// Spec-shaped wrapper: compose over pre-bound atoms of one sentence.
inline std::vector<LogicalFunction> compose(const std::string& sentence, std::vector<Atom> atoms,
                                            const ScenarioContext& ctx,
                                            const TriggerLexicon& lex =
                                                TriggerLexicon::defaults()) {
    auto tokens = text::tokenize(sentence);
    auto mentions = find_mentions(tokens, ctx);
    std::vector<TriggerMatch> comp;
    for (const auto& m : match_triggers(tokens, lex))
        if (is_compositional(m.kind)) comp.push_back(m);
    return compose(tokens, comp, std::move(atoms), mentions);
}

// ---------------------------------------------------------------------------
// Rule and option parsing
// ---------------------------------------------------------------------------

/// match_triggers -> bind -> compose. Empty result means the sentence is not
/// covered by the function set; the caller records that as data.
inline std::vector<LogicalFunction> parse_rule(const std::string& sentence,
                                               const ScenarioContext& ctx,
                                               const TriggerLexicon& lex =
                                                   TriggerLexicon::defaults()) {
    auto tokens = text::tokenize(sentence);
    auto mentions = find_mentions(tokens, ctx);
    auto matches = match_triggers(tokens, lex);
    std::vector<Atom> atoms;
    std::vector<TriggerMatch> comp;
    int next_group = 0;
    for (const auto& m : matches) {
        if (is_compositional(m.kind)) {
            comp.push_back(m);
            continue;
        }
        try {
            auto bound = detail::bind_atoms(tokens, mentions, m, ctx, next_group);
            atoms.insert(atoms.end(), bound.begin(), bound.end());
        } catch (const BindingFailed&) {
            // trigger without usable arguments; skip
        }
    }
    if (atoms.empty()) return {};
    return compose(tokens, comp, std::move(atoms), mentions);
}

/// An answer option read either as cell facts or as executable constraints.
struct OptionInterpretation {
    enum class Kind { AssignmentBased, FunctionBased };
    Kind kind = Kind::AssignmentBased;
    std::vector<Fact> facts;                 // AssignmentBased payload
    std::vector<LogicalFunction> functions;  // FunctionBased payload
    bool uncovered = false;                  // neither reading produced anything
};

/// Options carrying a constraint trigger (relational, counting, or a
/// compositional connective other than And) parse as functions; everything
/// else parses as cell facts. Bare To / And phrasing stays assignment-based,
/// matching how schedule-style options read.
inline OptionInterpretation parse_option(const std::string& option, const ScenarioContext& ctx,
                                         const TriggerLexicon& lex =
                                             TriggerLexicon::defaults()) {
    OptionInterpretation out;
    bool function_like = false;
    for (const auto& m : match_triggers(text::tokenize(option), lex)) {
        if (is_relational(m.kind) || is_counting(m.kind) ||
            (is_compositional(m.kind) && m.kind != TriggerKind::And)) {
            function_like = true;
            break;
        }
    }
    if (function_like) {
        auto fns = parse_rule(option, ctx, lex);
        if (!fns.empty()) {
            out.kind = OptionInterpretation::Kind::FunctionBased;
            out.functions = std::move(fns);
            return out;
        }
    }
    out.kind = OptionInterpretation::Kind::AssignmentBased;
    out.facts = extractor::parse_fact(option, ctx, /*strict=*/false);
    out.uncovered = out.facts.empty();
    return out;
}

}  // namespace arm::parser
