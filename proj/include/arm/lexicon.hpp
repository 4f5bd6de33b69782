#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "arm/model.hpp"
#include "arm/text.hpp"

namespace arm::parser {

enum class TriggerKind {
    Before,
    After,
    Last,
    Next,
    Adjacent,
    Different,
    Same,
    BeforeEqual,
    AfterEqual,
    To,
    IfThen,
    IFF,
    And,
    Or,
    Unless,
    Neither,
    FirstPos,
    LastPos,
};

inline const char* to_string(TriggerKind k) {
    switch (k) {
        case TriggerKind::Before: return "Before";
        case TriggerKind::After: return "After";
        case TriggerKind::Last: return "Last";
        case TriggerKind::Next: return "Next";
        case TriggerKind::Adjacent: return "Adjacent";
        case TriggerKind::Different: return "Different";
        case TriggerKind::Same: return "Same";
        case TriggerKind::BeforeEqual: return "BeforeEqual";
        case TriggerKind::AfterEqual: return "AfterEqual";
        case TriggerKind::To: return "To";
        case TriggerKind::IfThen: return "IfThen";
        case TriggerKind::IFF: return "IFF";
        case TriggerKind::And: return "And";
        case TriggerKind::Or: return "Or";
        case TriggerKind::Unless: return "Unless";
        case TriggerKind::Neither: return "Neither";
        case TriggerKind::FirstPos: return "FirstPos";
        case TriggerKind::LastPos: return "LastPos";
    }
    return "?";
}

inline bool is_relational(TriggerKind k) {
    switch (k) {
        case TriggerKind::Before:
        case TriggerKind::After:
        case TriggerKind::Last:
        case TriggerKind::Next:
        case TriggerKind::Adjacent:
        case TriggerKind::Different:
        case TriggerKind::Same:
        case TriggerKind::BeforeEqual:
        case TriggerKind::AfterEqual: return true;
        default: return false;
    }
}

inline bool is_counting(TriggerKind k) {
    return k == TriggerKind::FirstPos || k == TriggerKind::LastPos;
}

inline bool is_compositional(TriggerKind k) {
    switch (k) {
        case TriggerKind::IfThen:
        case TriggerKind::IFF:
        case TriggerKind::And:
        case TriggerKind::Or:
        case TriggerKind::Unless:
        case TriggerKind::Neither: return true;
        default: return false;
    }
}

inline RelKind rel_kind(TriggerKind k) {
    switch (k) {
        case TriggerKind::Before: return RelKind::Before;
        case TriggerKind::After: return RelKind::After;
        case TriggerKind::Last: return RelKind::Last;
        case TriggerKind::Next: return RelKind::Next;
        case TriggerKind::Adjacent: return RelKind::Adjacent;
        case TriggerKind::Different: return RelKind::Different;
        case TriggerKind::Same: return RelKind::Same;
        case TriggerKind::BeforeEqual: return RelKind::BeforeEqual;
        default: return RelKind::AfterEqual;
    }
}

/// kind -> trigger phrases. Phrases may contain the placeholders "..." (gap,
/// only the text before it anchors the match) and "(number)" (matches one
/// cardinal token).
struct TriggerLexicon {
    std::vector<std::pair<TriggerKind, std::string>> entries;

    static TriggerLexicon defaults() {
        TriggerLexicon lex;
        auto add = [&](TriggerKind k, std::initializer_list<const char*> ps) {
            for (const char* p : ps) lex.entries.emplace_back(k, p);
        };
        add(TriggerKind::Before, {"before", "above", "precede", "earlier"});
        add(TriggerKind::After, {"after", "larger", "higher", "bigger", "older"});
        add(TriggerKind::Last, {"immediately before", "last"});
        add(TriggerKind::Next, {"immediately after", "next"});
        add(TriggerKind::Adjacent, {"neighboring", "adjacent"});
        add(TriggerKind::Different, {"different"});
        add(TriggerKind::Same, {"same", "also"});
        add(TriggerKind::BeforeEqual, {"no later"});
        add(TriggerKind::AfterEqual, {"no earlier"});
        add(TriggerKind::To, {"to", "on", "give", "in"});
        add(TriggerKind::IfThen, {"if ... then", "if ... , ..."});
        add(TriggerKind::IFF, {"if and only if"});
        add(TriggerKind::And, {"and"});
        add(TriggerKind::Or, {"or"});
        add(TriggerKind::Unless, {"unless"});
        add(TriggerKind::Neither, {"neither ... nor ..."});
        add(TriggerKind::FirstPos, {"one of the first (number)"});
        add(TriggerKind::LastPos, {"one of the last (number)"});
        return lex;
    }

    /// One row per line: kind TAB comma-separated trigger phrases.
    /// Blank lines and lines starting with '#' are skipped.
    static TriggerLexicon load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot open lexicon file: " + path);
        TriggerLexicon lex;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw DomainError("lexicon row without TAB separator: " + line);
            std::string kind_name = line.substr(0, tab);
            TriggerKind kind;
            bool found = false;
            for (int i = 0; i <= static_cast<int>(TriggerKind::LastPos); ++i) {
                if (kind_name == to_string(static_cast<TriggerKind>(i))) {
                    kind = static_cast<TriggerKind>(i);
                    found = true;
                    break;
                }
            }
            if (!found) throw DomainError("unknown lexicon kind: " + kind_name);
            std::stringstream rest(line.substr(tab + 1));
            std::string phrase;
            while (std::getline(rest, phrase, ',')) {
                std::size_t b = phrase.find_first_not_of(" \t");
                std::size_t e = phrase.find_last_not_of(" \t");
                if (b == std::string::npos) continue;
                lex.entries.emplace_back(kind, phrase.substr(b, e - b + 1));
            }
        }
        return lex;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        for (int i = 0; i <= static_cast<int>(TriggerKind::LastPos); ++i) {
            auto k = static_cast<TriggerKind>(i);
            std::string row;
            for (const auto& [kind, phrase] : entries) {
                if (kind != k) continue;
                if (!row.empty()) row += ", ";
                row += phrase;
            }
            if (!row.empty()) out << to_string(k) << '\t' << row << '\n';
        }
    }
};

}  // namespace arm::parser
