#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace arm::text {

struct Token {
    std::string value;
    std::size_t begin = 0;  // byte offset into the source string
    std::size_t end = 0;
};

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

/// Splits into word tokens and single-character punctuation tokens.
/// Em-dashes (UTF-8) are normalized to a "--" token.
inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        // UTF-8 em/en dash
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
            static_cast<unsigned char>(s[i + 1]) == 0x80 &&
            (static_cast<unsigned char>(s[i + 2]) == 0x94 ||
             static_cast<unsigned char>(s[i + 2]) == 0x93)) {
            out.push_back({"--", i, i + 3});
            i += 3;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t j = i;
            while (j < s.size() && is_word_char(s[j])) ++j;
            out.push_back({std::string(s.substr(i, j - i)), i, j});
            i = j;
            continue;
        }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
            out.push_back({"--", i, i + 2});
            i += 2;
            continue;
        }
        out.push_back({std::string(1, c), i, i + 1});
        ++i;
    }
    return out;
}

inline const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbrevs = {
        "mr", "mrs", "ms", "dr", "st", "no", "vs", "etc", "i.e", "e.g", "a.m", "p.m",
    };
    return abbrevs;
}

/// Sentence splitting on {. ; : ? !}. A period after a known abbreviation
/// or a single uppercase letter does not split; a colon between digits
/// (clock times) does not split.
inline std::vector<std::string> split_sentences(std::string_view passage) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < passage.size(); ++i) {
        char c = passage[i];
        bool boundary = false;
        if (c == ';' || c == '?' || c == '!') {
            boundary = true;
        } else if (c == ':') {
            bool digit_l = i > 0 && std::isdigit(static_cast<unsigned char>(passage[i - 1]));
            bool digit_r = i + 1 < passage.size() &&
                           std::isdigit(static_cast<unsigned char>(passage[i + 1]));
            boundary = !(digit_l && digit_r);
        } else if (c == '.') {
            // find the word immediately before the period
            std::size_t w = i;
            while (w > start && is_word_char(passage[w - 1])) --w;
            std::string word = lower(std::string(passage.substr(w, i - w)));
            bool single_upper = (i - w == 1) && std::isupper(static_cast<unsigned char>(passage[w]));
            boundary = !single_upper && !abbreviations().count(word);
        }
        if (boundary) {
            std::string sent(passage.substr(start, i + 1 - start));
            // trim
            std::size_t b = sent.find_first_not_of(" \t\n\r");
            std::size_t e = sent.find_last_not_of(" \t\n\r");
            if (b != std::string::npos) out.push_back(sent.substr(b, e - b + 1));
            start = i + 1;
        }
    }
    if (start < passage.size()) {
        std::string sent(passage.substr(start));
        std::size_t b = sent.find_first_not_of(" \t\n\r");
        std::size_t e = sent.find_last_not_of(" \t\n\r");
        if (b != std::string::npos) out.push_back(sent.substr(b, e - b + 1));
    }
    return out;
}

/// "three" -> 3, "7" -> 7. Small cardinals only; LSAT text spells small numbers.
inline std::optional<int> parse_number(std::string_view word) {
    static const std::unordered_map<std::string, int> words = {
        {"one", 1},   {"two", 2},   {"three", 3}, {"four", 4},   {"five", 5},
        {"six", 6},   {"seven", 7}, {"eight", 8}, {"nine", 9},   {"ten", 10},
        {"eleven", 11}, {"twelve", 12},
    };
    std::string w = lower(word);
    auto it = words.find(w);
    if (it != words.end()) return it->second;
    if (w.empty()) return std::nullopt;
    for (char c : w)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (w.size() > 7) return std::nullopt;
    return std::stoi(w);
}

/// "second" -> 2, "3rd" -> 3.
inline std::optional<int> parse_ordinal(std::string_view word) {
    static const std::unordered_map<std::string, int> words = {
        {"first", 1},   {"second", 2}, {"third", 3},   {"fourth", 4}, {"fifth", 5},
        {"sixth", 6},   {"seventh", 7}, {"eighth", 8}, {"ninth", 9},  {"tenth", 10},
        {"eleventh", 11}, {"twelfth", 12}, {"last", -1},
    };
    std::string w = lower(word);
    auto it = words.find(w);
    if (it != words.end()) return it->second;
    if (w.size() >= 3) {
        std::string suffix = w.substr(w.size() - 2);
        if (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th") {
            std::string digits = w.substr(0, w.size() - 2);
            bool all = !digits.empty();
            for (char c : digits)
                if (!std::isdigit(static_cast<unsigned char>(c))) all = false;
            if (all) return std::stoi(digits);
        }
    }
    return std::nullopt;
}

inline bool starts_with_upper(std::string_view w) {
    return !w.empty() && std::isupper(static_cast<unsigned char>(w[0]));
}

}  // namespace arm::text
