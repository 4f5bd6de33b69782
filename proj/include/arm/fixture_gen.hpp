#pragma once

// Random natural-language puzzle generator. Scenarios are built structurally
// first; the passage text is rendered from the same data, and gold answers
// come from brute-force enumeration, independent of the parsing pipeline.

#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "arm/engine.hpp"
#include "arm/model.hpp"

namespace arm::fixturegen {

using nlohmann::json;

namespace detail {

inline int pick(std::mt19937& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
}

inline const char* count_word(int n) {
    static const char* words[] = {"zero", "one",  "two",  "three", "four",
                                  "five", "six",  "seven", "eight", "nine"};
    return words[n];
}

inline const std::vector<std::string>& car_names() {
    static const std::vector<std::string> v = {"falcon", "meteor", "osprey", "pioneer", "quasar"};
    return v;
}

inline const std::vector<std::string>& person_names() {
    static const std::vector<std::string> v = {"Fara", "Gus", "Hana", "Ira", "Jade"};
    return v;
}

inline const std::vector<std::string>& dog_names() {
    static const std::vector<std::string> v = {"rex", "spot", "fido", "luna"};
    return v;
}

inline const std::vector<std::string>& weekday_names() {
    static const std::vector<std::string> v = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                               "Friday"};
    return v;
}

inline const std::vector<std::string>& committee_names() {
    static const std::vector<std::string> v = {"Alpha", "Beta", "Gamma"};
    return v;
}

struct Scenario {
    ScenarioContext ctx;
    std::vector<LogicalFunction> functions;
    std::string lead_in;
    std::vector<std::string> fact_sentences;
    std::vector<std::string> rule_sentences;
};

inline std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

// --- per-game-type phrase rendering -----------------------------------------

inline std::string participant_phrase(const Scenario& s, int p, bool capitalize) {
    std::string name = s.ctx.participants[p].surface;
    if (s.ctx.game_type == GameType::Grouping) return name;  // proper names
    if (s.ctx.game_type == GameType::Assignment) {
        if (capitalize)
            name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        return name;
    }
    return (capitalize ? "The " : "the ") + name;
}

inline std::string cell_sentence(const Scenario& s, int p, int q, bool state) {
    const std::string& pos = s.ctx.positions[q].surface;
    switch (s.ctx.game_type) {
        case GameType::Ordering:
            return participant_phrase(s, p, true) + " is " + (state ? "" : "not ") +
                   "serviced on " + pos + ".";
        case GameType::Grouping:
            return participant_phrase(s, p, true) + (state ? " serves" : " does not serve") +
                   " on the " + pos + " committee.";
        case GameType::Assignment:
            return participant_phrase(s, p, true) + " is " + (state ? "" : "not ") +
                   "assigned to " + pos + ".";
    }
    return "";
}

inline std::string option_text(const Scenario& s, int p, int q, bool state) {
    std::string sent = cell_sentence(s, p, q, state);
    sent.pop_back();  // options read better without the period
    return sent;
}

inline std::string to_clause(const Scenario& s, int p, int q) {
    const std::string& pos = s.ctx.positions[q].surface;
    switch (s.ctx.game_type) {
        case GameType::Ordering:
            return participant_phrase(s, p, false) + " is serviced on " + pos;
        case GameType::Grouping:
            return participant_phrase(s, p, false) + " serves on the " + pos + " committee";
        case GameType::Assignment:
            return participant_phrase(s, p, false) + " is assigned to " + pos;
    }
    return "";
}

inline std::string schedule_option(const Scenario& s, const Assignment& a) {
    std::string out;
    for (int p = 0; p < a.participant_count(); ++p) {
        int q = *a.true_position(p);
        const std::string& pos = s.ctx.positions[q].surface;
        std::string head = p == 0 ? participant_phrase(s, p, true) : participant_phrase(s, p, false);
        if (p) out += p + 1 == a.participant_count() ? ", and " : ", ";
        switch (s.ctx.game_type) {
            case GameType::Ordering:
                out += p == 0 ? head + " is serviced on " + pos : head + " on " + pos;
                break;
            case GameType::Grouping:
                out += p == 0 ? head + " serves on the " + pos + " committee"
                              : head + " on the " + pos + " committee";
                break;
            case GameType::Assignment:
                out += p == 0 ? head + " is assigned to " + pos : head + " to " + pos;
                break;
        }
    }
    return out;
}

// --- scenario construction ---------------------------------------------------

inline LogicalFunction random_rule(std::mt19937& rng, Scenario& s) {
    const int nparts = static_cast<int>(s.ctx.participants.size());
    const int npos = static_cast<int>(s.ctx.positions.size());
    auto two_parts = [&](int& a, int& b) {
        a = pick(rng, 0, nparts - 1);
        do b = pick(rng, 0, nparts - 1);
        while (b == a);
    };

    if (s.ctx.game_type == GameType::Ordering) {
        int roll = pick(rng, 0, 9);
        int a, b;
        if (roll <= 5) {
            two_parts(a, b);
            struct T {
                RelKind kind;
                const char* phrase;
            };
            static const T table[] = {{RelKind::Before, "before"},
                                      {RelKind::After, "after"},
                                      {RelKind::Last, "immediately before"},
                                      {RelKind::Next, "immediately after"},
                                      {RelKind::BeforeEqual, "no later than"},
                                      {RelKind::AfterEqual, "no earlier than"}};
            const T& t = table[roll];
            s.rule_sentences.push_back(participant_phrase(s, a, true) + " is serviced " +
                                       t.phrase + " " + participant_phrase(s, b, false) + ".");
            return LogicalFunction{Relational{t.kind, a, b}};
        }
        if (roll == 6) {
            two_parts(a, b);
            s.rule_sentences.push_back(participant_phrase(s, a, true) +
                                       " is serviced adjacent to " +
                                       participant_phrase(s, b, false) + ".");
            return LogicalFunction{Relational{RelKind::Adjacent, a, b}};
        }
        if (roll == 7) {
            a = pick(rng, 0, nparts - 1);
            int m = pick(rng, 1, npos);
            bool first = pick(rng, 0, 1) == 0;
            s.rule_sentences.push_back(participant_phrase(s, a, true) + " is one of the " +
                                       (first ? "first " : "last ") + count_word(m) +
                                       " cars serviced.");
            return LogicalFunction{
                Counting{first ? CountKind::FirstPos : CountKind::LastPos, a, m}};
        }
        if (roll == 8) {
            two_parts(a, b);
            int q = pick(rng, 0, npos - 1);
            s.rule_sentences.push_back("Neither " + participant_phrase(s, a, false) + " nor " +
                                       participant_phrase(s, b, false) + " is serviced on " +
                                       s.ctx.positions[q].surface + ".");
            return LogicalFunction{Compositional{CompKind::Neither,
                                                 {LogicalFunction{ToFn{a, q}}},
                                                 {LogicalFunction{ToFn{b, q}}}}};
        }
        a = pick(rng, 0, nparts - 1);
        int q = pick(rng, 0, npos - 1);
        s.rule_sentences.push_back(participant_phrase(s, a, true) + " is not serviced on " +
                                   s.ctx.positions[q].surface + ".");
        return LogicalFunction{ToFn{a, q, Polarity::Negated}};
    }

    // grouping and assignment share the conditional-centric templates
    int roll = pick(rng, 0, 5);
    if (s.ctx.game_type == GameType::Grouping && roll <= 1) {
        int a, b;
        two_parts(a, b);
        bool same = roll == 0;
        s.rule_sentences.push_back(participant_phrase(s, a, true) + " and " +
                                   participant_phrase(s, b, false) + " serve on " +
                                   (same ? "the same committee." : "different committees."));
        return LogicalFunction{Relational{same ? RelKind::Same : RelKind::Different, a, b}};
    }
    int a, b;
    two_parts(a, b);
    int q1 = pick(rng, 0, npos - 1);
    int q2 = pick(rng, 0, npos - 1);
    LogicalFunction f1{ToFn{a, q1}};
    LogicalFunction f2{ToFn{b, q2}};
    std::string c1 = to_clause(s, a, q1);
    std::string c2 = to_clause(s, b, q2);
    c1[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(c1[0])));
    switch (roll) {
        case 2:
            s.rule_sentences.push_back("If " + to_clause(s, a, q1) + ", then " + c2 + ".");
            return LogicalFunction{Compositional{CompKind::IfThen, {f1}, {f2}}};
        case 3:
            s.rule_sentences.push_back(c1 + " if and only if " + c2 + ".");
            return LogicalFunction{Compositional{CompKind::IFF, {f1}, {f2}}};
        case 4:
            s.rule_sentences.push_back(c1 + " unless " + c2 + ".");
            return LogicalFunction{Compositional{CompKind::Unless, {f1}, {f2}}};
        default:
            s.rule_sentences.push_back(c1 + " or " + c2 + ".");
            return LogicalFunction{Compositional{CompKind::Or, {f1}, {f2}}};
    }
}

inline Scenario random_scenario(std::mt19937& rng) {
    Scenario s;
    int gt = pick(rng, 0, 2);
    if (gt == 0) {
        s.ctx.game_type = GameType::Ordering;
        int n = pick(rng, 3, 5);
        std::vector<std::string> cars(car_names().begin(), car_names().begin() + n);
        for (int i = 0; i < n; ++i)
            s.ctx.participants.push_back({i, cars[i], EntityKind::Participant});
        for (int i = 0; i < n; ++i)
            s.ctx.positions.push_back({i, weekday_names()[i], EntityKind::Position});
        s.lead_in = std::string("Exactly ") + count_word(n) + " cars -- " + join_names(cars) +
                    " -- are serviced from Monday through " + weekday_names()[n - 1] +
                    ", one car per day.";
    } else if (gt == 1) {
        s.ctx.game_type = GameType::Grouping;
        int n = pick(rng, 3, 5);
        int g = pick(rng, 2, 3);
        std::vector<std::string> people(person_names().begin(), person_names().begin() + n);
        for (int i = 0; i < n; ++i)
            s.ctx.participants.push_back({i, people[i], EntityKind::Participant});
        std::string committees;
        for (int i = 0; i < g; ++i) {
            s.ctx.positions.push_back({i, committee_names()[i], EntityKind::Position});
            if (i) committees += i + 1 == g ? ", and " : ", ";
            committees += "the " + committee_names()[i] + " committee";
        }
        s.lead_in = std::string("Exactly ") + count_word(n) + " people -- " +
                    join_names(people) + " -- each serve on one of " + count_word(g) +
                    " committees, " + committees + ".";
    } else {
        s.ctx.game_type = GameType::Assignment;
        int n = pick(rng, 2, 4);
        std::vector<std::string> dogs(dog_names().begin(), dog_names().begin() + n);
        for (int i = 0; i < n; ++i)
            s.ctx.participants.push_back({i, dogs[i], EntityKind::Participant});
        const char* sizes[] = {"Small", "Large"};
        const char* ages[] = {"Young", "Old"};
        int id = 0;
        for (const char* sz : sizes)
            for (const char* ag : ages)
                s.ctx.positions.push_back(
                    {id++, std::string(sz) + "/" + ag, EntityKind::Position});
        s.lead_in = std::string("Exactly ") + count_word(n) + " dogs -- " + join_names(dogs) +
                    " -- are judged as Small or Large and as Young or Old.";
    }

    int nfacts = s.ctx.game_type == GameType::Assignment ? 0 : pick(rng, 0, 1);
    for (int i = 0; i < nfacts; ++i) {
        int p = pick(rng, 0, static_cast<int>(s.ctx.participants.size()) - 1);
        int q = pick(rng, 0, static_cast<int>(s.ctx.positions.size()) - 1);
        s.ctx.facts.push_back({p, q, true});
        s.fact_sentences.push_back(cell_sentence(s, p, q, true));
    }
    int nrules = pick(rng, 1, 3);
    for (int i = 0; i < nrules; ++i) s.functions.push_back(random_rule(rng, s));
    return s;
}

// --- question construction ---------------------------------------------------

enum class CellStatus { Always, Sometimes, Never };

inline CellStatus cell_status(const std::vector<Assignment>& legit, int p, int q) {
    bool any = false, all = true;
    for (const Assignment& a : legit) {
        bool t = a.at(p, q) == CellState::True;
        any = any || t;
        all = all && t;
    }
    if (all) return CellStatus::Always;
    return any ? CellStatus::Sometimes : CellStatus::Never;
}

struct Question {
    std::string text;
    std::vector<std::string> options;
    int answer = 0;
};

inline bool build_truth_question(std::mt19937& rng, const Scenario& s,
                                 const std::vector<Assignment>& legit, Question& out) {
    std::vector<std::pair<int, int>> always, sometimes, never;
    for (int p = 0; p < static_cast<int>(s.ctx.participants.size()); ++p)
        for (int q = 0; q < static_cast<int>(s.ctx.positions.size()); ++q) {
            switch (cell_status(legit, p, q)) {
                case CellStatus::Always: always.push_back({p, q}); break;
                case CellStatus::Sometimes: sometimes.push_back({p, q}); break;
                case CellStatus::Never: never.push_back({p, q}); break;
            }
        }
    struct Variant {
        const char* text;
        std::vector<std::pair<int, int>>* correct;
        std::vector<std::pair<int, int>>* wrong;
    };
    Variant variants[] = {
        {"Which one of the following must be true?", &always, &sometimes},
        {"Which one of the following could be true?", &sometimes, &never},
        {"Which one of the following cannot be true?", &never, &sometimes},
    };
    int start = pick(rng, 0, 2);
    for (int k = 0; k < 3; ++k) {
        const Variant& v = variants[(start + k) % 3];
        if (v.correct->empty() || v.wrong->size() < 4) continue;
        out.text = v.text;
        auto pc = (*v.correct)[pick(rng, 0, static_cast<int>(v.correct->size()) - 1)];
        std::vector<std::pair<int, int>> wrong = *v.wrong;
        std::shuffle(wrong.begin(), wrong.end(), rng);
        out.answer = pick(rng, 0, 4);
        out.options.clear();
        std::size_t wi = 0;
        for (int i = 0; i < 5; ++i) {
            auto cell = i == out.answer ? pc : wrong[wi++];
            out.options.push_back(option_text(s, cell.first, cell.second, true));
        }
        return true;
    }
    return false;
}

inline bool build_acceptable_question(std::mt19937& rng, const Scenario& s,
                                      const std::vector<Assignment>& legit, Question& out) {
    if (legit.empty()) return false;
    const Assignment& correct = legit[pick(rng, 0, static_cast<int>(legit.size()) - 1)];
    auto is_legit = [&](const Assignment& a) {
        for (const Assignment& l : legit)
            if (l == a) return true;
        return false;
    };
    std::vector<Assignment> distractors;
    for (int attempt = 0; attempt < 200 && distractors.size() < 4; ++attempt) {
        Assignment a = correct;
        int p1 = pick(rng, 0, a.participant_count() - 1);
        if (pick(rng, 0, 1) == 0 && a.participant_count() >= 2) {
            int p2;
            do p2 = pick(rng, 0, a.participant_count() - 1);
            while (p2 == p1);
            int q1 = *a.true_position(p1), q2 = *a.true_position(p2);
            if (q1 == q2) continue;
            for (int q = 0; q < a.position_count(); ++q) {
                a.set(p1, q, q == q2 ? CellState::True : CellState::False);
                a.set(p2, q, q == q1 ? CellState::True : CellState::False);
            }
        } else {
            int q1 = *a.true_position(p1);
            int q2 = pick(rng, 0, a.position_count() - 1);
            if (q1 == q2) continue;
            if (s.ctx.game_type == GameType::Ordering &&
                a.count_in_column(q2, CellState::True) > 0)
                continue;  // keep distractor schedules structurally plausible
            for (int q = 0; q < a.position_count(); ++q)
                a.set(p1, q, q == q2 ? CellState::True : CellState::False);
        }
        if (is_legit(a)) continue;
        bool dup = false;
        for (const Assignment& d : distractors) dup = dup || d == a;
        if (!dup) distractors.push_back(a);
    }
    if (distractors.size() < 4) return false;
    switch (s.ctx.game_type) {
        case GameType::Ordering:
            out.text = "Which one of the following could be the schedule of services?";
            break;
        case GameType::Grouping:
            out.text = "Which one of the following is an acceptable assignment of people to "
                       "committees?";
            break;
        case GameType::Assignment:
            out.text = "Which one of the following is an acceptable set of judgments?";
            break;
    }
    out.answer = pick(rng, 0, 4);
    out.options.clear();
    std::size_t di = 0;
    for (int i = 0; i < 5; ++i)
        out.options.push_back(schedule_option(s, i == out.answer ? correct : distractors[di++]));
    return true;
}

}  // namespace detail

/// One generated passage with one question in the canonical dataset layout.
/// Returns a null json when the drawn scenario admits no well-posed question.
inline json generate_one(std::mt19937& rng, int passage_index) {
    detail::Scenario s = detail::random_scenario(rng);
    std::vector<Assignment> legit;
    try {
        legit = engine::brute_force_oracle(s.ctx, s.functions);
    } catch (const DomainError&) {
        return json();
    }
    if (legit.empty()) return json();

    detail::Question q;
    bool built = detail::pick(rng, 0, 3) == 0
                     ? detail::build_acceptable_question(rng, s, legit, q) ||
                           detail::build_truth_question(rng, s, legit, q)
                     : detail::build_truth_question(rng, s, legit, q);
    if (!built) return json();

    std::string passage = s.lead_in;
    for (const std::string& f : s.fact_sentences) passage += " " + f;
    for (const std::string& r : s.rule_sentences) passage += " " + r;

    std::string id = "gen-" + std::to_string(passage_index);
    json record = {{"id", id},
                   {"passage", passage},
                   {"questions",
                    json::array({{{"id", id + "-q0"},
                                  {"question", q.text},
                                  {"options", q.options},
                                  {"answer", std::string(1, static_cast<char>('A' + q.answer))}}})}};
    return record;
}

/// K solvable puzzles, deterministic in the seed.
inline json generate_dataset(unsigned seed, int count) {
    std::mt19937 rng(seed);
    json out;
    out["passages"] = json::array();
    int made = 0;
    long attempts = 0;
    while (made < count && attempts < 1000L * count + 1000) {
        ++attempts;
        json rec = generate_one(rng, made);
        if (rec.is_null()) continue;
        out["passages"].push_back(std::move(rec));
        ++made;
    }
    return out;
}

}  // namespace arm::fixturegen
