#pragma once

#include <atomic>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "arm/engine.hpp"
#include "arm/extractor.hpp"
#include "arm/model.hpp"
#include "arm/parser.hpp"
#include "arm/selector.hpp"

namespace arm::harness {

using nlohmann::json;

struct SchemaError : DomainError {
    using DomainError::DomainError;
};
struct MissingGold : DomainError {
    using DomainError::DomainError;
};
struct IoError : DomainError {
    using DomainError::DomainError;
};

struct QuestionRecord {
    std::string passage_id;
    std::string question_id;
    std::string passage;
    std::string question;
    std::vector<std::string> options;  // exactly 5
    std::optional<int> gold;           // 0..4
};

inline char label_of(int index) { return static_cast<char>('A' + index); }

inline int index_of_label(const std::string& label) {
    if (label.size() == 1 && label[0] >= 'A' && label[0] <= 'E') return label[0] - 'A';
    if (label.size() == 1 && label[0] >= 'a' && label[0] <= 'e') return label[0] - 'a';
    throw SchemaError("answer label must be A..E, got '" + label + "'");
}

// ---------------------------------------------------------------------------
// Dataset I/O
// ---------------------------------------------------------------------------

/// Normalizes common published AR-LSAT layouts into the canonical schema
/// {"passages": [{"id", "passage", "questions": [{"id", "question",
/// "options", "answer"}]}]}.
inline json normalize_dataset(const json& raw) {
    json out;
    out["passages"] = json::array();
    const json* passages = nullptr;
    if (raw.is_object() && raw.contains("passages"))
        passages = &raw["passages"];
    else if (raw.is_array())
        passages = &raw;
    else
        throw SchemaError("dataset root must be an object with \"passages\" or an array");

    int auto_id = 0;
    for (const json& p : *passages) {
        json cp;
        if (p.contains("id"))
            cp["id"] = p["id"].is_string() ? p["id"].get<std::string>()
                                           : std::to_string(p["id"].get<long>());
        else
            cp["id"] = "p" + std::to_string(auto_id);
        ++auto_id;
        if (p.contains("passage"))
            cp["passage"] = p["passage"];
        else if (p.contains("context"))
            cp["passage"] = p["context"];
        else
            throw SchemaError("passage record lacks a \"passage\" field");
        cp["questions"] = json::array();
        int qid = 0;
        for (const json& q : p.value("questions", json::array())) {
            json cq;
            cq["id"] = q.contains("id")
                           ? (q["id"].is_string() ? q["id"].get<std::string>()
                                                  : std::to_string(q["id"].get<long>()))
                           : cp["id"].get<std::string>() + "-q" + std::to_string(qid);
            ++qid;
            cq["question"] = q.value("question", "");
            cq["options"] = q.contains("options") ? q["options"] : q.value("answers", json::array());
            if (q.contains("answer")) {
                const json& a = q["answer"];
                if (a.is_string())
                    cq["answer"] = a.get<std::string>();
                else if (a.is_number_integer())
                    cq["answer"] = std::string(1, label_of(a.get<int>()));
            } else if (q.contains("label")) {
                const json& a = q["label"];
                if (a.is_string())
                    cq["answer"] = a.get<std::string>();
                else if (a.is_number_integer())
                    cq["answer"] = std::string(1, label_of(a.get<int>()));
            }
            cp["questions"].push_back(std::move(cq));
        }
        out["passages"].push_back(std::move(cp));
    }
    return out;
}

inline std::vector<QuestionRecord> records_from_json(const json& doc) {
    json canonical = normalize_dataset(doc);
    std::vector<QuestionRecord> out;
    int index = 0;
    for (const json& p : canonical["passages"]) {
        std::string passage = p["passage"].get<std::string>();
        if (passage.empty())
            throw SchemaError("record " + std::to_string(index) + ": empty passage");
        for (const json& q : p["questions"]) {
            QuestionRecord rec;
            rec.passage_id = p["id"].get<std::string>();
            rec.question_id = q["id"].get<std::string>();
            rec.passage = passage;
            rec.question = q["question"].get<std::string>();
            if (rec.question.empty())
                throw SchemaError("record " + std::to_string(index) + ": empty question");
            if (!q["options"].is_array() || q["options"].size() != 5)
                throw SchemaError("record " + std::to_string(index) +
                                  ": field options must hold exactly 5 entries");
            for (const json& o : q["options"]) rec.options.push_back(o.get<std::string>());
            if (q.contains("answer")) rec.gold = index_of_label(q["answer"].get<std::string>());
            out.push_back(std::move(rec));
            ++index;
        }
    }
    return out;
}

inline std::vector<QuestionRecord> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("dataset is not valid JSON: ") + e.what());
    }
    return records_from_json(doc);
}

// ---------------------------------------------------------------------------
// End-to-end solving
// ---------------------------------------------------------------------------

struct SolveOptions {
    long node_cap = engine::kDefaultNodeCap;
    long oracle_guard = 10000000;
    parser::TriggerLexicon lexicon = parser::TriggerLexicon::defaults();
    bool want_trace = false;
};

struct SolveOutcome {
    int prediction = 0;
    selector::QuestionType question_type;
    double coverage = 1.0;  // fraction of rule sentences that parsed
    bool capped = false;
    bool fallback = false;  // EmptyLegitimateSet or extraction failure path
    std::vector<double> scores;
    json trace = json::array();
};

namespace detail {

inline json assignment_json(const Assignment& a) {
    json rows = json::array();
    for (int p = 0; p < a.participant_count(); ++p) {
        std::string row;
        for (int q = 0; q < a.position_count(); ++q) {
            CellState c = a.at(p, q);
            row += c == CellState::True ? 'T' : (c == CellState::False ? 'F' : 'U');
        }
        rows.push_back(row);
    }
    return rows;
}

/// Degraded scoring against the initial assignment only: Unknown cells score 0.
inline double fallback_score(const parser::OptionInterpretation& opt, const Assignment& a0,
                             selector::QuestionType qt) {
    double s = 0;
    if (opt.kind == parser::OptionInterpretation::Kind::FunctionBased) {
        bool violated = false, undet = false;
        for (const auto& f : opt.functions) {
            auto o = engine::evaluate(f, a0);
            if (o == engine::Outcome::Violated) violated = true;
            if (o == engine::Outcome::Undetermined) undet = true;
        }
        s = violated ? -1 : (undet ? 0 : 1);
    } else {
        if (opt.facts.empty()) {
            s = 0;
        } else {
            bool contra = false, undet = false;
            for (const Fact& f : opt.facts) {
                CellState want = f.state ? CellState::True : CellState::False;
                CellState got = a0.at(f.participant, f.position);
                if (got == CellState::Unknown)
                    undet = true;
                else if (got != want)
                    contra = true;
            }
            s = contra ? -1 : (undet ? 0 : 1);
        }
    }
    return qt.negated ? -s : s;
}

}  // namespace detail

/// extractor -> parser -> engine -> selector; never aborts on one record.
inline SolveOutcome solve(const QuestionRecord& rec, const SolveOptions& opt = {}) {
    SolveOutcome out;
    auto push_trace = [&](json j) {
        j["passage_id"] = rec.passage_id;
        j["question_id"] = rec.question_id;
        out.trace.push_back(std::move(j));
    };

    ScenarioContext ctx;
    bool extracted = false;
    try {
        ctx = extractor::build_context(rec.passage, opt.lexicon);
        extracted = true;
    } catch (const DomainError& e) {
        out.fallback = true;
        push_trace({{"stage", "extraction"}, {"error", e.what()}});
    }

    std::string stem = rec.question;
    std::vector<Fact> hyp_facts;
    std::vector<std::string> hyp_rules;
    if (extracted) {
        json ents = json::array();
        for (const Entity& e : ctx.participants) ents.push_back(e.surface);
        json poss = json::array();
        for (const Entity& e : ctx.positions) poss.push_back(e.surface);
        json facts = json::array();
        for (const Fact& f : ctx.facts)
            facts.push_back({{"participant", ctx.participants[f.participant].surface},
                             {"position", ctx.positions[f.position].surface},
                             {"state", f.state}});
        push_trace({{"stage", "extraction"},
                    {"game_type", to_string(ctx.game_type)},
                    {"participants", ents},
                    {"positions", poss},
                    {"facts", facts},
                    {"rule_sentences", ctx.rules}});
        std::tie(hyp_facts, hyp_rules) =
            extractor::extract_hypothesis(rec.question, ctx, &stem, opt.lexicon);
        json hf = json::array();
        for (const Fact& f : hyp_facts)
            hf.push_back({{"participant", ctx.participants[f.participant].surface},
                          {"position", ctx.positions[f.position].surface},
                          {"state", f.state}});
        push_trace({{"stage", "hypothesis"},
                    {"facts", hf},
                    {"rule_sentences", hyp_rules},
                    {"stem", stem}});
    }

    out.question_type = selector::classify_question(stem);

    std::vector<std::vector<LogicalFunction>> rule_functions;
    std::vector<LogicalFunction> hypothesis_functions;
    std::vector<LogicalFunction> functions;
    std::vector<Assignment> legitimate;
    selector::ScoringInput scoring;
    bool deduced = false;
    ScenarioContext ctx2;  // outlives scoring, which keeps a pointer to it

    if (extracted) {
        ctx2 = ctx;
        ctx2.facts.insert(ctx2.facts.end(), hyp_facts.begin(), hyp_facts.end());
        try {
            Assignment a0 = initial_assignment(ctx2);

            int covered = 0;
            json fn_trace = json::array();
            for (const std::string& rule : ctx.rules) {
                auto fns = parser::parse_rule(rule, ctx, opt.lexicon);
                json rendered = json::array();
                for (const auto& f : fns) rendered.push_back(render(f, ctx));
                fn_trace.push_back({{"sentence", rule},
                                    {"functions", rendered},
                                    {"covered", !fns.empty()}});
                if (!fns.empty()) ++covered;
                functions.insert(functions.end(), fns.begin(), fns.end());
                rule_functions.push_back(std::move(fns));
            }
            for (const std::string& rule : hyp_rules) {
                auto fns = parser::parse_rule(rule, ctx, opt.lexicon);
                json rendered = json::array();
                for (const auto& f : fns) rendered.push_back(render(f, ctx));
                fn_trace.push_back({{"sentence", rule},
                                    {"functions", rendered},
                                    {"covered", !fns.empty()},
                                    {"hypothesis", true}});
                functions.insert(functions.end(), fns.begin(), fns.end());
                hypothesis_functions.insert(hypothesis_functions.end(), fns.begin(), fns.end());
            }
            out.coverage = ctx.rules.empty()
                               ? 1.0
                               : static_cast<double>(covered) / static_cast<double>(ctx.rules.size());
            push_trace({{"stage", "functions"}, {"rules", fn_trace}, {"coverage", out.coverage}});

            auto ranked = engine::rank_functions(functions);
            auto ded = engine::construct_tree(a0, ranked, ctx2.game_type, ctx2.group_capacities,
                                              opt.node_cap);
            out.capped = ded.capped;
            legitimate = std::move(ded.legitimate);
            deduced = true;

            json dtrace = {{"stage", "deduction"},
                           {"nodes_expanded", ded.nodes_expanded},
                           {"capped", ded.capped},
                           {"legitimate_count", legitimate.size()}};
            if (legitimate.size() <= 64) {
                json la = json::array();
                for (const Assignment& a : legitimate) la.push_back(detail::assignment_json(a));
                dtrace["legitimate"] = la;
            }
            push_trace(std::move(dtrace));

            scoring.ctx = &ctx2;
            scoring.a0 = a0;
            scoring.functions = functions;
            scoring.rule_functions = rule_functions;
            scoring.hypothesis_functions = hypothesis_functions;
            scoring.question = stem;
            scoring.node_cap = opt.node_cap;
        } catch (const DomainError& e) {
            out.fallback = true;
            push_trace({{"stage", "deduction"}, {"error", e.what()}});
        }
    }

    std::vector<selector::ScoredOption> scored;
    json opt_trace = json::array();
    for (int i = 0; i < static_cast<int>(rec.options.size()); ++i) {
        selector::ScoredOption so;
        so.index = i;
        if (extracted) {
            so.interpretation = parser::parse_option(rec.options[i], ctx, opt.lexicon);
            if (deduced) {
                try {
                    so.score = selector::score_option(so.interpretation, rec.options[i],
                                                      legitimate, out.question_type, scoring,
                                                      &so.detail);
                } catch (const selector::EmptyLegitimateSet&) {
                    out.fallback = true;
                    so.score = detail::fallback_score(so.interpretation, scoring.a0,
                                                      out.question_type);
                }
            } else {
                out.fallback = true;
                so.score = 0;
            }
        } else {
            so.score = 0;
        }
        opt_trace.push_back(
            {{"index", i},
             {"label", std::string(1, label_of(i))},
             {"kind", so.interpretation.kind == parser::OptionInterpretation::Kind::FunctionBased
                          ? "function"
                          : "assignment"},
             {"uncovered", so.interpretation.uncovered},
             {"score", so.score}});
        out.scores.push_back(so.score);
        scored.push_back(std::move(so));
    }
    out.prediction = selector::select_answer(scored);
    push_trace({{"stage", "options"},
                {"question_type", selector::to_string(out.question_type)},
                {"options", opt_trace}});
    push_trace({{"stage", "prediction"},
                {"label", std::string(1, label_of(out.prediction))},
                {"fallback", out.fallback}});
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalOptions {
    int jobs = 1;
    bool want_trace = false;
    SolveOptions solve;
};

struct EvaluationReport {
    int total = 0;
    int correct = 0;
    double accuracy = 0.0;
    double coverage = 1.0;  // mean rule coverage across records
    int capped_count = 0;
    int fallback_count = 0;
    struct TypeStats {
        int count = 0;
        int correct = 0;
    };
    std::map<std::string, TypeStats> per_type;
    json traces = json::array();
};

inline json to_json(const EvaluationReport& r) {
    json per_type = json::object();
    for (const auto& [name, st] : r.per_type)
        per_type[name] = {{"count", st.count},
                          {"accuracy", st.count ? static_cast<double>(st.correct) / st.count : 0.0}};
    return {{"total", r.total},          {"correct", r.correct},
            {"accuracy", r.accuracy},    {"coverage", r.coverage},
            {"capped_count", r.capped_count}, {"fallback_count", r.fallback_count},
            {"per_type", per_type}};
}

/// Exact-match accuracy with per-type breakdown; deterministic regardless of
/// worker count (assembly is fixed by record index).
inline EvaluationReport evaluate(const std::vector<QuestionRecord>& records,
                                 const EvalOptions& opt = {}) {
    EvaluationReport report;
    if (records.empty()) return report;
    for (const auto& r : records)
        if (!r.gold) throw MissingGold("record " + r.question_id + " lacks a gold label");

    std::vector<SolveOutcome> outcomes(records.size());
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < records.size(); ++i) outcomes[i] = solve(records[i], opt.solve);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= records.size()) break;
                outcomes[i] = solve(records[i], opt.solve);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double coverage_sum = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const SolveOutcome& o = outcomes[i];
        ++report.total;
        bool ok = o.prediction == *records[i].gold;
        if (ok) ++report.correct;
        auto& st = report.per_type[selector::to_string(o.question_type)];
        ++st.count;
        if (ok) ++st.correct;
        coverage_sum += o.coverage;
        if (o.capped) ++report.capped_count;
        if (o.fallback) ++report.fallback_count;
        if (opt.want_trace)
            for (const json& t : o.trace) report.traces.push_back(t);
    }
    report.accuracy = static_cast<double>(report.correct) / report.total;
    report.coverage = coverage_sum / report.total;
    return report;
}

}  // namespace arm::harness
