#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "arm/fixture_gen.hpp"
#include "arm/harness.hpp"

using nlohmann::json;

namespace {

struct CliDone {
    int code;
};

struct Config {
    long node_cap = arm::engine::kDefaultNodeCap;
    long oracle_guard = 10000000;
    std::string lexicon_path;
};

// Config file supplies defaults; explicitly passed flags win.
Config resolve_config(const std::string& config_path, const CLI::App* sub, long flag_node_cap,
                      long flag_oracle_guard, const std::string& flag_lexicon) {
    Config cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw arm::harness::IoError("cannot open config file: " + config_path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw arm::harness::SchemaError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg.node_cap = doc.value("node_cap", cfg.node_cap);
        cfg.oracle_guard = doc.value("oracle_guard", cfg.oracle_guard);
        cfg.lexicon_path = doc.value("lexicon", cfg.lexicon_path);
    }
    if (sub->count("--node-cap")) cfg.node_cap = flag_node_cap;
    if (sub->count("--oracle-guard")) cfg.oracle_guard = flag_oracle_guard;
    if (sub->count("--lexicon")) cfg.lexicon_path = flag_lexicon;
    return cfg;
}

arm::harness::SolveOptions solve_options(const Config& cfg) {
    arm::harness::SolveOptions opt;
    opt.node_cap = cfg.node_cap;
    opt.oracle_guard = cfg.oracle_guard;
    if (!cfg.lexicon_path.empty())
        opt.lexicon = arm::parser::TriggerLexicon::load(cfg.lexicon_path);
    return opt;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw arm::harness::IoError("cannot write file: " + path);
    out << content;
}

void write_trace(const std::string& path, const json& records) {
    std::string body;
    for (const json& r : records) body += r.dump() + "\n";
    write_text(path, body);
}

// The --context argument accepts a dataset JSON (first passage is used), a
// JSON object with a "passage" field, or a plain-text passage.
std::string load_passage(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw arm::harness::IoError("cannot open context file: " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_object() && doc.contains("passage")) return doc["passage"].get<std::string>();
    if (doc.is_object() && doc.contains("passages") && !doc["passages"].empty())
        return doc["passages"][0].value("passage", "");
    return raw;
}

int run(int argc, char** argv) {
    CLI::App app{"Rule-based analytical reasoning solver"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (node_cap, oracle_guard, lexicon)");

    long node_cap = arm::engine::kDefaultNodeCap;
    long oracle_guard = 10000000;
    std::string lexicon_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--node-cap", node_cap, "deduction tree node budget");
        sub->add_option("--oracle-guard", oracle_guard, "brute-force enumeration limit");
        sub->add_option("--lexicon", lexicon_path, "trigger lexicon TSV file");
    };

    std::string input, trace_path, report_path, question_id, rule_text, context_path, out_path;
    int jobs = 1;
    unsigned seed = 0;
    int count = 10;

    CLI::App* solve = app.add_subcommand("solve", "solve questions from a dataset file");
    solve->add_option("--input", input, "dataset JSON file")->required();
    solve->add_option("--trace", trace_path, "write a line-delimited JSON trace");
    solve->add_option("--question", question_id, "solve only this question id");
    add_common(solve);

    CLI::App* eval = app.add_subcommand("eval", "score predictions against gold labels");
    eval->add_option("--input", input, "dataset JSON file")->required();
    eval->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
    eval->add_option("--report", report_path, "write the evaluation report JSON");
    eval->add_option("--trace", trace_path, "write a line-delimited JSON trace");
    add_common(eval);

    CLI::App* parse = app.add_subcommand("parse-rule", "parse one rule sentence");
    parse->add_option("--text", rule_text, "rule sentence")->required();
    parse->add_option("--context", context_path, "passage file providing the entities")
        ->required();
    add_common(parse);

    CLI::App* gen = app.add_subcommand("gen-fixtures", "generate random solvable puzzles");
    gen->add_option("--seed", seed, "random seed")->required();
    gen->add_option("--count", count, "number of puzzles")->check(CLI::PositiveNumber);
    gen->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        throw CliDone{code == 0 ? 0 : 1};
    }

    if (solve->parsed()) {
        Config cfg = resolve_config(config_path, solve, node_cap, oracle_guard, lexicon_path);
        auto opt = solve_options(cfg);
        auto records = arm::harness::load_dataset(input);
        json trace = json::array();
        bool found = false;
        for (const auto& rec : records) {
            if (!question_id.empty() && rec.question_id != question_id) continue;
            found = true;
            auto out = arm::harness::solve(rec, opt);
            std::cout << rec.question_id << "\t" << arm::harness::label_of(out.prediction)
                      << "\t" << arm::selector::to_string(out.question_type)
                      << (out.fallback ? "\t(fallback)" : "") << "\n";
            for (const json& t : out.trace) trace.push_back(t);
        }
        if (!question_id.empty() && !found)
            throw arm::harness::SchemaError("no question with id: " + question_id);
        if (!trace_path.empty()) write_trace(trace_path, trace);
        return 0;
    }

    if (eval->parsed()) {
        Config cfg = resolve_config(config_path, eval, node_cap, oracle_guard, lexicon_path);
        arm::harness::EvalOptions opt;
        opt.solve = solve_options(cfg);
        opt.jobs = jobs;
        opt.want_trace = !trace_path.empty();
        auto records = arm::harness::load_dataset(input);
        auto report = arm::harness::evaluate(records, opt);
        json rj = arm::harness::to_json(report);
        std::cout << rj.dump(2) << "\n";
        if (!report_path.empty()) write_text(report_path, rj.dump(2) + "\n");
        if (!trace_path.empty()) write_trace(trace_path, report.traces);
        return 0;
    }

    if (parse->parsed()) {
        Config cfg = resolve_config(config_path, parse, node_cap, oracle_guard, lexicon_path);
        auto opt = solve_options(cfg);
        std::string passage = load_passage(context_path);
        arm::ScenarioContext ctx = arm::extractor::build_context(passage, opt.lexicon);
        auto fns = arm::parser::parse_rule(rule_text, ctx, opt.lexicon);
        if (fns.empty()) {
            std::cout << "uncovered\n";
        } else {
            for (const auto& f : fns) std::cout << arm::render(f, ctx) << "\n";
        }
        return 0;
    }

    // gen-fixtures
    json dataset = arm::fixturegen::generate_dataset(seed, count);
    if (static_cast<int>(dataset["passages"].size()) < count)
        throw arm::harness::SchemaError("generator could not produce the requested count");
    if (out_path.empty())
        std::cout << dataset.dump(2) << "\n";
    else
        write_text(out_path, dataset.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliDone& d) {
        return d.code;
    } catch (const arm::harness::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const arm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
