#include "ixl/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using ixl::Json;

enum class Status { Ok = 0, Error = 1, Partial = 2 };

struct CommandResult {
    Status status = Status::Ok;
    Json payload;
    std::vector<std::string> diagnostics;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ixl::GrammarPtr load_grammar(const std::string& path) {
    auto g = ixl::parse_grammar(read_file(path));
    auto report = ixl::validate(*g);
    if (!report.empty()) {
        std::string msg = "grammar fails validation: " + report.violations[0].rule +
                          " (" + report.violations[0].detail + ")";
        throw std::runtime_error(msg);
    }
    return g;
}

struct BudgetFlags {
    ixl::SearchBudget budget;
    bool parallel = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-depth", budget.max_depth, "derivation tree depth cap");
        cmd->add_option("--max-form-length", budget.max_form_length,
                        "sentential form length cap");
        cmd->add_option("--max-stack-height", budget.max_stack_height,
                        "stack height cap");
        cmd->add_option("--max-expansions", budget.max_expansions,
                        "search expansion cap");
        cmd->add_flag("--parallel", parallel, "use the OpenMP kernels");
    }
    ixl::Execution exec() const {
        return parallel ? ixl::Execution::Parallel : ixl::Execution::Serial;
    }
};

std::vector<std::size_t> parse_mark_spec(const std::string& spec, std::size_t len) {
    std::vector<std::size_t> out;
    if (spec == "all") {
        for (std::size_t i = 0; i < len; ++i) out.push_back(i);
        return out;
    }
    const std::string prefix = "positions=";
    if (spec.rfind(prefix, 0) != 0)
        throw std::runtime_error("--mark expects 'all' or 'positions=i,j,...'");
    std::stringstream in(spec.substr(prefix.size()));
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
}

ixl::DerivationTree marked_tree_for(const ixl::GrammarPtr& g, const std::string& word,
                                    const std::string& mark, const BudgetFlags& bf) {
    ixl::Word w = ixl::parse_terminal_word(*g, word);
    auto tree = ixl::derive_tree(g, w, bf.budget, bf.exec());
    if (!tree)
        throw std::runtime_error("word is not derivable within the budget: " + word);
    return ixl::mark_tree(*tree, parse_mark_spec(mark, w.size()));
}

int emit(const CommandResult& res, bool json) {
    if (json) {
        Json envelope;
        switch (res.status) {
        case Status::Ok: envelope["status"] = "ok"; break;
        case Status::Partial: envelope["status"] = "partial"; break;
        case Status::Error: envelope["status"] = "error"; break;
        }
        envelope["payload"] = res.payload;
        envelope["diagnostics"] = res.diagnostics;
        std::cout << envelope.dump(2) << "\n";
    } else {
        for (const auto& d : res.diagnostics) std::cerr << d << "\n";
    }
    return static_cast<int>(res.status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"indexed-grammar toolchain: grounding, derivation trees, the "
                 "pumping construction, HD0L extraction, morphic words, and "
                 "prefix/rare-frequent analyses"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable output envelope");

    std::string grammar_path, word, mark = "all", system_path, symbols_csv;
    std::string corpus_dir = IXL_CORPUS_DIR;
    std::size_t max_len = 20, stream_n = 32, prefix_n = 0;
    long long pump_t = 1;
    std::size_t hd0l_imax = 3;
    bool emit_tree = false;
    BudgetFlags bf;

    auto* parse_cmd = app.add_subcommand("parse", "parse and canonically reprint");
    parse_cmd->add_option("--grammar", grammar_path)->required();

    auto* validate_cmd = app.add_subcommand("validate", "list invariant violations");
    validate_cmd->add_option("--grammar", grammar_path)->required();

    auto* ground_cmd = app.add_subcommand("ground", "grounded equivalent grammar");
    ground_cmd->add_option("--grammar", grammar_path)->required();

    auto* enum_cmd = app.add_subcommand("enumerate", "words of L(G) up to a length");
    enum_cmd->add_option("--grammar", grammar_path)->required();
    enum_cmd->add_option("--max-len", max_len);
    bf.attach(enum_cmd);

    auto* member_cmd = app.add_subcommand("member", "bounded membership test");
    member_cmd->add_option("--grammar", grammar_path)->required();
    member_cmd->add_option("--word", word)->required();
    member_cmd->add_flag("--emit-tree", emit_tree);
    bf.attach(member_cmd);

    auto* tree_cmd = app.add_subcommand("tree", "derivation tree as JSON");
    tree_cmd->add_option("--grammar", grammar_path)->required();
    tree_cmd->add_option("--word", word)->required();
    tree_cmd->add_option("--mark", mark, "all | positions=i,j,...");
    bf.attach(tree_cmd);

    auto* analyze_cmd =
        app.add_subcommand("analyze", "sigma/eta/tau annotations and pump config");
    analyze_cmd->add_option("--grammar", grammar_path)->required();
    analyze_cmd->add_option("--word", word)->required();
    analyze_cmd->add_option("--mark", mark);
    bf.attach(analyze_cmd);

    auto* pump_cmd = app.add_subcommand("pump", "decompose and iterate the pump");
    pump_cmd->add_option("--grammar", grammar_path)->required();
    pump_cmd->add_option("--word", word)->required();
    pump_cmd->add_option("--t", pump_t);
    pump_cmd->add_option("--mark", mark);
    pump_cmd->add_flag("--emit-tree", emit_tree);
    bf.attach(pump_cmd);

    auto* extract_cmd =
        app.add_subcommand("extract-hd0l", "HD0L subset system from a decomposition");
    extract_cmd->add_option("--grammar", grammar_path)->required();
    extract_cmd->add_option("--word", word)->required();
    extract_cmd->add_option("--mark", mark);
    extract_cmd->add_option("--i-max", hd0l_imax, "words g(h^i(axiom)) to print");
    bf.attach(extract_cmd);

    auto* morphic_cmd = app.add_subcommand("morphic", "stream e(h^omega(a))");
    morphic_cmd->add_option("--system", system_path)->required();
    morphic_cmd->add_option("--n", stream_n);

    auto* lang_cmd =
        app.add_subcommand("analyze-language", "prefix and rare/frequent analyses");
    lang_cmd->add_option("--grammar", grammar_path)->required();
    lang_cmd->add_option("--max-len", max_len);
    lang_cmd->add_option("--symbols", symbols_csv, "B as comma-separated terminals");
    lang_cmd->add_option("--prefix-n", prefix_n, "determined-prefix length (default max-len)");
    bf.attach(lang_cmd);

    auto* corpus_cmd = app.add_subcommand("corpus", "list the bundled grammars");
    corpus_cmd->add_option("--dir", corpus_dir, "corpus directory");

    CLI11_PARSE(app, argc, argv);

    CommandResult res;
    try {
        if (parse_cmd->parsed()) {
            auto g = ixl::parse_grammar(read_file(grammar_path));
            std::string rendered = ixl::render_grammar(*g);
            res.payload["rendered"] = rendered;
            res.payload["nonterminals"] = g->nonterminals.size();
            res.payload["terminals"] = g->terminals.size();
            res.payload["stack_symbols"] = g->stack_alphabet.size();
            res.payload["productions"] = g->productions.size();
            res.payload["grounded"] = ixl::is_grounded(*g);
            if (!json) std::cout << rendered;
        } else if (validate_cmd->parsed()) {
            auto g = ixl::parse_grammar(read_file(grammar_path));
            auto report = ixl::validate(*g);
            Json v = Json::array();
            for (const auto& viol : report.violations) {
                Json j;
                j["production"] = viol.production_index;
                j["rule"] = viol.rule;
                j["detail"] = viol.detail;
                v.push_back(std::move(j));
                if (!json)
                    std::cout << (viol.production_index < 0
                                      ? std::string("grammar")
                                      : "production " +
                                            std::to_string(viol.production_index))
                              << ": " << viol.rule << ": " << viol.detail << "\n";
            }
            res.payload["violations"] = std::move(v);
            res.payload["valid"] = report.empty();
            if (!json && report.empty()) std::cout << "valid\n";
        } else if (ground_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            auto grounded = ixl::ground(*g);
            std::string rendered = ixl::render_grammar(*grounded);
            res.payload["rendered"] = rendered;
            res.payload["grounded"] = ixl::is_grounded(*grounded);
            if (!json) std::cout << rendered;
        } else if (enum_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            auto r = ixl::enumerate_words(g, max_len, bf.budget, bf.exec());
            Json words = Json::array();
            for (const auto& w : r.words) {
                std::string rendered = ixl::render_word(g->symbols, w);
                words.push_back(rendered);
                if (!json) std::cout << rendered << "\n";
            }
            res.payload["words"] = std::move(words);
            res.payload["closed"] = r.closed;
            if (!r.closed) {
                res.status = Status::Partial;
                res.diagnostics.push_back(
                    "budget exhausted: the word list may be incomplete");
            }
        } else if (member_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            ixl::Word w = ixl::parse_terminal_word(*g, word);
            auto r = ixl::member(g, w, bf.budget, bf.exec());
            const char* verdict = r.verdict == ixl::MemberVerdict::Yes ? "yes"
                                  : r.verdict == ixl::MemberVerdict::No ? "no"
                                                                        : "unknown";
            res.payload["verdict"] = verdict;
            if (r.tree && emit_tree) res.payload["tree"] = ixl::tree_to_json(*r.tree);
            if (!json) std::cout << verdict << "\n";
            if (r.verdict == ixl::MemberVerdict::Unknown) res.status = Status::Partial;
        } else if (tree_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            auto tree = marked_tree_for(g, word, mark, bf);
            res.payload = ixl::tree_to_json(tree);
            if (!json) std::cout << res.payload.dump(2) << "\n";
        } else if (analyze_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            auto tree = marked_tree_for(g, word, mark, bf);
            auto ann = ixl::annotate(tree, bf.exec());
            res.payload = ixl::annotations_to_json(tree, ann);
            auto cfg = ixl::find_pump_config(tree, bf.exec());
            res.payload["pump_config"] =
                cfg ? ixl::config_to_json(tree, *cfg) : Json(nullptr);
            if (!json) std::cout << res.payload.dump(2) << "\n";
        } else if (pump_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            if (!g->bottom_marker)
                throw std::runtime_error(
                    "pumping requires a grounded grammar; run ground first");
            auto tree = marked_tree_for(g, word, mark, bf);
            auto cfg = ixl::find_pump_config(tree, bf.exec());
            if (!cfg) {
                res.payload["pump_config"] = nullptr;
                res.diagnostics.push_back("no pump configuration in this tree");
                res.status = Status::Partial;
                return emit(res, json);
            }
            auto dec = ixl::decompose(tree, *cfg);
            res.payload["threshold"] = ixl::threshold_to_json(ixl::threshold(*g));
            res.payload["pump_config"] = ixl::config_to_json(tree, *cfg);
            res.payload["decomposition"] = ixl::decomposition_to_json(dec);
            Json iterates = Json::array();
            for (long long t = 0; t <= pump_t; ++t) {
                auto it = ixl::pump_word(dec, t);
                Json j;
                j["t"] = t;
                j["word"] = ixl::render_word(g->symbols, it.word);
                j["marked_count"] = it.marked_count;
                iterates.push_back(std::move(j));
                if (!json) std::cout << "w(" << t << ") = "
                                     << ixl::render_word(g->symbols, it.word) << "\n";
            }
            res.payload["iterates"] = std::move(iterates);
            if (emit_tree) {
                auto surged = ixl::pump_tree_iterate(tree, *cfg, static_cast<int>(pump_t));
                res.payload["pumped_tree"] = ixl::tree_to_json(surged);
            }
            if (!json && json == false && res.payload.contains("decomposition")) {
                // short human summary of the display bracketing
                std::cout << "brackets: ";
                for (const auto& grp : res.payload["decomposition"]["display_brackets"]) {
                    std::cout << "(";
                    for (const auto& part : grp) std::cout << " " << part.get<std::string>();
                    std::cout << " )";
                }
                std::cout << "\n";
            }
        } else if (extract_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            if (!g->bottom_marker)
                throw std::runtime_error(
                    "pumping requires a grounded grammar; run ground first");
            auto tree = marked_tree_for(g, word, mark, bf);
            auto cfg = ixl::find_pump_config(tree, bf.exec());
            if (!cfg) throw std::runtime_error("no pump configuration in this tree");
            auto dec = ixl::decompose(tree, *cfg);
            auto system = ixl::extract_hd0l(dec);
            res.payload = ixl::hd0l_to_json(system);
            Json words = Json::array();
            auto ws = ixl::hd0l_words(system, hd0l_imax);
            for (const auto& lw : ws) words.push_back(ixl::render_lword(lw));
            res.payload["words"] = std::move(words);
            res.diagnostics.push_back(
                "HD0L subset witness; the CD0L refinement is an external result");
            if (!json) std::cout << ixl::render_lsystem(system);
        } else if (morphic_cmd->parsed()) {
            auto system = ixl::parse_lsystem(read_file(system_path));
            if (system.axiom.size() != 1)
                throw std::runtime_error("morphic streaming needs a single-symbol axiom");
            auto stream =
                ixl::morphic_stream(system.h, system.g, system.axiom[0], stream_n);
            res.payload["stream"] = ixl::render_lword(stream);
            res.payload["n"] = stream_n;
            if (!json) std::cout << ixl::render_lword(stream) << "\n";
        } else if (lang_cmd->parsed()) {
            auto g = load_grammar(grammar_path);
            auto r = ixl::enumerate_words(g, max_len, bf.budget, bf.exec());
            res.payload["word_count"] = r.words.size();
            res.payload["closed"] = r.closed;
            res.payload["prefix_chain"] = ixl::is_prefix_chain(r.words);

            std::size_t pn = prefix_n == 0 ? max_len : prefix_n;
            auto dp = ixl::determined_prefix(g, pn, bf.budget);
            Json jp;
            switch (dp.status) {
            case ixl::DeterminedPrefix::Status::Ok: jp["status"] = "ok"; break;
            case ixl::DeterminedPrefix::Status::Partial:
                jp["status"] = "partial";
                res.status = Status::Partial;
                break;
            case ixl::DeterminedPrefix::Status::Finite: jp["status"] = "finite"; break;
            case ixl::DeterminedPrefix::Status::Conflict:
                jp["status"] = "conflict";
                break;
            }
            jp["prefix"] = ixl::render_word(g->symbols, dp.prefix);
            if (dp.conflict) {
                jp["conflict"] =
                    Json::array({ixl::render_word(g->symbols, dp.conflict->first),
                                 ixl::render_word(g->symbols, dp.conflict->second)});
            }
            auto up = ixl::ultimately_periodic_guess(dp.prefix);
            if (up) {
                jp["ultimately_periodic_guess"] =
                    Json::array({ixl::render_word(g->symbols, up->first),
                                 ixl::render_word(g->symbols, up->second)});
            } else {
                jp["ultimately_periodic_guess"] = nullptr;
            }
            res.payload["determined_prefix"] = std::move(jp);

            if (!symbols_csv.empty()) {
                std::set<ixl::SymbolId> B;
                std::stringstream in(symbols_csv);
                std::string tok;
                while (std::getline(in, tok, ',')) {
                    if (tok.empty()) continue;
                    if (!g->symbols.contains(tok))
                        throw std::runtime_error("unknown terminal in --symbols: " + tok);
                    B.insert(g->symbols.id_of(tok));
                }
                auto report = ixl::rare_frequent_report(r.words, B);
                res.payload["rare_frequent"] =
                    ixl::rare_frequent_to_json(report, g->symbols);
            }
            if (!json) std::cout << res.payload.dump(2) << "\n";
        } else if (corpus_cmd->parsed()) {
            const std::vector<std::pair<std::string, std::string>> entries = {
                {"example1", "prefix language of ab^1 ab^2 ab^3 ..."},
                {"anbncn", "a^n b^n c^n"},
                {"ab-n-n", "finite (a b^n)^n sample, n <= 6"},
                {"binary-counter", "finite backwards-binary counter sample"},
                {"cfg-balanced", "a^n b^n (context-free shape)"},
                {"a-2-n", "a^(2^n)"},
                {"ab-star", "(ab)^n"},
                {"copy-ww", "u u over blocks {a, bb}"},
                {"singleton-lambda", "{lambda}"},
                {"singleton-ab", "{ab}"},
            };
            Json arr = Json::array();
            for (const auto& [name, about] : entries) {
                Json e;
                e["name"] = name;
                e["grammar"] = corpus_dir + "/" + name + ".ig";
                e["golden_words"] = corpus_dir + "/" + name + ".words";
                e["about"] = about;
                arr.push_back(std::move(e));
                if (!json)
                    std::cout << name << "\t" << about << "\t" << corpus_dir << "/"
                              << name << ".ig\n";
            }
            res.payload["grammars"] = std::move(arr);
            res.payload["morphic_system"] = corpus_dir + "/thue-like.m";
        }
    } catch (const std::exception& ex) {
        res.status = Status::Error;
        res.diagnostics.push_back(ex.what());
        if (!json) std::cerr << "error: " << ex.what() << "\n";
        if (json) return emit(res, true);
        return static_cast<int>(Status::Error);
    }
    return emit(res, json);
}
