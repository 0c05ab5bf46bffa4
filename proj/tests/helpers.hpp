#ifndef IXL_TESTS_HELPERS_HPP
#define IXL_TESTS_HELPERS_HPP

#include "ixl/derivation.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ixl_tests {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ixl::GrammarPtr corpus_grammar(const std::string& name) {
    return ixl::parse_grammar(read_file(std::string(IXL_CORPUS_DIR) + "/" + name + ".ig"));
}

inline std::vector<std::string> rendered_words(const ixl::GrammarPtr& g,
                                               const ixl::EnumerateResult& r) {
    std::vector<std::string> out;
    for (const auto& w : r.words) out.push_back(ixl::render_word(g->symbols, w));
    return out;
}

inline ixl::Word word_of(const ixl::GrammarPtr& g, const std::string& text) {
    return ixl::parse_terminal_word(*g, text);
}

/// Budget for searches in ground()-produced grammars: their per-terminal
/// skip chains defeat the yield lower bounds, so the searched-space height
/// cap does the pruning. Raw-vs-grounded set-equality checks validate that
/// the cap is generous enough.
inline ixl::SearchBudget grounded_budget() {
    ixl::SearchBudget b;
    b.max_stack_height = 24;
    b.max_expansions = 4000000;
    return b;
}

inline std::vector<std::size_t> all_positions(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

inline const char* kCorpusNames[] = {
    "example1",  "anbncn",  "ab-n-n",           "binary-counter", "cfg-balanced",
    "a-2-n",     "ab-star", "copy-ww",          "singleton-lambda",
    "singleton-ab",
};

} // namespace ixl_tests

#endif
