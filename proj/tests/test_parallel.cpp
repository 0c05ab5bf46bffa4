#include <doctest.h>

#include "helpers.hpp"

#include "ixl/pumping.hpp"
#include "ixl/tree_analysis.hpp"

using namespace ixl;
using namespace ixl_tests;

// The OpenMP kernels must be bit-equal to the serial reference.

TEST_CASE("enumerate: serial and parallel results are identical") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        auto s = enumerate_words(g, 14, {}, Execution::Serial);
        auto p = enumerate_words(g, 14, {}, Execution::Parallel);
        CHECK(s.closed == p.closed);
        CHECK(s.words == p.words);
    }
}

TEST_CASE("enumerate: identical under budget exhaustion too") {
    auto g = corpus_grammar("example1");
    SearchBudget tiny;
    tiny.max_expansions = 37;
    auto s = enumerate_words(g, 40, tiny, Execution::Serial);
    auto p = enumerate_words(g, 40, tiny, Execution::Parallel);
    CHECK_FALSE(s.closed);
    CHECK(s.closed == p.closed);
    CHECK(s.words == p.words);
}

TEST_CASE("member: identical verdicts and canonical trees") {
    auto g = corpus_grammar("example1");
    for (const char* text : {"ababb", "ababbabbb", "ababbabbbabbbb", "ba", "abab"}) {
        CAPTURE(text);
        Word w = word_of(g, text);
        auto s = member(g, w, {}, Execution::Serial);
        auto p = member(g, w, {}, Execution::Parallel);
        CHECK(s.verdict == p.verdict);
        CHECK(s.tree.has_value() == p.tree.has_value());
        if (s.tree) {
            CHECK(s.tree->yield() == p.tree->yield());
            REQUIRE(s.tree->size() == p.tree->size());
            for (std::size_t v = 0; v < s.tree->nodes.size(); ++v) {
                CHECK(s.tree->nodes[v].production == p.tree->nodes[v].production);
                CHECK(s.tree->nodes[v].stack == p.tree->nodes[v].stack);
                CHECK(s.tree->nodes[v].children == p.tree->nodes[v].children);
            }
        }
    }
}

TEST_CASE("annotate: identical side tables") {
    auto g = corpus_grammar("example1");
    auto w = word_of(g, "ababbabbbabbbbabbbbb");
    auto tree = mark_tree(*derive_tree(g, w), all_positions(w.size()));
    auto s = annotate(tree, Execution::Serial);
    auto p = annotate(tree, Execution::Parallel);
    CHECK(s.sigma == p.sigma);
    CHECK(s.eta == p.eta);
    CHECK(s.beta == p.beta);
    CHECK(s.branch == p.branch);
    for (std::size_t v = 0; v < s.tau.size(); ++v) CHECK(s.tau[v] == p.tau[v]);
}

TEST_CASE("find_pump_config: identical configs") {
    for (const char* name : {"example1", "a-2-n", "copy-ww"}) {
        CAPTURE(name);
        auto g0 = corpus_grammar(name);
        auto g = is_grounded(*g0) ? g0 : ground(*g0);
        for (const auto& w : enumerate_words(g, 10).words) {
            auto tree = mark_tree(*derive_tree(g, w), all_positions(w.size()));
            auto s = find_pump_config(tree, Execution::Serial);
            auto p = find_pump_config(tree, Execution::Parallel);
            CHECK(s.has_value() == p.has_value());
            if (s && p) {
                CHECK(s->path == p->path);
                CHECK(s->b1 == p->b1);
                CHECK(s->t1 == p->t1);
                CHECK(s->t2 == p->t2);
                CHECK(s->b2 == p->b2);
            }
        }
    }
}
