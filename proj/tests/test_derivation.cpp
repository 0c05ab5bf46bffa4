#include <doctest.h>

#include "helpers.hpp"

#include "ixl/derivation.hpp"
#include "ixl/tree_analysis.hpp"

using namespace ixl;
using namespace ixl_tests;

namespace {

SententialForm form_of(const GrammarPtr& g, std::initializer_list<
                                                std::pair<const char*, const char*>>
                                                items) {
    // (symbol, stack-string) pairs; stack "" means terminal when symbol is one.
    SententialForm out;
    for (auto& [sym, stack] : items) {
        FormItem it;
        SymbolId id = g->symbols.id_of(sym);
        if (g->is_terminal(id)) {
            it.terminal = true;
            it.symbol = id;
        } else {
            it.symbol = id;
            for (const char* p = stack; *p; ++p)
                it.stack.push_back(g->symbols.id_of(std::string(1, *p)));
        }
        out.push_back(it);
    }
    return out;
}

} // namespace

TEST_CASE("step copies the stack to every rhs nonterminal") {
    auto g = corpus_grammar("example1");
    auto q = form_of(g, {{"X", "ff$"}});
    auto steps = step(*g, q);
    // X -> Xf and X -> YA both apply
    REQUIRE(steps.size() == 2);
    auto expected = form_of(g, {{"Y", "ff$"}, {"A", "ff$"}});
    CHECK(std::find(steps.begin(), steps.end(), expected) != steps.end());
}

TEST_CASE("step on a terminal-only form is empty") {
    auto g = corpus_grammar("example1");
    auto q = form_of(g, {{"a", ""}, {"b", ""}});
    CHECK(step(*g, q).empty());
}

TEST_CASE("step on the start form gives exactly X$") {
    auto g = corpus_grammar("example1");
    auto steps = step(*g, initial_form(*g));
    REQUIRE(steps.size() == 1);
    CHECK(steps[0] == form_of(g, {{"X", "$"}}));
}

TEST_CASE("enumerate example1: prefixes of ab^1 ab^2 ab^3 ...") {
    auto g = corpus_grammar("example1");
    auto r = enumerate_words(g, 20);
    CHECK(r.closed);
    CHECK(rendered_words(g, r) ==
          std::vector<std::string>{"ababb", "ababbabbb", "ababbabbbabbbb",
                                   "ababbabbbabbbbabbbbb"});
}

TEST_CASE("enumerate singleton-lambda") {
    auto g = corpus_grammar("singleton-lambda");
    auto r = enumerate_words(g, 3);
    CHECK(r.closed);
    REQUIRE(r.words.size() == 1);
    CHECK(r.words[0].empty());
}

TEST_CASE("enumerate the finite (a b^n)^n sample") {
    auto g = corpus_grammar("ab-n-n");
    auto r = enumerate_words(g, 14);
    CHECK(rendered_words(g, r) ==
          std::vector<std::string>{"ab", "abbabb", "abbbabbbabbb"});
}

TEST_CASE("enumerate a-2-n: powers of two") {
    auto g = corpus_grammar("a-2-n");
    auto r = enumerate_words(g, 16);
    CHECK(r.closed);
    CHECK(rendered_words(g, r) ==
          std::vector<std::string>{"a", "aa", "aaaa", "aaaaaaaa", "aaaaaaaaaaaaaaaa"});
}

TEST_CASE("enumerate copy-ww: both halves always agree") {
    auto g = corpus_grammar("copy-ww");
    auto r = enumerate_words(g, 12);
    CHECK(r.closed);
    for (const auto& w : r.words) {
        REQUIRE(w.size() % 2 == 0);
        Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2));
        Word right(w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2), w.end());
        CHECK(left == right);
    }
    CHECK(r.words.size() == 33); // u over {a, bb}, |u| <= 6
}

TEST_CASE("member: yes with a replayable tree") {
    auto g = corpus_grammar("example1");
    auto res = member(g, word_of(g, "ababbabbb"));
    REQUIRE(res.verdict == MemberVerdict::Yes);
    REQUIRE(res.tree.has_value());
    CHECK(render_word(g->symbols, res.tree->yield()) == "ababbabbb");
    CHECK(check_tree(*res.tree).empty());
}

TEST_CASE("member: sound no via prefix and min-yield pruning") {
    auto g = corpus_grammar("example1");
    CHECK(member(g, word_of(g, "ba")).verdict == MemberVerdict::No);
    CHECK(member(g, word_of(g, "ababba")).verdict == MemberVerdict::No);
    CHECK(member(g, word_of(g, "abab")).verdict == MemberVerdict::No);
}

TEST_CASE("member: unknown on budget exhaustion, not no") {
    auto g = corpus_grammar("example1");
    SearchBudget tiny;
    tiny.max_expansions = 3;
    auto res = member(g, word_of(g, "ababbabbb"), tiny);
    CHECK(res.verdict == MemberVerdict::Unknown);
}

TEST_CASE("member agrees with enumerate on every corpus grammar") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        auto r = enumerate_words(g, 10);
        for (const auto& w : r.words) {
            auto res = member(g, w);
            CHECK(res.verdict == MemberVerdict::Yes);
            REQUIRE(res.tree.has_value());
            CHECK(res.tree->yield() == w);
            CHECK(check_tree(*res.tree).empty());
        }
    }
}

TEST_CASE("derive_tree: {S->lambda} gives a root with a single lambda leaf") {
    auto g = corpus_grammar("singleton-lambda");
    auto tree = derive_tree(g, {});
    REQUIRE(tree.has_value());
    const auto& root = tree->nodes[static_cast<std::size_t>(tree->root)];
    REQUIRE(root.children.size() == 1);
    const auto& leaf = tree->nodes[static_cast<std::size_t>(root.children[0])];
    CHECK(leaf.leaf);
    CHECK(leaf.text.empty());
}

TEST_CASE("derive_tree of ab1ab2ab3ab4 matches the known tree shape") {
    auto g = corpus_grammar("example1");
    auto tree = derive_tree(g, word_of(g, "ababbabbbabbbb"));
    REQUIRE(tree.has_value());
    CHECK(check_tree(*tree).empty());
    // path S, X$, Xf$, Xff$ then the split X -> YA
    int v = tree->root;
    std::vector<std::string> labels;
    while (true) {
        labels.push_back(tree->label(v));
        const auto& n = tree->nodes[static_cast<std::size_t>(v)];
        if (n.children.size() != 1) break;
        v = n.children[0];
    }
    CHECK(labels == std::vector<std::string>{"S", "X$", "Xf$", "Xff$"});
    const auto& split = tree->nodes[static_cast<std::size_t>(v)];
    REQUIRE(split.children.size() == 2);
    CHECK(tree->label(split.children[0]) == "Yff$");
    CHECK(tree->label(split.children[1]) == "Aff$");
}

TEST_CASE("grounded trees keep the bottom marker at the bottom") {
    auto g = corpus_grammar("example1");
    auto r = enumerate_words(g, 14);
    for (const auto& w : r.words) {
        auto tree = derive_tree(g, w);
        REQUIRE(tree.has_value());
        for (const auto& n : tree->nodes) {
            if (n.leaf || n.stack.empty()) continue;
            CHECK(n.stack.back() == *g->bottom_marker);
            CHECK(std::count(n.stack.begin(), n.stack.end(), *g->bottom_marker) == 1);
        }
    }
}

TEST_CASE("mark_tree marks exactly the covering leaves and their ancestors") {
    auto g = corpus_grammar("example1");
    auto tree = derive_tree(g, word_of(g, "ababbabbbabbbb"));
    REQUIRE(tree.has_value());

    SUBCASE("empty position set marks nothing") {
        auto m = mark_tree(*tree, {});
        for (const auto& n : m.nodes) CHECK_FALSE(n.marked);
    }
    SUBCASE("all positions mark every node on a root-to-leaf path") {
        auto m = mark_tree(*tree, all_positions(14));
        for (std::size_t v = 0; v < m.nodes.size(); ++v) {
            if (m.nodes[v].leaf)
                CHECK(m.nodes[v].marked == (m.nodes[v].yield_len > 0));
            else
                CHECK(m.nodes[v].marked);
        }
    }
    SUBCASE("first ab only marks the Y$ branch") {
        auto m = mark_tree(*tree, {0, 1});
        int marked_leaves = 0;
        for (std::size_t v = 0; v < m.nodes.size(); ++v) {
            const auto& n = m.nodes[v];
            if (n.leaf && n.marked) {
                ++marked_leaves;
                CHECK(m.label(static_cast<int>(v)) == "ab");
                CHECK(m.label(n.parent) == "Y$");
            }
        }
        CHECK(marked_leaves == 1);
    }
    SUBCASE("out-of-range positions throw") {
        CHECK_THROWS_AS(mark_tree(*tree, {14}), std::out_of_range);
    }
}

TEST_CASE("derive_tree round-trips yields over corpus enumerations") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        for (const auto& w : enumerate_words(g, 9).words) {
            auto tree = derive_tree(g, w);
            REQUIRE(tree.has_value());
            CHECK(tree->yield() == w);
        }
    }
}

TEST_CASE("default budgets close enumerate on every corpus grammar at len 12") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        CHECK(enumerate_words(g, 12).closed);
    }
}
