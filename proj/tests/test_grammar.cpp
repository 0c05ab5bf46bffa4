#include <doctest.h>

#include "helpers.hpp"

#include "ixl/grammar.hpp"

#include <random>

using namespace ixl;
using namespace ixl_tests;

TEST_CASE("example1 parses with the expected alphabets") {
    auto g = corpus_grammar("example1");
    CHECK(g->nonterminals.size() == 5);
    CHECK(g->terminals.size() == 2);
    CHECK(g->stack_alphabet.size() == 1);
    REQUIRE(g->bottom_marker.has_value());
    CHECK(g->productions.size() == 9);
    CHECK(g->name(g->start) == "S");
}

TEST_CASE("lambda right-hand side parses as an empty plain production") {
    auto g = parse_grammar("nonterminals: S\nterminals:\nstack:\nstart: S\nS => _\n");
    REQUIRE(g->productions.size() == 1);
    CHECK(g->productions[0].kind == ProductionKind::Plain);
    CHECK(g->productions[0].rhs.empty());
}

TEST_CASE("undeclared symbols are reported with their line") {
    std::string text = "nonterminals: S\nterminals: a\nstack:\nstart: S\nS => a Z\n";
    try {
        parse_grammar(text);
        FAIL("expected a parse error");
    } catch (const GrammarError& e) {
        CHECK(e.line() == 5);
        CHECK(std::string(e.what()).find("Z") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line numbers") {
    CHECK_THROWS_AS(parse_grammar("nonterminals: S\nstart: S\nS S => a\n"),
                    GrammarError);
    CHECK_THROWS_AS(parse_grammar("nonterminals: S\nstart: S\nS =>\n"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("nonterminals: S\nS => S\n"), GrammarError);
    // '$' may not be declared
    CHECK_THROWS_AS(parse_grammar("nonterminals: S\nstack: $\nstart: S\n"),
                    GrammarError);
}

TEST_CASE("render/parse round-trips every corpus grammar") {
    for (const char* name : kCorpusNames) {
        auto g = corpus_grammar(name);
        std::string once = render_grammar(*g);
        auto reparsed = parse_grammar(once);
        CHECK(render_grammar(*reparsed) == once);
    }
}

TEST_CASE("validate: example1 is clean, constructed breaches are reported") {
    auto g = corpus_grammar("example1");
    CHECK(validate(*g).empty());

    SUBCASE("start symbol on a push rhs of a grounded grammar") {
        std::string text = "nonterminals: S X\nterminals: a\nstack: f\nstart: S\n"
                           "S => X +$\nX => S +f\nX -$ => a\n";
        auto bad = parse_grammar(text);
        auto report = validate(*bad);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule == "grounded-form");
        CHECK(report.violations[0].production_index == 1);
    }

    SUBCASE("overlapping alphabets") {
        std::string text = "nonterminals: S a\nterminals: a\nstack:\nstart: S\nS => a\n";
        auto bad = parse_grammar(text);
        auto report = validate(*bad);
        REQUIRE(!report.empty());
        CHECK(report.violations[0].rule == "alphabet-disjointness");
    }
}

TEST_CASE("is_grounded") {
    CHECK(is_grounded(*corpus_grammar("example1")));
    CHECK_FALSE(is_grounded(*corpus_grammar("cfg-balanced")));
    CHECK_FALSE(is_grounded(*corpus_grammar("anbncn")));
    for (const char* name : kCorpusNames) {
        auto g = corpus_grammar(name);
        CHECK(is_grounded(*ground(*g)));
    }
}

TEST_CASE("ground keeps the language: bounded enumerations agree") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        auto g2 = ground(*g);
        auto w1 = rendered_words(g, enumerate_words(g, 8));
        auto w2 = rendered_words(g2, enumerate_words(g2, 8, grounded_budget()));
        CHECK(w1 == w2);
    }
}

TEST_CASE("grounding the classic a^n b^n grammar") {
    auto g = corpus_grammar("cfg-balanced");
    auto g2 = ground(*g);
    auto words = rendered_words(g2, enumerate_words(g2, 8));
    CHECK(words == std::vector<std::string>{"", "ab", "aabb", "aaabbb", "aaaabbbb"});
}

TEST_CASE("grounding {S -> lambda} preserves the singleton language") {
    auto g = corpus_grammar("singleton-lambda");
    auto g2 = ground(*g);
    auto r = enumerate_words(g2, 4);
    CHECK(r.closed);
    REQUIRE(r.words.size() == 1);
    CHECK(r.words[0].empty());
}

TEST_CASE("grounding an already grounded grammar still works") {
    auto g = corpus_grammar("example1");
    auto g2 = ground(*g);
    CHECK(is_grounded(*g2));
    CHECK(validate(*g2).empty());
    auto w1 = rendered_words(g, enumerate_words(g, 15));
    auto w2 = rendered_words(g2, enumerate_words(g2, 15, grounded_budget()));
    CHECK(w1 == w2);
}

TEST_CASE("ground is idempotent enough to iterate") {
    auto g = corpus_grammar("cfg-balanced");
    auto g2 = ground(*g);
    auto g3 = ground(*g2); // fresh namespace grows one '%'
    CHECK(is_grounded(*g3));
    auto w2 = rendered_words(g2, enumerate_words(g2, 6, grounded_budget()));
    auto w3 = rendered_words(g3, enumerate_words(g3, 6, grounded_budget()));
    CHECK(w2 == w3);
}

namespace {

/// Small random plain/push/pop grammars for the round-trip property.
GrammarPtr random_grammar(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1), small(1, 3);
    std::ostringstream out;
    int nts = small(rng) + 1, terms = small(rng), stacks = small(rng) - 1;
    out << "nonterminals:";
    for (int i = 0; i < nts; ++i) out << " N" << i;
    out << "\nterminals:";
    for (int i = 0; i < terms; ++i) out << " t" << i;
    out << "\nstack:";
    for (int i = 0; i < stacks; ++i) out << " f" << i;
    out << "\nstart: N0\n";
    int prods = small(rng) + 1;
    std::uniform_int_distribution<int> nt(0, nts - 1);
    for (int p = 0; p < prods; ++p) {
        int kind = stacks > 0 ? std::uniform_int_distribution<int>(0, 2)(rng) : 0;
        std::uniform_int_distribution<int> fpick(0, std::max(stacks - 1, 0));
        if (kind == 1) {
            out << "N" << nt(rng) << " => N" << nt(rng) << " +f" << fpick(rng) << "\n";
        } else {
            out << "N" << nt(rng);
            if (kind == 2) out << " -f" << fpick(rng);
            out << " =>";
            int len = std::uniform_int_distribution<int>(0, 3)(rng);
            if (len == 0) {
                out << " _";
            } else {
                for (int i = 0; i < len; ++i) {
                    if (terms > 0 && coin(rng))
                        out << " t"
                            << std::uniform_int_distribution<int>(0, terms - 1)(rng);
                    else
                        out << " N" << nt(rng);
                }
            }
            out << "\n";
        }
    }
    return parse_grammar(out.str());
}

} // namespace

TEST_CASE("property: render o parse is the identity on rendered grammars") {
    std::mt19937 rng(20140825);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_grammar(rng);
        std::string once = render_grammar(*g);
        CHECK(render_grammar(*parse_grammar(once)) == once);
    }
}

TEST_CASE("property: ground output is grounded and valid on random grammars") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_grammar(rng);
        if (!validate(*g).empty()) continue;
        auto g2 = ground(*g);
        CHECK(validate(*g2).empty());
        CHECK(is_grounded(*g2));
    }
}

TEST_CASE("parse_terminal_word tokenizes by longest match") {
    auto g = corpus_grammar("binary-counter");
    auto w = parse_terminal_word(*g, "0:1:01");
    CHECK(w.size() == 6);
    CHECK(render_word(g->symbols, w) == "0:1:01");
    CHECK_THROWS_AS(parse_terminal_word(*g, "0:2"), GrammarError);
}
