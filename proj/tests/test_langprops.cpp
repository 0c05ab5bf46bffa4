#include <doctest.h>

#include "helpers.hpp"

#include "ixl/langprops.hpp"

using namespace ixl;
using namespace ixl_tests;

namespace {

Word w(const GrammarPtr& g, const std::string& text) {
    return parse_terminal_word(*g, text);
}

/// Naive O(n^2) pairwise oracle.
bool chain_oracle(const std::vector<Word>& words) {
    auto pref = [](const Word& a, const Word& b) {
        return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    };
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j)
            if (!pref(words[i], words[j]) && !pref(words[j], words[i])) return false;
    return true;
}

} // namespace

TEST_CASE("is_prefix_chain basics") {
    auto g = corpus_grammar("ab-star");
    CHECK(is_prefix_chain({{}, w(g, "ab"), w(g, "abab"), w(g, "ababab")}));
    CHECK_FALSE(is_prefix_chain({w(g, "ab"), w(g, "ba")}));
    CHECK(is_prefix_chain({}));
    CHECK(is_prefix_chain(enumerate_words(corpus_grammar("example1"), 30).words));
}

TEST_CASE("is_prefix_chain agrees with the pairwise oracle") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto words = enumerate_words(corpus_grammar(name), 10).words;
        CHECK(is_prefix_chain(words) == chain_oracle(words));
    }
    // mixed bags
    auto g = corpus_grammar("ab-star");
    std::vector<Word> bag{w(g, "a"), w(g, "ab"), w(g, "b")};
    CHECK(is_prefix_chain(bag) == chain_oracle(bag));
}

TEST_CASE("determined_prefix of example1 reaches 12 symbols") {
    auto g = corpus_grammar("example1");
    auto dp = determined_prefix(g, 12);
    REQUIRE(dp.status == DeterminedPrefix::Status::Ok);
    CHECK(render_word(g->symbols, dp.prefix) == "ababbabbbabb");
}

TEST_CASE("determined_prefix consistency under growing n") {
    auto g = corpus_grammar("example1");
    auto shorter = determined_prefix(g, 9);
    auto longer = determined_prefix(g, 17);
    REQUIRE(shorter.status == DeterminedPrefix::Status::Ok);
    REQUIRE(longer.status == DeterminedPrefix::Status::Ok);
    CHECK(std::equal(shorter.prefix.begin(), shorter.prefix.end(),
                     longer.prefix.begin()));
}

TEST_CASE("determined_prefix conflict on {a, b}") {
    auto g = parse_grammar(
        "nonterminals: S\nterminals: a b\nstack:\nstart: S\nS => a\nS => b\n");
    auto dp = determined_prefix(g, 4);
    REQUIRE(dp.status == DeterminedPrefix::Status::Conflict);
    REQUIRE(dp.conflict.has_value());
    CHECK(render_word(g->symbols, dp.conflict->first) == "a");
    CHECK(render_word(g->symbols, dp.conflict->second) == "b");
}

TEST_CASE("determined_prefix on a finite language closes") {
    auto g = corpus_grammar("singleton-ab");
    auto dp = determined_prefix(g, 10);
    CHECK(dp.status == DeterminedPrefix::Status::Finite);
    CHECK(render_word(g->symbols, dp.prefix) == "ab");
}

TEST_CASE("ultimately_periodic_guess") {
    auto g = corpus_grammar("ab-star");
    SUBCASE("pure period") {
        auto r = ultimately_periodic_guess(w(g, "abababab"));
        REQUIRE(r.has_value());
        CHECK(r->first.empty());
        CHECK(render_word(g->symbols, r->second) == "ab");
    }
    SUBCASE("non-periodic prefix stays absent at 3-period confidence") {
        CHECK_FALSE(ultimately_periodic_guess(w(g, "abaabaaab")).has_value());
    }
    SUBCASE("cabab: fewer than 3 visible periods is absent") {
        auto gc = parse_grammar(
            "nonterminals: S\nterminals: a b c\nstack:\nstart: S\nS => c\n");
        CHECK_FALSE(
            ultimately_periodic_guess(parse_terminal_word(*gc, "cabab")).has_value());
        // with three periods visible the (u, y) split appears
        auto r = ultimately_periodic_guess(parse_terminal_word(*gc, "cabababa"));
        REQUIRE(r.has_value());
        CHECK(render_word(gc->symbols, r->first) == "c");
        CHECK(render_word(gc->symbols, r->second) == "ab");
    }
}

TEST_CASE("rare_frequent_report: the (a b^n)^n sample is rare-and-frequent") {
    auto g = corpus_grammar("ab-n-n");
    auto sample = enumerate_words(g, 42).words;
    REQUIRE(sample.size() == 6);
    std::set<SymbolId> B{g->symbols.id_of("a")};
    auto report = rare_frequent_report(sample, B);
    CHECK(report.verdict == RareFrequentReport::Verdict::RareAndFrequentEvidence);
    CHECK(report.counts == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
    REQUIRE(report.min_gaps.size() == 6);
    CHECK_FALSE(report.min_gaps[0].has_value());
    CHECK(*report.min_gaps[1] == 3);
    CHECK(*report.min_gaps[5] == 7);
}

TEST_CASE("rare_frequent_report: example1 grows counts but not gaps") {
    auto g = corpus_grammar("example1");
    auto sample = enumerate_words(g, 27).words;
    REQUIRE(sample.size() >= 4);
    std::set<SymbolId> B{g->symbols.id_of("a")};
    auto report = rare_frequent_report(sample, B);
    CHECK(report.verdict == RareFrequentReport::Verdict::Inconclusive);
    // the first two a's are always 2 apart
    for (const auto& gap : report.min_gaps)
        if (gap) CHECK(*gap == 2);
}

TEST_CASE("rare_frequent_report: empty B is nonfrequent with max 0") {
    auto g = corpus_grammar("example1");
    auto sample = enumerate_words(g, 20).words;
    auto report = rare_frequent_report(sample, {});
    CHECK(report.verdict == RareFrequentReport::Verdict::NonfrequentEvidence);
    CHECK(report.max_count == 0);
}

TEST_CASE("#_B equals the sum of per-symbol counts") {
    auto g = corpus_grammar("anbncn");
    auto sample = enumerate_words(g, 12).words;
    std::set<SymbolId> B{g->symbols.id_of("a"), g->symbols.id_of("c")};
    auto report = rare_frequent_report(sample, B);
    for (std::size_t k = 0; k < sample.size(); ++k) {
        std::size_t naive = 0;
        for (SymbolId s : sample[k])
            if (s == g->symbols.id_of("a") || s == g->symbols.id_of("c")) ++naive;
        CHECK(report.counts[k] == naive);
    }
}

TEST_CASE("report verdicts are deterministic") {
    auto g = corpus_grammar("ab-n-n");
    auto sample = enumerate_words(g, 42).words;
    std::set<SymbolId> B{g->symbols.id_of("a")};
    auto r1 = rare_frequent_report(sample, B);
    auto r2 = rare_frequent_report(sample, B);
    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.counts == r2.counts);
    CHECK(r1.note == r2.note);
}
