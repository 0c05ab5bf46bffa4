#ifndef IXL_LANGPROPS_HPP
#define IXL_LANGPROPS_HPP

#include "ixl/derivation.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ixl {

/// True iff the words are pairwise prefix-comparable (token-wise).
bool is_prefix_chain(const std::vector<Word>& words);

struct DeterminedPrefix {
    enum class Status {
        Ok,      // n symbols of the determined word recovered
        Partial, // budget ran out before n symbols; prefix is what was seen
        Finite,  // search closed: the language cannot reach n symbols
        Conflict // two enumerated words are not prefix-comparable
    };
    Status status = Status::Partial;
    Word prefix;
    std::optional<std::pair<Word, Word>> conflict;
};

/// Recovers up to n symbols of the infinite word determined by L(g), raising
/// the enumeration length until a long-enough witness word appears.
DeterminedPrefix determined_prefix(const GrammarPtr& g, std::size_t n,
                                   const SearchBudget& budget = {});

/// Shortest (|y| first, then |u|) ultimately-periodic explanation u y^omega
/// of the finite prefix x, requiring at least 3 visible periods; an absent
/// result means no such explanation at that confidence. A guess, not a proof.
std::optional<std::pair<Word, Word>> ultimately_periodic_guess(const Word& x);

struct RareFrequentReport {
    enum class Verdict { NonfrequentEvidence, RareAndFrequentEvidence, Inconclusive };
    std::vector<std::size_t> counts;                  // #_B per sample word
    std::size_t max_count = 0;                        // empirical c_B candidate
    std::vector<std::optional<std::size_t>> min_gaps; // per word; absent if < 2 hits
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

/// Evidence-only analysis of Theorem 4's premises on a finite sample:
/// strictly growing counts + strictly growing minimum gaps is evidence the
/// sampled language has a rare-and-frequent subset (hence is not indexed);
/// a plateau in the counts is nonfrequent evidence.
RareFrequentReport rare_frequent_report(const std::vector<Word>& sample,
                                        const std::set<SymbolId>& B);

} // namespace ixl

#endif
