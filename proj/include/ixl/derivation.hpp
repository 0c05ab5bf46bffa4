#ifndef IXL_DERIVATION_HPP
#define IXL_DERIVATION_HPP

#include "ixl/budget.hpp"
#include "ixl/grammar.hpp"
#include "ixl/tree.hpp"

#include <optional>
#include <vector>

namespace ixl {

/// One item of a sentential form: a terminal symbol or a nonterminal with
/// its stack (index 0 = top).
struct FormItem {
    bool terminal = false;
    SymbolId symbol = 0;
    std::vector<SymbolId> stack;

    bool operator==(const FormItem&) const = default;
};

using SententialForm = std::vector<FormItem>;

SententialForm initial_form(const IndexedGrammar& g);

/// All forms reachable in one derivation step (every occurrence, every
/// applicable production), ordered by (item index, production index),
/// duplicates removed keeping the first.
std::vector<SententialForm> step(const IndexedGrammar& g, const SententialForm& q);

/// Which implementation of the search kernels to run. Serial is the
/// reference; Parallel uses OpenMP for frontier expansion and must produce
/// identical results.
enum class Execution { Serial, Parallel };

struct EnumerateResult {
    std::vector<Word> words; // sorted length-then-lexicographic
    bool closed = false;     // true: exact up to max_len; false: budget exhausted
};

EnumerateResult enumerate_words(const GrammarPtr& g, std::size_t max_len,
                                const SearchBudget& budget = {},
                                Execution exec = Execution::Serial);

enum class MemberVerdict { Yes, No, Unknown };

struct MemberResult {
    MemberVerdict verdict = MemberVerdict::Unknown;
    std::optional<DerivationTree> tree; // present iff Yes
};

/// Bounded leftmost BFS membership. "No" is returned only when the search
/// space is exhausted under sound prunings alone (terminal-prefix mismatch,
/// minimum-yield lower bound); any budget cut degrades No to Unknown.
MemberResult member(const GrammarPtr& g, const Word& w,
                    const SearchBudget& budget = {},
                    Execution exec = Execution::Serial);

/// Canonical-first derivation tree for w, or absent if membership is not Yes.
std::optional<DerivationTree> derive_tree(const GrammarPtr& g, const Word& w,
                                          const SearchBudget& budget = {},
                                          Execution exec = Execution::Serial);

} // namespace ixl

#endif
