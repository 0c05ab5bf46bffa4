#ifndef IXL_TREE_HPP
#define IXL_TREE_HPP

#include "ixl/grammar.hpp"
#include "ixl/symbols.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ixl {

/// Derivation tree. Internal nodes carry a nonterminal plus its stack
/// (index 0 = top); leaves carry a terminal string, possibly empty.
/// Children of an internal node are the result of one production application:
/// an all-terminal right-hand side becomes a single leaf child, otherwise
/// maximal terminal runs become leaves and each nonterminal becomes an
/// internal child with the stack distributed per the derivation relation.
struct DerivationTree {
    struct Node {
        bool leaf = false;
        SymbolId symbol = 0;          // internal only
        std::vector<SymbolId> stack;  // internal only
        Word text;                    // leaf only
        int production = -1;          // internal only
        int parent = -1;
        std::vector<int> children;
        bool marked = false;
        std::size_t yield_start = 0;
        std::size_t yield_len = 0;
    };

    GrammarPtr grammar;
    std::vector<Node> nodes;
    int root = 0;
    std::vector<std::size_t> marked_positions; // sorted, unique

    Word yield() const;
    std::size_t size() const { return nodes.size(); }
    /// "Xff$" for internal nodes, the rendered terminal string for leaves.
    std::string label(int node) const;
    bool fully_marked() const;
};

/// Recomputes yield spans bottom-up; called by every constructor path.
void compute_spans(DerivationTree& tree);

/// Returns a copy with exactly the given yield positions marked: a leaf is
/// marked iff its span covers a marked position, an internal node iff it has
/// a marked descendant. Throws std::out_of_range for positions >= |yield|.
DerivationTree mark_tree(const DerivationTree& tree, const std::vector<std::size_t>& positions);

/// Production-replay validator: checks the root label, every node's children
/// against its production (stacks included), and for grounded grammars that
/// every nonempty internal stack has the bottom marker exactly once, at the
/// bottom. Returns human-readable problems; empty means the tree replays.
std::vector<std::string> check_tree(const DerivationTree& tree);

} // namespace ixl

#endif
