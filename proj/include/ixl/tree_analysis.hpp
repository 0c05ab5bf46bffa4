#ifndef IXL_TREE_ANALYSIS_HPP
#define IXL_TREE_ANALYSIS_HPP

#include "ixl/derivation.hpp"
#include "ixl/tree.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ixl {

/// Node type: 3-way partition of the nonterminal alphabet by how it shows up
/// among the beta nodes (absent / present but never marked / marked).
struct TauType {
    std::set<SymbolId> absent;
    std::set<SymbolId> unmarked_only;
    std::set<SymbolId> marked;

    bool operator==(const TauType&) const = default;
};

SymbolId sigma(const DerivationTree& tree, int v); // throws on leaves
int eta(const DerivationTree& tree, int v);        // stack height; throws on leaves

/// Nodes in v's scope none of whose children are in scope, in left-to-right
/// (preorder) order. Scope: internal descendants reachable without the stack
/// height dropping below eta(v).
std::vector<int> compute_beta(const DerivationTree& tree, int v);

TauType compute_tau(const DerivationTree& tree, int v);

/// Internal nodes with at least two marked children.
std::vector<int> branch_nodes(const DerivationTree& tree);

/// Side table of per-node annotations, computed in one pass (optionally with
/// the OpenMP kernel). Indexed by node id; leaf entries are empty.
struct TreeAnnotations {
    std::vector<SymbolId> sigma;
    std::vector<int> eta;
    std::vector<std::vector<int>> beta; // sorted by node id
    std::vector<TauType> tau;
    std::vector<bool> branch;
    std::vector<int> preorder; // preorder rank, for left/right tests
};

TreeAnnotations annotate(const DerivationTree& tree,
                         Execution exec = Execution::Serial);

/// Appendix descent: internal nodes, each a descendant of the previous, with
/// the last in beta of the first.
struct Descent {
    std::vector<int> nodes;
    bool controlled = false; // every step parent-to-child
    bool flat = false;       // all nodes at eta(first)
};

/// Validates the node list and computes the flags. Throws std::invalid_argument
/// if the list is not a descent in the tree.
Descent make_descent(const DerivationTree& tree, const std::vector<int>& nodes);

/// Number of consecutive descent pairs whose connecting tree path (first
/// endpoint inclusive, second exclusive) contains a branch node.
int count_splits(const DerivationTree& tree, const Descent& d);

/// Lemma-2 pump configuration: indices into a root-to-leaf path.
struct PumpConfig {
    std::vector<int> path; // node ids, root first, ending at a leaf's parent
    int b1 = 0, t1 = 0, t2 = 0, b2 = 0;
};

/// Canonical-first search: paths ordered by leftmost leaf, then quadruples in
/// lexicographic (b1, t1, t2, b2) order. Absent when no path satisfies the
/// Lemma-2 conditions.
std::optional<PumpConfig> find_pump_config(const DerivationTree& tree,
                                           Execution exec = Execution::Serial);

/// Independent re-verification of all five Lemma-2 conditions; shares no code
/// with annotate()/find_pump_config(). Empty result means the config is valid.
std::vector<std::string> check_pump_config(const DerivationTree& tree,
                                           const PumpConfig& cfg);

struct DescentBoundReport {
    long long descents_checked = 0;
    long long limited_descents = 0;
    std::vector<std::string> violations;
    bool budget_exhausted = false;
};

/// Enumerates maximal flat descents, brute-forces the "limited" predicate,
/// and asserts the |N|*3^|N| split bound on each limited one.
DescentBoundReport verify_descent_bound(const DerivationTree& tree,
                                        long long max_quadruple_work = 50000000);

} // namespace ixl

#endif
