#include "ixl/tree.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ixl {

Word DerivationTree::yield() const {
    Word out;
    // Iterative DFS, children left to right.
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const Node& n = nodes[v];
        if (n.leaf) {
            out.insert(out.end(), n.text.begin(), n.text.end());
        } else {
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
                stack.push_back(*it);
        }
    }
    return out;
}

std::string DerivationTree::label(int node) const {
    const Node& n = nodes[node];
    std::string out;
    if (n.leaf) {
        for (SymbolId s : n.text) out += grammar->name(s);
        return out;
    }
    out = grammar->name(n.symbol);
    for (SymbolId f : n.stack) out += grammar->name(f);
    return out;
}

bool DerivationTree::fully_marked() const {
    return marked_positions.size() == yield().size();
}

void compute_spans(DerivationTree& tree) {
    std::size_t cursor = 0;
    // Recursive assignment in yield order.
    std::vector<std::pair<int, bool>> work{{tree.root, false}};
    while (!work.empty()) {
        auto [v, done] = work.back();
        work.pop_back();
        auto& n = tree.nodes[v];
        if (n.leaf) {
            n.yield_start = cursor;
            n.yield_len = n.text.size();
            cursor += n.text.size();
            continue;
        }
        if (done) {
            n.yield_len = cursor - n.yield_start;
            continue;
        }
        n.yield_start = cursor;
        work.push_back({v, true});
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            work.push_back({*it, false});
    }
}

DerivationTree mark_tree(const DerivationTree& tree,
                         const std::vector<std::size_t>& positions) {
    DerivationTree out = tree;
    compute_spans(out);
    std::size_t total = out.nodes[out.root].yield_len;
    std::set<std::size_t> marks(positions.begin(), positions.end());
    for (std::size_t p : marks)
        if (p >= total)
            throw std::out_of_range("marked position " + std::to_string(p) +
                                    " out of range for yield of length " +
                                    std::to_string(total));
    out.marked_positions.assign(marks.begin(), marks.end());

    for (auto& n : out.nodes) n.marked = false;
    // Leaves first, then propagate to ancestors.
    for (std::size_t v = 0; v < out.nodes.size(); ++v) {
        auto& n = out.nodes[v];
        if (!n.leaf || n.yield_len == 0) continue;
        auto it = marks.lower_bound(n.yield_start);
        if (it != marks.end() && *it < n.yield_start + n.yield_len) {
            int cur = static_cast<int>(v);
            while (cur >= 0 && !out.nodes[cur].marked) {
                out.nodes[cur].marked = true;
                cur = out.nodes[cur].parent;
            }
        }
    }
    return out;
}

namespace {

void check_children(const DerivationTree& tree, int v, const Production& p,
                    const std::vector<SymbolId>& child_stack,
                    std::vector<std::string>& problems) {
    const auto& g = *tree.grammar;
    const auto& n = tree.nodes[v];
    const auto& rhs = p.rhs;

    bool any_nt = std::any_of(rhs.begin(), rhs.end(),
                              [&](SymbolId s) { return g.is_nonterminal(s); });
    auto fail = [&](const std::string& why) {
        problems.push_back("node " + std::to_string(v) + " (" + tree.label(v) +
                           "): " + why);
    };

    if (!any_nt) {
        if (n.children.size() != 1 || !tree.nodes[n.children[0]].leaf) {
            fail("terminal rhs must produce exactly one leaf child");
            return;
        }
        if (tree.nodes[n.children[0]].text != rhs)
            fail("leaf text does not match production rhs");
        return;
    }

    // Expected pattern: maximal terminal runs as leaves, nonterminals as
    // internal children carrying child_stack.
    std::vector<std::pair<bool, Word>> expect; // (leaf?, text) / (internal, [sym])
    Word run;
    for (SymbolId s : rhs) {
        if (g.is_nonterminal(s)) {
            if (!run.empty()) expect.push_back({true, run}), run.clear();
            expect.push_back({false, {s}});
        } else {
            run.push_back(s);
        }
    }
    if (!run.empty()) expect.push_back({true, run});

    if (n.children.size() != expect.size()) {
        fail("child count does not match production rhs");
        return;
    }
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const auto& c = tree.nodes[n.children[i]];
        if (expect[i].first) {
            if (!c.leaf || c.text != expect[i].second)
                fail("child " + std::to_string(i) + " should be leaf '" +
                     render_word(g.symbols, expect[i].second) + "'");
        } else {
            if (c.leaf || c.symbol != expect[i].second[0])
                fail("child " + std::to_string(i) + " has wrong nonterminal");
            else if (c.stack != child_stack)
                fail("child " + std::to_string(i) + " has wrong stack");
        }
    }
}

} // namespace

std::vector<std::string> check_tree(const DerivationTree& tree) {
    std::vector<std::string> problems;
    const auto& g = *tree.grammar;
    const auto& root = tree.nodes[tree.root];
    if (root.leaf || root.symbol != g.start || !root.stack.empty())
        problems.push_back("root must be the start symbol with an empty stack");

    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& n = tree.nodes[v];
        if (n.leaf) continue;
        if (n.production < 0 ||
            n.production >= static_cast<int>(g.productions.size())) {
            problems.push_back("node " + std::to_string(v) + " has no production");
            continue;
        }
        const Production& p = g.productions[n.production];
        if (p.lhs != n.symbol) {
            problems.push_back("node " + std::to_string(v) +
                               ": production lhs mismatch");
            continue;
        }
        switch (p.kind) {
        case ProductionKind::Plain:
            check_children(tree, static_cast<int>(v), p, n.stack, problems);
            break;
        case ProductionKind::Push: {
            std::vector<SymbolId> grown;
            grown.reserve(n.stack.size() + 1);
            grown.push_back(p.push_symbol);
            grown.insert(grown.end(), n.stack.begin(), n.stack.end());
            if (n.children.size() != 1 || tree.nodes[n.children[0]].leaf ||
                tree.nodes[n.children[0]].symbol != p.push_target ||
                tree.nodes[n.children[0]].stack != grown)
                problems.push_back("node " + std::to_string(v) +
                                   ": push child mismatch");
            break;
        }
        case ProductionKind::Pop: {
            if (n.stack.empty() || n.stack.front() != p.pop_symbol) {
                problems.push_back("node " + std::to_string(v) +
                                   ": pop does not match stack top");
                break;
            }
            std::vector<SymbolId> popped(n.stack.begin() + 1, n.stack.end());
            check_children(tree, static_cast<int>(v), p, popped, problems);
            break;
        }
        }
        // Bottom-marker discipline; the root's empty stack is exempt.
        if (g.bottom_marker && !n.stack.empty()) {
            SymbolId d = *g.bottom_marker;
            if (n.stack.back() != d)
                problems.push_back("node " + std::to_string(v) +
                                   ": stack does not end with the bottom marker");
            if (std::count(n.stack.begin(), n.stack.end(), d) != 1)
                problems.push_back("node " + std::to_string(v) +
                                   ": bottom marker appears off the bottom");
        }
    }
    return problems;
}

} // namespace ixl
