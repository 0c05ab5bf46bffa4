#include "ixl/tree_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ixl {

namespace {

void require_internal(const DerivationTree& tree, int v) {
    if (v < 0 || v >= static_cast<int>(tree.nodes.size()))
        throw std::invalid_argument("node id out of range");
    if (tree.nodes[static_cast<std::size_t>(v)].leaf)
        throw std::invalid_argument("operation defined on internal nodes only");
}

std::vector<int> preorder_ranks(const DerivationTree& tree) {
    std::vector<int> rank(tree.nodes.size(), 0);
    int next = 0;
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        rank[static_cast<std::size_t>(v)] = next++;
        const auto& n = tree.nodes[static_cast<std::size_t>(v)];
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            stack.push_back(*it);
    }
    return rank;
}

} // namespace

SymbolId sigma(const DerivationTree& tree, int v) {
    require_internal(tree, v);
    return tree.nodes[static_cast<std::size_t>(v)].symbol;
}

int eta(const DerivationTree& tree, int v) {
    require_internal(tree, v);
    return static_cast<int>(tree.nodes[static_cast<std::size_t>(v)].stack.size());
}

std::vector<int> compute_beta(const DerivationTree& tree, int v) {
    require_internal(tree, v);
    int floor = eta(tree, v);
    std::vector<int> out;
    // Downward traversal with cutoff when the height drops below eta(v);
    // preorder (children pushed right-to-left) gives left-to-right output.
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        const auto& n = tree.nodes[static_cast<std::size_t>(u)];
        bool last = true;
        for (int c : n.children) {
            const auto& cn = tree.nodes[static_cast<std::size_t>(c)];
            if (!cn.leaf && static_cast<int>(cn.stack.size()) >= floor) last = false;
        }
        if (last) {
            out.push_back(u);
        } else {
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
                const auto& cn = tree.nodes[static_cast<std::size_t>(*it)];
                if (!cn.leaf && static_cast<int>(cn.stack.size()) >= floor)
                    stack.push_back(*it);
            }
        }
    }
    return out;
}

TauType compute_tau(const DerivationTree& tree, int v) {
    auto beta = compute_beta(tree, v);
    TauType tau;
    std::set<SymbolId> present, marked;
    for (int u : beta) {
        const auto& n = tree.nodes[static_cast<std::size_t>(u)];
        present.insert(n.symbol);
        if (n.marked) marked.insert(n.symbol);
    }
    for (SymbolId a : tree.grammar->nonterminals) {
        if (marked.count(a))
            tau.marked.insert(a);
        else if (present.count(a))
            tau.unmarked_only.insert(a);
        else
            tau.absent.insert(a);
    }
    return tau;
}

std::vector<int> branch_nodes(const DerivationTree& tree) {
    std::vector<int> out;
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& n = tree.nodes[v];
        if (n.leaf) continue;
        int marked_children = 0;
        for (int c : n.children)
            if (tree.nodes[static_cast<std::size_t>(c)].marked) ++marked_children;
        if (marked_children >= 2) out.push_back(static_cast<int>(v));
    }
    return out;
}

TreeAnnotations annotate(const DerivationTree& tree, Execution exec) {
    TreeAnnotations ann;
    std::size_t n = tree.nodes.size();
    ann.sigma.assign(n, 0);
    ann.eta.assign(n, 0);
    ann.beta.assign(n, {});
    ann.tau.assign(n, {});
    ann.branch.assign(n, false);
    ann.preorder = preorder_ranks(tree);

    auto branches = branch_nodes(tree);
    for (int v : branches) ann.branch[static_cast<std::size_t>(v)] = true;

    auto annotate_one = [&](int v) {
        const auto& node = tree.nodes[static_cast<std::size_t>(v)];
        if (node.leaf) return;
        ann.sigma[static_cast<std::size_t>(v)] = node.symbol;
        ann.eta[static_cast<std::size_t>(v)] = static_cast<int>(node.stack.size());
        auto beta = compute_beta(tree, v);
        ann.tau[static_cast<std::size_t>(v)] = compute_tau(tree, v);
        std::sort(beta.begin(), beta.end());
        ann.beta[static_cast<std::size_t>(v)] = std::move(beta);
    };

    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 32)
#endif
        for (long v = 0; v < static_cast<long>(n); ++v)
            annotate_one(static_cast<int>(v));
    } else {
        for (std::size_t v = 0; v < n; ++v) annotate_one(static_cast<int>(v));
    }
    return ann;
}

namespace {

bool in_beta(const TreeAnnotations& ann, int owner, int node) {
    const auto& b = ann.beta[static_cast<std::size_t>(owner)];
    return std::binary_search(b.begin(), b.end(), node);
}

/// True iff a branch node lies on the tree path from `from` (inclusive) down
/// to `to` (exclusive). `to` must be a descendant of `from`.
bool branch_on_path(const DerivationTree& tree, const TreeAnnotations& ann, int from,
                    int to) {
    int cur = tree.nodes[static_cast<std::size_t>(to)].parent;
    while (cur != -1) {
        if (ann.branch[static_cast<std::size_t>(cur)]) return true;
        if (cur == from) return false;
        cur = tree.nodes[static_cast<std::size_t>(cur)].parent;
    }
    throw std::invalid_argument("nodes are not on one tree path");
}

} // namespace

Descent make_descent(const DerivationTree& tree, const std::vector<int>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("descent must be nonempty");
    for (int v : nodes) require_internal(tree, v);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        int cur = nodes[i];
        bool found = false;
        while (cur != -1) {
            cur = tree.nodes[static_cast<std::size_t>(cur)].parent;
            if (cur == nodes[i - 1]) {
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("descent nodes must descend step by step");
    }
    auto beta0 = compute_beta(tree, nodes.front());
    if (std::find(beta0.begin(), beta0.end(), nodes.back()) == beta0.end())
        throw std::invalid_argument("descent must end in beta of its first node");

    Descent d;
    d.nodes = nodes;
    d.controlled = true;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (tree.nodes[static_cast<std::size_t>(nodes[i])].parent != nodes[i - 1])
            d.controlled = false;
    d.flat = true;
    int base = eta(tree, nodes.front());
    for (int v : nodes)
        if (eta(tree, v) != base) d.flat = false;
    return d;
}

int count_splits(const DerivationTree& tree, const Descent& d) {
    auto ann = annotate(tree);
    int splits = 0;
    for (std::size_t i = 0; i + 1 < d.nodes.size(); ++i)
        if (branch_on_path(tree, ann, d.nodes[i], d.nodes[i + 1])) ++splits;
    return splits;
}

namespace {

/// Lexicographically-first valid quadruple on one root-to-leaf path.
std::optional<std::array<int, 4>> scan_path(const TreeAnnotations& ann,
                                            const std::vector<int>& path) {
    int m = static_cast<int>(path.size()) - 1;
    // branch prefix counts: branch_pfx[i] = number of branch nodes among path[0..i)
    std::vector<int> branch_pfx(path.size() + 1, 0);
    for (std::size_t i = 0; i < path.size(); ++i)
        branch_pfx[i + 1] =
            branch_pfx[i] + (ann.branch[static_cast<std::size_t>(path[i])] ? 1 : 0);
    auto branch_between = [&](int a, int b) { // [a, b)
        return branch_pfx[static_cast<std::size_t>(b)] -
                   branch_pfx[static_cast<std::size_t>(a)] >
               0;
    };

    for (int b1 = 0; b1 <= m; ++b1) {
        for (int t1 = b1 + 1; t1 <= m; ++t1) {
            if (ann.sigma[static_cast<std::size_t>(path[b1])] !=
                ann.sigma[static_cast<std::size_t>(path[t1])])
                continue;
            if (!(ann.tau[static_cast<std::size_t>(path[b1])] ==
                  ann.tau[static_cast<std::size_t>(path[t1])]))
                continue;
            for (int t2 = t1 + 1; t2 <= m; ++t2) {
                if (!in_beta(ann, path[t1], path[t2])) continue;
                for (int b2 = t2; b2 <= m; ++b2) {
                    if (ann.sigma[static_cast<std::size_t>(path[t2])] !=
                        ann.sigma[static_cast<std::size_t>(path[b2])])
                        continue;
                    if (!in_beta(ann, path[b1], path[b2])) continue;
                    if (!branch_between(b1, t1) && !branch_between(t2, b2)) continue;
                    return std::array<int, 4>{b1, t1, t2, b2};
                }
            }
        }
    }
    return std::nullopt;
}

std::vector<std::vector<int>> leaf_paths(const DerivationTree& tree) {
    std::vector<std::vector<int>> paths;
    // Leaves in yield order; their parent chains, root first, excluding the leaf.
    std::vector<int> stack{tree.root};
    std::vector<int> leaves;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const auto& n = tree.nodes[static_cast<std::size_t>(v)];
        if (n.leaf) {
            leaves.push_back(v);
            continue;
        }
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            stack.push_back(*it);
    }
    for (int leaf : leaves) {
        std::vector<int> path;
        int cur = tree.nodes[static_cast<std::size_t>(leaf)].parent;
        while (cur != -1) {
            path.push_back(cur);
            cur = tree.nodes[static_cast<std::size_t>(cur)].parent;
        }
        std::reverse(path.begin(), path.end());
        if (!paths.empty() && paths.back() == path) continue; // same internal path
        paths.push_back(std::move(path));
    }
    return paths;
}

} // namespace

std::optional<PumpConfig> find_pump_config(const DerivationTree& tree, Execution exec) {
    auto ann = annotate(tree, exec);
    auto paths = leaf_paths(tree);
    std::vector<std::optional<std::array<int, 4>>> hits(paths.size());

    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
        for (long i = 0; i < static_cast<long>(paths.size()); ++i)
            hits[static_cast<std::size_t>(i)] =
                scan_path(ann, paths[static_cast<std::size_t>(i)]);
    } else {
        for (std::size_t i = 0; i < paths.size(); ++i)
            hits[i] = scan_path(ann, paths[i]);
    }

    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (hits[i]) {
            PumpConfig cfg;
            cfg.path = paths[i];
            cfg.b1 = (*hits[i])[0];
            cfg.t1 = (*hits[i])[1];
            cfg.t2 = (*hits[i])[2];
            cfg.b2 = (*hits[i])[3];
            return cfg;
        }
    }
    return std::nullopt;
}

std::vector<std::string> check_pump_config(const DerivationTree& tree,
                                           const PumpConfig& cfg) {
    std::vector<std::string> problems;
    auto fail = [&](const std::string& s) { problems.push_back(s); };

    int m = static_cast<int>(cfg.path.size()) - 1;
    if (cfg.path.empty() || cfg.path.front() != tree.root) {
        fail("path must start at the root");
        return problems;
    }
    for (int i = 0; i + 1 <= m; ++i) {
        const auto& kids =
            tree.nodes[static_cast<std::size_t>(cfg.path[static_cast<std::size_t>(i)])]
                .children;
        if (std::find(kids.begin(), kids.end(),
                      cfg.path[static_cast<std::size_t>(i) + 1]) == kids.end()) {
            fail("path nodes must form a parent-child chain");
            return problems;
        }
    }
    {
        const auto& last =
            tree.nodes[static_cast<std::size_t>(cfg.path[static_cast<std::size_t>(m)])];
        if (last.leaf) {
            fail("path must consist of internal nodes");
            return problems;
        }
        bool has_leaf_child = false;
        for (int c : last.children)
            if (tree.nodes[static_cast<std::size_t>(c)].leaf) has_leaf_child = true;
        if (!has_leaf_child) fail("path must reach a leaf's parent");
    }
    if (!(0 <= cfg.b1 && cfg.b1 < cfg.t1 && cfg.t1 < cfg.t2 && cfg.t2 <= cfg.b2 &&
          cfg.b2 <= m)) {
        fail("indices must satisfy 0 <= b1 < t1 < t2 <= b2 <= m");
        return problems;
    }

    // Everything below deliberately recomputes from first principles.
    auto node_at = [&](int idx) { return cfg.path[static_cast<std::size_t>(idx)]; };
    auto sym_of = [&](int idx) {
        return tree.nodes[static_cast<std::size_t>(node_at(idx))].symbol;
    };
    auto height_of = [&](int v) {
        return static_cast<int>(tree.nodes[static_cast<std::size_t>(v)].stack.size());
    };

    // scope membership by walking the parent chain
    auto in_scope = [&](int owner, int v) {
        int floor = height_of(owner);
        int cur = v;
        while (cur != -1) {
            const auto& n = tree.nodes[static_cast<std::size_t>(cur)];
            if (n.leaf || static_cast<int>(n.stack.size()) < floor) return false;
            if (cur == owner) return true;
            cur = n.parent;
        }
        return false;
    };
    auto beta_member = [&](int owner, int v) {
        if (!in_scope(owner, v)) return false;
        for (int c : tree.nodes[static_cast<std::size_t>(v)].children)
            if (in_scope(owner, c)) return false;
        return true;
    };

    if (sym_of(cfg.b1) != sym_of(cfg.t1)) fail("sigma(b1) != sigma(t1)");
    if (sym_of(cfg.t2) != sym_of(cfg.b2)) fail("sigma(t2) != sigma(b2)");
    if (!beta_member(node_at(cfg.b1), node_at(cfg.b2))) fail("b2 not in beta(b1)");
    if (!beta_member(node_at(cfg.t1), node_at(cfg.t2))) fail("t2 not in beta(t1)");

    // tau from scratch for a node: collect beta by scanning all nodes
    auto tau_of = [&](int owner) {
        TauType tau;
        std::set<SymbolId> present, marked;
        for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
            if (tree.nodes[v].leaf) continue;
            if (!beta_member(owner, static_cast<int>(v))) continue;
            present.insert(tree.nodes[v].symbol);
            if (tree.nodes[v].marked) marked.insert(tree.nodes[v].symbol);
        }
        for (SymbolId a : tree.grammar->nonterminals) {
            if (marked.count(a))
                tau.marked.insert(a);
            else if (present.count(a))
                tau.unmarked_only.insert(a);
            else
                tau.absent.insert(a);
        }
        return tau;
    };
    if (!(tau_of(node_at(cfg.b1)) == tau_of(node_at(cfg.t1))))
        fail("tau(b1) != tau(t1)");

    auto is_branch = [&](int v) {
        int marked_children = 0;
        for (int c : tree.nodes[static_cast<std::size_t>(v)].children)
            if (tree.nodes[static_cast<std::size_t>(c)].marked) ++marked_children;
        return marked_children >= 2;
    };
    bool branch_left = false, branch_right = false;
    for (int i = cfg.b1; i < cfg.t1; ++i)
        if (is_branch(node_at(i))) branch_left = true;
    for (int i = cfg.t2; i < cfg.b2; ++i)
        if (is_branch(node_at(i))) branch_right = true;
    if (!branch_left && !branch_right)
        fail("no branch node between b1,t1 or between t2,b2");

    return problems;
}

DescentBoundReport verify_descent_bound(const DerivationTree& tree,
                                        long long max_quadruple_work) {
    DescentBoundReport report;
    auto ann = annotate(tree);
    std::size_t nt_count = tree.grammar->nonterminals.size();

    // |N| * 3^|N|; for alphabets past the overflow point the bound dwarfs any
    // desk-scale split count, so the check is vacuously satisfied.
    long long split_bound = -1;
    if (nt_count <= 30) {
        long long pow3 = 1;
        for (std::size_t i = 0; i < nt_count; ++i) pow3 *= 3;
        split_bound = static_cast<long long>(nt_count) * pow3;
    }

    long long work = 0;
    for (std::size_t v0 = 0; v0 < tree.nodes.size() && !report.budget_exhausted;
         ++v0) {
        if (tree.nodes[v0].leaf) continue;
        for (int endpoint : ann.beta[v0]) {
            // Maximal flat descent: all nodes on the path v0..endpoint whose
            // height equals eta(v0).
            int base = ann.eta[v0];
            std::vector<int> chain;
            int cur = endpoint;
            while (cur != -1) {
                const auto& n = tree.nodes[static_cast<std::size_t>(cur)];
                if (!n.leaf && static_cast<int>(n.stack.size()) == base)
                    chain.push_back(cur);
                if (cur == static_cast<int>(v0)) break;
                cur = n.parent;
            }
            std::reverse(chain.begin(), chain.end());
            if (chain.empty() || chain.front() != static_cast<int>(v0)) continue;

            int m = static_cast<int>(chain.size()) - 1;
            ++report.descents_checked;

            std::vector<int> split_pfx(chain.size(), 0);
            for (int i = 0; i + 1 <= m; ++i)
                split_pfx[static_cast<std::size_t>(i) + 1] =
                    split_pfx[static_cast<std::size_t>(i)] +
                    (branch_on_path(tree, ann, chain[static_cast<std::size_t>(i)],
                                    chain[static_cast<std::size_t>(i) + 1])
                         ? 1
                         : 0);
            int total_splits = split_pfx[static_cast<std::size_t>(m)];
            auto split_between = [&](int a, int b) {
                return split_pfx[static_cast<std::size_t>(b)] -
                           split_pfx[static_cast<std::size_t>(a)] >
                       0;
            };

            work += static_cast<long long>(m + 1) * (m + 1) * (m + 1) * (m + 1);
            if (work > max_quadruple_work) {
                report.budget_exhausted = true;
                break;
            }

            bool limited = true;
            for (int b1 = 0; b1 <= m && limited; ++b1) {
                for (int t1 = b1 + 1; t1 <= m && limited; ++t1) {
                    if (ann.sigma[static_cast<std::size_t>(
                            chain[static_cast<std::size_t>(b1)])] !=
                        ann.sigma[static_cast<std::size_t>(
                            chain[static_cast<std::size_t>(t1)])])
                        continue;
                    if (!(ann.tau[static_cast<std::size_t>(
                              chain[static_cast<std::size_t>(b1)])] ==
                          ann.tau[static_cast<std::size_t>(
                              chain[static_cast<std::size_t>(t1)])]))
                        continue;
                    for (int t2 = t1 + 1; t2 <= m && limited; ++t2) {
                        if (!in_beta(ann, chain[static_cast<std::size_t>(t1)],
                                     chain[static_cast<std::size_t>(t2)]))
                            continue;
                        for (int b2 = t2; b2 <= m && limited; ++b2) {
                            if (ann.sigma[static_cast<std::size_t>(
                                    chain[static_cast<std::size_t>(t2)])] !=
                                ann.sigma[static_cast<std::size_t>(
                                    chain[static_cast<std::size_t>(b2)])])
                                continue;
                            if (!in_beta(ann, chain[static_cast<std::size_t>(b1)],
                                         chain[static_cast<std::size_t>(b2)]))
                                continue;
                            if (split_between(b1, t1) || split_between(t2, b2))
                                limited = false;
                        }
                    }
                }
            }
            if (limited) {
                ++report.limited_descents;
                if (split_bound >= 0 && total_splits > split_bound)
                    report.violations.push_back(
                        "limited flat descent from node " + std::to_string(v0) +
                        " has " + std::to_string(total_splits) +
                        " splits, exceeding the bound " +
                        std::to_string(split_bound));
            }
        }
    }
    return report;
}

} // namespace ixl
