#include <doctest.h>

#include "helpers.hpp"

#include "ixl/tree_analysis.hpp"

using namespace ixl;
using namespace ixl_tests;

namespace {

DerivationTree figure1_tree(bool fully_marked = true) {
    auto g = corpus_grammar("example1");
    auto tree = derive_tree(g, word_of(g, "ababbabbbabbbb"));
    REQUIRE(tree.has_value());
    if (!fully_marked) return *tree;
    return mark_tree(*tree, all_positions(14));
}

int node_labeled(const DerivationTree& tree, const std::string& label, int skip = 0) {
    for (std::size_t v = 0; v < tree.nodes.size(); ++v)
        if (!tree.nodes[v].leaf && tree.label(static_cast<int>(v)) == label) {
            if (skip == 0) return static_cast<int>(v);
            --skip;
        }
    FAIL("no node labeled ", label);
    return -1;
}

} // namespace

TEST_CASE("sigma and eta read the node label") {
    auto tree = figure1_tree();
    int v = node_labeled(tree, "Xff$");
    CHECK(tree.grammar->symbols.name(sigma(tree, v)) == "X");
    CHECK(eta(tree, v) == 3);
    CHECK(eta(tree, tree.root) == 0);
    // leaf input is an error
    for (std::size_t u = 0; u < tree.nodes.size(); ++u)
        if (tree.nodes[u].leaf) {
            CHECK_THROWS_AS(sigma(tree, static_cast<int>(u)), std::invalid_argument);
            break;
        }
}

TEST_CASE("beta of the X$ node is every bottom-level node") {
    auto tree = figure1_tree();
    int v = node_labeled(tree, "X$");
    auto beta = compute_beta(tree, v);
    CHECK(beta.size() == 7);
    for (int u : beta) {
        std::string label = tree.label(u);
        bool ok = label == "A$" || label == "B$" || label == "Y$";
        CHECK_MESSAGE(ok, "unexpected beta node ", label);
        CHECK(eta(tree, u) == eta(tree, v));
    }
}

TEST_CASE("beta of the Xf$ node is the f$-level nodes") {
    auto tree = figure1_tree();
    int v = node_labeled(tree, "Xf$");
    auto beta = compute_beta(tree, v);
    CHECK(beta.size() == 4);
    for (int u : beta) {
        std::string label = tree.label(u);
        bool ok = label == "Af$" || label == "Bf$" || label == "Yf$";
        CHECK_MESSAGE(ok, "unexpected beta node ", label);
    }
}

TEST_CASE("beta of a leaf-parent is itself") {
    auto tree = figure1_tree();
    int v = node_labeled(tree, "Y$");
    auto beta = compute_beta(tree, v);
    CHECK(beta == std::vector<int>{v});
}

TEST_CASE("beta consistency on all corpus trees") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        for (const auto& w : enumerate_words(g, 9).words) {
            auto t0 = derive_tree(g, w);
            REQUIRE(t0.has_value());
            auto tree = mark_tree(*t0, all_positions(w.size()));
            for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
                if (tree.nodes[v].leaf) continue;
                int base = eta(tree, static_cast<int>(v));
                for (int u : compute_beta(tree, static_cast<int>(v))) {
                    // Heights match whenever u still rewrites nonterminals;
                    // a leaf-parent can sit above the floor (e.g. under the
                    // empty-stack root of a grounded tree).
                    bool has_internal_child = false;
                    for (int c : tree.nodes[static_cast<std::size_t>(u)].children)
                        if (!tree.nodes[static_cast<std::size_t>(c)].leaf)
                            has_internal_child = true;
                    if (has_internal_child)
                        CHECK(eta(tree, u) == base);
                    else
                        CHECK(eta(tree, u) >= base);
                    for (int c : tree.nodes[static_cast<std::size_t>(u)].children) {
                        const auto& cn = tree.nodes[static_cast<std::size_t>(c)];
                        bool out_of_scope =
                            cn.leaf || static_cast<int>(cn.stack.size()) < base;
                        CHECK(out_of_scope);
                    }
                }
            }
        }
    }
}

TEST_CASE("tau of the fully marked X$ node is [{S,X},{},{Y,A,B}]") {
    auto tree = figure1_tree();
    auto tau = compute_tau(tree, node_labeled(tree, "X$"));
    auto name_set = [&](const std::set<SymbolId>& s) {
        std::set<std::string> out;
        for (SymbolId a : s) out.insert(tree.grammar->symbols.name(a));
        return out;
    };
    CHECK(name_set(tau.absent) == std::set<std::string>{"S", "X"});
    CHECK(name_set(tau.unmarked_only).empty());
    CHECK(name_set(tau.marked) == std::set<std::string>{"Y", "A", "B"});
}

TEST_CASE("tau on an unmarked tree has an empty marked component") {
    auto tree = figure1_tree(false);
    auto tau = compute_tau(tree, node_labeled(tree, "Y$"));
    CHECK(tau.marked.empty());
    CHECK(tau.unmarked_only.size() == 1);
}

TEST_CASE("tau partitions N at every node of every marked corpus tree") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g = corpus_grammar(name);
        for (const auto& w : enumerate_words(g, 8).words) {
            auto tree = mark_tree(*derive_tree(g, w), all_positions(w.size()));
            for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
                if (tree.nodes[v].leaf) continue;
                auto tau = compute_tau(tree, static_cast<int>(v));
                std::set<SymbolId> all;
                all.insert(tau.absent.begin(), tau.absent.end());
                all.insert(tau.unmarked_only.begin(), tau.unmarked_only.end());
                all.insert(tau.marked.begin(), tau.marked.end());
                CHECK(all.size() == tau.absent.size() + tau.unmarked_only.size() +
                                        tau.marked.size());
                CHECK(all.size() == g->nonterminals.size());
            }
        }
    }
}

TEST_CASE("branch nodes: fully marked figure-1 tree") {
    auto tree = figure1_tree();
    auto branches = branch_nodes(tree);
    // the X->YA split, the two Yf->YA splits, and the three Af->AB splits
    CHECK(branches.size() == 6);
    bool af_in_yff_subtree = false;
    for (int v : branches)
        if (tree.label(v) == "Af$") af_in_yff_subtree = true;
    CHECK(af_in_yff_subtree);
}

TEST_CASE("branch nodes: unmarked and chain trees have none") {
    auto unmarked = figure1_tree(false);
    CHECK(branch_nodes(unmarked).empty());

    auto g = corpus_grammar("a-2-n");
    auto tree = mark_tree(*derive_tree(g, word_of(g, "a")), {0});
    CHECK(branch_nodes(tree).empty()); // single column, one child each
}

TEST_CASE("marking monotonicity: more positions never remove branch nodes") {
    auto g = corpus_grammar("example1");
    auto base = derive_tree(g, word_of(g, "ababbabbb"));
    REQUIRE(base.has_value());
    std::vector<std::size_t> positions;
    std::vector<int> previous;
    for (std::size_t p = 0; p < 9; ++p) {
        positions.push_back(p);
        auto tree = mark_tree(*base, positions);
        auto branches = branch_nodes(tree);
        for (int v : previous)
            CHECK(std::find(branches.begin(), branches.end(), v) != branches.end());
        previous = branches;
    }
}

TEST_CASE("descents and splits") {
    auto tree = figure1_tree();
    int x_dollar = node_labeled(tree, "X$");

    SUBCASE("single-node descent has zero splits") {
        // X$ is not in beta(X$); use a bottom node instead
        int y_dollar = node_labeled(tree, "Y$");
        auto d = make_descent(tree, {y_dollar});
        CHECK(count_splits(tree, d) == 0);
        CHECK(d.flat);
        CHECK(d.controlled);
    }

    SUBCASE("descent from X$ to a bottom node counts branch passes") {
        int b_dollar = node_labeled(tree, "B$", 2); // rightmost B$
        auto d = make_descent(tree, {x_dollar, b_dollar});
        CHECK_FALSE(d.controlled);
        CHECK(d.flat); // flatness constrains the member nodes only
        int splits = count_splits(tree, d);
        CHECK(splits == 1);
        CHECK(splits <= static_cast<int>(d.nodes.size()) - 1);
    }

    SUBCASE("invalid descents are rejected") {
        int y_dollar = node_labeled(tree, "Y$");
        CHECK_THROWS_AS(make_descent(tree, {y_dollar, x_dollar}),
                        std::invalid_argument);
    }

    SUBCASE("splits never exceed m on sampled descents") {
        auto ann = annotate(tree);
        for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
            if (tree.nodes[v].leaf) continue;
            for (int u : ann.beta[v]) {
                if (u == static_cast<int>(v)) continue;
                auto d = make_descent(tree, {static_cast<int>(v), u});
                CHECK(count_splits(tree, d) <= static_cast<int>(d.nodes.size()) - 1);
            }
        }
    }
}

TEST_CASE("find_pump_config on figure 1 matches the expected shape") {
    auto tree = figure1_tree();
    auto cfg = find_pump_config(tree);
    REQUIRE(cfg.has_value());
    auto label = [&](int idx) {
        return tree.label(cfg->path[static_cast<std::size_t>(idx)]);
    };
    CHECK(label(cfg->b1) == "X$");
    CHECK(label(cfg->t1) == "Xf$");
    CHECK(tree.grammar->symbols.name(
              sigma(tree, cfg->path[static_cast<std::size_t>(cfg->b1)])) == "X");
    CHECK(sigma(tree, cfg->path[static_cast<std::size_t>(cfg->t2)]) ==
          sigma(tree, cfg->path[static_cast<std::size_t>(cfg->b2)]));
    CHECK(check_pump_config(tree, *cfg).empty());
}

TEST_CASE("no pump config in the single-word grammar tree") {
    auto g = corpus_grammar("singleton-ab");
    auto tree = mark_tree(*derive_tree(g, word_of(g, "ab")), {0, 1});
    CHECK_FALSE(find_pump_config(tree).has_value());
}

TEST_CASE("configs found on corpus trees always pass independent checking") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g0 = corpus_grammar(name);
        auto g = g0->bottom_marker ? g0 : ground(*g0);
        auto budget = grounded_budget();
        for (const auto& w : enumerate_words(g, 10, budget).words) {
            auto tree = derive_tree(g, w, budget);
            REQUIRE(tree.has_value());
            auto marked = mark_tree(*tree, all_positions(w.size()));
            auto cfg = find_pump_config(marked);
            if (cfg) CHECK(check_pump_config(marked, *cfg).empty());
        }
    }
}

namespace {

/// Exhaustive quadruple scan over every root-to-leaf path, independent of
/// find_pump_config's pruning order.
bool brute_force_config_exists(const DerivationTree& tree) {
    // collect root-to-leaf paths by walking to each leaf parent
    std::vector<std::vector<int>> paths;
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& n = tree.nodes[v];
        if (!n.leaf) continue;
        std::vector<int> path;
        int cur = n.parent;
        while (cur != -1) {
            path.push_back(cur);
            cur = tree.nodes[static_cast<std::size_t>(cur)].parent;
        }
        std::reverse(path.begin(), path.end());
        paths.push_back(path);
    }
    for (const auto& path : paths) {
        int m = static_cast<int>(path.size()) - 1;
        for (int b1 = 0; b1 <= m; ++b1)
            for (int t1 = b1 + 1; t1 <= m; ++t1)
                for (int t2 = t1 + 1; t2 <= m; ++t2)
                    for (int b2 = t2; b2 <= m; ++b2) {
                        PumpConfig cfg;
                        cfg.path = path;
                        cfg.b1 = b1;
                        cfg.t1 = t1;
                        cfg.t2 = t2;
                        cfg.b2 = b2;
                        if (check_pump_config(tree, cfg).empty()) return true;
                    }
    }
    return false;
}

} // namespace

TEST_CASE("find_pump_config agrees with the brute-force quadruple scan") {
    for (const char* name : {"example1", "cfg-balanced", "ab-star", "singleton-ab",
                             "a-2-n"}) {
        CAPTURE(name);
        auto g0 = corpus_grammar(name);
        auto g = g0->bottom_marker ? g0 : ground(*g0);
        auto budget = grounded_budget();
        for (const auto& w : enumerate_words(g, 8, budget).words) {
            auto tree = derive_tree(g, w, budget);
            REQUIRE(tree.has_value());
            auto marked = mark_tree(*tree, all_positions(w.size()));
            CHECK(find_pump_config(marked).has_value() ==
                  brute_force_config_exists(marked));
        }
    }
}

TEST_CASE("verify_descent_bound: no violations on corpus trees up to 60 nodes") {
    for (const char* name : kCorpusNames) {
        CAPTURE(name);
        auto g0 = corpus_grammar(name);
        auto g = g0->bottom_marker ? g0 : ground(*g0);
        auto budget = grounded_budget();
        for (const auto& w : enumerate_words(g, 10, budget).words) {
            auto tree = derive_tree(g, w, budget);
            REQUIRE(tree.has_value());
            auto marked = mark_tree(*tree, all_positions(w.size()));
            if (marked.size() > 60) continue;
            auto report = verify_descent_bound(marked);
            CHECK_FALSE(report.budget_exhausted);
            CHECK(report.violations.empty());
        }
    }
}

TEST_CASE("verify_descent_bound on a single-production tree") {
    auto g = corpus_grammar("singleton-ab");
    auto tree = mark_tree(*derive_tree(g, word_of(g, "ab")), {0});
    auto report = verify_descent_bound(tree);
    CHECK(report.violations.empty());
    CHECK(report.descents_checked >= 1);
}
