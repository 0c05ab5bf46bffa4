#include "ixl/pumping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ixl {

ThresholdParams threshold(const IndexedGrammar& g) {
    ThresholdParams tp;
    tp.nonterminal_count = g.nonterminals.size();
    for (const auto& p : g.productions) {
        long long nts = 0, terms = 0;
        if (p.kind == ProductionKind::Push) {
            nts = 1;
        } else {
            for (SymbolId s : p.rhs)
                g.is_nonterminal(s) ? ++nts : ++terms;
        }
        tp.d = std::max(tp.d, nts);
        tp.e = std::max(tp.e, terms);
    }

    auto N = static_cast<unsigned long long>(tp.nonterminal_count);
    tp.z_formula = "(" + std::to_string(N) + "*3^" + std::to_string(N) + ")^(" +
                   std::to_string(N) + "^2*3^" + std::to_string(N) + "+1)";
    tp.l_formula = std::to_string(tp.e) + "*" + std::to_string(tp.d) + "^z+1";

    if (N == 0) {
        tp.z = BigInt(0);
        tp.l = BigInt(tp.e) + 1; // d^0 = 1 by convention; degenerate grammar anyway
        tp.z_digits_estimate = 1;
        return tp;
    }

    double log10_3N = static_cast<double>(N) * std::log10(3.0);
    double log10_base = std::log10(static_cast<double>(N)) + log10_3N;
    double exponent_approx =
        static_cast<double>(N) * static_cast<double>(N) * std::pow(3.0, static_cast<double>(N)) + 1.0;
    tp.z_digits_estimate = log10_base * exponent_approx;

    // Materialize z when the exponent fits and z stays around a megabyte.
    constexpr double kMaxBits = 8.0 * 1024 * 1024;
    double z_bits = tp.z_digits_estimate * std::log2(10.0);
    if (N <= 16 && z_bits <= kMaxBits) {
        BigInt base = BigInt(N) * boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(N));
        unsigned long long expo =
            N * N * static_cast<unsigned long long>(std::llround(std::pow(3.0, static_cast<double>(N)))) + 1;
        tp.z = boost::multiprecision::pow(base, static_cast<unsigned>(expo));
        tp.z_digits_estimate = static_cast<double>(tp.z->str().size());

        // l = e*d^z + 1
        if (tp.d <= 1) {
            tp.l = BigInt(tp.e) * (tp.d == 0 && *tp.z > 0 ? BigInt(0) : BigInt(1)) + 1;
        } else if (*tp.z * static_cast<long long>(std::ceil(std::log2(double(tp.d)))) <=
                   BigInt(static_cast<long long>(kMaxBits))) {
            tp.l = BigInt(tp.e) * boost::multiprecision::pow(
                                      BigInt(tp.d), static_cast<unsigned>(*tp.z)) +
                   1;
        }
    }
    return tp;
}

const PumpFactor& PumpDecomposition::factor(int i, int j) const {
    return factors[factor_index(i, j)];
}

std::size_t PumpDecomposition::factor_index(int i, int j) const {
    for (std::size_t k = 0; k < factors.size(); ++k)
        if (factors[k].i == i && factors[k].j == j) return k;
    throw std::out_of_range("no factor (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
}

namespace {

struct Subtrees {
    std::vector<int> pre;  // preorder rank per node
    std::vector<int> last; // max preorder rank within the subtree
};

Subtrees subtree_ranges(const DerivationTree& tree) {
    Subtrees s;
    s.pre.assign(tree.nodes.size(), 0);
    s.last.assign(tree.nodes.size(), 0);
    int next = 0;
    // post-order accumulation of subtree maxima
    struct Frame {
        int v;
        bool exit;
    };
    std::vector<Frame> stack{{tree.root, false}};
    while (!stack.empty()) {
        auto [v, exit] = stack.back();
        stack.pop_back();
        auto idx = static_cast<std::size_t>(v);
        if (exit) {
            s.last[idx] = s.pre[idx];
            for (int c : tree.nodes[idx].children)
                s.last[idx] = std::max(s.last[idx], s.last[static_cast<std::size_t>(c)]);
            continue;
        }
        s.pre[idx] = next++;
        stack.push_back({v, true});
        for (auto it = tree.nodes[idx].children.rbegin();
             it != tree.nodes[idx].children.rend(); ++it)
            stack.push_back({*it, false});
    }
    return s;
}

bool is_desc_or_self(const Subtrees& s, int anc, int v) {
    return s.pre[static_cast<std::size_t>(anc)] <= s.pre[static_cast<std::size_t>(v)] &&
           s.pre[static_cast<std::size_t>(v)] <= s.last[static_cast<std::size_t>(anc)];
}

/// The appendix node naming: which tree node is N_{i,j} / N_k, the factor
/// subscripts, sizes, and the map phi. Shared by decompose and the surgery.
struct Naming {
    int n = 0;
    std::vector<int> sizes;                          // 1-based
    std::vector<std::pair<int, int>> order;          // I in order
    std::map<std::pair<int, int>, int> node_of;      // node-backed factors only
    std::map<int, int> group_node;                   // k in 3..n-2 -> node id
    std::map<std::pair<int, int>, int> phi;
    std::pair<int, int> witness{0, 0};
    int b1 = -1, t1 = -1, t2 = -1, b2 = -1;          // node ids
    std::vector<std::pair<int, int>> beta_b1_order;  // factor ids, left-right
};

Naming build_naming(const DerivationTree& tree, const PumpConfig& cfg) {
    {
        auto problems = check_pump_config(tree, cfg);
        if (!problems.empty())
            throw std::invalid_argument("pump config failed re-verification: " +
                                        problems.front());
    }
    if (!tree.grammar->bottom_marker)
        throw std::invalid_argument(
            "pumping is defined for grounded grammars; ground first");

    Naming nm;
    nm.b1 = cfg.path[static_cast<std::size_t>(cfg.b1)];
    nm.t1 = cfg.path[static_cast<std::size_t>(cfg.t1)];
    nm.t2 = cfg.path[static_cast<std::size_t>(cfg.t2)];
    nm.b2 = cfg.path[static_cast<std::size_t>(cfg.b2)];

    auto ranges = subtree_ranges(tree);
    auto by_preorder = [&](std::vector<int>& nodes) {
        std::sort(nodes.begin(), nodes.end(), [&](int a, int b) {
            return ranges.pre[static_cast<std::size_t>(a)] <
                   ranges.pre[static_cast<std::size_t>(b)];
        });
    };
    auto beta_b1 = compute_beta(tree, nm.b1);
    auto beta_t1 = compute_beta(tree, nm.t1);
    by_preorder(beta_b1);
    by_preorder(beta_t1);

    nm.n = 4 + static_cast<int>(beta_t1.size());
    nm.sizes.assign(static_cast<std::size_t>(nm.n) + 1, 0);
    nm.sizes[1] = 1;
    nm.sizes[static_cast<std::size_t>(nm.n)] = 1;

    std::vector<int> left, right;
    std::map<int, std::vector<int>> under; // group k -> members
    for (int u : beta_b1) {
        if (is_desc_or_self(ranges, nm.t1, u)) {
            bool placed = false;
            for (std::size_t k = 0; k < beta_t1.size(); ++k) {
                if (is_desc_or_self(ranges, beta_t1[k], u)) {
                    under[static_cast<int>(k) + 3].push_back(u);
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw std::logic_error(
                    "beta(b1) node under t1 not reachable from any beta(t1) node");
        } else if (ranges.pre[static_cast<std::size_t>(u)] <
                   ranges.pre[static_cast<std::size_t>(nm.t1)]) {
            left.push_back(u);
        } else {
            right.push_back(u);
        }
    }

    nm.sizes[2] = static_cast<int>(left.size()) + 1;
    for (std::size_t k = 0; k < beta_t1.size(); ++k) {
        nm.group_node[static_cast<int>(k) + 3] = beta_t1[k];
        nm.sizes[k + 3] = static_cast<int>(under[static_cast<int>(k) + 3].size());
    }
    nm.sizes[static_cast<std::size_t>(nm.n) - 1] = static_cast<int>(right.size()) + 1;

    // Factor order and node naming
    nm.order.push_back({1, 1});
    nm.order.push_back({2, 1});
    for (std::size_t j = 0; j < left.size(); ++j) {
        nm.order.push_back({2, static_cast<int>(j) + 2});
        nm.node_of[{2, static_cast<int>(j) + 2}] = left[j];
    }
    for (int k = 3; k <= nm.n - 2; ++k) {
        const auto& members = under[k];
        for (std::size_t j = 0; j < members.size(); ++j) {
            nm.order.push_back({k, static_cast<int>(j) + 1});
            nm.node_of[{k, static_cast<int>(j) + 1}] = members[j];
        }
    }
    for (std::size_t j = 0; j < right.size(); ++j) {
        nm.order.push_back({nm.n - 1, static_cast<int>(j) + 1});
        nm.node_of[{nm.n - 1, static_cast<int>(j) + 1}] = right[j];
    }
    nm.order.push_back({nm.n - 1, nm.sizes[static_cast<std::size_t>(nm.n) - 1]});
    nm.order.push_back({nm.n, 1});

    for (const auto& [factor, node] : nm.node_of)
        nm.beta_b1_order.push_back(factor);
    std::sort(nm.beta_b1_order.begin(), nm.beta_b1_order.end(),
              [&](const auto& a, const auto& b) {
                  return ranges.pre[static_cast<std::size_t>(nm.node_of.at(a))] <
                         ranges.pre[static_cast<std::size_t>(nm.node_of.at(b))];
              });

    // phi
    nm.phi[{1, 1}] = 1;
    nm.phi[{2, 1}] = 2;
    nm.phi[{nm.n - 1, nm.sizes[static_cast<std::size_t>(nm.n) - 1]}] = nm.n - 1;
    nm.phi[{nm.n, 1}] = nm.n;
    auto group_sigma = [&](int k) {
        return tree.nodes[static_cast<std::size_t>(nm.group_node.at(k))].symbol;
    };
    auto group_marked = [&](int k) {
        return tree.nodes[static_cast<std::size_t>(nm.group_node.at(k))].marked;
    };
    for (const auto& [factor, node] : nm.node_of) {
        const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
        if (node == nm.b2) {
            nm.phi[factor] = factor.first;
            continue;
        }
        int chosen = -1;
        for (int k = 3; k <= nm.n - 2; ++k) {
            if (group_sigma(k) != nd.symbol) continue;
            if (nd.marked && !group_marked(k)) continue;
            chosen = k;
            break;
        }
        if (chosen < 0)
            throw std::logic_error("no phi target for a beta(b1) node; "
                                   "tau(b1) = tau(t1) should guarantee one");
        nm.phi[factor] = chosen;
    }

    // Part-4 witness
    bool branch_left_range = false;
    int branch_idx = -1;
    for (int i = cfg.b1; i < cfg.t1; ++i) {
        int v = cfg.path[static_cast<std::size_t>(i)];
        int marked_children = 0;
        for (int c : tree.nodes[static_cast<std::size_t>(v)].children)
            if (tree.nodes[static_cast<std::size_t>(c)].marked) ++marked_children;
        if (marked_children >= 2) {
            branch_left_range = true;
            branch_idx = i;
            break;
        }
    }
    if (branch_left_range) {
        int v = cfg.path[static_cast<std::size_t>(branch_idx)];
        int on_path = cfg.path[static_cast<std::size_t>(branch_idx) + 1];
        int chosen = -1;
        for (int c : tree.nodes[static_cast<std::size_t>(v)].children) {
            if (c == on_path) continue;
            if (tree.nodes[static_cast<std::size_t>(c)].marked) {
                chosen = c;
                break; // leftmost marked off-path child
            }
        }
        if (chosen < 0)
            throw std::logic_error("branch node lacks a marked off-path child");
        bool left_of_t1 = ranges.pre[static_cast<std::size_t>(chosen)] <
                          ranges.pre[static_cast<std::size_t>(nm.t1)];
        nm.witness = left_of_t1
                         ? std::pair<int, int>{2, 1}
                         : std::pair<int, int>{nm.n - 1,
                                               nm.sizes[static_cast<std::size_t>(
                                                   nm.n) - 1]};
    } else {
        std::pair<int, int> b2_factor{-1, -1};
        for (const auto& [factor, node] : nm.node_of)
            if (node == nm.b2) b2_factor = factor;
        if (b2_factor.first < 0)
            throw std::logic_error("b2 is not among the named beta(b1) nodes");
        nm.witness = b2_factor;
    }
    return nm;
}

Word slice(const Word& w, std::size_t start, std::size_t len) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(start),
                w.begin() + static_cast<std::ptrdiff_t>(start + len));
}

std::size_t marks_in_range(const std::vector<std::size_t>& marks, std::size_t start,
                           std::size_t len) {
    auto lo = std::lower_bound(marks.begin(), marks.end(), start);
    auto hi = std::lower_bound(marks.begin(), marks.end(), start + len);
    return static_cast<std::size_t>(hi - lo);
}

} // namespace

PumpDecomposition decompose(const DerivationTree& tree, const PumpConfig& cfg) {
    Naming nm = build_naming(tree, cfg);
    PumpDecomposition dec;
    dec.grammar = tree.grammar;
    dec.n = nm.n;
    dec.sizes = nm.sizes;
    dec.witness = nm.witness;
    dec.source_word = tree.yield();
    dec.marked_positions = tree.marked_positions;

    const auto& b1n = tree.nodes[static_cast<std::size_t>(nm.b1)];
    std::size_t total = dec.source_word.size();

    for (const auto& [i, j] : nm.order) {
        PumpFactor f;
        f.i = i;
        f.j = j;
        f.phi = nm.phi.at({i, j});
        std::size_t start = 0, len = 0;
        if (i == 1 && j == 1) {
            start = 0;
            len = b1n.yield_start;
        } else if (i == dec.n && j == 1) {
            start = b1n.yield_start + b1n.yield_len;
            len = total - start;
        } else if (auto it = nm.node_of.find({i, j}); it != nm.node_of.end()) {
            f.node = it->second;
            const auto& nd = tree.nodes[static_cast<std::size_t>(it->second)];
            start = nd.yield_start;
            len = nd.yield_len;
        } else {
            // the two lambda factors v_{2,1} and v_{n-1,n_{n-1}}
            start = 0;
            len = 0;
        }
        f.text = slice(dec.source_word, start, len);
        f.marked_count = len == 0 ? 0 : marks_in_range(dec.marked_positions, start, len);
        dec.factors.push_back(std::move(f));
    }
    return dec;
}

std::vector<std::string> check_decomposition(const PumpDecomposition& dec) {
    std::vector<std::string> problems;
    Word joined;
    for (const auto& f : dec.factors)
        joined.insert(joined.end(), f.text.begin(), f.text.end());
    if (joined != dec.source_word)
        problems.push_back("part 1: concatenated factors differ from the source word");

    std::vector<std::size_t> group_marks(static_cast<std::size_t>(dec.n) + 1, 0);
    for (const auto& f : dec.factors) {
        if (f.phi < 1 || f.phi > dec.n)
            problems.push_back("phi out of range for (" + std::to_string(f.i) + "," +
                               std::to_string(f.j) + ")");
        group_marks[static_cast<std::size_t>(f.i)] += f.marked_count;
    }
    for (const auto& f : dec.factors)
        if (f.marked_count > 0 && group_marks[static_cast<std::size_t>(f.phi)] == 0)
            problems.push_back("part 3: marked v(" + std::to_string(f.i) + "," +
                               std::to_string(f.j) + ") maps to unmarked u" +
                               std::to_string(f.phi));

    const auto& w = dec.factor(dec.witness.first, dec.witness.second);
    if (w.phi != dec.witness.first)
        problems.push_back("part 4: phi(witness) != witness group");
    if (group_marks[static_cast<std::size_t>(dec.witness.first)] <= w.marked_count)
        problems.push_back(
            "part 4: witness group has no marked position outside the witness factor");
    return problems;
}

namespace {

struct CountDP {
    // per group 1..n, saturating
    std::vector<unsigned long long> len, marks, vwords;
};

constexpr unsigned long long kSatCap = std::numeric_limits<unsigned long long>::max() / 4;

unsigned long long sat(unsigned long long a, unsigned long long b) {
    unsigned long long s = a + b;
    return s > kSatCap ? kSatCap : s;
}

CountDP level_zero(const PumpDecomposition& dec) {
    CountDP dp;
    dp.len.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    dp.marks.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    dp.vwords.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    for (const auto& f : dec.factors) {
        auto i = static_cast<std::size_t>(f.i);
        dp.len[i] = sat(dp.len[i], f.text.size());
        dp.marks[i] = sat(dp.marks[i], f.marked_count);
        dp.vwords[i] = sat(dp.vwords[i], f.marked_count > 0 ? 1 : 0);
    }
    return dp;
}

CountDP advance(const PumpDecomposition& dec, const CountDP& prev) {
    CountDP dp;
    dp.len.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    dp.marks.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    dp.vwords.assign(static_cast<std::size_t>(dec.n) + 1, 0);
    for (const auto& f : dec.factors) {
        auto i = static_cast<std::size_t>(f.i);
        auto k = static_cast<std::size_t>(f.phi);
        dp.len[i] = sat(dp.len[i], prev.len[k]);
        dp.marks[i] = sat(dp.marks[i], prev.marks[k]);
        dp.vwords[i] = sat(dp.vwords[i], prev.vwords[k]);
    }
    return dp;
}

} // namespace

PumpIterate pump_word(const PumpDecomposition& dec, long long t) {
    if (t < 0) throw std::invalid_argument("t must be nonnegative");

    // Length guard before materializing anything.
    CountDP dp = level_zero(dec);
    for (long long s = 0; s < t; ++s) dp = advance(dec, dp);
    unsigned long long total_len = 0;
    for (int i = 1; i <= dec.n; ++i)
        total_len = sat(total_len, dp.len[static_cast<std::size_t>(i)]);
    if (total_len > kPumpSizeCap)
        throw std::length_error("pumped word exceeds the size cap");

    // Factor-instance sequences per group.
    std::vector<std::vector<std::size_t>> seq(static_cast<std::size_t>(dec.n) + 1);
    for (std::size_t idx = 0; idx < dec.factors.size(); ++idx)
        seq[static_cast<std::size_t>(dec.factors[idx].i)].push_back(idx);
    for (long long s = 0; s < t; ++s) {
        std::vector<std::vector<std::size_t>> next(static_cast<std::size_t>(dec.n) + 1);
        unsigned long long instances = 0;
        for (int i = 1; i <= dec.n; ++i) {
            auto gi = static_cast<std::size_t>(i);
            for (const auto& f : dec.factors) {
                if (f.i != i) continue;
                const auto& src = seq[static_cast<std::size_t>(f.phi)];
                next[gi].insert(next[gi].end(), src.begin(), src.end());
            }
            instances = sat(instances, next[gi].size());
            if (instances > kPumpSizeCap)
                throw std::length_error("pumped word exceeds the size cap");
        }
        seq = std::move(next);
    }

    PumpIterate out;
    out.t = t;
    for (int i = 1; i <= dec.n; ++i) {
        for (std::size_t idx : seq[static_cast<std::size_t>(i)]) {
            const auto& f = dec.factors[idx];
            out.word.insert(out.word.end(), f.text.begin(), f.text.end());
            out.marked_count = sat(out.marked_count, f.marked_count);
            out.marked_vword_count =
                sat(out.marked_vword_count, f.marked_count > 0 ? 1 : 0);
        }
    }
    return out;
}

MarkedGrowthReport check_marked_growth(const PumpDecomposition& dec, long long t_max) {
    MarkedGrowthReport report;
    CountDP dp = level_zero(dec);
    for (long long t = 0; t <= t_max; ++t) {
        unsigned long long marks = 0, vwords = 0;
        for (int i = 1; i <= dec.n; ++i) {
            marks = sat(marks, dp.marks[static_cast<std::size_t>(i)]);
            vwords = sat(vwords, dp.vwords[static_cast<std::size_t>(i)]);
        }
        MarkedGrowthRow row;
        row.t = t;
        row.marked_count = marks;
        row.marked_vwords = vwords;
        row.ok = marks >= static_cast<unsigned long long>(t) &&
                 vwords >= static_cast<unsigned long long>(t);
        report.all_ok = report.all_ok && row.ok;
        report.rows.push_back(row);
        dp = advance(dec, dp);
    }
    return report;
}

namespace {

/// Everything the surgery needs to repeat itself on its own output.
struct SurgeryFrame {
    int b1 = -1;
    int t1 = -1;
    std::vector<std::pair<int, std::pair<int, int>>> slots; // (node, factor), ordered
    std::map<int, int> group_node;                          // k -> node
    std::map<std::pair<int, int>, int> phi;
};

struct SurgeryResult {
    DerivationTree tree;
    SurgeryFrame frame;
};

class Surgeon {
public:
    Surgeon(const DerivationTree& src, const SurgeryFrame& frame)
        : src_(src), frame_(frame) {
        for (const auto& [node, factor] : frame.slots) slot_of_[node] = factor;
        for (const auto& [k, node] : frame.group_node) group_of_[node] = k;
        const auto& b1s = src.nodes[static_cast<std::size_t>(frame.b1)].stack;
        const auto& t1s = src.nodes[static_cast<std::size_t>(frame.t1)].stack;
        x_len_ = b1s.size();
        y_.assign(t1s.begin(), t1s.end() - static_cast<std::ptrdiff_t>(x_len_));
    }

    SurgeryResult run() {
        SurgeryResult out;
        out.tree.grammar = src_.grammar;
        out.frame.phi = frame_.phi;
        dst_ = &out.tree;
        result_ = &out.frame;
        copy_top(src_.root, -1);
        // slots recorded during the build, ordered as in the old frame
        for (const auto& [node, factor] : frame_.slots)
            out.frame.slots.push_back({new_slot_.at(factor), factor});
        compute_spans(out.tree);
        if (out.tree.nodes.size() > kPumpSizeCap)
            throw std::length_error("pumped tree exceeds the size cap");
        return out;
    }

private:
    int fresh_node(int parent) {
        int id = static_cast<int>(dst_->nodes.size());
        dst_->nodes.emplace_back();
        dst_->nodes.back().parent = parent;
        if (parent >= 0)
            dst_->nodes[static_cast<std::size_t>(parent)].children.push_back(id);
        else
            dst_->root = id;
        return id;
    }

    int copy_verbatim(int v, int parent) {
        const auto& n = src_.nodes[static_cast<std::size_t>(v)];
        int id = fresh_node(parent);
        auto& m = dst_->nodes[static_cast<std::size_t>(id)];
        m.leaf = n.leaf;
        m.symbol = n.symbol;
        m.stack = n.stack;
        m.text = n.text;
        m.production = n.production;
        for (int c : n.children) copy_verbatim(c, id);
        return id;
    }

    void copy_top(int v, int parent) {
        if (v == frame_.t1) {
            build_c(frame_.b1, parent);
            return;
        }
        const auto& n = src_.nodes[static_cast<std::size_t>(v)];
        int id = fresh_node(parent);
        auto& m = dst_->nodes[static_cast<std::size_t>(id)];
        m.leaf = n.leaf;
        m.symbol = n.symbol;
        m.stack = n.stack;
        m.text = n.text;
        m.production = n.production;
        for (int c : n.children) copy_top(c, id);
    }

    /// Copy of D(b1) with y spliced above the preserved suffix x on scope
    /// nodes and every slot replaced by the subtree of its phi target.
    int build_c(int v, int parent) {
        auto slot_it = slot_of_.find(v);
        if (slot_it != slot_of_.end()) {
            const auto factor = slot_it->second;
            int k = frame_.phi.at(factor);
            int source = frame_.group_node.at(k);
            int id = copy_verbatim(source, parent);
            new_slot_[factor] = id;
            if (auto g = group_of_.find(v); g != group_of_.end())
                result_->group_node[g->second] = id; // y = lambda overlap case
            return id;
        }
        const auto& n = src_.nodes[static_cast<std::size_t>(v)];
        int id = fresh_node(parent);
        auto& m = dst_->nodes[static_cast<std::size_t>(id)];
        m.leaf = n.leaf;
        m.symbol = n.symbol;
        m.text = n.text;
        m.production = n.production;
        m.stack = n.stack;
        if (!n.leaf) {
            if (n.stack.size() < x_len_)
                throw std::logic_error("scope node with stack below the b1 suffix");
            m.stack.insert(m.stack.end() - static_cast<std::ptrdiff_t>(x_len_),
                           y_.begin(), y_.end());
        }
        if (v == frame_.b1) result_->b1 = id;
        if (v == frame_.t1) result_->t1 = id;
        if (auto g = group_of_.find(v); g != group_of_.end())
            result_->group_node[g->second] = id;
        for (int c : n.children) build_c(c, id);
        return id;
    }

    const DerivationTree& src_;
    const SurgeryFrame& frame_;
    DerivationTree* dst_ = nullptr;
    SurgeryFrame* result_ = nullptr;
    std::map<int, std::pair<int, int>> slot_of_;
    std::map<int, int> group_of_;
    std::map<std::pair<int, int>, int> new_slot_;
    std::size_t x_len_ = 0;
    std::vector<SymbolId> y_;
};

SurgeryFrame frame_from_naming(const Naming& nm) {
    SurgeryFrame f;
    f.b1 = nm.b1;
    f.t1 = nm.t1;
    f.phi = nm.phi;
    f.group_node = nm.group_node;
    for (const auto& factor : nm.beta_b1_order)
        f.slots.push_back({nm.node_of.at(factor), factor});
    return f;
}

} // namespace

DerivationTree pump_tree(const DerivationTree& tree, const PumpConfig& cfg) {
    return pump_tree_iterate(tree, cfg, 1);
}

DerivationTree pump_tree_iterate(const DerivationTree& tree, const PumpConfig& cfg,
                                 int t) {
    if (t < 0) throw std::invalid_argument("t must be nonnegative");
    Naming nm = build_naming(tree, cfg);
    SurgeryFrame frame = frame_from_naming(nm);

    DerivationTree current = tree;
    for (int s = 0; s < t; ++s) {
        Surgeon surgeon(current, frame);
        SurgeryResult res = surgeon.run();
        // b1 of the next frame is the C-root: the copy of b1 placed at t1's
        // slot. build_c records it; t1's copy inside C likewise.
        current = std::move(res.tree);
        frame = std::move(res.frame);
        if (frame.b1 < 0 || frame.t1 < 0)
            throw std::logic_error("surgery lost track of its frame");
    }
    return current;
}

} // namespace ixl
