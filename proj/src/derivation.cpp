#include "ixl/derivation.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ixl {

SententialForm initial_form(const IndexedGrammar& g) {
    FormItem item;
    item.terminal = false;
    item.symbol = g.start;
    return {item};
}

std::vector<SententialForm> step(const IndexedGrammar& g, const SententialForm& q) {
    std::vector<SententialForm> out;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const FormItem& it = q[i];
        if (it.terminal) continue;
        for (std::size_t pi = 0; pi < g.productions.size(); ++pi) {
            const Production& p = g.productions[pi];
            if (p.lhs != it.symbol) continue;
            std::vector<FormItem> repl;
            if (p.kind == ProductionKind::Push) {
                FormItem b;
                b.symbol = p.push_target;
                b.stack.reserve(it.stack.size() + 1);
                b.stack.push_back(p.push_symbol);
                b.stack.insert(b.stack.end(), it.stack.begin(), it.stack.end());
                repl.push_back(std::move(b));
            } else {
                std::vector<SymbolId> child_stack;
                if (p.kind == ProductionKind::Pop) {
                    if (it.stack.empty() || it.stack.front() != p.pop_symbol) continue;
                    child_stack.assign(it.stack.begin() + 1, it.stack.end());
                } else {
                    child_stack = it.stack;
                }
                for (SymbolId s : p.rhs) {
                    FormItem c;
                    if (g.is_terminal(s)) {
                        c.terminal = true;
                        c.symbol = s;
                    } else {
                        c.symbol = s;
                        c.stack = child_stack;
                    }
                    repl.push_back(std::move(c));
                }
            }
            SententialForm r;
            r.reserve(q.size() - 1 + repl.size());
            r.insert(r.end(), q.begin(), q.begin() + static_cast<std::ptrdiff_t>(i));
            r.insert(r.end(), repl.begin(), repl.end());
            r.insert(r.end(), q.begin() + static_cast<std::ptrdiff_t>(i) + 1, q.end());
            out.push_back(std::move(r));
        }
    }
    std::vector<SententialForm> uniq;
    for (auto& f : out) {
        if (std::find(uniq.begin(), uniq.end(), f) == uniq.end())
            uniq.push_back(std::move(f));
    }
    return uniq;
}

namespace {

constexpr std::uint32_t kNoStack = 0xFFFFFFFFu;

inline std::uint64_t pack_item(SymbolId sym, std::uint32_t stack) {
    return (static_cast<std::uint64_t>(sym) << 32) | stack;
}
inline SymbolId item_sym(std::uint64_t item) {
    return static_cast<SymbolId>(item >> 32);
}
inline std::uint32_t item_stack(std::uint64_t item) {
    return static_cast<std::uint32_t>(item & 0xFFFFFFFFu);
}
inline bool item_is_terminal(std::uint64_t item) {
    return item_stack(item) == kNoStack;
}

/// Persistent hash-consed stacks; id 0 is the empty stack. Each cell carries
/// the pop-weight prefix sum: summed symbol weights from the top down to the
/// first chain-ending symbol (inclusive). See MinYield for the weights.
class StackPool {
public:
    StackPool() { cells_.push_back({0, 0, 0, 0}); }

    void set_weights(const std::vector<long long>* weights,
                     const std::vector<char>* enders) {
        weights_ = weights;
        enders_ = enders;
    }

    long long pushed_weight(SymbolId f, std::uint32_t below) const {
        if (!weights_) return 0;
        bool ender = (*enders_)[f] != 0;
        return (*weights_)[f] + (ender ? 0 : cells_[below].wsum);
    }

    std::uint32_t push(SymbolId f, std::uint32_t below) {
        std::uint64_t key = (static_cast<std::uint64_t>(f) << 32) | below;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(cells_.size());
        cells_.push_back({f, below, cells_[below].height + 1,
                          pushed_weight(f, below)});
        memo_.emplace(key, id);
        return id;
    }
    std::uint32_t pop(std::uint32_t id) const { return cells_[id].below; }
    SymbolId top(std::uint32_t id) const { return cells_[id].sym; }
    std::uint32_t height(std::uint32_t id) const { return cells_[id].height; }
    long long weight(std::uint32_t id) const { return cells_[id].wsum; }

    std::vector<SymbolId> to_vector(std::uint32_t id) const {
        std::vector<SymbolId> out;
        while (id != 0) {
            out.push_back(cells_[id].sym);
            id = cells_[id].below;
        }
        return out;
    }

private:
    struct Cell {
        SymbolId sym;
        std::uint32_t below;
        std::uint32_t height;
        long long wsum;
    };
    std::vector<Cell> cells_;
    std::unordered_map<std::uint64_t, std::uint32_t> memo_;
    const std::vector<long long>* weights_ = nullptr;
    const std::vector<char>* enders_ = nullptr;
};

struct VecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Production data prepared for the search: the leaf/nonterminal group
/// pattern drives both form rewriting and tree-children construction.
struct ProdInfo {
    const Production* p{};
    int term_count = 0;
    struct Group {
        bool leaf = false;
        Word text;       // leaf groups
        SymbolId nt = 0; // internal groups
    };
    std::vector<Group> groups;
    std::vector<int> nt_group_index; // group index per rhs nonterminal, in order
};

inline long long sat_add(long long a, long long b, long long cap) {
    long long s = a + b;
    return s > cap ? cap : s;
}

/// Two sound lower bounds on derivable yield length, combined by max():
///  - per (nonterminal, stack height) over the searched space (stacks within
///    the budget's height cap; the engine flags pushes past it);
///  - a per-stack-position weight sum: every stack symbol must be popped
///    along the leftmost continuation chain, emitting at least its cheapest
///    pop production's terminals plus the stack-agnostic minima of the side
///    spawns. Valid only when no plain production can discard a stack by
///    rewriting to terminals alone; disabled otherwise.
class MinYield {
public:
    MinYield(const IndexedGrammar& g, const std::vector<int>& sym2nt, int nt_count,
             const std::vector<ProdInfo>& prods, int max_height, long long cap)
        : cap_(cap), H_(max_height) {
        bool grounded = g.bottom_marker.has_value();
        SymbolId dollar = g.bottom_marker.value_or(0);

        auto cost_rhs = [&](const ProdInfo& pi, auto nt_cost) {
            long long c = pi.term_count;
            for (const auto& grp : pi.groups)
                if (!grp.leaf) c = sat_add(c, nt_cost(grp.nt), cap_);
            return c;
        };
        auto slot = [&](std::vector<long long>& v, SymbolId s) -> long long& {
            return v[static_cast<std::size_t>(sym2nt[s])];
        };

        // stack-agnostic true lower bound (all productions usable at any time)
        linf_.assign(static_cast<std::size_t>(nt_count), cap_);
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& pi : prods) {
                long long c =
                    pi.p->kind == ProductionKind::Push
                        ? slot(linf_, pi.p->push_target)
                        : cost_rhs(pi, [&](SymbolId b) { return slot(linf_, b); });
                if (c < slot(linf_, pi.p->lhs)) {
                    slot(linf_, pi.p->lhs) = c;
                    changed = true;
                }
            }
        }

        // per-symbol pop weights and chain-ender flags
        weights_.assign(g.symbols.size(), cap_);
        enders_.assign(g.symbols.size(), 0);
        bool discardable = false;
        for (const auto& pi : prods) {
            if (pi.p->kind != ProductionKind::Plain) continue;
            bool any_nt = false;
            for (const auto& grp : pi.groups)
                if (!grp.leaf) any_nt = true;
            if (!any_nt) discardable = true;
        }
        for (const auto& pi : prods) {
            if (pi.p->kind != ProductionKind::Pop) continue;
            SymbolId f = pi.p->pop_symbol;
            long long sum = pi.term_count, cheapest = -1;
            int nts = 0;
            for (const auto& grp : pi.groups) {
                if (grp.leaf) continue;
                ++nts;
                long long li = slot(linf_, grp.nt);
                sum = sat_add(sum, li, cap_);
                if (cheapest < 0 || li < cheapest) cheapest = li;
            }
            if (nts == 0) {
                enders_[f] = 1;
            } else {
                sum = sum - cheapest; // the continuation subtree is counted deeper
            }
            weights_[f] = std::min(weights_[f], sum);
        }
        if (discardable) {
            std::fill(weights_.begin(), weights_.end(), 0LL);
            std::fill(enders_.begin(), enders_.end(), char(1));
        }
        for (auto& w : weights_)
            if (w == cap_) w = cap_; // unpoppable symbol: derivations cannot finish

        byh_.assign(static_cast<std::size_t>(H_ + 1),
                    std::vector<long long>(static_cast<std::size_t>(nt_count), cap_));
        for (bool changed = true; changed;) {
            changed = false;
            for (int h = 0; h <= H_; ++h) {
                for (const auto& pi : prods) {
                    const Production& p = *pi.p;
                    long long c = cap_;
                    switch (p.kind) {
                    case ProductionKind::Plain:
                        c = cost_rhs(pi, [&](SymbolId b) {
                            return slot(byh_[static_cast<std::size_t>(h)], b);
                        });
                        break;
                    case ProductionKind::Push:
                        if (h + 1 <= H_)
                            c = slot(byh_[static_cast<std::size_t>(h + 1)],
                                     p.push_target);
                        break;
                    case ProductionKind::Pop: {
                        bool is_dollar = grounded && p.pop_symbol == dollar;
                        bool applies = is_dollar ? h == 1 : (grounded ? h >= 2 : h >= 1);
                        if (!applies) break;
                        c = cost_rhs(pi, [&](SymbolId b) {
                            return slot(byh_[static_cast<std::size_t>(h - 1)], b);
                        });
                        break;
                    }
                    }
                    auto& dst = slot(byh_[static_cast<std::size_t>(h)], p.lhs);
                    if (c < dst) {
                        dst = c;
                        changed = true;
                    }
                }
            }
        }
    }

    long long nt_cost(int nt_index, std::uint32_t height) const {
        if (static_cast<int>(height) > H_) return cap_;
        return byh_[height][static_cast<std::size_t>(nt_index)];
    }

    const std::vector<long long>& weights() const { return weights_; }
    const std::vector<char>& enders() const { return enders_; }

private:
    long long cap_;
    int H_;
    std::vector<long long> linf_;
    std::vector<long long> weights_;
    std::vector<char> enders_;
    std::vector<std::vector<long long>> byh_;
};

/// Frontier entry. In member mode, `matched` leading terminals (equal to the
/// target prefix) are dropped from `items`, which then starts at the leftmost
/// nonterminal; in enumerate mode `items` is the whole form and `first_nt`
/// scans past the emitted prefix.
struct SearchEntry {
    std::vector<std::uint64_t> items;
    std::vector<std::uint32_t> aux; // tree mode: arena node; else: node depth
    int matched = 0;
    int first_nt = 0;
    long long min_yield = 0;
    // Backtrail for tree extraction
    int prev = -1;
    int prod = -1;
    int exp_node = -1;
    int child_base = -1;
    int child_count = 0;
};

struct ArenaNode {
    bool leaf = false;
    SymbolId sym = 0;
    std::uint32_t stack = 0;
    int parent = -1;
    int depth = 0;
};

/// Successor candidate from (possibly parallel) expansion. New stacks from
/// push productions are interned at merge time, keeping the shared pool
/// mutation sequential.
struct ChildCandidate {
    int prod = -1;
    std::vector<std::uint64_t> items;
    std::vector<std::uint32_t> aux;
    int matched = 0;
    int first_nt = 0;
    long long min_yield = 0;
    bool complete = false;
    bool hit = false;
    int push_item = -1;
    SymbolId push_sym = 0;
    std::uint32_t push_below = 0;
    std::vector<int> new_nt_items;
    std::vector<int> new_nt_group;
};

class SearchEngine {
public:
    SearchEngine(const GrammarPtr& gp, const SearchBudget& budget, Execution exec,
                 bool build_trees, const Word* target, std::size_t max_len)
        : gp_(gp), g_(*gp), budget_(budget), exec_(exec), build_trees_(build_trees),
          target_(target) {
        sym2nt_.assign(g_.symbols.size(), -1);
        int idx = 0;
        for (SymbolId s : g_.nonterminals) sym2nt_[s] = idx++;
        nt_count_ = idx;

        prods_.reserve(g_.productions.size());
        prods_by_lhs_.assign(static_cast<std::size_t>(nt_count_), {});
        for (std::size_t i = 0; i < g_.productions.size(); ++i) {
            const Production& p = g_.productions[i];
            if (sym2nt_[p.lhs] < 0)
                throw GrammarError("search requires a validated grammar");
            ProdInfo info;
            info.p = &p;
            if (p.kind == ProductionKind::Push) {
                info.groups.push_back({false, {}, p.push_target});
                info.nt_group_index.push_back(0);
            } else {
                bool any_nt = std::any_of(p.rhs.begin(), p.rhs.end(), [&](SymbolId s) {
                    return g_.is_nonterminal(s);
                });
                if (!any_nt) {
                    info.groups.push_back({true, p.rhs, 0});
                    info.term_count = static_cast<int>(p.rhs.size());
                } else {
                    Word run;
                    for (SymbolId s : p.rhs) {
                        if (g_.is_nonterminal(s)) {
                            if (!run.empty()) {
                                info.groups.push_back({true, run, 0});
                                run.clear();
                            }
                            info.nt_group_index.push_back(
                                static_cast<int>(info.groups.size()));
                            info.groups.push_back({false, {}, s});
                        } else {
                            run.push_back(s);
                            ++info.term_count;
                        }
                    }
                    if (!run.empty()) info.groups.push_back({true, run, 0});
                }
            }
            prods_by_lhs_[static_cast<std::size_t>(sym2nt_[p.lhs])].push_back(
                static_cast<int>(i));
            prods_.push_back(std::move(info));
        }

        limit_ = target_ ? static_cast<long long>(target_->size())
                         : static_cast<long long>(max_len);
        cap_ = limit_ + 1;
        min_yield_ = std::make_unique<MinYield>(g_, sym2nt_, nt_count_, prods_,
                                                budget.max_stack_height, cap_);
        pool_.set_weights(&min_yield_->weights(), &min_yield_->enders());
    }

    long long item_cost(SymbolId A, std::uint32_t stack) const {
        long long table = min_yield_->nt_cost(sym2nt_[A], pool_.height(stack));
        long long wsum = pool_.weight(stack);
        long long c = std::max(table, wsum);
        return c > cap_ ? cap_ : c;
    }

    long long pushed_item_cost(SymbolId B, SymbolId f, std::uint32_t below) const {
        long long table = min_yield_->nt_cost(sym2nt_[B], pool_.height(below) + 1);
        long long wsum = pool_.pushed_weight(f, below);
        long long c = std::max(table, wsum);
        return c > cap_ ? cap_ : c;
    }

    struct Outcome {
        bool trimmed = false;
        bool found = false;
        std::optional<DerivationTree> tree;
        std::vector<Word> words;
    };

    Outcome run() {
        Outcome out;
        if (build_trees_) arena_.push_back({false, g_.start, 0, -1, 0});

        SearchEntry root;
        root.items = {pack_item(g_.start, 0)};
        root.aux = {0};
        root.min_yield = item_cost(g_.start, 0);
        if (root.min_yield > limit_) return out; // closed: nothing fits the limit
        visited_.insert(dedup_key(root));
        entries_.push_back(std::move(root));
        std::vector<int> frontier{0};

        long long expansions = 0;
        std::vector<std::vector<ChildCandidate>> results;

        while (!frontier.empty()) {
            long long allowed = budget_.max_expansions - expansions;
            if (allowed <= 0) {
                out.trimmed = true;
                break;
            }
            if (static_cast<long long>(frontier.size()) > allowed) {
                frontier.resize(static_cast<std::size_t>(allowed));
                out.trimmed = true;
            }
            expansions += static_cast<long long>(frontier.size());

            results.assign(frontier.size(), {});
            bool level_trim = false;
            if (exec_ == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : level_trim)
#endif
                for (long i = 0; i < static_cast<long>(frontier.size()); ++i) {
                    auto idx = static_cast<std::size_t>(i);
                    level_trim =
                        expand(entries_[static_cast<std::size_t>(frontier[idx])],
                               results[idx]) ||
                        level_trim;
                }
            } else {
                for (std::size_t i = 0; i < frontier.size(); ++i)
                    level_trim = expand(entries_[static_cast<std::size_t>(frontier[i])],
                                        results[i]) ||
                                 level_trim;
            }
            if (level_trim) out.trimmed = true;

            std::vector<int> next;
            bool done = false;
            for (std::size_t i = 0; i < frontier.size() && !done; ++i) {
                for (auto& cand : results[i]) {
                    if (merge_candidate(frontier[i], cand, next, out)) {
                        done = true;
                        break;
                    }
                }
            }
            // Forms of finished levels are dead weight; the backtrail ints stay.
            for (int id : frontier) {
                auto& e = entries_[static_cast<std::size_t>(id)];
                e.items = {};
                e.aux = {};
            }
            if (done) return out;
            frontier = std::move(next);
        }
        return out;
    }

private:
    std::vector<std::uint64_t> dedup_key(const SearchEntry& e) const {
        std::vector<std::uint64_t> key;
        key.reserve(e.items.size() + 1);
        key.push_back(static_cast<std::uint64_t>(e.matched));
        key.insert(key.end(), e.items.begin(), e.items.end());
        return key;
    }
    std::vector<std::uint64_t> dedup_key(const ChildCandidate& c) const {
        std::vector<std::uint64_t> key;
        key.reserve(c.items.size() + 1);
        key.push_back(static_cast<std::uint64_t>(c.matched));
        key.insert(key.end(), c.items.begin(), c.items.end());
        return key;
    }

    /// Expands one entry; returns true if any successor was cut by a budget cap.
    bool expand(const SearchEntry& e, std::vector<ChildCandidate>& out) const {
        bool trimmed = false;
        int nt_pos = target_ ? 0 : e.first_nt;
        std::uint64_t item = e.items[static_cast<std::size_t>(nt_pos)];
        SymbolId A = item_sym(item);
        std::uint32_t stack = item_stack(item);
        std::uint32_t h = pool_.height(stack);
        int parent_depth =
            build_trees_
                ? arena_[static_cast<std::size_t>(e.aux[static_cast<std::size_t>(
                      nt_pos)])].depth
                : static_cast<int>(e.aux[static_cast<std::size_t>(nt_pos)]);
        long long old_cost = item_cost(A, stack);

        if (parent_depth + 1 > budget_.max_depth) return true;

        for (int pidx : prods_by_lhs_[static_cast<std::size_t>(sym2nt_[A])]) {
            const ProdInfo& info = prods_[static_cast<std::size_t>(pidx)];
            const Production& p = *info.p;

            std::uint32_t child_stack = stack;
            if (p.kind == ProductionKind::Pop) {
                if (h == 0 || pool_.top(stack) != p.pop_symbol) continue;
                child_stack = pool_.pop(stack);
            }
            if (p.kind == ProductionKind::Push &&
                static_cast<int>(h) + 1 > budget_.max_stack_height) {
                trimmed = true;
                continue;
            }

            ChildCandidate cand;
            cand.prod = pidx;
            cand.matched = e.matched;
            std::size_t rhs_items = p.kind == ProductionKind::Push ? 1 : p.rhs.size();
            std::size_t new_size = e.items.size() - 1 + rhs_items;
            if (static_cast<long long>(e.matched) + static_cast<long long>(new_size) >
                budget_.max_form_length) {
                trimmed = true;
                continue;
            }
            cand.items.reserve(new_size);
            cand.aux.reserve(new_size);
            auto head = static_cast<std::ptrdiff_t>(nt_pos);
            cand.items.insert(cand.items.end(), e.items.begin(), e.items.begin() + head);
            cand.aux.insert(cand.aux.end(), e.aux.begin(), e.aux.begin() + head);

            long long added = 0;
            if (p.kind == ProductionKind::Push) {
                cand.push_item = static_cast<int>(cand.items.size());
                cand.push_sym = p.push_symbol;
                cand.push_below = stack;
                cand.items.push_back(pack_item(p.push_target, 0)); // patched at merge
                cand.aux.push_back(0);
                cand.new_nt_items.push_back(cand.push_item);
                cand.new_nt_group.push_back(0);
                added = pushed_item_cost(p.push_target, p.push_symbol, stack);
            } else {
                int nt_seen = 0;
                for (SymbolId s : p.rhs) {
                    if (g_.is_terminal(s)) {
                        cand.items.push_back(pack_item(s, kNoStack));
                        cand.aux.push_back(0);
                        added = sat_add(added, 1, cap_);
                    } else {
                        cand.new_nt_items.push_back(static_cast<int>(cand.items.size()));
                        cand.new_nt_group.push_back(info.nt_group_index[
                            static_cast<std::size_t>(nt_seen)]);
                        ++nt_seen;
                        cand.items.push_back(pack_item(s, child_stack));
                        cand.aux.push_back(0);
                        added = sat_add(added, item_cost(s, child_stack), cap_);
                    }
                }
            }
            cand.items.insert(cand.items.end(), e.items.begin() + head + 1,
                              e.items.end());
            cand.aux.insert(cand.aux.end(), e.aux.begin() + head + 1, e.aux.end());

            cand.min_yield = sat_add(e.min_yield - old_cost, added, cap_);
            if (cand.min_yield > limit_) continue; // sound prune

            if (target_) {
                // Strip newly matched leading terminals against the target.
                std::size_t strip = 0;
                bool mismatch = false;
                while (strip < cand.items.size() &&
                       item_is_terminal(cand.items[strip])) {
                    std::size_t wpos = static_cast<std::size_t>(cand.matched) + strip;
                    if (wpos >= target_->size() ||
                        (*target_)[wpos] != item_sym(cand.items[strip])) {
                        mismatch = true;
                        break;
                    }
                    ++strip;
                }
                if (mismatch) continue;
                if (strip > 0) {
                    cand.items.erase(cand.items.begin(),
                                     cand.items.begin() +
                                         static_cast<std::ptrdiff_t>(strip));
                    cand.aux.erase(cand.aux.begin(),
                                   cand.aux.begin() +
                                       static_cast<std::ptrdiff_t>(strip));
                    for (auto& ni : cand.new_nt_items)
                        ni -= static_cast<int>(strip);
                    if (cand.push_item >= 0) cand.push_item -= static_cast<int>(strip);
                    cand.matched += static_cast<int>(strip);
                }
                if (cand.items.empty()) {
                    cand.complete = true;
                    cand.hit =
                        static_cast<std::size_t>(cand.matched) == target_->size();
                }
            } else {
                int fn = e.first_nt;
                while (fn < static_cast<int>(cand.items.size()) &&
                       item_is_terminal(cand.items[static_cast<std::size_t>(fn)]))
                    ++fn;
                cand.first_nt = fn;
                cand.complete = fn == static_cast<int>(cand.items.size());
            }

            if (!build_trees_) {
                for (int ni : cand.new_nt_items)
                    if (ni >= 0)
                        cand.aux[static_cast<std::size_t>(ni)] =
                            static_cast<std::uint32_t>(parent_depth + 1);
            }
            out.push_back(std::move(cand));
        }
        return trimmed;
    }

    /// Sequential merge: resolves pushed stacks, allocates tree nodes,
    /// deduplicates, enqueues. Returns true when the member target is found.
    bool merge_candidate(int parent_id, ChildCandidate& cand, std::vector<int>& next,
                         Outcome& out) {
        if (cand.push_item >= 0) {
            std::uint32_t id = pool_.push(cand.push_sym, cand.push_below);
            auto pi = static_cast<std::size_t>(cand.push_item);
            cand.items[pi] = pack_item(item_sym(cand.items[pi]), id);
        }

        if (cand.complete && !target_) {
            Word w;
            w.reserve(cand.items.size());
            for (std::uint64_t it : cand.items) w.push_back(item_sym(it));
            out.words.push_back(std::move(w));
            return false;
        }
        if (cand.complete && !cand.hit) return false; // full word, not the target

        if (!cand.hit) {
            auto key = dedup_key(cand);
            if (visited_.count(key)) return false;
            visited_.insert(std::move(key));
        }

        SearchEntry e;
        e.prev = parent_id;
        e.prod = cand.prod;
        if (build_trees_) {
            const SearchEntry& parent = entries_[static_cast<std::size_t>(parent_id)];
            int nt_pos = target_ ? 0 : parent.first_nt;
            e.exp_node =
                static_cast<int>(parent.aux[static_cast<std::size_t>(nt_pos)]);
            std::uint32_t parent_stack =
                item_stack(parent.items[static_cast<std::size_t>(nt_pos)]);
            int depth = arena_[static_cast<std::size_t>(e.exp_node)].depth + 1;
            const ProdInfo& info = prods_[static_cast<std::size_t>(cand.prod)];
            std::uint32_t inner_stack = 0;
            switch (info.p->kind) {
            case ProductionKind::Push:
                inner_stack = pool_.push(info.p->push_symbol, parent_stack);
                break;
            case ProductionKind::Pop:
                inner_stack = pool_.pop(parent_stack);
                break;
            case ProductionKind::Plain:
                inner_stack = parent_stack;
                break;
            }
            e.child_base = static_cast<int>(arena_.size());
            e.child_count = static_cast<int>(info.groups.size());
            for (const auto& grp : info.groups) {
                ArenaNode n;
                n.leaf = grp.leaf;
                n.sym = grp.leaf ? 0 : grp.nt;
                n.stack = grp.leaf ? 0 : inner_stack;
                n.parent = e.exp_node;
                n.depth = depth;
                arena_.push_back(n);
            }
            for (std::size_t k = 0; k < cand.new_nt_items.size(); ++k)
                cand.aux[static_cast<std::size_t>(cand.new_nt_items[k])] =
                    static_cast<std::uint32_t>(e.child_base + cand.new_nt_group[k]);
        }
        e.items = std::move(cand.items);
        e.aux = std::move(cand.aux);
        e.matched = cand.matched;
        e.first_nt = cand.first_nt;
        e.min_yield = cand.min_yield;
        entries_.push_back(std::move(e));

        if (cand.hit) {
            out.found = true;
            out.tree = extract_tree(static_cast<int>(entries_.size()) - 1);
            return true;
        }
        next.push_back(static_cast<int>(entries_.size()) - 1);
        return false;
    }

    struct Edge {
        int prod;
        int child_base;
        int child_count;
    };

    DerivationTree extract_tree(int final_entry) {
        std::unordered_map<int, Edge> edges;
        for (int e = final_entry; e > 0;
             e = entries_[static_cast<std::size_t>(e)].prev) {
            const SearchEntry& se = entries_[static_cast<std::size_t>(e)];
            edges[se.exp_node] = {se.prod, se.child_base, se.child_count};
        }
        DerivationTree tree;
        tree.grammar = gp_;
        build_node(0, -1, edges, tree);
        compute_spans(tree);
        return tree;
    }

    int build_node(int arena_id, int parent_new,
                   const std::unordered_map<int, Edge>& edges, DerivationTree& tree) {
        const ArenaNode a = arena_[static_cast<std::size_t>(arena_id)];
        int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        {
            auto& n = tree.nodes.back();
            n.parent = parent_new;
            n.leaf = a.leaf;
            if (!a.leaf) {
                n.symbol = a.sym;
                n.stack = pool_.to_vector(a.stack);
            }
        }
        if (a.leaf) return id;

        auto it = edges.find(arena_id);
        if (it == edges.end()) return id;
        tree.nodes[static_cast<std::size_t>(id)].production = it->second.prod;
        const ProdInfo& info = prods_[static_cast<std::size_t>(it->second.prod)];
        for (int k = 0; k < it->second.child_count; ++k) {
            int child_new = build_node(it->second.child_base + k, id, edges, tree);
            if (info.groups[static_cast<std::size_t>(k)].leaf)
                tree.nodes[static_cast<std::size_t>(child_new)].text =
                    info.groups[static_cast<std::size_t>(k)].text;
            tree.nodes[static_cast<std::size_t>(id)].children.push_back(child_new);
        }
        return id;
    }

    GrammarPtr gp_;
    const IndexedGrammar& g_;
    SearchBudget budget_;
    Execution exec_;
    bool build_trees_;
    const Word* target_;

    StackPool pool_;
    std::vector<ProdInfo> prods_;
    std::vector<std::vector<int>> prods_by_lhs_;
    std::vector<int> sym2nt_;
    int nt_count_ = 0;
    long long limit_ = 0;
    long long cap_ = 0;
    std::unique_ptr<MinYield> min_yield_;

    std::vector<SearchEntry> entries_;
    std::vector<ArenaNode> arena_;
    std::unordered_set<std::vector<std::uint64_t>, VecHash> visited_;
};

} // namespace

EnumerateResult enumerate_words(const GrammarPtr& g, std::size_t max_len,
                                const SearchBudget& budget, Execution exec) {
    SearchEngine engine(g, budget, exec, /*build_trees=*/false, nullptr, max_len);
    auto outcome = engine.run();
    EnumerateResult res;
    res.closed = !outcome.trimmed;
    std::sort(outcome.words.begin(), outcome.words.end(), WordOrder{&g->symbols});
    outcome.words.erase(std::unique(outcome.words.begin(), outcome.words.end()),
                        outcome.words.end());
    res.words = std::move(outcome.words);
    return res;
}

MemberResult member(const GrammarPtr& g, const Word& w, const SearchBudget& budget,
                    Execution exec) {
    SearchEngine engine(g, budget, exec, /*build_trees=*/true, &w, 0);
    auto outcome = engine.run();
    MemberResult res;
    if (outcome.found) {
        res.verdict = MemberVerdict::Yes;
        res.tree = std::move(outcome.tree);
    } else {
        res.verdict = outcome.trimmed ? MemberVerdict::Unknown : MemberVerdict::No;
    }
    return res;
}

std::optional<DerivationTree> derive_tree(const GrammarPtr& g, const Word& w,
                                          const SearchBudget& budget, Execution exec) {
    auto res = member(g, w, budget, exec);
    return std::move(res.tree);
}

} // namespace ixl
