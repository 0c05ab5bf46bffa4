#include "ixl/json_io.hpp"

#include <map>

namespace ixl {

namespace {

Json node_to_json(const DerivationTree& tree, int v) {
    const auto& n = tree.nodes[static_cast<std::size_t>(v)];
    Json j;
    j["label"] = tree.label(v);
    j["marked"] = n.marked;
    if (n.leaf)
        j["production"] = nullptr;
    else
        j["production"] = n.production;
    Json children = Json::array();
    for (int c : n.children) children.push_back(node_to_json(tree, c));
    j["children"] = std::move(children);
    return j;
}

} // namespace

Json tree_to_json(const DerivationTree& tree) {
    Json j;
    j["yield"] = render_word(tree.grammar->symbols, tree.yield());
    j["marked_positions"] = tree.marked_positions;
    j["root"] = node_to_json(tree, tree.root);
    return j;
}

Json annotations_to_json(const DerivationTree& tree, const TreeAnnotations& ann) {
    const auto& tab = tree.grammar->symbols;
    Json nodes = Json::array();
    for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
        if (tree.nodes[v].leaf) continue;
        Json j;
        j["node"] = v;
        j["label"] = tree.label(static_cast<int>(v));
        j["sigma"] = tab.name(ann.sigma[v]);
        j["eta"] = ann.eta[v];
        auto set_names = [&](const std::set<SymbolId>& s) {
            Json arr = Json::array();
            for (SymbolId a : s) arr.push_back(tab.name(a));
            return arr;
        };
        j["tau"] = Json::array({set_names(ann.tau[v].absent),
                                set_names(ann.tau[v].unmarked_only),
                                set_names(ann.tau[v].marked)});
        j["beta"] = ann.beta[v];
        j["branch"] = static_cast<bool>(ann.branch[v]);
        nodes.push_back(std::move(j));
    }
    Json out;
    out["nodes"] = std::move(nodes);
    Json branches = Json::array();
    for (std::size_t v = 0; v < ann.branch.size(); ++v)
        if (ann.branch[v]) branches.push_back(v);
    out["branch_nodes"] = std::move(branches);
    return out;
}

Json config_to_json(const DerivationTree& tree, const PumpConfig& cfg) {
    Json j;
    j["path"] = cfg.path;
    auto entry = [&](int idx) {
        Json e;
        e["index"] = idx;
        e["node"] = cfg.path[static_cast<std::size_t>(idx)];
        e["label"] = tree.label(cfg.path[static_cast<std::size_t>(idx)]);
        return e;
    };
    j["b1"] = entry(cfg.b1);
    j["t1"] = entry(cfg.t1);
    j["t2"] = entry(cfg.t2);
    j["b2"] = entry(cfg.b2);
    return j;
}

Json decomposition_to_json(const PumpDecomposition& dec) {
    const auto& tab = dec.grammar->symbols;
    Json j;
    j["n"] = dec.n;
    j["sizes"] = std::vector<int>(dec.sizes.begin() + 1, dec.sizes.end());
    j["word"] = render_word(tab, dec.source_word);

    Json factors = Json::array();
    for (const auto& f : dec.factors) {
        Json jf;
        jf["i"] = f.i;
        jf["j"] = f.j;
        jf["text"] = render_word(tab, f.text);
        jf["phi"] = f.phi;
        jf["marked"] = f.marked_count;
        factors.push_back(std::move(jf));
    }
    j["factors"] = std::move(factors);
    j["witness"] = Json::array({dec.witness.first, dec.witness.second});

    // Display normalization: drop empty factors, renumber surviving groups.
    std::map<int, int> group_renumber;
    for (const auto& f : dec.factors)
        if (!f.text.empty() && !group_renumber.count(f.i)) {
            int next = static_cast<int>(group_renumber.size()) + 1;
            group_renumber[f.i] = next;
        }
    Json display = Json::array();
    std::map<int, int> j_renumber;
    for (const auto& f : dec.factors) {
        if (f.text.empty()) continue;
        Json jf;
        int ni = group_renumber.at(f.i);
        int nj = ++j_renumber[f.i];
        jf["i"] = ni;
        jf["j"] = nj;
        jf["text"] = render_word(tab, f.text);
        auto target = group_renumber.find(f.phi);
        if (target == group_renumber.end())
            jf["phi"] = nullptr; // maps to a group that is empty in the display
        else
            jf["phi"] = target->second;
        display.push_back(std::move(jf));
    }
    j["display"] = std::move(display);

    Json brackets = Json::array();
    {
        std::map<int, std::vector<std::string>> groups;
        for (const auto& f : dec.factors)
            if (!f.text.empty())
                groups[group_renumber.at(f.i)].push_back(render_word(tab, f.text));
        for (const auto& [gi, parts] : groups) brackets.push_back(parts);
    }
    j["display_brackets"] = std::move(brackets);
    return j;
}

Json threshold_to_json(const ThresholdParams& tp) {
    Json j;
    j["d"] = tp.d;
    j["e"] = tp.e;
    j["nonterminals"] = tp.nonterminal_count;
    j["z_formula"] = tp.z_formula;
    j["l_formula"] = tp.l_formula;
    if (tp.z)
        j["z"] = tp.z->str();
    else
        j["z"] = nullptr;
    if (tp.l)
        j["l"] = tp.l->str();
    else
        j["l"] = nullptr;
    j["z_decimal_digits"] = tp.z_digits_estimate;
    j["note"] = "the threshold is a sufficiency bound, astronomically beyond desk "
                "scale; the pumping construction applies to any configuration "
                "satisfying the path conditions";
    return j;
}

Json rare_frequent_to_json(const RareFrequentReport& report,
                           const SymbolTable& symbols) {
    (void)symbols;
    Json j;
    j["counts"] = report.counts;
    j["max_count"] = report.max_count;
    Json gaps = Json::array();
    for (const auto& g : report.min_gaps) {
        if (g)
            gaps.push_back(*g);
        else
            gaps.push_back(nullptr);
    }
    j["min_gaps"] = std::move(gaps);
    switch (report.verdict) {
    case RareFrequentReport::Verdict::NonfrequentEvidence:
        j["verdict"] = "nonfrequent-evidence";
        break;
    case RareFrequentReport::Verdict::RareAndFrequentEvidence:
        j["verdict"] = "rare-and-frequent-evidence";
        break;
    case RareFrequentReport::Verdict::Inconclusive:
        j["verdict"] = "inconclusive";
        break;
    }
    j["note"] = report.note;
    j["caveat"] = "finite-sample evidence, not a proof; Theorem-4 reasoning "
                  "applies to the full language";
    return j;
}

Json hd0l_to_json(const HD0LSystem& G) {
    Json j;
    j["alphabet"] = G.alphabet;
    auto images = [&](const Morphism& m) {
        Json out = Json::object();
        for (const auto& s : G.alphabet) {
            auto it = m.images.find(s);
            if (it != m.images.end()) out[s] = render_lword(it->second);
        }
        return out;
    };
    j["h"] = images(G.h);
    j["g"] = images(G.g);
    j["axiom"] = render_lword(G.axiom);
    j["cd0l"] = G.is_cd0l;
    j["kind"] = G.is_cd0l ? "CD0L" : "HD0L";
    return j;
}

} // namespace ixl
