#include "ixl/lsystems.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ixl {

std::string render_lword(const LWord& w) {
    std::string out;
    for (const auto& s : w) out += s;
    return out;
}

bool Morphism::is_coding() const {
    for (const auto& [sym, image] : images)
        if (image.size() != 1) return false;
    return true;
}

LWord Morphism::apply(const LWord& x) const {
    LWord out;
    for (const auto& s : x) {
        auto it = images.find(s);
        if (it == images.end())
            throw LSystemError("morphism has no image for symbol '" + s + "'");
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

namespace {

std::set<std::string> mortal_symbols(const Morphism& h) {
    std::set<std::string> mortal;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [sym, image] : h.images) {
            if (mortal.count(sym)) continue;
            bool all = std::all_of(image.begin(), image.end(), [&](const auto& s) {
                return mortal.count(s) != 0;
            });
            if (all) {
                mortal.insert(sym);
                changed = true;
            }
        }
    }
    return mortal;
}

} // namespace

bool is_mortal(const Morphism& h, const LWord& x) {
    auto mortal = mortal_symbols(h);
    for (const auto& s : x) {
        if (h.images.find(s) == h.images.end())
            throw LSystemError("morphism has no image for symbol '" + s + "'");
        if (!mortal.count(s)) return false;
    }
    return true;
}

bool is_prolongable(const Morphism& h, const std::string& a) {
    auto it = h.images.find(a);
    if (it == h.images.end())
        throw LSystemError("morphism has no image for symbol '" + a + "'");
    const LWord& image = it->second;
    if (image.empty() || image.front() != a) return false;
    LWord x(image.begin() + 1, image.end());
    return !is_mortal(h, x);
}

LWord morphic_stream(const Morphism& h, const Morphism& e, const std::string& a,
                     std::size_t n) {
    if (!is_prolongable(h, a))
        throw LSystemError("morphism is not prolongable on '" + a + "'");
    if (!e.is_coding()) throw LSystemError("e is not a coding");

    LWord out;
    LWord block{a};
    bool first = true;
    while (out.size() < n) {
        LWord mapped = e.apply(block);
        out.insert(out.end(), mapped.begin(), mapped.end());
        if (first) {
            const LWord& image = h.images.at(a);
            block = LWord(image.begin() + 1, image.end());
            first = false;
        } else {
            block = h.apply(block);
        }
        if (out.size() > kLSystemSizeCap)
            throw std::length_error("morphic stream exceeds the size cap");
    }
    out.resize(n);
    return out;
}

std::vector<LWord> hd0l_words(const HD0LSystem& G, std::size_t i_max) {
    std::vector<LWord> out;
    LWord w = G.axiom;
    for (std::size_t i = 0; i <= i_max; ++i) {
        out.push_back(G.g.apply(w));
        if (out.back().size() > kLSystemSizeCap || w.size() > kLSystemSizeCap)
            throw std::length_error("hd0l word exceeds the size cap");
        if (i < i_max) w = G.h.apply(w);
    }
    return out;
}

HD0LSystem extract_hd0l(const PumpDecomposition& dec) {
    HD0LSystem G;
    const auto& tab = dec.grammar->symbols;

    auto factor_symbol = [](int i, int j) {
        return "%x_" + std::to_string(i) + "_" + std::to_string(j);
    };

    // X symbols in factor order, then the terminal alphabet of L.
    for (const auto& f : dec.factors) G.alphabet.push_back(factor_symbol(f.i, f.j));
    for (SymbolId t : dec.grammar->terminals) G.alphabet.push_back(tab.name(t));

    // group words x_k = x_{k,1} ... x_{k,n_k}
    std::map<int, LWord> group_word;
    for (const auto& f : dec.factors)
        group_word[f.i].push_back(factor_symbol(f.i, f.j));

    for (const auto& f : dec.factors) {
        std::string xs = factor_symbol(f.i, f.j);
        G.h.images[xs] = group_word.at(f.phi);
        LWord image;
        for (SymbolId s : f.text) image.push_back(tab.name(s));
        G.g.images[xs] = std::move(image);
        G.axiom.push_back(xs);
    }
    for (SymbolId t : dec.grammar->terminals) {
        G.h.images[tab.name(t)] = {tab.name(t)};
        G.g.images[tab.name(t)] = {tab.name(t)};
    }
    G.h.alphabet = G.alphabet;
    G.g.alphabet = G.alphabet;
    G.is_cd0l = G.g.is_coding();
    return G;
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

LWord parse_image(const std::vector<std::string>& toks, std::size_t from, int line) {
    LWord out;
    if (toks.size() == from + 1 && toks[from] == "_") return out;
    for (std::size_t i = from; i < toks.size(); ++i) {
        if (toks[i] == "_")
            throw LSystemError("line " + std::to_string(line) +
                               ": '_' must appear alone");
        out.push_back(toks[i]);
    }
    return out;
}

} // namespace

HD0LSystem parse_lsystem(const std::string& text) {
    HD0LSystem G;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_axiom = false;
    std::set<std::string> declared;

    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto toks = split_tokens(raw);
        if (toks.empty()) continue;

        if (toks[0] == "alphabet:") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (declared.count(toks[i]))
                    throw LSystemError("line " + std::to_string(line_no) +
                                       ": symbol '" + toks[i] + "' declared twice");
                declared.insert(toks[i]);
                G.alphabet.push_back(toks[i]);
            }
            continue;
        }
        if (toks[0] == "axiom:") {
            G.axiom = parse_image(toks, 1, line_no);
            have_axiom = true;
            continue;
        }
        if ((toks[0] == "h" || toks[0] == "g") && toks.size() >= 4 && toks[2] == "->") {
            if (!declared.count(toks[1]))
                throw LSystemError("line " + std::to_string(line_no) +
                                   ": undeclared symbol '" + toks[1] + "'");
            auto image = parse_image(toks, 3, line_no);
            for (const auto& s : image)
                if (!declared.count(s))
                    throw LSystemError("line " + std::to_string(line_no) +
                                       ": undeclared symbol '" + s + "'");
            auto& m = toks[0] == "h" ? G.h : G.g;
            if (m.images.count(toks[1]))
                throw LSystemError("line " + std::to_string(line_no) + ": image of '" +
                                   toks[1] + "' defined twice");
            m.images[toks[1]] = std::move(image);
            continue;
        }
        throw LSystemError("line " + std::to_string(line_no) + ": unrecognized line");
    }

    if (!have_axiom) throw LSystemError("missing axiom:");
    for (const auto& s : G.axiom)
        if (!std::count(G.alphabet.begin(), G.alphabet.end(), s))
            throw LSystemError("axiom uses undeclared symbol '" + s + "'");
    for (const auto& a : G.alphabet) {
        if (!G.h.images.count(a))
            throw LSystemError("h has no image for '" + a + "'");
        if (!G.g.images.count(a)) G.g.images[a] = {a}; // identity default
    }
    G.h.alphabet = G.alphabet;
    G.g.alphabet = G.alphabet;
    G.is_cd0l = G.g.is_coding();
    return G;
}

std::string render_lsystem(const HD0LSystem& G) {
    std::ostringstream out;
    out << "alphabet:";
    for (const auto& s : G.alphabet) out << ' ' << s;
    out << '\n';
    auto emit = [&](const char* name, const Morphism& m) {
        for (const auto& s : G.alphabet) {
            auto it = m.images.find(s);
            if (it == m.images.end()) continue;
            out << name << ' ' << s << " ->";
            if (it->second.empty()) {
                out << " _";
            } else {
                for (const auto& i : it->second) out << ' ' << i;
            }
            out << '\n';
        }
    };
    emit("h", G.h);
    emit("g", G.g);
    out << "axiom:";
    if (G.axiom.empty()) {
        out << " _";
    } else {
        for (const auto& s : G.axiom) out << ' ' << s;
    }
    out << '\n';
    return out.str();
}

} // namespace ixl
