#include "ixl/grammar.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ixl {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool legal_symbol_token(const std::string& tok) {
    if (tok.empty()) return false;
    if (tok == "_" || tok == "=>" || tok == "$") return false;
    if (tok[0] == '+' || tok[0] == '-' || tok[0] == '#') return false;
    if (tok == "nonterminals:" || tok == "terminals:" || tok == "stack:" ||
        tok == "start:")
        return false;
    return true;
}

struct SymbolClasses {
    std::set<SymbolId> nonterminals, terminals, stack;
};

SymbolClasses classify(const IndexedGrammar& g) {
    SymbolClasses c;
    c.nonterminals.insert(g.nonterminals.begin(), g.nonterminals.end());
    c.terminals.insert(g.terminals.begin(), g.terminals.end());
    c.stack.insert(g.stack_alphabet.begin(), g.stack_alphabet.end());
    return c;
}

} // namespace

bool IndexedGrammar::is_nonterminal(SymbolId s) const {
    return std::find(nonterminals.begin(), nonterminals.end(), s) != nonterminals.end();
}
bool IndexedGrammar::is_terminal(SymbolId s) const {
    return std::find(terminals.begin(), terminals.end(), s) != terminals.end();
}
bool IndexedGrammar::is_stack_symbol(SymbolId s) const {
    if (bottom_marker && *bottom_marker == s) return true;
    return std::find(stack_alphabet.begin(), stack_alphabet.end(), s) != stack_alphabet.end();
}

GrammarPtr parse_grammar(const std::string& text) {
    auto g = std::make_shared<IndexedGrammar>();
    bool have_start = false;
    std::set<std::string> declared;
    bool saw_header[3] = {false, false, false}; // nonterminals, terminals, stack

    // Duplicates within one class are parse errors; a symbol listed in two
    // classes parses fine and is reported by validate() as a disjointness
    // violation.
    auto declare = [&](const std::string& tok, std::vector<SymbolId>& into, int line) {
        if (!legal_symbol_token(tok))
            throw GrammarError("illegal symbol token '" + tok + "'", line);
        SymbolId id = g->symbols.intern(tok);
        if (std::find(into.begin(), into.end(), id) != into.end())
            throw GrammarError("symbol '" + tok + "' declared twice", line);
        declared.insert(tok);
        into.push_back(id);
    };

    // Resolves a declared symbol; '$' maps to the bottom marker.
    auto lookup = [&](const std::string& tok, int line) -> SymbolId {
        if (!declared.count(tok))
            throw GrammarError("undeclared symbol '" + tok + "'", line);
        return g->symbols.id_of(tok);
    };
    auto bottom = [&]() -> SymbolId {
        if (!g->bottom_marker) g->bottom_marker = g->symbols.intern("$");
        return *g->bottom_marker;
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::vector<std::pair<int, std::vector<std::string>>> production_lines;

    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto toks = split_tokens(raw);
        if (toks.empty()) continue;

        const std::string& head = toks[0];
        if (head == "nonterminals:" || head == "terminals:" || head == "stack:" ||
            head == "start:") {
            if (head == "start:") {
                if (have_start) throw GrammarError("repeated start: header", line_no);
                if (toks.size() != 2)
                    throw GrammarError("start: expects exactly one symbol", line_no);
                if (!declared.count(toks[1]))
                    throw GrammarError("undeclared symbol '" + toks[1] + "'", line_no);
                g->start = g->symbols.id_of(toks[1]);
                have_start = true;
                continue;
            }
            int idx = head == "nonterminals:" ? 0 : head == "terminals:" ? 1 : 2;
            if (saw_header[idx]) throw GrammarError("repeated " + head + " header", line_no);
            saw_header[idx] = true;
            auto& into = idx == 0 ? g->nonterminals
                        : idx == 1 ? g->terminals
                                   : g->stack_alphabet;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "$")
                    throw GrammarError("'$' is reserved for the bottom marker and "
                                       "may not be declared",
                                       line_no);
                declare(toks[i], into, line_no);
            }
            continue;
        }
        production_lines.emplace_back(line_no, std::move(toks));
    }

    if (!have_start) throw GrammarError("missing start: header");

    for (auto& [line, toks] : production_lines) {
        auto arrow = std::find(toks.begin(), toks.end(), "=>");
        if (arrow == toks.end())
            throw GrammarError("expected '=>' in production", line);
        std::vector<std::string> lhs(toks.begin(), arrow);
        std::vector<std::string> rhs(arrow + 1, toks.end());

        Production p;
        if (lhs.size() == 1) {
            p.lhs = lookup(lhs[0], line);
        } else if (lhs.size() == 2 && lhs[1].size() > 1 && lhs[1][0] == '-') {
            p.kind = ProductionKind::Pop;
            p.lhs = lookup(lhs[0], line);
            std::string f = lhs[1].substr(1);
            p.pop_symbol = f == "$" ? bottom() : lookup(f, line);
        } else {
            throw GrammarError("malformed production left-hand side", line);
        }

        if (!rhs.empty() && rhs.back().size() > 1 && rhs.back()[0] == '+') {
            if (p.kind == ProductionKind::Pop)
                throw GrammarError("a production may not both pop and push", line);
            if (rhs.size() != 2)
                throw GrammarError("push production must be 'A => B +f'", line);
            p.kind = ProductionKind::Push;
            p.push_target = lookup(rhs[0], line);
            std::string f = rhs.back().substr(1);
            p.push_symbol = f == "$" ? bottom() : lookup(f, line);
        } else if (rhs.size() == 1 && rhs[0] == "_") {
            // empty right-hand side
        } else {
            if (rhs.empty())
                throw GrammarError("empty right-hand side; use '_' for lambda", line);
            for (auto& tok : rhs) {
                if (tok == "_")
                    throw GrammarError("'_' must appear alone", line);
                p.rhs.push_back(lookup(tok, line));
            }
        }
        g->productions.push_back(std::move(p));
    }
    return g;
}

std::string render_grammar(const IndexedGrammar& g) {
    std::ostringstream out;
    auto emit_header = [&](const char* name, const std::vector<SymbolId>& syms) {
        out << name;
        for (SymbolId s : syms) out << ' ' << g.name(s);
        out << '\n';
    };
    emit_header("nonterminals:", g.nonterminals);
    emit_header("terminals:", g.terminals);
    emit_header("stack:", g.stack_alphabet);
    out << "start: " << g.name(g.start) << '\n';
    for (const auto& p : g.productions) {
        out << g.name(p.lhs);
        if (p.kind == ProductionKind::Pop) out << " -" << g.name(p.pop_symbol);
        out << " =>";
        if (p.kind == ProductionKind::Push) {
            out << ' ' << g.name(p.push_target) << " +" << g.name(p.push_symbol);
        } else if (p.rhs.empty()) {
            out << " _";
        } else {
            for (SymbolId s : p.rhs) out << ' ' << g.name(s);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

/// Checks every production against the five grounded forms for bottom symbol `dollar`.
/// Appends one violation per offending production.
void grounded_form_violations(const IndexedGrammar& g, SymbolId dollar,
                              std::vector<Violation>& out) {
    auto nt_name = [&](SymbolId s) { return g.name(s); };
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const auto& p = g.productions[i];
        std::string why;
        switch (p.kind) {
        case ProductionKind::Push:
            if (p.push_symbol == dollar) {
                if (p.lhs != g.start)
                    why = "only the start symbol may push the bottom marker";
                else if (p.push_target == g.start)
                    why = "start symbol may not appear on a right-hand side";
            } else {
                if (p.lhs == g.start || p.push_target == g.start)
                    why = "start symbol outside the S -> A$ form";
            }
            break;
        case ProductionKind::Plain: {
            if (p.lhs == g.start) {
                why = "start symbol may only push the bottom marker";
                break;
            }
            if (p.rhs.empty()) why = "plain production needs a nonempty nonterminal rhs";
            for (SymbolId s : p.rhs) {
                if (!g.is_nonterminal(s))
                    why = "terminal '" + nt_name(s) + "' off the stack bottom";
                else if (s == g.start)
                    why = "start symbol on a right-hand side";
            }
            break;
        }
        case ProductionKind::Pop:
            if (p.lhs == g.start) {
                why = "start symbol may only push the bottom marker";
                break;
            }
            if (p.pop_symbol == dollar) {
                for (SymbolId s : p.rhs)
                    if (!g.is_terminal(s))
                        why = "bottom pop must produce a terminal string";
            } else {
                if (p.rhs.empty())
                    why = "non-bottom pop needs a nonempty nonterminal rhs";
                for (SymbolId s : p.rhs) {
                    if (!g.is_nonterminal(s))
                        why = "terminal '" + nt_name(s) + "' off the stack bottom";
                    else if (s == g.start)
                        why = "start symbol on a right-hand side";
                }
            }
            break;
        }
        if (!why.empty())
            out.push_back({static_cast<int>(i), "grounded-form", why});
    }
}

} // namespace

ViolationReport validate(const IndexedGrammar& g) {
    ViolationReport report;
    auto& v = report.violations;
    auto classes = classify(g);

    for (SymbolId s : classes.nonterminals)
        if (classes.terminals.count(s))
            v.push_back({-1, "alphabet-disjointness",
                         "'" + g.name(s) + "' is both nonterminal and terminal"});
    for (SymbolId s : classes.nonterminals)
        if (classes.stack.count(s))
            v.push_back({-1, "alphabet-disjointness",
                         "'" + g.name(s) + "' is both nonterminal and stack symbol"});
    for (SymbolId s : classes.terminals)
        if (classes.stack.count(s))
            v.push_back({-1, "alphabet-disjointness",
                         "'" + g.name(s) + "' is both terminal and stack symbol"});
    if (!classes.nonterminals.count(g.start))
        v.push_back({-1, "start-symbol", "start symbol is not a declared nonterminal"});

    for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const auto& p = g.productions[i];
        int idx = static_cast<int>(i);
        if (!classes.nonterminals.count(p.lhs))
            v.push_back({idx, "symbol-class", "lhs is not a nonterminal"});
        if (p.kind == ProductionKind::Push) {
            if (!classes.nonterminals.count(p.push_target))
                v.push_back({idx, "symbol-class", "push target is not a nonterminal"});
            if (!g.is_stack_symbol(p.push_symbol))
                v.push_back({idx, "symbol-class", "pushed symbol is not a stack symbol"});
        }
        if (p.kind == ProductionKind::Pop && !g.is_stack_symbol(p.pop_symbol))
            v.push_back({idx, "symbol-class", "popped symbol is not a stack symbol"});
        for (SymbolId s : p.rhs)
            if (!classes.nonterminals.count(s) && !classes.terminals.count(s))
                v.push_back({idx, "symbol-class",
                             "rhs symbol '" + g.name(s) + "' is neither nonterminal "
                             "nor terminal"});
    }

    if (g.bottom_marker) grounded_form_violations(g, *g.bottom_marker, v);
    return report;
}

bool is_grounded(const IndexedGrammar& g) {
    std::vector<SymbolId> candidates;
    if (g.bottom_marker) candidates.push_back(*g.bottom_marker);
    for (SymbolId f : g.stack_alphabet) candidates.push_back(f);
    for (SymbolId dollar : candidates) {
        std::vector<Violation> v;
        grounded_form_violations(g, dollar, v);
        if (v.empty()) return true;
    }
    return false;
}

GrammarPtr ground(const IndexedGrammar& g) {
    {
        auto report = validate(g);
        if (!report.empty())
            throw GrammarError("ground() requires a valid grammar; found violation: " +
                               report.violations.front().rule);
    }

    // Fresh names live in a '%' namespace one '%' longer than anything present.
    std::string prefix = "%";
    auto collides = [&](const std::string& p) {
        auto starts_with = [&](SymbolId s) { return g.name(s).rfind(p, 0) == 0; };
        for (SymbolId s : g.nonterminals) if (starts_with(s)) return true;
        for (SymbolId s : g.terminals) if (starts_with(s)) return true;
        for (SymbolId s : g.stack_alphabet) if (starts_with(s)) return true;
        return false;
    };
    while (collides(prefix)) prefix += "%";

    auto out = std::make_shared<IndexedGrammar>();
    auto& tab = out->symbols;

    SymbolId start2 = tab.intern(g.name(g.start));
    out->start = start2;
    out->nonterminals.push_back(start2);
    SymbolId inner_start = tab.intern(prefix + g.name(g.start));
    out->nonterminals.push_back(inner_start);

    // old id -> new id, with the start mapped to the inner start
    auto map_nt = [&](SymbolId s) {
        return s == g.start ? inner_start : tab.id_of(g.name(s));
    };
    for (SymbolId s : g.nonterminals)
        if (s != g.start) out->nonterminals.push_back(tab.intern(g.name(s)));

    std::vector<SymbolId> term_nts; // X_t in terminal declaration order
    for (SymbolId t : g.terminals) {
        out->terminals.push_back(tab.intern(g.name(t)));
        term_nts.push_back(tab.intern(prefix + "X_" + g.name(t)));
    }
    SymbolId lambda_nt = tab.intern(prefix + "X_lambda");
    for (SymbolId s : term_nts) out->nonterminals.push_back(s);
    out->nonterminals.push_back(lambda_nt);

    for (SymbolId f : g.stack_alphabet) out->stack_alphabet.push_back(tab.intern(g.name(f)));
    std::optional<SymbolId> renamed_dollar;
    if (g.bottom_marker) {
        renamed_dollar = tab.intern(prefix + "bottom");
        out->stack_alphabet.push_back(*renamed_dollar);
    }
    SymbolId dollar = tab.intern("$");
    out->bottom_marker = dollar;

    auto map_stack = [&](SymbolId f) {
        if (g.bottom_marker && f == *g.bottom_marker) return *renamed_dollar;
        return tab.id_of(g.name(f));
    };
    auto map_rhs_symbol = [&](SymbolId s) {
        if (g.is_terminal(s)) {
            auto it = std::find(g.terminals.begin(), g.terminals.end(), s);
            return term_nts[static_cast<std::size_t>(it - g.terminals.begin())];
        }
        return map_nt(s);
    };

    Production boot;
    boot.kind = ProductionKind::Push;
    boot.lhs = start2;
    boot.push_target = inner_start;
    boot.push_symbol = dollar;
    out->productions.push_back(boot);

    for (const auto& p : g.productions) {
        Production q;
        q.kind = p.kind;
        q.lhs = map_nt(p.lhs);
        if (p.kind == ProductionKind::Push) {
            q.push_target = map_nt(p.push_target);
            q.push_symbol = map_stack(p.push_symbol);
        } else {
            if (p.kind == ProductionKind::Pop) q.pop_symbol = map_stack(p.pop_symbol);
            if (p.rhs.empty()) {
                q.rhs.push_back(lambda_nt);
            } else {
                for (SymbolId s : p.rhs) q.rhs.push_back(map_rhs_symbol(s));
            }
        }
        out->productions.push_back(std::move(q));
    }

    // X_s$ -> s and X_s f -> X_s for every s in T ∪ {lambda}
    for (std::size_t i = 0; i <= term_nts.size(); ++i) {
        SymbolId xs = i < term_nts.size() ? term_nts[i] : lambda_nt;
        Production emit;
        emit.kind = ProductionKind::Pop;
        emit.lhs = xs;
        emit.pop_symbol = dollar;
        if (i < term_nts.size()) emit.rhs.push_back(out->terminals[i]);
        out->productions.push_back(std::move(emit));
        for (SymbolId f : out->stack_alphabet) {
            Production skip;
            skip.kind = ProductionKind::Pop;
            skip.lhs = xs;
            skip.pop_symbol = f;
            skip.rhs.push_back(xs);
            out->productions.push_back(std::move(skip));
        }
    }
    return out;
}

Word parse_terminal_word(const IndexedGrammar& g, const std::string& text) {
    Word out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        SymbolId best = 0;
        std::size_t best_len = 0;
        for (SymbolId t : g.terminals) {
            const std::string& n = g.name(t);
            if (n.size() > best_len && text.compare(pos, n.size(), n) == 0) {
                best = t;
                best_len = n.size();
            }
        }
        if (best_len == 0)
            throw GrammarError("cannot tokenize terminal text at position " +
                               std::to_string(pos) + " of '" + text + "'");
        out.push_back(best);
        pos += best_len;
    }
    return out;
}

} // namespace ixl
