#ifndef IXL_GRAMMAR_HPP
#define IXL_GRAMMAR_HPP

#include "ixl/symbols.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ixl {

enum class ProductionKind { Plain, Push, Pop };

/// One production of an indexed grammar.
///   Plain: A -> r        (r over N ∪ T, possibly empty)
///   Push:  A -> B f
///   Pop:   A f -> r
struct Production {
    ProductionKind kind = ProductionKind::Plain;
    SymbolId lhs = 0;
    SymbolId pop_symbol = 0;   // Pop only
    SymbolId push_symbol = 0;  // Push only
    SymbolId push_target = 0;  // Push only
    std::vector<SymbolId> rhs; // Plain and Pop
};

struct IndexedGrammar {
    SymbolTable symbols;
    std::vector<SymbolId> nonterminals; // declaration order
    std::vector<SymbolId> terminals;
    std::vector<SymbolId> stack_alphabet; // excludes the bottom marker
    SymbolId start = 0;
    std::vector<Production> productions;
    std::optional<SymbolId> bottom_marker; // set iff '$' occurs in productions

    bool is_nonterminal(SymbolId s) const;
    bool is_terminal(SymbolId s) const;
    bool is_stack_symbol(SymbolId s) const; // includes bottom marker
    const std::string& name(SymbolId s) const { return symbols.name(s); }
};

using GrammarPtr = std::shared_ptr<const IndexedGrammar>;

/// Parse or render failure; carries the 1-based source line when known.
class GrammarError : public std::runtime_error {
public:
    GrammarError(std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct Violation {
    int production_index; // -1 for grammar-level
    std::string rule;
    std::string detail;
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool empty() const { return violations.empty(); }
};

GrammarPtr parse_grammar(const std::string& text);
std::string render_grammar(const IndexedGrammar& g);

ViolationReport validate(const IndexedGrammar& g);
bool is_grounded(const IndexedGrammar& g);

/// Proposition-1 construction: returns a grounded grammar with the same language.
GrammarPtr ground(const IndexedGrammar& g);

/// Tokenizes a terminal string into grammar terminals (longest match).
/// Throws GrammarError if the text is not a concatenation of terminal tokens.
Word parse_terminal_word(const IndexedGrammar& g, const std::string& text);

} // namespace ixl

#endif
