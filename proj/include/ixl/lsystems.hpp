#ifndef IXL_LSYSTEMS_HPP
#define IXL_LSYSTEMS_HPP

#include "ixl/pumping.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ixl {

/// L-system words are sequences of symbol tokens (tokens may be multi-char).
using LWord = std::vector<std::string>;

std::string render_lword(const LWord& w);

struct Morphism {
    std::vector<std::string> alphabet; // declaration order
    std::map<std::string, LWord> images;

    bool is_coding() const;
    /// Pointwise image concatenation; throws LSystemError on unknown symbols.
    LWord apply(const LWord& x) const;
};

class LSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixpoint over the symbol set: a symbol is mortal iff its image is
/// all-mortal; x is mortal iff all its symbols are.
bool is_mortal(const Morphism& h, const LWord& x);

/// h(a) = a x with x not mortal.
bool is_prolongable(const Morphism& h, const std::string& a);

/// First n symbols of e(h^omega(a)), streamed block by block
/// (a, x, h(x), h^2(x), ...). Throws if h is not prolongable on a or e is
/// not a coding.
LWord morphic_stream(const Morphism& h, const Morphism& e, const std::string& a,
                     std::size_t n);

struct HD0LSystem {
    std::vector<std::string> alphabet;
    Morphism h;
    LWord axiom;
    Morphism g;
    bool is_cd0l = false; // iff every g-image has length 1
};

constexpr std::size_t kLSystemSizeCap = 10000000;

/// [g(h^i(w)) for i = 0..i_max]; throws std::length_error past the cap.
std::vector<LWord> hd0l_words(const HD0LSystem& G, std::size_t i_max);

/// Theorem-5 extraction: fresh symbols per factor, h following phi, g mapping
/// each symbol to its factor word. Guarantees g(h^t(axiom)) = w^(t).
HD0LSystem extract_hd0l(const PumpDecomposition& dec);

/// File format: `alphabet:`, `h a -> tokens`, `g a -> tokens`, `axiom: tokens`
/// (images and axiom are space-separated symbol tokens; `_` denotes lambda).
HD0LSystem parse_lsystem(const std::string& text);
std::string render_lsystem(const HD0LSystem& G);

} // namespace ixl

#endif
