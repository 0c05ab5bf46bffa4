#ifndef IXL_SYMBOLS_HPP
#define IXL_SYMBOLS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ixl {

using SymbolId = std::uint32_t;

/// Interning table mapping symbol tokens to dense ids.
/// Ids are assigned in first-seen order and never change.
class SymbolTable {
public:
    SymbolId intern(std::string_view token) {
        auto it = index_.find(std::string(token));
        if (it != index_.end()) return it->second;
        SymbolId id = static_cast<SymbolId>(names_.size());
        names_.emplace_back(token);
        index_.emplace(names_.back(), id);
        return id;
    }

    bool contains(std::string_view token) const {
        return index_.count(std::string(token)) != 0;
    }

    SymbolId id_of(std::string_view token) const {
        return index_.at(std::string(token));
    }

    const std::string& name(SymbolId id) const { return names_.at(id); }

    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> index_;
};

/// A word is a sequence of terminal symbol ids.
using Word = std::vector<SymbolId>;

inline std::string render_word(const SymbolTable& tab, const Word& w) {
    std::string out;
    for (SymbolId s : w) out += tab.name(s);
    return out;
}

/// Canonical word order: rendered length, then rendered string, then token count.
struct WordOrder {
    const SymbolTable* tab;
    bool operator()(const Word& a, const Word& b) const {
        std::string ra = render_word(*tab, a), rb = render_word(*tab, b);
        if (ra.size() != rb.size()) return ra.size() < rb.size();
        if (ra != rb) return ra < rb;
        return a.size() < b.size();
    }
};

} // namespace ixl

#endif
