#ifndef IXL_PUMPING_HPP
#define IXL_PUMPING_HPP

#include "ixl/tree_analysis.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ixl {

using BigInt = boost::multiprecision::cpp_int;

/// Pumping threshold data. z and l are materialized exactly whenever they fit
/// in sane memory; past that the exact formula (with d, e and |N| plugged in)
/// is carried instead — the numbers involved grow beyond what any machine can
/// hold, and nothing downstream gates on them.
struct ThresholdParams {
    long long d = 0; // max nonterminals on any rhs
    long long e = 0; // max terminals on any rhs
    std::size_t nonterminal_count = 0;
    std::optional<BigInt> z;
    std::optional<BigInt> l;
    std::string z_formula;
    std::string l_formula;
    double z_digits_estimate = 0; // decimal digits of z
};

ThresholdParams threshold(const IndexedGrammar& g);

struct PumpFactor {
    int i = 0, j = 0; // 1-based subscripts
    Word text;        // v_{i,j}
    int phi = 0;      // group index the factor maps to
    int node = -1;    // tree node named N_{i,j}; -1 for the four special factors
    std::size_t marked_count = 0;
};

struct PumpDecomposition {
    GrammarPtr grammar;
    int n = 0;
    std::vector<int> sizes;          // sizes[i] = n_i, 1-based; sizes[0] unused
    std::vector<PumpFactor> factors; // in I-order
    std::pair<int, int> witness{0, 0};
    Word source_word;
    std::vector<std::size_t> marked_positions;

    const PumpFactor& factor(int i, int j) const;
    std::size_t factor_index(int i, int j) const;
};

/// Theorem-3 appendix construction. Requires a grounded grammar and a config
/// that passes re-verification; throws std::invalid_argument otherwise.
PumpDecomposition decompose(const DerivationTree& tree, const PumpConfig& cfg);

/// Checks parts 1, 3 and 4 of the theorem on a decomposition plus internal
/// consistency (phi targets in range, sizes vs factors). Empty means valid.
std::vector<std::string> check_decomposition(const PumpDecomposition& dec);

constexpr std::size_t kPumpSizeCap = 10000000;

struct PumpIterate {
    long long t = 0;
    Word word;
    unsigned long long marked_count = 0;       // marked positions, saturating
    unsigned long long marked_vword_count = 0; // marked v-word occurrences
};

/// w^(t) by the replacement recurrence, with per-position marking inherited
/// from the originating v-word. Throws std::length_error past kPumpSizeCap.
PumpIterate pump_word(const PumpDecomposition& dec, long long t);

/// One application of the derivation-tree surgery; yield equals pump_word(.,1).
DerivationTree pump_tree(const DerivationTree& tree, const PumpConfig& cfg);

/// t applications, tracking the surgery frame through each copy so iterated
/// yields follow the recurrence exactly.
DerivationTree pump_tree_iterate(const DerivationTree& tree, const PumpConfig& cfg,
                                 int t);

struct MarkedGrowthRow {
    long long t = 0;
    unsigned long long marked_count = 0;
    unsigned long long marked_vwords = 0;
    bool ok = false;
};

struct MarkedGrowthReport {
    std::vector<MarkedGrowthRow> rows;
    bool all_ok = true;
};

/// Checks marked_count(w^(t)) >= t and the proof's stronger invariant
/// (>= t marked v-word occurrences) for t = 0..t_max, by counting only.
MarkedGrowthReport check_marked_growth(const PumpDecomposition& dec, long long t_max);

} // namespace ixl

#endif
