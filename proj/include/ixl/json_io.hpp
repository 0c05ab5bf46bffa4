#ifndef IXL_JSON_IO_HPP
#define IXL_JSON_IO_HPP

#include "ixl/langprops.hpp"
#include "ixl/lsystems.hpp"
#include "ixl/pumping.hpp"
#include "ixl/tree_analysis.hpp"

#include <json.hpp>

namespace ixl {

using Json = nlohmann::ordered_json;

/// Nodes carry label, marked, production (null on leaves), children.
Json tree_to_json(const DerivationTree& tree);

Json annotations_to_json(const DerivationTree& tree, const TreeAnnotations& ann);
Json config_to_json(const DerivationTree& tree, const PumpConfig& cfg);

/// Full factor table plus the display normalization (empty factors dropped,
/// groups renumbered) that reproduces the bracketed form used for examples.
Json decomposition_to_json(const PumpDecomposition& dec);

Json threshold_to_json(const ThresholdParams& tp);
Json rare_frequent_to_json(const RareFrequentReport& report,
                           const SymbolTable& symbols);
Json hd0l_to_json(const HD0LSystem& G);

} // namespace ixl

#endif
