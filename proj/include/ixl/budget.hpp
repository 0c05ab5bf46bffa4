#ifndef IXL_BUDGET_HPP
#define IXL_BUDGET_HPP

namespace ixl {

/// Caps for the bounded derivation search. max_depth bounds derivation-tree
/// depth; max_expansions bounds the number of sentential forms expanded.
struct SearchBudget {
    int max_depth = 200;
    int max_form_length = 10000;
    int max_stack_height = 64;
    long long max_expansions = 2000000;
};

} // namespace ixl

#endif
