#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "novbar/filtered.hpp"

namespace novbar {

// Paired ordered orthogonal bases aligning a map with its kernel and image:
//   - domain_basis y_1..y_n: the first `rank` vectors map onto the image,
//     the tail spans the kernel;
//   - codomain_basis x_1..x_m: x_i = A(y_i) for i < rank, followed (in full
//     mode) by an orthogonal extension to the whole codomain;
//   - filtration shifts l(y_i) - l(x_i) are non-increasing over the pivots.
struct svd_result {
    std::vector<sparse_vec> domain_basis;
    std::vector<sparse_vec> codomain_basis;
    std::size_t rank = 0;
    std::vector<rational> domain_levels;   // l(y_i), one per domain vector
    std::vector<rational> codomain_levels; // l(x_i), one per codomain vector
    // Elimination pivots in selection order, as (row, column) pairs in the
    // defining bases.  Selection proceeds from smallest shift upward.
    std::vector<std::pair<std::size_t, std::size_t>> pivots;

    rational shift(std::size_t i) const { return domain_levels[i] - codomain_levels[i]; }
};

// The filtration-optimal pivot of a nonzero map: the entry maximizing
// l_cod(w_i) - nu(A_ij) - l_dom(v_j), ties broken by smallest (row, column).
std::pair<std::size_t, std::size_t> optimal_pair(const filtered_map& map);

// Singular value decomposition by repeated optimal-pair pivoting with
// column elimination.  Arithmetic is exact throughout: columns are combined
// fraction-free except when the pivot is a monomial, whose inverse is exact.
// With extend_codomain = false the codomain basis stops at the image
// (the restriction-to-image mode barcodes use).
svd_result svd(const filtered_map& map, bool extend_codomain = true);

// Re-checks every clause of the decomposition on the given map: spans,
// orthogonality, mapping property, shift ordering, and rank against the
// unfiltered elimination oracle.  Throws verify_error with a description on
// the first failure.
void verify_svd(const filtered_map& map, const svd_result& result, bool extended);

} // namespace novbar
