#pragma once

#include <cstdint>
#include <vector>

#include "solverkit/csr.hpp"
#include "solverkit/types.hpp"

namespace solverkit {

enum class ReorderMethod { none, level_scheduling, graph_coloring };

const char* to_string(ReorderMethod m);

// A row reordering grouped into colors: rows sharing a color have no
// dependencies among themselves, so a triangular sweep can process a whole
// color in parallel. permutation maps old row index to new position;
// inverse_permutation is its inverse. color_offsets brackets the colors in
// the new ordering (color c owns new positions [color_offsets[c],
// color_offsets[c+1])). Rows keep ascending original order inside a color.
struct ReorderPlan {
    ReorderMethod method = ReorderMethod::none;
    std::uint64_t seed = 0;
    std::vector<index_t> permutation;
    std::vector<index_t> inverse_permutation;
    std::vector<std::size_t> color_offsets{0};

    std::size_t n_rows() const noexcept { return permutation.size(); }
    std::size_t n_colors() const noexcept { return color_offsets.size() - 1; }

    // Bijectivity, inverse consistency, color bracket monotonicity.
    void validate() const;
};

// Identity plan with a single color holding every row.
ReorderPlan identity_plan(std::size_t n);

// Groups rows by dependency depth in the strictly lower triangle: a row's
// level is one more than the deepest level among its lower-triangular
// neighbours. Level k rows only depend on rows in levels < k.
ReorderPlan level_schedule(const CsrMatrix& a);

// Greedy parallel colouring on the symmetrised pattern (diagonal ignored):
// each round, rows whose pseudo-random weight beats every uncoloured
// neighbour's take the next colour. Ties fall to the lower row index. The
// weights come from a splitmix64 stream, so runs with equal seeds agree
// exactly. max_rows_per_color > 0 caps colour size; overflow rows (in
// ascending row order) wait for a later round.
ReorderPlan graph_color(const CsrMatrix& a, std::uint64_t seed,
                        std::size_t max_rows_per_color = 0);

// B = P A P^T: entry (i, j) lands at (permutation[i], permutation[j]).
CsrMatrix apply_reorder(const CsrMatrix& a, const ReorderPlan& plan);

// Forward carries x into the reordered space (out[permutation[i]] = x[i]);
// inverse brings it back.
DenseVector apply_reorder_vector(const DenseVector& x, const ReorderPlan& plan);
DenseVector apply_reorder_vector_inverse(const DenseVector& x, const ReorderPlan& plan);

// True when no off-diagonal entry of the (already permuted) matrix couples
// two rows of the same color. Colored triangular sweeps need this; level
// schedules only guarantee it through the lower triangle, so structurally
// unsymmetric matrices can fail it and must fall back to serial sweeps.
bool colors_are_independent(const CsrMatrix& a_permuted, const ReorderPlan& plan);

// The deterministic weight stream behind graph_color, exposed for tests.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);

} // namespace solverkit
