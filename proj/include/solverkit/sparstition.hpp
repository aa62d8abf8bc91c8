#pragma once

#include <cstddef>
#include <vector>

#include "solverkit/csr.hpp"
#include "solverkit/reorder.hpp"
#include "solverkit/types.hpp"

namespace solverkit {

// Per-color partitioning of matrix and vector data. For each color the
// partition records which vector entries its rows touch, as a sorted list of
// distinct column indices. Streaming hardware transfers exactly that slice of
// the vector before processing the color; the model uses the recorded sizes.
struct PartitionSizes {
    std::size_t n_rows = 0;
    std::size_t n_nonzeros = 0;
    std::size_t n_vector_indices = 0;
};

struct PartitionSet {
    // vector_indices[c]: sorted distinct columns referenced by color c's rows
    std::vector<std::vector<index_t>> vector_indices;
    std::vector<PartitionSizes> sizes;

    std::size_t n_colors() const noexcept { return sizes.size(); }
    std::size_t total_vector_indices() const;
};

// Builds partitions for the rows of `a` grouped by `plan`'s colors. `a` must
// already be in plan order (its row r belongs to the color whose bracket
// contains r).
PartitionSet build_partitions(const CsrMatrix& a, const ReorderPlan& plan);

// Collects x at the given indices: out[k] = x[indices[k]]. Bounds-checked.
DenseVector gather(const DenseVector& x, const std::vector<index_t>& indices);

// Position of col in a sorted index list, or npos when absent.
std::size_t find_index(const std::vector<index_t>& sorted_indices, index_t col);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

} // namespace solverkit
