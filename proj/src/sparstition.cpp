#include "solverkit/sparstition.hpp"

#include <algorithm>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

std::size_t PartitionSet::total_vector_indices() const {
    std::size_t total = 0;
    for (const auto& s : sizes) total += s.n_vector_indices;
    return total;
}

PartitionSet build_partitions(const CsrMatrix& a, const ReorderPlan& plan) {
    a.validate();
    plan.validate();
    if (plan.n_rows() != a.n_rows)
        throw DimensionError("plan covers " + std::to_string(plan.n_rows()) +
                             " rows, matrix has " + std::to_string(a.n_rows));

    PartitionSet out;
    out.vector_indices.resize(plan.n_colors());
    out.sizes.resize(plan.n_colors());
    for (std::size_t c = 0; c < plan.n_colors(); ++c) {
        const std::size_t begin = plan.color_offsets[c];
        const std::size_t end = plan.color_offsets[c + 1];
        auto& idx = out.vector_indices[c];
        idx.assign(a.col_indices.begin() + a.row_pointers[begin],
                   a.col_indices.begin() + a.row_pointers[end]);
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        out.sizes[c] = {end - begin, a.row_pointers[end] - a.row_pointers[begin],
                        idx.size()};
    }
    return out;
}

DenseVector gather(const DenseVector& x, const std::vector<index_t>& indices) {
    DenseVector out(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= x.size())
            throw DimensionError("gather index " + std::to_string(indices[k]) +
                                 " out of range for vector of length " +
                                 std::to_string(x.size()));
        out[k] = x[indices[k]];
    }
    return out;
}

std::size_t find_index(const std::vector<index_t>& sorted_indices, index_t col) {
    auto it = std::lower_bound(sorted_indices.begin(), sorted_indices.end(), col);
    if (it == sorted_indices.end() || *it != col) return npos;
    return static_cast<std::size_t>(it - sorted_indices.begin());
}

} // namespace solverkit
