#include "solverkit/reorder.hpp"

#include <algorithm>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

const char* to_string(ReorderMethod m) {
    switch (m) {
    case ReorderMethod::none: return "none";
    case ReorderMethod::level_scheduling: return "level_scheduling";
    case ReorderMethod::graph_coloring: return "graph_coloring";
    }
    return "?";
}

void ReorderPlan::validate() const {
    const std::size_t n = permutation.size();
    if (inverse_permutation.size() != n)
        throw StructureError("permutation/inverse length mismatch");
    if (color_offsets.empty() || color_offsets.front() != 0 || color_offsets.back() != n)
        throw StructureError("color_offsets must run from 0 to n_rows");
    for (std::size_t c = 0; c + 1 < color_offsets.size(); ++c)
        if (color_offsets[c] >= color_offsets[c + 1])
            throw StructureError("empty color " + std::to_string(c));
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const index_t p = permutation[i];
        if (p >= n || seen[p]) throw StructureError("permutation is not a bijection");
        seen[p] = true;
        if (inverse_permutation[p] != i)
            throw StructureError("inverse_permutation does not invert permutation");
    }
}

namespace {

// Assembles a plan from colors listed in processing order; rows inside each
// color are expected in ascending original index.
ReorderPlan plan_from_color_lists(ReorderMethod method, std::uint64_t seed, std::size_t n,
                                  const std::vector<std::vector<index_t>>& colors) {
    ReorderPlan plan;
    plan.method = method;
    plan.seed = seed;
    plan.permutation.assign(n, 0);
    plan.inverse_permutation.assign(n, 0);
    plan.color_offsets.assign(1, 0);
    std::size_t pos = 0;
    for (const auto& rows : colors) {
        for (index_t old_row : rows) {
            plan.permutation[old_row] = static_cast<index_t>(pos);
            plan.inverse_permutation[pos] = old_row;
            ++pos;
        }
        plan.color_offsets.push_back(pos);
    }
    plan.validate();
    return plan;
}

void require_square(const CsrMatrix& a) {
    if (a.n_rows != a.n_cols)
        throw DimensionError("reordering needs a square matrix, got " +
                             std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols));
}

} // namespace

ReorderPlan identity_plan(std::size_t n) {
    ReorderPlan plan;
    plan.method = ReorderMethod::none;
    plan.permutation.resize(n);
    plan.inverse_permutation.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        plan.permutation[i] = static_cast<index_t>(i);
        plan.inverse_permutation[i] = static_cast<index_t>(i);
    }
    plan.color_offsets = n == 0 ? std::vector<std::size_t>{0} : std::vector<std::size_t>{0, n};
    return plan;
}

ReorderPlan level_schedule(const CsrMatrix& a) {
    require_square(a);
    a.validate();
    const std::size_t n = a.n_rows;

    // One ascending pass suffices: every lower-triangular neighbour j < i has
    // its level fixed before row i is visited.
    std::vector<std::size_t> level(n, 0);
    std::size_t n_levels = n == 0 ? 0 : 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            const index_t j = a.col_indices[v];
            if (j >= i) break; // columns are sorted; rest is diagonal/upper
            level[i] = std::max(level[i], level[j] + 1);
        }
        n_levels = std::max(n_levels, level[i] + 1);
    }

    std::vector<std::vector<index_t>> buckets(n_levels);
    for (std::size_t i = 0; i < n; ++i)
        buckets[level[i]].push_back(static_cast<index_t>(i));
    return plan_from_color_lists(ReorderMethod::level_scheduling, 0, n, buckets);
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ReorderPlan graph_color(const CsrMatrix& a, std::uint64_t seed,
                        std::size_t max_rows_per_color) {
    require_square(a);
    a.validate();
    const std::size_t n = a.n_rows;

    // Symmetrised adjacency without the diagonal. Coloring must respect both
    // A(i,j) and A(j,i) couplings or a triangular sweep would race.
    std::vector<std::vector<index_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            const index_t j = a.col_indices[v];
            if (j == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(static_cast<index_t>(i));
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    std::vector<std::uint64_t> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = splitmix64_at(seed, i);

    const auto beats = [&](index_t i, index_t j) {
        return weight[i] != weight[j] ? weight[i] > weight[j] : i < j;
    };

    std::vector<bool> colored(n, false);
    std::vector<index_t> uncolored(n);
    for (std::size_t i = 0; i < n; ++i) uncolored[i] = static_cast<index_t>(i);

    std::vector<std::vector<index_t>> colors;
    while (!uncolored.empty()) {
        // Local maxima of the weight stream among uncoloured neighbours form
        // an independent set; they take the next colour together.
        std::vector<index_t> winners;
        for (index_t i : uncolored) {
            bool wins = true;
            for (index_t j : adj[i]) {
                if (!colored[j] && !beats(i, j)) {
                    wins = false;
                    break;
                }
            }
            if (wins) winners.push_back(i);
        }
        // uncolored is kept ascending, so winners is ascending too; a size
        // cap simply postpones the tail of the list. A capped-out winner
        // still wins next round because its neighbourhood cannot have gained
        // colours (no two adjacent rows win the same round).
        if (max_rows_per_color > 0 && winners.size() > max_rows_per_color)
            winners.resize(max_rows_per_color);
        for (index_t i : winners) colored[i] = true;
        std::vector<index_t> rest;
        rest.reserve(uncolored.size() - winners.size());
        for (index_t i : uncolored)
            if (!colored[i]) rest.push_back(i);
        uncolored.swap(rest);
        colors.push_back(std::move(winners));
    }
    return plan_from_color_lists(ReorderMethod::graph_coloring, seed, n, colors);
}

CsrMatrix apply_reorder(const CsrMatrix& a, const ReorderPlan& plan) {
    require_square(a);
    a.validate();
    plan.validate();
    if (plan.n_rows() != a.n_rows)
        throw DimensionError("plan covers " + std::to_string(plan.n_rows()) +
                             " rows, matrix has " + std::to_string(a.n_rows));

    CsrMatrix out;
    out.n_rows = a.n_rows;
    out.n_cols = a.n_cols;
    out.values.reserve(a.nnz());
    out.col_indices.reserve(a.nnz());
    out.row_pointers.assign(a.n_rows + 1, 0);

    std::vector<std::pair<index_t, double>> row_buf;
    for (std::size_t new_row = 0; new_row < a.n_rows; ++new_row) {
        const index_t old_row = plan.inverse_permutation[new_row];
        row_buf.clear();
        for (std::size_t v = a.row_pointers[old_row]; v < a.row_pointers[old_row + 1]; ++v)
            row_buf.emplace_back(plan.permutation[a.col_indices[v]], a.values[v]);
        std::sort(row_buf.begin(), row_buf.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [col, val] : row_buf) {
            out.col_indices.push_back(col);
            out.values.push_back(val);
        }
        out.row_pointers[new_row + 1] = out.values.size();
    }
    return out;
}

bool colors_are_independent(const CsrMatrix& a_permuted, const ReorderPlan& plan) {
    plan.validate();
    if (plan.n_rows() != a_permuted.n_rows)
        throw DimensionError("plan does not match matrix");
    // map each position to its color once, then scan every entry
    std::vector<index_t> color_of(plan.n_rows());
    for (std::size_t c = 0; c < plan.n_colors(); ++c)
        for (std::size_t p = plan.color_offsets[c]; p < plan.color_offsets[c + 1]; ++p)
            color_of[p] = static_cast<index_t>(c);
    for (std::size_t i = 0; i < a_permuted.n_rows; ++i)
        for (std::size_t v = a_permuted.row_pointers[i]; v < a_permuted.row_pointers[i + 1];
             ++v) {
            const index_t j = a_permuted.col_indices[v];
            if (j != i && color_of[j] == color_of[i]) return false;
        }
    return true;
}

DenseVector apply_reorder_vector(const DenseVector& x, const ReorderPlan& plan) {
    if (x.size() != plan.n_rows())
        throw DimensionError("vector length does not match plan");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[plan.permutation[i]] = x[i];
    return out;
}

DenseVector apply_reorder_vector_inverse(const DenseVector& x, const ReorderPlan& plan) {
    if (x.size() != plan.n_rows())
        throw DimensionError("vector length does not match plan");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[plan.permutation[i]];
    return out;
}

} // namespace solverkit
