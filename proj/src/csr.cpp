#include "solverkit/csr.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

void check(bool ok, const std::string& msg) {
    if (!ok) throw StructureError(msg);
}

} // namespace

void CsrMatrix::validate() const {
    check(row_pointers.size() == n_rows + 1, "row_pointers must have n_rows+1 entries");
    check(row_pointers.front() == 0, "row_pointers must start at 0");
    check(row_pointers.back() == values.size(), "row_pointers must end at nnz");
    check(values.size() == col_indices.size(), "values/col_indices length mismatch");
    for (std::size_t i = 0; i < n_rows; ++i) {
        check(row_pointers[i] <= row_pointers[i + 1],
              "row_pointers must be non-decreasing (row " + std::to_string(i) + ")");
        for (std::size_t v = row_pointers[i]; v < row_pointers[i + 1]; ++v) {
            check(col_indices[v] < n_cols,
                  "column index out of range in row " + std::to_string(i));
            if (v > row_pointers[i])
                check(col_indices[v - 1] < col_indices[v],
                      "column indices not strictly increasing in row " + std::to_string(i));
        }
    }
}

CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                        std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row >= n_rows || t.col >= n_cols)
            throw StructureError("triplet (" + std::to_string(t.row) + "," +
                                 std::to_string(t.col) + ") outside a " +
                                 std::to_string(n_rows) + "x" + std::to_string(n_cols) +
                                 " matrix");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix out;
    out.n_rows = n_rows;
    out.n_cols = n_cols;
    out.row_pointers.assign(n_rows + 1, 0);
    out.values.reserve(entries.size());
    out.col_indices.reserve(entries.size());

    std::size_t i = 0;
    while (i < entries.size()) {
        double sum = entries[i].value;
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].value;
            ++j;
        }
        out.values.push_back(sum);
        out.col_indices.push_back(entries[i].col);
        out.row_pointers[entries[i].row + 1]++;
        i = j;
    }
    for (std::size_t r = 0; r < n_rows; ++r)
        out.row_pointers[r + 1] += out.row_pointers[r];
    return out;
}

void BsrMatrix::validate() const {
    check(block_size >= 1, "block_size must be positive");
    check(block_row_pointers.size() == n_block_rows + 1,
          "block_row_pointers must have n_block_rows+1 entries");
    check(block_row_pointers.front() == 0, "block_row_pointers must start at 0");
    check(block_row_pointers.back() == block_col_indices.size(),
          "block_row_pointers must end at the block count");
    check(block_values.size() == block_col_indices.size() * block_size * block_size,
          "block_values length must be n_blocks*block_size^2");
    for (std::size_t i = 0; i < n_block_rows; ++i) {
        for (std::size_t v = block_row_pointers[i]; v < block_row_pointers[i + 1]; ++v) {
            check(block_col_indices[v] < n_block_cols,
                  "block column out of range in block row " + std::to_string(i));
            if (v > block_row_pointers[i])
                check(block_col_indices[v - 1] < block_col_indices[v],
                      "block columns not strictly increasing in block row " +
                          std::to_string(i));
        }
    }
}

CsrMatrix unblock_bsr(const BsrMatrix& a, bool drop_zeros) {
    a.validate();
    const std::size_t bs = a.block_size;

    CsrMatrix out;
    out.n_rows = a.n_block_rows * bs;
    out.n_cols = a.n_block_cols * bs;
    out.row_pointers.assign(out.n_rows + 1, 0);
    out.values.reserve(a.block_values.size());
    out.col_indices.reserve(a.block_values.size());

    for (std::size_t bi = 0; bi < a.n_block_rows; ++bi) {
        for (std::size_t r = 0; r < bs; ++r) {
            const std::size_t row = bi * bs + r;
            // Blocks in a row are already column-sorted, so emitting their
            // scalar entries left to right keeps the row canonical.
            for (std::size_t v = a.block_row_pointers[bi]; v < a.block_row_pointers[bi + 1];
                 ++v) {
                const std::size_t col_base = static_cast<std::size_t>(a.block_col_indices[v]) * bs;
                const double* block = &a.block_values[v * bs * bs];
                for (std::size_t c = 0; c < bs; ++c) {
                    const double val = block[r * bs + c];
                    const std::size_t col = col_base + c;
                    if (drop_zeros && val == 0.0 && col != row) continue;
                    out.values.push_back(val);
                    out.col_indices.push_back(static_cast<index_t>(col));
                }
            }
            out.row_pointers[row + 1] = out.values.size();
        }
    }
    return out;
}

void CsroMatrix::validate() const {
    check(values.size() == col_indices.size(), "values/col_indices length mismatch");
    check(values.size() == new_row_offsets.size(), "values/new_row_offsets length mismatch");
    for (index_t c : col_indices)
        check(c < n_cols, "column index out of range");
    if (!values.empty()) {
        check(new_row_offsets.front() >= 1,
              "first nonzero must open a row (offset >= 1)");
        // Offsets only ever advance the row cursor, so a single pass checks
        // that the implied last row stays inside the matrix.
        std::size_t row_cursor = 0;
        for (index_t off : new_row_offsets) row_cursor += off;
        check(row_cursor <= n_rows, "offset sequence walks past the last row");
    }
}

CsroMatrix csr_to_csro(const CsrMatrix& a) {
    a.validate();
    CsroMatrix out;
    out.n_rows = a.n_rows;
    out.n_cols = a.n_cols;
    out.values = a.values;
    out.col_indices = a.col_indices;
    out.new_row_offsets.assign(a.nnz(), 0);

    // prev is the most recent non-empty row, one past it in 1-based terms;
    // starting at 0 makes the first offset "first non-empty row + 1".
    std::size_t prev_plus_one = 0;
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const std::size_t begin = a.row_pointers[i];
        if (begin == a.row_pointers[i + 1]) continue;
        const std::size_t off = i + 1 - prev_plus_one;
        if (off > std::numeric_limits<index_t>::max())
            throw StructureError("row gap too large for offset storage");
        out.new_row_offsets[begin] = static_cast<index_t>(off);
        prev_plus_one = i + 1;
    }
    return out;
}

CsrMatrix csro_to_csr(const CsroMatrix& a) {
    a.validate();
    CsrMatrix out;
    out.n_rows = a.n_rows;
    out.n_cols = a.n_cols;
    out.values = a.values;
    out.col_indices = a.col_indices;
    out.row_pointers.assign(a.n_rows + 1, 0);

    std::size_t row = 0; // one past the row currently being filled
    for (std::size_t v = 0; v < a.nnz(); ++v) {
        const index_t off = a.new_row_offsets[v];
        if (off > 0) {
            // close the current row and any skipped empty rows
            for (std::size_t k = 0; k < off; ++k) out.row_pointers[row + k] = v;
            row += off;
        } else if (row == 0) {
            throw StructureError("first nonzero must open a row (offset >= 1)");
        }
        out.row_pointers[row] = v + 1;
    }
    for (std::size_t r = row + 1; r <= a.n_rows; ++r) out.row_pointers[r] = a.nnz();
    return out;
}

} // namespace solverkit
