#pragma once

#include <cstddef>
#include <vector>

#include "solverkit/types.hpp"

namespace solverkit {

// Compressed sparse row matrix in canonical form: within each row the column
// indices are strictly increasing, and explicit zeros are allowed (ILU0
// patterns need them). row_pointers has n_rows+1 entries bracketing each row.
struct CsrMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;
    std::vector<index_t> col_indices;
    std::vector<std::size_t> row_pointers{0};

    std::size_t nnz() const noexcept { return values.size(); }
    bool operator==(const CsrMatrix&) const = default;

    // Throws StructureError if any canonical-form invariant is broken.
    void validate() const;
};

struct Triplet {
    index_t row = 0;
    index_t col = 0;
    double value = 0.0;
};

// Builds a canonical CSR matrix from entries in any order; duplicate (i,j)
// pairs are summed. Indices must be < n_rows / n_cols.
CsrMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                        std::vector<Triplet> entries);

// Block CSR with square dense blocks, row-major storage inside each block.
// Block column indices are strictly increasing within a block row.
struct BsrMatrix {
    std::size_t block_size = 1;
    std::size_t n_block_rows = 0;
    std::size_t n_block_cols = 0;
    std::vector<double> block_values; // n_blocks * block_size^2
    std::vector<index_t> block_col_indices;
    std::vector<std::size_t> block_row_pointers{0};

    std::size_t n_blocks() const noexcept { return block_col_indices.size(); }
    void validate() const;
};

// Expands a block matrix to scalar CSR. When drop_zeros is set, zero fill
// inside blocks is removed, except on the scalar diagonal: solver setup needs
// the diagonal entry present even if its value is zero, so a dropped diagonal
// would turn a value problem into a structure problem.
CsrMatrix unblock_bsr(const BsrMatrix& a, bool drop_zeros);

// CSR with offsets: the row_pointers array is replaced by one small integer
// per nonzero. Offset 0 continues the current row; offset k >= 1 starts a new
// row after skipping k-1 empty rows. The first nonzero of the matrix carries
// the index of the first non-empty row plus one, so the offsets alone recover
// every row boundary (sum of offsets == index of last non-empty row + 1).
struct CsroMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;
    std::vector<index_t> col_indices;
    std::vector<index_t> new_row_offsets;

    std::size_t nnz() const noexcept { return values.size(); }
    bool operator==(const CsroMatrix&) const = default;

    void validate() const;
};

CsroMatrix csr_to_csro(const CsrMatrix& a);
CsrMatrix csro_to_csr(const CsroMatrix& a);

} // namespace solverkit
