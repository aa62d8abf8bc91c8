#pragma once

#include <iosfwd>
#include <string>

#include "solverkit/csr.hpp"

namespace solverkit {

// Binary CSRO container, little-endian:
//   "CSRO"  magic, 4 bytes
//   u32     version (currently 1)
//   u64     n_rows, n_cols, nnz
//   f64[nnz] values
//   u32[nnz] col_indices
//   u32[nnz] new_row_offsets
// Round trips are bit-exact, including negative zeros and NaN payloads.
void write_csro(std::ostream& out, const CsroMatrix& a);
CsroMatrix read_csro(std::istream& in);

void write_csro_file(const std::string& path, const CsroMatrix& a);
CsroMatrix read_csro_file(const std::string& path);

// Peeks at the first four bytes so the CLI can tell CSRO containers apart
// from Matrix Market text.
bool looks_like_csro_file(const std::string& path);

} // namespace solverkit
