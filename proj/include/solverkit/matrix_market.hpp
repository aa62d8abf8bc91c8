#pragma once

#include <iosfwd>
#include <string>

#include "solverkit/csr.hpp"

namespace solverkit {

// Reads a Matrix Market coordinate file into canonical CSR. Supported:
// real/integer fields, general and symmetric storage (symmetric off-diagonal
// entries are mirrored). Pattern/complex fields, hermitian/skew symmetry and
// dense array files are rejected with a ParseError naming the line.
// Duplicate entries are summed.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market_file(const std::string& path);

// Writes coordinate/real/general output with enough digits to round-trip
// doubles exactly.
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void write_matrix_market_file(const std::string& path, const CsrMatrix& a);

} // namespace solverkit
