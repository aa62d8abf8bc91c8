#pragma once

#include <cstdint>
#include <vector>

namespace solverkit {

using index_t = std::uint32_t;

// Dense vectors are plain double buffers; every routine that consumes one
// checks its length against the matrix dimension it is paired with.
using DenseVector = std::vector<double>;

} // namespace solverkit
