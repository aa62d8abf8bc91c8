#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solverkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (Matrix Market, RHS files, ...). Carries the 1-based
// line number where parsing gave up.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Shape mismatch between operands (matrix vs vector, plan vs matrix, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

// A matrix or plan violates its structural invariants (unsorted columns,
// offset sequence walking past the last row, permutation not a bijection...).
class StructureError : public Error {
public:
    using Error::Error;
};

// Binary file problems: bad magic, unsupported version, truncated payload.
class IoError : public Error {
public:
    using Error::Error;
};

class MissingDiagonalError : public Error {
public:
    explicit MissingDiagonalError(std::size_t row)
        : Error("row " + std::to_string(row) + " has no diagonal entry"), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ZeroPivotError : public Error {
public:
    explicit ZeroPivotError(std::size_t row)
        : Error("zero pivot in row " + std::to_string(row)), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

} // namespace solverkit
