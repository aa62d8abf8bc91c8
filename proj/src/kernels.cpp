#include "solverkit/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

void check_length(const DenseVector& v, std::size_t n, const char* what) {
    if (v.size() != n)
        throw DimensionError(std::string(what) + " has length " + std::to_string(v.size()) +
                             ", expected " + std::to_string(n));
}

} // namespace

void spmv_into(const CsrMatrix& a, const DenseVector& x, DenseVector& y) {
    check_length(x, a.n_cols, "x");
    y.assign(a.n_rows, 0.0);
    const std::int64_t n = static_cast<std::int64_t>(a.n_rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v)
            sum += a.values[v] * x[a.col_indices[v]];
        y[i] = sum;
    }
}

DenseVector spmv(const CsrMatrix& a, const DenseVector& x) {
    DenseVector y;
    spmv_into(a, x, y);
    return y;
}

DenseVector spmv(const CsroMatrix& a, const DenseVector& x) {
    check_length(x, a.n_cols, "x");
    DenseVector y(a.n_rows, 0.0);
    // The offsets are only meaningful scanned in order, so this kernel is a
    // single sequential stream: exactly the access pattern the format is for.
    std::size_t row = 0;
    bool open = false;
    for (std::size_t v = 0; v < a.nnz(); ++v) {
        const index_t off = a.new_row_offsets[v];
        if (off > 0) {
            row = open ? row + off : static_cast<std::size_t>(off) - 1;
            open = true;
        } else if (!open) {
            throw StructureError("first nonzero must open a row (offset >= 1)");
        }
        y[row] += a.values[v] * x[a.col_indices[v]];
    }
    return y;
}

double dot(const DenseVector& x, const DenseVector& y) {
    check_length(y, x.size(), "y");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

double norm(const DenseVector& x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    check_length(y, x.size(), "y");
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_minus_gamma(const DenseVector& x, double beta, const DenseVector& p,
                      double omega, const DenseVector& v, DenseVector& out) {
    check_length(p, x.size(), "p");
    check_length(v, x.size(), "v");
    out.resize(x.size());
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = x[i] + beta * (p[i] - omega * v[i]);
}

namespace ref {

DenseVector spmv(const CsrMatrix& a, const DenseVector& x) {
    check_length(x, a.n_cols, "x");
    DenseVector y(a.n_rows, 0.0);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        double sum = 0.0;
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v)
            sum += a.values[v] * x[a.col_indices[v]];
        y[i] = sum;
    }
    return y;
}

double dot(const DenseVector& x, const DenseVector& y) { return solverkit::dot(x, y); }

double norm(const DenseVector& x) { return solverkit::norm(x); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    check_length(y, x.size(), "y");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace ref

namespace par {

double dot(const DenseVector& x, const DenseVector& y) {
    check_length(y, x.size(), "y");
    double sum = 0.0;
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : sum)
    for (std::int64_t i = 0; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

} // namespace par

} // namespace solverkit
