#include <doctest.h>

#include <cmath>

#include "solverkit/csr.hpp"
#include "solverkit/error.hpp"
#include "solverkit/kernels.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace solverkit;

TEST_SUITE("kernels") {

TEST_CASE("spmv matches a dense long-double oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n_rows = 1 + seed % 19;
        const std::size_t n_cols = 1 + (seed * 3) % 23;
        const CsrMatrix a = gen::random_sparse(seed, n_rows, n_cols, 0.3);
        const DenseVector x = gen::random_vector(seed + 1000, n_cols);
        const DenseVector y = spmv(a, x);
        const auto want = oracle::matvec(oracle::dense_from_csr(a), x);
        REQUIRE(y.size() == want.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(oracle::rel_diff(y[i], want[i]) < 1e-13);
    }
}

TEST_CASE("offset-format spmv equals the row-pointer path exactly") {
    for (std::uint64_t seed = 50; seed < 90; ++seed) {
        const std::size_t n_rows = 1 + seed % 31;
        const CsrMatrix a =
            gen::random_sparse(seed, n_rows, 1 + seed % 29, seed % 4 == 0 ? 0.05 : 0.4);
        const CsroMatrix o = csr_to_csro(a);
        const DenseVector x = gen::random_vector(seed + 2000, a.n_cols);
        const DenseVector via_csr = spmv(a, x);
        const DenseVector via_csro = spmv(o, x);
        // same per-row accumulation order, so equality is exact
        CHECK(via_csr == via_csro);
    }
}

TEST_CASE("parallel kernels agree bitwise with the serial reference") {
    const CsrMatrix a = gen::random_diag_dominant(33, 400, 0.02);
    const DenseVector x = gen::random_vector(34, 400);
    CHECK(spmv(a, x) == ref::spmv(a, x));

    DenseVector y = gen::random_vector(35, 400);
    DenseVector y_ref = y;
    axpy(0.37, x, y);
    ref::axpy(0.37, x, y_ref);
    CHECK(y == y_ref);

    CHECK(dot(x, y) == ref::dot(x, y));
    CHECK(norm(x) == ref::norm(x));
}

TEST_CASE("dot and norm against long-double accumulation") {
    for (std::uint64_t seed = 7; seed < 17; ++seed) {
        const std::size_t n = 10 + seed * 13;
        const DenseVector x = gen::random_vector(seed, n);
        const DenseVector y = gen::random_vector(seed + 1, n);
        CHECK(oracle::rel_diff(dot(x, y), static_cast<double>(oracle::dot_long(x, y))) <
              1e-13);
        CHECK(oracle::rel_diff(norm(x), oracle::norm_long(x)) < 1e-14);
        // parallel reduction is allowed to differ, but only by rounding
        CHECK(oracle::rel_diff(par::dot(x, y), static_cast<double>(oracle::dot_long(x, y))) <
              1e-12);
    }
}

TEST_CASE("direction update kernel composes axpys") {
    const std::size_t n = 97;
    const DenseVector r = gen::random_vector(1, n);
    const DenseVector p = gen::random_vector(2, n);
    const DenseVector v = gen::random_vector(3, n);
    DenseVector out;
    xpby_minus_gamma(r, 0.75, p, 0.25, v, out);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(out[i] == r[i] + 0.75 * (p[i] - 0.25 * v[i]));
}

TEST_CASE("kernels reject mismatched lengths") {
    const CsrMatrix a = gen::random_sparse(1, 4, 5, 0.5);
    CHECK_THROWS_AS(spmv(a, DenseVector(4, 0.0)), DimensionError);
    DenseVector y(3, 0.0);
    CHECK_THROWS_AS(axpy(1.0, DenseVector(4, 0.0), y), DimensionError);
    CHECK_THROWS_AS(dot(DenseVector(4, 0.0), DenseVector(5, 0.0)), DimensionError);
}

TEST_CASE("empty and zero-size edge cases") {
    const CsrMatrix a = from_triplets(3, 3, {});
    const DenseVector y = spmv(a, DenseVector(3, 1.0));
    CHECK(y == DenseVector(3, 0.0));
    CHECK(dot(DenseVector{}, DenseVector{}) == 0.0);
    CHECK(norm(DenseVector{}) == 0.0);
}

} // TEST_SUITE
