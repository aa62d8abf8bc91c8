#pragma once

// Deterministic input generators for tests and benchmarks. Every generator
// takes a seed and uses its own engine, so tests stay reproducible no matter
// how many of them run or in what order.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "solverkit/csr.hpp"
#include "solverkit/types.hpp"

namespace gen {

using solverkit::CsrMatrix;
using solverkit::Triplet;
using solverkit::index_t;

// Random canonical matrix, possibly rectangular, with empty rows allowed.
inline CsrMatrix random_sparse(std::uint64_t seed, std::size_t n_rows, std::size_t n_cols,
                               double density) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution hit(density);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            if (hit(eng))
                t.push_back({static_cast<index_t>(i), static_cast<index_t>(j), val(eng)});
    return solverkit::from_triplets(n_rows, n_cols, std::move(t));
}

// Square, structural diagonal always present, diagonally dominant values:
// safe for ILU0 and quick BiCGStab convergence.
inline CsrMatrix random_diag_dominant(std::uint64_t seed, std::size_t n, double density,
                                      bool symmetric_pattern = false) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(1.0, 2.0);
    std::bernoulli_distribution hit(density);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !hit(eng)) continue;
            const double v = val(eng);
            dense[i][j] = v;
            if (symmetric_pattern && dense[j][i] == 0.0) dense[j][i] = v;
        }
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (dense[i][j] != 0.0) {
                t.push_back({static_cast<index_t>(i), static_cast<index_t>(j), dense[i][j]});
                row_sum += std::abs(dense[i][j]);
            }
        }
        t.push_back({static_cast<index_t>(i), static_cast<index_t>(i), row_sum + bump(eng)});
    }
    return solverkit::from_triplets(n, n, std::move(t));
}

// Triangular (including the diagonal), diagonally dominant.
inline CsrMatrix random_triangular(std::uint64_t seed, std::size_t n, bool lower,
                                   double density) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(1.0, 2.0);
    std::bernoulli_distribution hit(density);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const bool keep = lower ? j < i : j > i;
            if (!keep || !hit(eng)) continue;
            const double v = val(eng);
            t.push_back({static_cast<index_t>(i), static_cast<index_t>(j), v});
            row_sum += std::abs(v);
        }
        t.push_back({static_cast<index_t>(i), static_cast<index_t>(i), row_sum + bump(eng)});
    }
    return solverkit::from_triplets(n, n, std::move(t));
}

// Every position filled, diagonally dominant: zero fill-in elimination on it
// is a complete factorisation.
inline CsrMatrix random_full_pattern(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(1.0, 2.0);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double v = val(eng) / static_cast<double>(n);
            t.push_back({static_cast<index_t>(i), static_cast<index_t>(j), v});
            row_sum += std::abs(v);
        }
        t.push_back({static_cast<index_t>(i), static_cast<index_t>(i), row_sum + bump(eng)});
    }
    return solverkit::from_triplets(n, n, std::move(t));
}

// Finite element assembly over an nx-by-ny grid of 8-node elements with a
// random density factor per element. Symmetric positive definite; for
// (nx, ny) = (120, 100) the pattern has 36441 rows and 565761 nonzeros.
inline CsrMatrix wathen(std::size_t nx, std::size_t ny, std::uint64_t seed) {
    static const double elem[8][8] = {
        {6, -6, 2, -8, 3, -8, 2, -6},   {-6, 32, -6, 20, -8, 16, -8, 20},
        {2, -6, 6, -6, 2, -8, 3, -8},   {-8, 20, -6, 32, -6, 20, -8, 16},
        {3, -8, 2, -6, 6, -6, 2, -8},   {-8, 16, -8, 20, -6, 32, -6, 20},
        {2, -8, 3, -8, 2, -6, 6, -6},   {-6, 20, -8, 16, -8, 20, -6, 32}};
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> rho(0.0, 100.0);

    const std::size_t n = 3 * nx * ny + 2 * nx + 2 * ny + 1;
    std::vector<Triplet> t;
    t.reserve(nx * ny * 64);
    for (std::size_t j = 1; j <= ny; ++j) {
        for (std::size_t i = 1; i <= nx; ++i) {
            std::size_t nn[8];
            nn[0] = 3 * j * nx + 2 * i + 2 * j + 1;
            nn[1] = nn[0] - 1;
            nn[2] = nn[1] - 1;
            nn[3] = (3 * j - 1) * nx + 2 * j + i - 1;
            nn[4] = 3 * (j - 1) * nx + 2 * i + 2 * j - 3;
            nn[5] = nn[4] + 1;
            nn[6] = nn[5] + 1;
            nn[7] = nn[3] + 1;
            const double w = rho(eng) / 45.0;
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 8; ++c)
                    t.push_back({static_cast<index_t>(nn[r] - 1),
                                 static_cast<index_t>(nn[c] - 1), w * elem[r][c]});
        }
    }
    return solverkit::from_triplets(n, n, std::move(t));
}

inline solverkit::DenseVector random_vector(std::uint64_t seed, std::size_t n,
                                            double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> val(lo, hi);
    solverkit::DenseVector v(n);
    for (auto& x : v) x = val(eng);
    return v;
}

} // namespace gen
