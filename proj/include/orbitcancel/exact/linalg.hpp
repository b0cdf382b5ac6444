#pragma once

#include <optional>
#include <vector>

#include "orbitcancel/exact/bigint.hpp"

namespace orbitcancel {

template <class R>
using Matrix = std::vector<std::vector<R>>;

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
inline BigInt det_bareiss(Matrix<BigInt> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// Rank of a rational matrix.
inline std::size_t rank_q(Matrix<BigRat> a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[rank], a[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][c] == 0) continue;
            BigRat f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// One solution of A x = b over Q (free variables set to zero), or nullopt if inconsistent.
inline std::optional<std::vector<BigRat>> solve_q(Matrix<BigRat> a, std::vector<BigRat> b) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivCol;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[rank], a[piv]);
        std::swap(b[rank], b[piv]);
        BigRat inv = 1 / a[rank][c];
        for (std::size_t j = c; j < cols; ++j) a[rank][j] *= inv;
        b[rank] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][c] == 0) continue;
            BigRat f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
            b[i] -= f * b[rank];
        }
        pivCol.push_back(c);
        ++rank;
    }
    for (std::size_t i = rank; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<BigRat> x(cols, BigRat(0));
    for (std::size_t i = 0; i < rank; ++i) x[pivCol[i]] = b[i];
    return x;
}

}  // namespace orbitcancel
