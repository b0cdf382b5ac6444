#pragma once

#include <vector>

#include "orbitcancel/exact/linalg.hpp"
#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

/// Sylvester matrix of two coefficient lists given high-to-low with formal degrees
/// m = a.size()-1 and n = b.size()-1.
inline Matrix<BigInt> sylvester_matrix(const std::vector<BigInt>& aHigh, const std::vector<BigInt>& bHigh) {
    const std::size_t m = aHigh.size() - 1, n = bHigh.size() - 1, N = m + n;
    Matrix<BigInt> s(N, std::vector<BigInt>(N, BigInt(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= m; ++j) s[i][i + j] = aHigh[j];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= n; ++j) s[n + i][i + j] = bHigh[j];
    return s;
}

/// Resultant of binary forms F(X,Z) = sum_i F[i] X^i Z^{d-i} and G likewise,
/// both of formal degree d (coefficient lists indexed by the power of X).
inline BigInt binary_resultant(const std::vector<BigInt>& F, const std::vector<BigInt>& G) {
    if (F.size() != G.size()) throw PreconditionError("binary resultant needs forms of equal degree");
    if (F.size() < 2) throw PreconditionError("binary resultant needs forms of positive degree");
    std::vector<BigInt> a(F.rbegin(), F.rend()), b(G.rbegin(), G.rend());
    return det_bareiss(sylvester_matrix(a, b));
}

/// Univariate resultant Res_x(a, b) over Z with the actual degrees.
inline BigInt resultant(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    if (a.degree() == 0 && b.degree() == 0) return 1;
    if (a.degree() == 0) return ipow(a.lead(), static_cast<unsigned long>(b.degree()));
    if (b.degree() == 0) return ipow(b.lead(), static_cast<unsigned long>(a.degree()));
    std::vector<BigInt> ah(a.coeffs().rbegin(), a.coeffs().rend()), bh(b.coeffs().rbegin(), b.coeffs().rend());
    return det_bareiss(sylvester_matrix(ah, bh));
}

inline BigInt discriminant(const ZPoly& a) {
    const long n = a.degree();
    if (n < 1) throw PreconditionError("discriminant of a constant");
    BigInt r = resultant(a, a.derivative());
    BigInt d = r / a.lead();
    return (n * (n - 1) / 2) % 2 ? BigInt(-d) : d;
}

}  // namespace orbitcancel
