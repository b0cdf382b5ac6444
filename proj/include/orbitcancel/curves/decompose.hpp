#pragma once

#include <optional>
#include <vector>

#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

/// P = factors[0] o factors[1] o ... o factors.back(), each of degree >= 2 and indecomposable.
struct Decomposition {
    std::vector<QPoly> factors;
    /// Always false over Q: a decomposition over the algebraic closure descends, up to linear twists.
    bool needs_extension = false;
    bool indecomposable() const { return factors.size() == 1; }
};

namespace detail {

/// Outer g with P = g o h, when the base-h expansion of P has constant digits.
inline std::optional<QPoly> outer_factor(const QPoly& P, const QPoly& h) {
    std::vector<BigRat> digits;
    QPoly q = P;
    while (!q.is_zero()) {
        auto [quot, rem] = divmod(q, h);
        if (rem.degree() > 0) return std::nullopt;
        digits.push_back(rem.is_zero() ? BigRat(0) : rem.coeff(0));
        q = quot;
    }
    return QPoly(std::move(digits));
}

/// Inner factor of degree s, monic with zero constant term, matching the top s coefficients of P.
inline std::optional<std::pair<QPoly, QPoly>> split_with_inner_degree(const QPoly& P, long s) {
    const long n = P.degree(), r = n / s;
    const QPoly M = P * QPoly::constant(BigRat(1 / P.lead()));
    std::vector<BigRat> h(static_cast<std::size_t>(s + 1), BigRat(0));
    h[static_cast<std::size_t>(s)] = 1;
    for (long k = 1; k < s; ++k) {
        const QPoly cur(h);
        const QPoly hr = cur.pow(static_cast<unsigned>(r));
        h[static_cast<std::size_t>(s - k)] = (M.coeff(static_cast<std::size_t>(n - k)) - hr.coeff(static_cast<std::size_t>(n - k))) / BigRat(r);
    }
    const QPoly inner(h);
    auto outer = outer_factor(P, inner);
    if (!outer || outer->degree() != r || outer->compose(inner) != P) return std::nullopt;
    return std::pair{*outer, inner};
}

}  // namespace detail

inline Decomposition poly_decompose(const QPoly& P) {
    if (P.degree() < 2) throw PreconditionError("decomposition needs degree at least 2");
    const long n = P.degree();
    for (long s = 2; s < n; ++s) {
        if (n % s) continue;
        if (auto split = detail::split_with_inner_degree(P, s)) {
            Decomposition out = poly_decompose(split->first);
            for (auto& f : poly_decompose(split->second).factors) out.factors.push_back(std::move(f));
            return out;
        }
    }
    return {{P}, false};
}

inline QPoly compose_all(const std::vector<QPoly>& factors) {
    QPoly acc = QPoly::x();
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = it->compose(acc);
    return acc;
}

}  // namespace orbitcancel
