#pragma once

#include <functional>
#include <optional>

#include "orbitcancel/dynamics/germ.hpp"
#include "orbitcancel/exact/series.hpp"

namespace orbitcancel {

struct Radius {
    PPower r;
    /// False when coefficients beyond the truncation could shrink the radius.
    bool rigorous = true;
};

/// (sup_{k>=1} |a_k|^{1/k})^{-1} over the stored coefficients. Coefficients that are zero at
/// precision contribute their precision bound, so the reported radius never overshoots.
inline Radius radius_rf(const TruncSeries& G) {
    if (G.lowest_nonzero(1) < 0) throw PreconditionError("radius undetermined: no nonzero coefficient beyond the constant");
    std::optional<BigRat> best;  // min over k of v(a_k) / k
    bool unit = false;
    for (std::size_t k = 1; k < G.coeffs().size(); ++k) {
        BigRat e = BigRat(G[k].valuation()) / BigRat(static_cast<long>(k));
        if (!best || e < *best) best = e;
        if (G[k].is_unit()) unit = true;
    }
    Radius out{PPower::of(G.prime(), *best), true};
    switch (G.tail()) {
        case TailKind::zero: break;
        case TailKind::integral: out.rigorous = G.all_integral() && (unit || *best <= 0); break;
        case TailKind::unknown: out.rigorous = false; break;
    }
    return out;
}

/// |z| * max(|a_1|, |z| / r(G)): an upper bound for |G(z)| when G(0) = 0 and |a_1| < 1.
inline PPower contraction_bound(const TruncSeries& G, const PPower& z, std::optional<Radius> radius = std::nullopt) {
    if (!G[0].is_zero()) throw PreconditionError("contraction bound needs a germ vanishing at 0");
    if (G.order() >= 1 && G[1].is_unit()) throw PreconditionError("contraction bound needs |a1| < 1");
    if (G.order() >= 1 && G[1].valuation() < 0) throw PreconditionError("contraction bound needs |a1| < 1");
    const Radius r = radius ? *radius : radius_rf(G);
    if (!(z < r.r)) throw PreconditionError("|z| must be below the radius r(G) = " + r.r.str());
    const PPower a1 = G.order() >= 1 ? G[1].abs_bound() : PPower::null(G.prime());
    return z * max(a1, z / r.r);
}

namespace detail {

inline Padic eval_series_at(const TruncSeries& G, const Padic& z) {
    Padic acc = Padic::exact_zero(G.prime());
    for (auto it = G.coeffs().rbegin(); it != G.coeffs().rend(); ++it) acc = acc * z + *it;
    return acc;
}

inline Padic iterate_to_fixed_point(const std::function<Padic(const Padic&)>& g, unsigned long p, long prec) {
    Padic z = Padic::zero(p, prec);
    for (long i = 0; i <= prec + 1; ++i) {
        Padic next = g(z).with_precision(prec);
        if ((next - z).is_zero() && next.precision() == prec) return next;
        z = next;
    }
    throw ResourceError("fixed-point iteration did not stabilise; precision was lost");
}

inline void check_fixed_point_hypotheses(const TruncSeries& G) {
    if (!G.all_integral()) throw PreconditionError("fixed-point lemma needs coefficients in Z_p");
    if (G[0].valuation() < 1) throw PreconditionError("fixed-point lemma needs |a0| < 1");
    if (G.order() >= 1 && G[1].valuation() < 1) throw PreconditionError("fixed-point lemma needs |a1| < 1");
}

}  // namespace detail

/// Fixed point of G on pZ_p, found by contraction (each step gains at least one p-adic digit).
inline Padic germ_fixed_point(const TruncSeries& G) {
    detail::check_fixed_point_hypotheses(G);
    if (G.tail() == TailKind::unknown) throw PreconditionError("fixed-point lemma needs a known integral tail");
    long prec = G.min_precision();
    // An omitted integral tail perturbs G(z) by at most |z|^{T+1} <= p^{-(T+1)}.
    if (G.tail() != TailKind::zero) prec = std::min(prec, G.order() + 1);
    return detail::iterate_to_fixed_point([&](const Padic& z) { return detail::eval_series_at(G, z); }, G.prime(), prec);
}

/// Same, evaluating the iterate exactly along the orbit of charts instead of through the truncated series.
inline Padic germ_fixed_point(const GermAtResidueDisk& g) {
    if (g.shift) throw PreconditionError("fixed point search expects an unshifted germ");
    detail::check_fixed_point_hypotheses(g.series);
    const long prec = g.series.min_precision();
    return detail::iterate_to_fixed_point([&](const Padic& z) { return g.eval(z); }, g.p, prec);
}

}  // namespace orbitcancel
