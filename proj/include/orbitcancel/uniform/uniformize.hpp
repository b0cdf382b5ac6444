#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitcancel/uniform/contraction.hpp"

namespace orbitcancel {

enum class DiskCase { bijective, koenigs, boettcher };

inline const char* to_string(DiskCase c) {
    switch (c) {
        case DiskCase::bijective: return "bijective";
        case DiskCase::koenigs: return "koenigs";
        default: return "boettcher";
    }
}

/// Local coordinate u conjugating an attracting germ to z -> a1 z (Koenigs)
/// or a superattracting germ of local degree d to z -> z^d (Boettcher).
struct UniformizationResult {
    DiskCase kind = DiskCase::koenigs;
    /// Koenigs: u = z + O(z^2). Boettcher: the normalised v = z + O(z^2) with u = b v, b^{d-1} = c_d.
    TruncSeries u;
    Padic multiplier;  // a1 (Koenigs) or c_d (Boettcher)
    long degree = 1;   // 1 for Koenigs, the local degree d for Boettcher
    /// b in Q_p when c_d has a (d-1)-st root there.
    std::optional<Padic> scale;
    /// Bound on [L : Q_p] for the field L containing b.
    long extension_degree = 1;
    /// Coefficients of u are forced by the functional equation up to this index.
    long determined_order = 0;
    Radius radius;
    PPower rho;
    bool rho_rigorous = true;
    /// Residual of the functional equation vanishes at the precision it is known to.
    bool residual_vanishes = false;
    long residual_precision = 0;
};

/// Largest p^{-m} (m >= 0) with |b_k| p^{-m(k-1)} < 1 for every stored k >= 2, and whether
/// that is rigorous (all stored b_k with k >= 2 integral).
inline std::pair<PPower, bool> injectivity_radius(const TruncSeries& u) {
    long m = 0;
    bool integral = true;
    for (std::size_t k = 2; k < u.coeffs().size(); ++k) {
        const long v = u[k].valuation(), km1 = static_cast<long>(k) - 1;
        if (v < 0) integral = false;
        // smallest integer m with m (k-1) > -v
        const long q = -v >= 0 ? (-v) / km1 : -((v + km1 - 1) / km1);
        m = std::max(m, q + 1);
    }
    return {PPower::of(u.prime(), BigRat(-m)), integral};
}

namespace detail {

/// Precision for exact small constants entering a computation at working precision prec.
inline long constant_precision(long prec) { return 2 * prec + 64; }

inline std::vector<TruncSeries> series_powers(const TruncSeries& G, long upto) {
    std::vector<TruncSeries> pw;
    pw.push_back(TruncSeries::from_rationals({1}, G.prime(), G.order(), G.min_precision()));
    for (long j = 1; j <= upto; ++j) pw.push_back(pw.back() * G);
    return pw;
}

/// Stored representatives of G taken at working precision W: the solve then runs on that lift,
/// and interval precision losses in the recursion do not eat into the input precision.
inline TruncSeries promote(const TruncSeries& G, long W) {
    TruncSeries out(G.prime(), G.order(), W, G.tail());
    for (std::size_t k = 0; k < G.coeffs().size(); ++k) out[k] = Padic::from_rational(G[k].to_rational_rep(), G.prime(), W);
    return out;
}

inline long working_precision(const TruncSeries& G) { return G.min_precision() + 16 * (G.order() + 1); }

inline void check_residual(UniformizationResult& r, const TruncSeries& residual) {
    r.residual_vanishes = residual.is_zero_at_precision();
    r.residual_precision = residual.min_precision();
}

/// Re-solves at a higher working precision until the residual is known to the input precision.
template <class Solve>
UniformizationResult solve_to_input_precision(const TruncSeries& input, Solve solve) {
    const long target = input.min_precision();
    long W = working_precision(input);
    UniformizationResult r;
    for (int attempt = 0; attempt < 6; ++attempt) {
        r = solve(input, W);
        if (r.residual_precision >= target) return r;
        W += 2 * (target - r.residual_precision) + 16 * (input.order() + 1);
    }
    r.residual_vanishes = false;
    return r;
}

/// (d-1)-st root of c in Q_p when one exists and can be lifted by Newton iteration (p not dividing d-1).
inline std::optional<Padic> qp_root(const Padic& c, long k, long prec) {
    const unsigned long p = c.prime();
    if (k == 1) return c;
    if (c.is_zero() || c.valuation() % k != 0) return std::nullopt;
    if (static_cast<unsigned long>(k) % p == 0) return std::nullopt;
    const Padic unit = c / Padic::from_rational(BigRat(p_power(p, c.valuation())), p, constant_precision(prec));
    const BigInt P(p);
    const BigInt target = mod(unit.unit(), P);
    std::optional<unsigned long> r0;
    for (unsigned long r = 1; r < p && !r0; ++r)
        if (mod(BigInt(ipow(BigInt(r), static_cast<unsigned long>(k)) - target), P) == 0) r0 = r;
    if (!r0) return std::nullopt;
    const long rel = std::min(prec, unit.relative_precision());
    Padic x = Padic::from_int(static_cast<long>(*r0), p, rel);
    const Padic kk = Padic::from_int(k, p, rel);
    for (long digits = 1; digits < 2 * rel; digits *= 2)
        x = x - (x.pow(static_cast<unsigned long>(k)) - unit.with_precision(rel)) / (kk * x.pow(static_cast<unsigned long>(k - 1)));
    return x * Padic::from_rational(BigRat(p_power(p, c.valuation() / k)), p, constant_precision(prec));
}

}  // namespace detail

/// Koenigs coordinate of G(z) = a1 z + ..., 0 < |a1| < 1, solved order by order from u o G = a1 u.
/// The stored coefficients of G are treated as exact representatives.
namespace detail {
inline UniformizationResult koenigs_at(const TruncSeries& input, long W) {
    const TruncSeries G = promote(input, W);
    if (G.order() < 1) throw PreconditionError("germ needs a linear coefficient");
    if (!G[0].is_zero()) throw PreconditionError("Koenigs coordinate needs G(0) = 0");
    const Padic a1 = G[1];
    if (a1.is_zero()) throw PreconditionError("a1 = 0: superattracting germ, use the Boettcher coordinate");
    if (a1.valuation() <= 0) throw PreconditionError("|a1| >= 1: the germ is not attracting (bijective case)");
    const unsigned long p = G.prime();
    const long T = G.order();
    auto pw = detail::series_powers(G, T);
    TruncSeries u(p, T, kExactPrecision, TailKind::unknown);
    u[1] = Padic::from_int(1, p, detail::constant_precision(G.min_precision()));
    for (long k = 2; k <= T; ++k) {
        Padic acc = Padic::exact_zero(p);
        for (long j = 1; j < k; ++j) acc += u[static_cast<std::size_t>(j)] * pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        u[static_cast<std::size_t>(k)] = acc / (a1 - a1.pow(static_cast<unsigned long>(k)));
    }
    UniformizationResult r;
    r.kind = DiskCase::koenigs;
    r.multiplier = a1;
    r.degree = 1;
    r.extension_degree = 1;
    r.determined_order = T;
    r.radius = radius_rf(G);
    std::tie(r.rho, r.rho_rigorous) = injectivity_radius(u);
    detail::check_residual(r, series_compose(u, G) - a1 * u);
    r.u = std::move(u);
    return r;
}
}  // namespace detail

inline UniformizationResult koenigs(const TruncSeries& input) {
    return detail::solve_to_input_precision(input, detail::koenigs_at);
}

/// a1^{-n} G^{o n}: the limit construction, kept as a cross-check for the recursive solve.
inline TruncSeries koenigs_limit(const TruncSeries& G, unsigned n) {
    TruncSeries it = G;
    for (unsigned i = 1; i < n; ++i) it = series_compose(G, it);
    return (Padic::from_int(1, G.prime(), detail::constant_precision(G.min_precision())) / G[1].pow(n)) * it;
}

/// Boettcher coordinate of G(z) = c_d z^d + ..., d >= 2: v = z + O(z^2) solving v o G = c_d v^d,
/// so that u = b v with b^{d-1} = c_d satisfies u o G = u^d.
namespace detail {
inline UniformizationResult boettcher_at(const TruncSeries& input, long W) {
    const TruncSeries G = promote(input, W);
    if (G.order() < 2) throw PreconditionError("germ too short for a Boettcher coordinate");
    if (!G[0].is_zero()) throw PreconditionError("Boettcher coordinate needs G(0) = 0");
    if (!G[1].is_zero()) throw PreconditionError("a1 != 0: not superattracting");
    const long d = G.lowest_nonzero(2);
    if (d < 0) throw PreconditionError("germ vanishes at precision; local degree undetermined");
    const unsigned long p = G.prime();
    const long T = G.order();
    const Padic c = G[static_cast<std::size_t>(d)];
    const long K = std::max(1L, T - d + 1);
    auto pw = detail::series_powers(G, T / d);
    TruncSeries v(p, T, kExactPrecision, TailKind::unknown);
    const long cp = detail::constant_precision(G.min_precision());
    v[1] = Padic::from_int(1, p, cp);
    const Padic cd = c * Padic::from_int(d, p, cp);
    for (long n = 2; n <= K; ++n) {
        const long e = d + n - 1;
        Padic lhs = Padic::exact_zero(p);
        for (long j = 1; j < n && j * d <= e; ++j)
            lhs += v[static_cast<std::size_t>(j)] * pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)];
        const TruncSeries vd = v.pow(static_cast<unsigned>(d));
        v[static_cast<std::size_t>(n)] = (lhs - c * vd[static_cast<std::size_t>(e)]) / cd;
    }
    UniformizationResult r;
    r.kind = DiskCase::boettcher;
    r.multiplier = c;
    r.degree = d;
    r.determined_order = K;
    r.radius = radius_rf(G);
    r.scale = detail::qp_root(c, d - 1, c.precision());
    r.extension_degree = r.scale ? 1 : d - 1;
    std::tie(r.rho, r.rho_rigorous) = injectivity_radius(v);
    detail::check_residual(r, series_compose(v, G) - c * v.pow(static_cast<unsigned>(d)));
    r.u = std::move(v);
    return r;
}
}  // namespace detail

inline UniformizationResult boettcher(const TruncSeries& input) {
    return detail::solve_to_input_precision(input, detail::boettcher_at);
}

/// l' = largest exponent, in the lcm l0 of root-of-unity orders over extensions of Q_p of degree <= D,
/// of a prime dividing d.
inline long root_of_unity_exponent(unsigned long p, long D, long d) {
    if (D < 1 || d < 2) throw PreconditionError("root_of_unity_exponent needs D >= 1 and d >= 2");
    BigInt l0 = 1;
    for (long k = 1; k <= D; ++k) l0 = lcm(l0, BigInt(p_power(p, k) - 1));
    // p-power roots of unity: p^m needs degree (p-1) p^{m-1}
    long m = 0;
    while (BigInt(p - 1) * p_power(p, m) <= D) ++m;
    l0 *= p_power(p, m);
    long best = 0;
    for (const auto& [q, e] : factor_small(static_cast<unsigned long>(d))) {
        (void)e;
        best = std::max(best, p_valuation(l0, q));
    }
    return best;
}

}  // namespace orbitcancel
