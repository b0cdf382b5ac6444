#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "orbitcancel/dynamics/reduction.hpp"
#include "orbitcancel/exact/series.hpp"

namespace orbitcancel {

/// Unimodular chart sending the smallest lift of a residue point to 0:
/// x -> x - a for an affine residue a, x -> 1/x for infinity.
inline Mat2 chart_matrix(std::size_t idx, unsigned long p) {
    if (idx == p) return {BigInt(0), BigInt(1), BigInt(1), BigInt(0)};
    return {BigInt(1), BigInt(-static_cast<long>(idx)), BigInt(0), BigInt(1)};
}

inline Mat2 chart_inverse(std::size_t idx, unsigned long p) {
    if (idx == p) return chart_matrix(idx, p);
    return {BigInt(1), BigInt(static_cast<long>(idx)), BigInt(0), BigInt(1)};
}

/// One leg of the orbit in chart coordinates: z -> num(z) / den(z), den(0) a p-adic unit.
struct DiskStep {
    std::size_t from = 0, to = 0;
    std::vector<BigInt> num, den;
};

/// Germ of the iterate f^n on the residue disk of a residue point fixed by it.
struct GermAtResidueDisk {
    unsigned long p = 0;
    std::size_t xi = 0;
    Mat2 chart{};
    unsigned long iterations = 1;
    std::vector<DiskStep> steps;
    /// Point of the disk (chart coordinate) moved to 0 before expanding; zero when unshifted.
    std::optional<Padic> shift;
    TruncSeries series;

    /// Exact value of the iterate at a chart coordinate z with |z| < 1 (before any shift).
    Padic eval(const Padic& z) const {
        Padic w = z;
        for (const auto& s : steps) {
            auto horner = [&](const std::vector<BigInt>& c) {
                Padic acc = Padic::exact_zero(p);
                for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + Padic::from_rational(BigRat(*it), p, z.precision());
                return acc;
            };
            w = horner(s.num) / horner(s.den);
        }
        return w;
    }
};

inline std::vector<DiskStep> disk_steps(const RatMapP1& f, const FpMapTable& table, std::size_t xi, unsigned long n) {
    const unsigned long p = table.p;
    std::vector<DiskStep> steps;
    std::size_t cur = xi;
    for (unsigned long i = 0; i < n; ++i) {
        const std::size_t next = table.table[cur];
        RatMapP1 g = f.conjugate(chart_matrix(next, p), chart_inverse(cur, p));
        DiskStep s{cur, next, g.F(), g.G()};
        while (s.num.size() > 1 && s.num.back() == 0) s.num.pop_back();
        while (s.den.size() > 1 && s.den.back() == 0) s.den.pop_back();
        if (divides(BigInt(p), s.den[0]))
            throw PreconditionError("chart step has a non-unit denominator; reduction is inconsistent");
        steps.push_back(std::move(s));
        cur = next;
    }
    return steps;
}

/// Expansion of f^iterations on the residue disk of xi, optionally recentred at a point z0 of that disk:
/// the result is z -> g(z0 + z) - z0.
inline GermAtResidueDisk germ_at_residue_fixed_point(const RatMapP1& f, unsigned long p, std::size_t xi,
                                                     unsigned long iterations = 0, long T = kDefaultTruncation,
                                                     long prec = kDefaultPadicPrecision,
                                                     const std::optional<Padic>& shift = std::nullopt) {
    FpMapTable table = reduce_mod_p(f, p);
    if (xi > p) throw PreconditionError("residue index out of range");
    if (iterations == 0) iterations = table.N0;
    if (table.apply(xi, iterations) != xi)
        throw PreconditionError("residue " + residue_label(xi, p) + " is not fixed by the reduced iterate");
    GermAtResidueDisk g;
    g.p = p;
    g.xi = xi;
    g.chart = chart_matrix(xi, p);
    g.iterations = iterations;
    g.steps = disk_steps(f, table, xi, iterations);
    g.shift = shift;

    TruncSeries s = TruncSeries::identity(p, T, prec);
    if (shift) {
        if (shift->valuation() < 1) throw PreconditionError("recentring point lies outside the residue disk");
        s[0] = shift->with_precision(prec);
    }
    auto padics = [&](const std::vector<BigInt>& c) {
        std::vector<Padic> out;
        for (const auto& x : c) out.push_back(Padic::from_rational(BigRat(x), p, prec));
        return out;
    };
    for (const auto& step : g.steps) {
        TruncSeries num = TruncSeries::eval_poly(padics(step.num), s);
        if (step.den.size() == 1) {
            s = (Padic::from_int(1, p, prec) / Padic::from_rational(BigRat(step.den[0]), p, prec)) * num;
        } else {
            s = num * TruncSeries::eval_poly(padics(step.den), s).inverse();
        }
    }
    if (shift) s[0] -= *shift;
    g.series = s;
    return g;
}

}  // namespace orbitcancel
