#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitcancel/dynamics/rat_map.hpp"
#include "orbitcancel/exact/bivariate.hpp"
#include "orbitcancel/exact/factor.hpp"
#include "orbitcancel/exact/intfactor.hpp"
#include "orbitcancel/exact/resultant.hpp"

namespace orbitcancel {

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        default: return "unknown";
    }
}

/// Curve on P^1 x P^1 given by the affine equation F(x, y) = 0; the bihomogeneous form has
/// bidegree (deg_x F, deg_y F).
struct CurveOnP1xP1 {
    BiPoly form;
    bool irreducible_q = true;
    std::optional<bool> absolutely_irreducible;
    Verdict infinite_points = Verdict::unknown;
    std::string verdict_reason;

    static CurveOnP1xP1 from_form(const BiPoly& F) {
        if (F.is_zero() || F.total_degree() < 1) throw PreconditionError("a curve needs a nonconstant form");
        CurveOnP1xP1 c;
        c.form = F.normalized();
        return c;
    }
    static CurveOnP1xP1 diagonal() { return from_form(BiPoly::x() - BiPoly::y()); }
    static CurveOnP1xP1 antidiagonal() { return from_form(BiPoly::x() + BiPoly::y()); }

    long deg_x() const { return std::max(form.deg_x(), 0L); }
    long deg_y() const { return std::max(form.deg_y(), 0L); }

    /// F(X, Z; Y, W) = sum c_ij X^i Z^{a-i} Y^j W^{b-j} at the given points.
    BigRat eval_bihomogeneous(const PointP1& x, const PointP1& y) const {
        const long a = deg_x(), b = deg_y();
        BigRat acc = 0;
        for (long i = 0; i <= a; ++i)
            for (long j = 0; j <= b; ++j) {
                const BigRat c = form.coeff(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                if (c == 0) continue;
                acc += c * BigRat(ipow(x.a(), static_cast<unsigned long>(i)) * ipow(x.b(), static_cast<unsigned long>(a - i)) *
                                  ipow(y.a(), static_cast<unsigned long>(j)) * ipow(y.b(), static_cast<unsigned long>(b - j)));
            }
        return acc;
    }
    bool contains(const PointP1& x, const PointP1& y) const { return eval_bihomogeneous(x, y) == 0; }

    /// Integer coefficients c[i][j] of x^i y^j.
    std::vector<std::vector<BigInt>> coefficients() const {
        std::vector<std::vector<BigInt>> out;
        for (const auto& row : form.rows()) {
            out.emplace_back();
            for (const auto& c : row) out.back().push_back(c.get_num());
        }
        return out;
    }
    std::string str() const { return form.str(); }
    friend bool operator==(const CurveOnP1xP1& a, const CurveOnP1xP1& b) { return a.form == b.form; }
};

struct CurveComponent {
    CurveOnP1xP1 curve;
    unsigned multiplicity = 1;
};

inline constexpr long kDefaultFactorCap = 12;

/// Components of (phi x phi)^{-1}(C): the factors of F(phi(x), phi(y)) over Q.
inline std::vector<CurveComponent> diagonal_preimage_components(const QPoly& phi, const CurveOnP1xP1& C, long degreeCap = kDefaultFactorCap) {
    if (phi.degree() < 1) throw PreconditionError("map must be a nonconstant polynomial");
    const long total = C.form.total_degree() * phi.degree();
    if (total > degreeCap)
        throw ResourceError("preimage of " + C.str() + " has total degree " + std::to_string(total) + ", above the factorisation cap " +
                            std::to_string(degreeCap));
    const BiPoly sub = C.form.substitute(phi, phi);
    std::vector<CurveComponent> out;
    for (const auto& f : factor_bivariate(sub, degreeCap)) {
        CurveComponent comp{CurveOnP1xP1::from_form(f.factor), f.multiplicity};
        out.push_back(std::move(comp));
    }
    return out;
}

enum class EtaleStatus { etale, ramified, inconclusive };

inline const char* to_string(EtaleStatus s) {
    switch (s) {
        case EtaleStatus::etale: return "etale";
        case EtaleStatus::ramified: return "ramified";
        default: return "inconclusive";
    }
}

/// Places of the normalisation over the point at infinity of one projection, read off the Newton
/// polygon of the equation in the local parameter t = 1/x (projection 1) or t = 1/y (projection 2).
struct EtaleReport {
    EtaleStatus status = EtaleStatus::etale;
    /// Degree of the projection: the partial degree in the other variable.
    long projection_degree = 0;
    /// Unramified places found; equals projection_degree when etale.
    long unramified_places = 0;
    /// Slopes y ~ c t^{-slope} of the Newton polygon edges.
    std::vector<BigRat> slopes;
    bool etale() const { return status == EtaleStatus::etale; }
};

inline EtaleReport etale_over_infinity(const CurveOnP1xP1& C, int projection) {
    if (projection != 1 && projection != 2) throw PreconditionError("projection index must be 1 or 2");
    const BiPoly F = projection == 1 ? C.form : C.form.swapped();
    EtaleReport r;
    const long a = F.deg_x(), b = std::max(F.deg_y(), 0L);
    r.projection_degree = b;
    if (b == 0) throw PreconditionError("projection " + std::to_string(projection) + " is constant on " + C.str() + " (a fibre component)");
    // column j: the coefficient of y^j has t-valuation a - deg_x and leading coefficient c_j
    std::vector<std::optional<std::pair<long, BigRat>>> pts(static_cast<std::size_t>(b + 1));
    for (long j = 0; j <= b; ++j) {
        const QPoly cj = F.y_coeff(static_cast<std::size_t>(j));
        if (!cj.is_zero()) pts[static_cast<std::size_t>(j)] = std::pair{a - cj.degree(), cj.lead()};
    }
    long start = 0;
    while (!pts[static_cast<std::size_t>(start)]) ++start;
    // y vanishing identically along the fibre: the form is divisible by y
    if (start > 0) {
        if (start > 1) r.status = EtaleStatus::ramified;
        else r.unramified_places = 1;
    }
    // lower convex hull from column `start` to column b
    long cur = start;
    while (cur < b) {
        long best = -1;
        BigRat bestSlope;
        for (long j = cur + 1; j <= b; ++j) {
            if (!pts[static_cast<std::size_t>(j)]) continue;
            const BigRat s(pts[static_cast<std::size_t>(j)]->first - pts[static_cast<std::size_t>(cur)]->first, j - cur);
            BigRat sc = s;
            sc.canonicalize();
            if (best < 0 || sc <= bestSlope) {
                best = j;
                bestSlope = sc;
            }
        }
        r.slopes.push_back(bestSlope);
        const long len = best - cur;
        if (bestSlope.get_den() != 1) {
            r.status = EtaleStatus::ramified;
        } else {
            std::vector<BigRat> edge(static_cast<std::size_t>(len + 1), BigRat(0));
            for (long j = cur; j <= best; ++j) {
                const auto& pj = pts[static_cast<std::size_t>(j)];
                if (pj && BigRat(pj->first - pts[static_cast<std::size_t>(cur)]->first) == bestSlope * BigRat(j - cur))
                    edge[static_cast<std::size_t>(j - cur)] = pj->second;
            }
            const QPoly E(edge);
            if (gcd(E, E.derivative()).degree() == 0) r.unramified_places += len;
            else if (r.status == EtaleStatus::etale) r.status = EtaleStatus::inconclusive;
        }
        cur = best;
    }
    if (r.status == EtaleStatus::etale && r.unramified_places != b) r.status = EtaleStatus::inconclusive;
    return r;
}

/// Riemann-Hurwitz lower bound for an n-sheeted cover X -> D: 2 g_X - 2 >= n (2 g_D - 2) + (n - 1) d,
/// or + d in the branched-point variant.
struct GenusBound {
    long n = 0, g_D = 0, d = 0;
    bool branched_variant = false;
    long euler_bound = 0;
    bool admits_genus(long g) const { return 2 * g - 2 >= euler_bound; }
    long min_genus() const { return std::max(0L, (euler_bound + 3) / 2); }
};

inline GenusBound genus_lower_bound(long n, long g_D, long d, bool branchedVariant = false) {
    if (n < 2 || g_D < 0 || d < 1) throw PreconditionError("genus bound needs n >= 2, g_D >= 0, d >= 1");
    GenusBound g{n, g_D, d, branchedVariant, 0};
    g.euler_bound = n * (2 * g_D - 2) + (branchedVariant ? d : (n - 1) * d);
    return g;
}

namespace detail {

/// Rational y with F(x0, y) = 0, including y = infinity when the top y-coefficient vanishes at x0.
inline std::vector<PointP1> fibre_points(const CurveOnP1xP1& C, const PointP1& x0) {
    std::vector<PointP1> out;
    const long b = C.deg_y();
    if (b == 0) return out;
    std::vector<BigRat> coeffs(static_cast<std::size_t>(b + 1));
    for (long j = 0; j <= b; ++j) {
        const QPoly cj = C.form.y_coeff(static_cast<std::size_t>(j));
        // homogeneous evaluation of the x-part at (X : Z)
        BigRat v = 0;
        for (long i = 0; i <= C.deg_x(); ++i)
            v += cj.coeff(static_cast<std::size_t>(i)) *
                 BigRat(ipow(x0.a(), static_cast<unsigned long>(i)) * ipow(x0.b(), static_cast<unsigned long>(C.deg_x() - i)));
        coeffs[static_cast<std::size_t>(j)] = v;
    }
    const QPoly g(coeffs);
    if (g.is_zero()) throw PreconditionError("the curve contains the fibre over " + x0.str());
    for (const auto& r : poly_rational_roots(g)) out.push_back(PointP1::from_rational(r));
    if (g.degree() < b) out.push_back(PointP1::infinity());
    return out;
}

}  // namespace detail

/// Rational points with first coordinate of height at most H, each found exactly.
inline std::vector<std::pair<PointP1, PointP1>> rational_points_search(const CurveOnP1xP1& C, long H) {
    std::vector<std::pair<PointP1, PointP1>> out;
    std::vector<PointP1> xs;
    for (long q = 1; q <= H; ++q)
        for (long p = -H; p <= H; ++p)
            if (std::gcd(p, q) == 1) xs.emplace_back(p, q);
    xs.push_back(PointP1::infinity());
    for (const auto& x : xs)
        for (const auto& y : detail::fibre_points(C, x)) out.emplace_back(x, y);
    return out;
}

/// Res_y(F, G) as a polynomial in x, using the formal y-degrees so that specialisation commutes.
inline QPoly resultant_in_y(const BiPoly& F, const BiPoly& G) {
    const long m = F.deg_y(), n = G.deg_y();
    if (m < 1 || n < 1) throw PreconditionError("resultant in y needs positive y-degrees");
    const long bound = F.deg_x() * n + G.deg_x() * m;
    std::vector<BigRat> nodes, vals;
    for (long k = 0; static_cast<long>(nodes.size()) <= bound; ++k) {
        const BigRat x0(k % 2 ? -(k + 1) / 2 : k / 2);
        const QPoly f = F.eval_x(x0), g = G.eval_x(x0);
        const std::size_t N = static_cast<std::size_t>(m + n);
        Matrix<BigRat> S(N, std::vector<BigRat>(N, BigRat(0)));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j <= m; ++j) S[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = f.coeff(static_cast<std::size_t>(m - j));
        for (long i = 0; i < m; ++i)
            for (long j = 0; j <= n; ++j) S[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + j)] = g.coeff(static_cast<std::size_t>(n - j));
        nodes.push_back(x0);
        vals.push_back(detail::det_q(std::move(S)));
    }
    return detail::interpolate(nodes, vals);
}

/// All rational points of a Q-irreducible curve that is reducible over the algebraic closure: such
/// points lie on two conjugate components, hence are singular, and the singular locus is finite.
/// Points on the lines x = infinity and y = infinity are listed in full.
inline std::vector<std::pair<PointP1, PointP1>> rational_points_geometrically_reducible(const CurveOnP1xP1& C) {
    std::set<std::pair<PointP1, PointP1>> pts;
    for (const auto& y : detail::fibre_points(C, PointP1::infinity())) pts.insert({PointP1::infinity(), y});
    if (C.deg_y() >= 1)
        for (const auto& r : poly_rational_roots(C.form.y_coeff(static_cast<std::size_t>(C.deg_y()))))
            pts.insert({PointP1::from_rational(r), PointP1::infinity()});
    const BiPoly Fy = C.form.swapped().partial_x().swapped(), Fx = C.form.partial_x();
    if (C.deg_y() >= 1 && Fy.deg_y() >= 1) {
        const QPoly R = resultant_in_y(C.form, Fy);
        if (R.is_zero()) throw PreconditionError(C.str() + " is not square-free");
        for (const auto& x0 : poly_rational_roots(R)) {
            const QPoly f = C.form.eval_x(x0), fy = Fy.eval_x(x0), fx = Fx.eval_x(x0);
            const QPoly g = gcd(gcd(f, fy), fx);
            if (g.degree() >= 1)
                for (const auto& y : poly_rational_roots(g)) pts.insert({PointP1::from_rational(x0), PointP1::from_rational(y)});
        }
    }
    std::vector<std::pair<PointP1, PointP1>> out;
    for (const auto& p : pts)
        if (C.contains(p.first, p.second)) out.push_back(p);
    return out;
}

struct PointsVerdict {
    Verdict verdict = Verdict::unknown;
    std::string reason;
    /// Genus of the curve when the test determined it.
    std::optional<long> genus;
    std::optional<std::pair<PointP1, PointP1>> witness;
};

namespace detail {

/// Square class data of w^2 = D(x): D = c * S(x)^2 * R(x) with R monic square-free; returns (c, R).
inline std::pair<BigRat, QPoly> squarefree_class(const QPoly& D) {
    QPoly R = QPoly::constant(1);
    const auto parts = squarefree_decomposition(D);
    for (std::size_t i = 0; i < parts.size(); ++i)
        if ((i + 1) % 2 == 1) R = R * parts[i];
    return {D.lead(), monic(R)};
}

/// Integer representative of the square class of a nonzero rational.
inline BigInt square_class_integer(const BigRat& q) { return q.get_num() * q.get_den(); }

/// Whether w^2 = c R(x), R monic of degree 2, has a rational point (affine or at infinity).
inline std::optional<bool> conic_has_point(const BigRat& c, const QPoly& R) {
    // c (x + r1/2)^2 + c (r0 - r1^2/4) = w^2
    const BigRat alpha = c, delta = c * (R.coeff(0) - R.coeff(1) * R.coeff(1) / 4);
    if (delta == 0) return true;
    return legendre_solvable(square_class_integer(alpha), square_class_integer(delta));
}

}  // namespace detail

/// Decides whether C(Q) is infinite for a Q-irreducible curve:
/// geometrically reducible curves have finitely many points; a partial degree 1 makes C the graph
/// of a rational function; a partial degree 2 reduces to w^2 = D(x), whose square-free part fixes the
/// genus (0: decided by Legendre's criterion, 1: unknown, >= 2: finitely many points by Faltings).
inline PointsVerdict infinite_points_test(const CurveOnP1xP1& C, long searchBound = 20) {
    PointsVerdict v;
    if (!C.irreducible_q) throw PreconditionError("infinite points test needs a Q-irreducible curve");
    if (C.deg_x() == 1 || C.deg_y() == 1) {
        v.verdict = Verdict::yes;
        v.reason = "partial degree 1: graph of a rational function over Q";
        v.genus = 0;
        return v;
    }
    if (C.deg_x() == 0 || C.deg_y() == 0) {
        v.verdict = Verdict::no;
        v.reason = "fibre of degree >= 2 without rational points";
        return v;
    }
    const bool absolutely = C.absolutely_irreducible ? *C.absolutely_irreducible : is_absolutely_irreducible(C.form);
    if (!absolutely) {
        v.verdict = Verdict::no;
        v.reason = "not absolutely irreducible: rational points lie on the intersection of conjugate components";
        return v;
    }
    for (const BiPoly& G : {C.form, C.form.swapped()}) {
        if (G.deg_y() != 2) continue;
        const QPoly A = G.y_coeff(2), B = G.y_coeff(1), Cc = G.y_coeff(0);
        const QPoly D = B * B - QPoly::constant(4) * A * Cc;
        const auto [c, R] = detail::squarefree_class(D);
        const long r = R.degree();
        const long genus = (r + 1) / 2 - 1;
        v.genus = std::max(0L, genus);
        if (r == 0) {
            v.verdict = Verdict::no;
            v.reason = "discriminant is a constant times a square: reducible over the algebraic closure";
            return v;
        }
        if (r == 1) {
            v.verdict = Verdict::yes;
            v.reason = "genus 0 double cover branched at a rational point";
            return v;
        }
        if (r == 2) {
            // a smooth rational point lifts to the normalisation; singular ones may not (conjugate tangents)
            const BiPoly Fx = C.form.partial_x(), Fy = C.form.swapped().partial_x().swapped();
            for (const auto& [x, y] : rational_points_search(C, std::min(searchBound, 20L))) {
                if (x.is_infinity() || y.is_infinity()) continue;
                if (Fx.eval(x.value(), y.value()) == 0 && Fy.eval(x.value(), y.value()) == 0) continue;
                v.verdict = Verdict::yes;
                v.reason = "genus 0 with a smooth rational point";
                v.witness = std::pair{x, y};
                return v;
            }
            const auto solvable = detail::conic_has_point(c, R);
            if (!solvable) {
                v.reason = "genus 0; conic coefficients could not be factored";
                return v;
            }
            v.verdict = *solvable ? Verdict::yes : Verdict::no;
            v.reason = *solvable ? "genus 0; the conic is locally solvable everywhere" : "genus 0 conic without rational points";
            return v;
        }
        if (r <= 4) {
            v.reason = "genus 1: rank computation out of scope";
            return v;
        }
        v.verdict = Verdict::no;
        v.reason = "genus " + std::to_string(genus) + " >= 2: finitely many rational points (Faltings)";
        return v;
    }
    const auto found = rational_points_search(C, searchBound);
    v.reason = "both partial degrees >= 3; " + std::to_string(found.size()) + " rational points up to height " + std::to_string(searchBound);
    return v;
}

}  // namespace orbitcancel
