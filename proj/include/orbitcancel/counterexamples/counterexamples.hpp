#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orbitcancel/exact/linalg.hpp"
#include "orbitcancel/exact/multipoly.hpp"

namespace orbitcancel {

// ---- the Fibonacci map (x, y) -> (xy, x^2 + xy) on the affine plane ----

using IntPoint2 = std::pair<BigInt, BigInt>;

inline IntPoint2 fibonacci_map(const IntPoint2& p) {
    const auto& [x, y] = p;
    return {BigInt(x * y), BigInt(x * x + x * y)};
}

inline bool is_origin(const IntPoint2& p) { return p.first == 0 && p.second == 0; }

/// Divides out the content. The map is homogeneous of degree 2, so f(c p) = c^2 f(p) and
/// whether an iterate vanishes is unchanged, while the coordinates stay small.
inline IntPoint2 primitive(const IntPoint2& p) {
    const BigInt g = gcd(p.first, p.second);
    if (g == 0) return p;
    return {BigInt(p.first / g), BigInt(p.second / g)};
}

/// F_{-1} = 1, F_0 = 0, F_1 = 1, ...; index n >= -1.
inline BigInt fibonacci(long n) {
    if (n < -1) throw PreconditionError("fibonacci index below -1");
    if (n == -1) return 1;
    BigInt prev = 1, cur = 0;
    for (long i = 0; i < n; ++i) {
        BigInt next = prev + cur;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// ((-1)^{n+1} F_n, (-1)^n F_{n-1}).
inline IntPoint2 fibonacci_point(unsigned n) {
    const BigInt sign = n % 2 ? 1 : -1;
    return {BigInt(sign * fibonacci(n)), BigInt(-sign * fibonacci(static_cast<long>(n) - 1))};
}

struct FibonacciRow {
    unsigned n = 0;
    IntPoint2 point;
    BigInt F;
    /// f(a_n) = scale * a_{n-1}, when the image is proportional at all.
    std::optional<BigInt> scale;
    bool killed = false;        // f^{n+1}(a_n) = 0
    bool alive_before = false;  // f^n(a_n) != 0
    bool scale_magnitude_ok = false;
    bool ok() const { return killed && alive_before && scale_magnitude_ok; }
};

struct FibonacciReport {
    unsigned n_max = 0;
    /// a_0 = (0, 1) is nonzero and f(a_0) = 0.
    bool base_case_ok = false;
    std::vector<FibonacciRow> rows;
    /// Sign of scale/F_n per row; observed to alternate as (-1)^{n+1}.
    std::vector<int> scale_signs;
    bool all_ok() const {
        if (!base_case_ok) return false;
        for (const auto& r : rows)
            if (!r.ok()) return false;
        return true;
    }
};

namespace detail {

inline std::optional<BigInt> proportionality(const IntPoint2& image, const IntPoint2& base) {
    if (is_origin(base)) return std::nullopt;
    const BigInt& pivot = base.first != 0 ? base.first : base.second;
    const BigInt& num = base.first != 0 ? image.first : image.second;
    if (!divides(pivot, num)) return std::nullopt;
    BigInt s = num / pivot;
    if (image.first != s * base.first || image.second != s * base.second) return std::nullopt;
    return s;
}

}  // namespace detail

inline FibonacciReport fibonacci_verify(unsigned nMax) {
    if (nMax < 1) throw PreconditionError("fibonacci_verify needs nMax >= 1");
    FibonacciReport rep;
    rep.n_max = nMax;
    const IntPoint2 a0 = fibonacci_point(0);
    rep.base_case_ok = !is_origin(a0) && is_origin(fibonacci_map(a0));
    for (unsigned n = 1; n <= nMax; ++n) {
        FibonacciRow row;
        row.n = n;
        row.point = fibonacci_point(n);
        row.F = fibonacci(n);
        const IntPoint2 image = fibonacci_map(row.point);
        row.scale = detail::proportionality(image, fibonacci_point(n - 1));
        if (row.scale) {
            row.scale_magnitude_ok = abs(*row.scale) == row.F;
            rep.scale_signs.push_back(sgn(*row.scale));
        } else {
            rep.scale_signs.push_back(0);
        }
        IntPoint2 p = row.point;
        for (unsigned k = 0; k < n; ++k) p = primitive(fibonacci_map(p));
        row.alive_before = !is_origin(p);
        row.killed = is_origin(fibonacci_map(p));
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---- the plane map (x^2 + yz : x^2 + y^2 + yz : z^2), dehomogenized at z = 1 ----

using Jacobian2x4 = Matrix<BigRat>;

inline const Jacobian2x4& expected_smooth_jacobian() {
    static const Jacobian2x4 m{{0, 1, 0, 1}, {0, 1, 0, -1}};
    return m;
}

struct P2MapState {
    unsigned level = 0;
    /// When set, P and Q are exact modulo monomials of total degree above this.
    std::optional<unsigned> jet_degree;
    MultiPoly P{2}, Q{2};
    /// P(x,y) + P(x',y') and Q(x,y) - Q(x',y') in (x, y, x', y').
    MultiPoly Phi{4}, Psi{4};
    Jacobian2x4 jacobian_at_origin;
    bool derivative_identities = false;
};

struct P2Options {
    std::size_t term_budget = 20000;
    std::optional<unsigned> jet_degree;
};

namespace detail {

inline BigRat partial_at_origin(const MultiPoly& p, std::size_t i) {
    Exponent e(p.arity(), 0);
    e[i] = 1;
    return p.coeff(e);
}

/// Dense bound on the term count of a bivariate polynomial of the given total degree.
inline std::size_t dense_term_bound(std::size_t degree) { return (degree + 1) * (degree + 2) / 2; }

inline void finish_state(P2MapState& st) {
    st.Phi = st.P.embed(4, {0, 1}) + st.P.embed(4, {2, 3});
    st.Psi = st.Q.embed(4, {0, 1}) - st.Q.embed(4, {2, 3});
    st.jacobian_at_origin = Jacobian2x4(2, std::vector<BigRat>(4));
    for (std::size_t i = 0; i < 4; ++i) {
        st.jacobian_at_origin[0][i] = partial_at_origin(st.Phi, i);
        st.jacobian_at_origin[1][i] = partial_at_origin(st.Psi, i);
    }
    st.derivative_identities = partial_at_origin(st.P, 0) == 0 && partial_at_origin(st.Q, 0) == 0 &&
                               partial_at_origin(st.P, 1) == 1 && partial_at_origin(st.Q, 1) == 1;
}

}  // namespace detail

/// Levels 1..nMax of P_{n+1} = P_n^2 + Q_n, Q_{n+1} = P_n^2 + Q_n^2 + Q_n. Full expansion doubles
/// the degree each level, so past n = 7 or so only a jet is affordable.
inline std::vector<P2MapState> p2_iterate_symbolic(unsigned nMax, const P2Options& opt = {}) {
    if (nMax < 1) throw PreconditionError("p2_iterate_symbolic needs nMax >= 1");
    const MultiPoly x = MultiPoly::variable(2, 0), y = MultiPoly::variable(2, 1);
    const auto sq = [&](const MultiPoly& p) { return MultiPoly::multiply(p, p, opt.jet_degree, opt.term_budget); };

    std::vector<P2MapState> out;
    P2MapState st;
    st.level = 1;
    st.jet_degree = opt.jet_degree;
    st.P = sq(x) + y;
    st.Q = sq(x) + sq(y) + y;
    if (opt.jet_degree) {
        st.P = st.P.truncated(*opt.jet_degree);
        st.Q = st.Q.truncated(*opt.jet_degree);
    }
    for (unsigned n = 1;; ++n) {
        detail::finish_state(st);
        if (!st.derivative_identities)
            throw std::logic_error("derivative identities at the origin fail at level " + std::to_string(n));
        out.push_back(st);
        if (n == nMax) break;
        if (!opt.jet_degree && opt.term_budget && n + 1 < 40 &&
            detail::dense_term_bound(std::size_t{1} << (n + 1)) > opt.term_budget)
            throw ResourceError("level " + std::to_string(n + 1) + " may exceed the term budget of " + std::to_string(opt.term_budget));
        const MultiPoly P2 = sq(st.P);
        P2MapState next;
        next.level = n + 1;
        next.jet_degree = opt.jet_degree;
        next.P = P2 + st.Q;
        next.Q = P2 + sq(st.Q) + st.Q;
        st = std::move(next);
    }
    return out;
}

struct SmoothnessReport {
    unsigned level = 0;
    Jacobian2x4 jacobian;
    std::size_t rank = 0;
    bool matches_expected = false;
};

/// Exact Jacobian of (Phi_n, Psi_n) at the origin. Truncation to linear terms is a ring
/// homomorphism, so iterating degree-1 jets gives the derivatives exactly at any level.
inline SmoothnessReport p2_smoothness_check(unsigned n) {
    if (n < 1) throw PreconditionError("p2_smoothness_check needs n >= 1");
    const auto states = p2_iterate_symbolic(n, P2Options{0, 1u});
    const auto& st = states.back();
    SmoothnessReport rep;
    rep.level = n;
    rep.jacobian = st.jacobian_at_origin;
    rep.rank = rank_q(rep.jacobian);
    rep.matches_expected = rep.jacobian == expected_smooth_jacobian();
    return rep;
}

/// n steps of (x, y) -> (x^2 + y, x^2 + y^2 + y).
inline std::pair<BigRat, BigRat> p2_affine_iterate(BigRat x, BigRat y, unsigned n) {
    for (unsigned k = 0; k < n; ++k) {
        BigRat x2 = x * x;
        BigRat nx = x2 + y;
        y = x2 + y * y + y;
        x = std::move(nx);
    }
    return {x, y};
}

}  // namespace orbitcancel
