#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "orbitcancel/dynamics/rat_map.hpp"
#include "orbitcancel/exact/linalg.hpp"

namespace orbitcancel {

/// log(argument) with the argument kept exactly; comparisons go through the arguments.
struct LogValue {
    BigRat argument = 1;
    double value() const { return argument == 0 ? -std::numeric_limits<double>::infinity() : log_abs(argument); }
    friend bool operator<(const LogValue& a, const LogValue& b) { return a.argument < b.argument; }
    friend bool operator==(const LogValue& a, const LogValue& b) { return a.argument == b.argument; }
    friend LogValue operator+(const LogValue& a, const LogValue& b) { return {a.argument * b.argument}; }
};

inline LogValue weil_height(const PointP1& x) { return {BigRat(std::max(BigInt(::abs(x.a())), x.b()))}; }

/// Height on P^1 x P^1 with respect to O(1,1).
inline LogValue weil_height(const PointP1& x, const PointP1& y) { return weil_height(x) + weil_height(y); }

/// |h(f(x)) - d h(x)| <= max(C1, C2) for every x in P^1(Q).
struct HeightComparison {
    long degree = 0;
    /// h(f(x)) <= d h(x) + C2
    LogValue C2;
    /// h(f(x)) >= d h(x) - C1
    LogValue C1;
    /// Integer forms g1..g4 of degree d-1 with g1 F + g2 G = R X^{2d-1}, g3 F + g4 G = R Z^{2d-1}.
    std::array<std::vector<BigInt>, 4> cofactors;
    LogValue max_constant() const { return std::max(C1, C2); }
    double B0() const { return max_constant().value() / static_cast<double>(degree - 1); }
};

namespace detail {

/// Forms a, b of degree d - 1 with a F + b G = target, a form of degree 2d - 1 (all indexed by X-power).
inline std::pair<std::vector<BigInt>, std::vector<BigInt>> resultant_cofactors(const RatMapP1& f, const std::vector<BigInt>& target) {
    const std::size_t d = static_cast<std::size_t>(f.degree()), n = 2 * d;
    Matrix<BigRat> A(n, std::vector<BigRat>(n, BigRat(0)));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i <= d; ++i) {
            A[i + j][j] = f.F()[i];
            A[i + j][d + j] = f.G()[i];
        }
    std::vector<BigRat> rhs(target.begin(), target.end());
    const auto sol = solve_q(A, rhs);
    if (!sol) throw PreconditionError("resultant cofactors do not exist; the forms share a root");
    std::vector<BigInt> a(d), b(d);
    for (std::size_t j = 0; j < d; ++j) {
        if ((*sol)[j].get_den() != 1 || (*sol)[d + j].get_den() != 1) throw PreconditionError("non-integral resultant cofactor");
        a[j] = (*sol)[j].get_num();
        b[j] = (*sol)[d + j].get_num();
    }
    return {a, b};
}

inline BigInt l1_norm(const std::vector<BigInt>& c) {
    BigInt s = 0;
    for (const auto& x : c) s += ::abs(x);
    return s;
}

}  // namespace detail

/// C2 from |F(a,b)| <= (d+1) max|coeff| H^d. C1 from the resultant identity: evaluated at coprime (a,b)
/// it gives |R| H^{2d-1} <= S H^{d-1} max(|F|,|G|) with S the cofactor l1 mass, and gcd(F(a,b), G(a,b)) | R.
inline HeightComparison height_comparison_constants(const RatMapP1& f) {
    if (f.degree() < 2) throw PreconditionError("height comparison needs degree at least 2");
    HeightComparison hc;
    const long d = f.degree();
    hc.degree = d;
    BigInt top = 0;
    for (const auto* form : {&f.F(), &f.G()})
        for (const auto& c : *form) top = std::max(top, BigInt(::abs(c)));
    hc.C2 = {BigRat(BigInt(d + 1) * top)};
    std::vector<BigInt> xTop(static_cast<std::size_t>(2 * d), BigInt(0)), zTop = xTop;
    xTop.back() = f.resultant();
    zTop.front() = f.resultant();
    auto [g1, g2] = detail::resultant_cofactors(f, xTop);
    auto [g3, g4] = detail::resultant_cofactors(f, zTop);
    const BigInt S = std::max(detail::l1_norm(g1) + detail::l1_norm(g2), detail::l1_norm(g3) + detail::l1_norm(g4));
    hc.C1 = {BigRat(S)};
    hc.cofactors = {g1, g2, g3, g4};
    return hc;
}

/// h(f^n x) / d^n, within error of the canonical height.
struct CanonicalHeightValue {
    /// The exact quotient is log(argument) / divisor.
    BigInt argument = 1;
    BigInt divisor = 1;
    double value = 0;
    double error = 0;
    unsigned iterations = 0;
};

inline constexpr std::size_t kDefaultCoordinateBits = std::size_t(1) << 24;

inline CanonicalHeightValue canonical_height(const RatMapP1& f, const PointP1& x, double tol, const HeightComparison& hc,
                                             std::size_t maxBits = kDefaultCoordinateBits) {
    if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
    const long d = hc.degree;
    const double C = hc.max_constant().value();
    unsigned n = 0;
    if (C > 0) {
        const double need = std::log(C / (static_cast<double>(d - 1) * tol)) / std::log(static_cast<double>(d));
        n = need > 0 ? static_cast<unsigned>(std::ceil(need)) : 0;
    }
    PointP1 y = x;
    for (unsigned i = 0; i < n; ++i) {
        y = f(y);
        if (mpz_sizeinbase(y.a().get_mpz_t(), 2) > maxBits || mpz_sizeinbase(y.b().get_mpz_t(), 2) > maxBits)
            throw ResourceError("orbit coordinates exceed " + std::to_string(maxBits) + " bits after " + std::to_string(i + 1) +
                                " steps; use a larger tolerance");
    }
    CanonicalHeightValue out;
    out.iterations = n;
    out.argument = std::max(BigInt(::abs(y.a())), y.b());
    out.divisor = ipow(BigInt(d), n);
    out.value = log_abs(out.argument) / out.divisor.get_d();
    out.error = C / (static_cast<double>(d - 1) * out.divisor.get_d());
    return out;
}

inline CanonicalHeightValue canonical_height(const RatMapP1& f, const PointP1& x, double tol) {
    return canonical_height(f, x, tol, height_comparison_constants(f));
}

/// Points whose orbit repeats within maxSteps, by exact cycle detection. An orbit point of height
/// above B0 has positive canonical height, which rules preperiodicity out and ends the search early.
inline bool is_preperiodic(const RatMapP1& f, const PointP1& x, unsigned maxSteps) {
    const double cutoff = height_comparison_constants(f).B0() * (1 + 1e-12) + 1e-12;
    std::set<PointP1> seen;
    PointP1 y = x;
    for (unsigned i = 0; i <= maxSteps; ++i) {
        if (!seen.insert(y).second) return true;
        if (weil_height(y).value() > cutoff) return false;
        y = f(y);
    }
    return false;
}

/// One step of the height-decrease inequality along a chain of curves Y_j = f(Y_{j-1}), with the
/// ratio H = deg(f|Y_j) / d^{k+1}.
struct StepBoundReport {
    bool applicable = true;
    /// (1 - 2C/h(Y_j))^{-1}
    double a = 0;
    double bound = 0;
    BigRat H;
    BigRat B;
    bool H_below_one = false;
    bool H_within_B = false;
    /// Two consecutive ratios equal to 1, which the descent argument rules out.
    bool contradiction = false;
};

inline StepBoundReport prop52_step_bound(double hPrev, double hCurrent, long degRestriction, long d, long k, double C,
                                         std::optional<BigRat> previousH = std::nullopt) {
    if (!(hPrev > 0) || !(hCurrent > 0)) throw PreconditionError("heights must be positive");
    if (d < 2 || k < 1 || degRestriction < 1) throw PreconditionError("need d >= 2, k >= 1 and a positive restricted degree");
    StepBoundReport r;
    const BigInt dk = ipow(BigInt(d), static_cast<unsigned long>(k + 1));
    r.H = BigRat(degRestriction, 1) / BigRat(dk);
    r.H.canonicalize();
    r.B = BigRat(dk - 1) / BigRat(dk);
    r.B.canonicalize();
    r.H_below_one = r.H < 1;
    r.H_within_B = r.H <= r.B;
    r.contradiction = r.H == 1 && previousH && *previousH == 1;
    if (hCurrent <= 2 * C) {
        r.applicable = false;
        return r;
    }
    r.a = 1.0 / (1.0 - 2.0 * C / hCurrent);
    r.bound = r.a * r.H.get_d() * hPrev;
    return r;
}

struct SemigroupConstants {
    BigRat C;
    BigRat hDelta;
    BigRat M;
    /// 1 / (1 - 2C/M)
    BigRat aM;
    /// max over the maps of (d^2 - 1) / d^2
    BigRat B;
    BigRat a2B;
    bool valid = false;
    std::optional<double> B0, B1, threshold;
};

/// Smallest M = 2^j with M > max(hDelta + 1, 2C + 1) and a(M)^2 B < 1, exactly.
inline SemigroupConstants semigroup_constants(const std::vector<long>& degrees, const BigRat& C, const BigRat& hDelta, unsigned maxExponent = 256) {
    if (degrees.empty()) throw PreconditionError("need at least one map");
    if (C < 0) throw PreconditionError("C must be nonnegative");
    SemigroupConstants s;
    s.C = C;
    s.hDelta = hDelta;
    s.B = 0;
    for (long d : degrees) {
        if (d < 2) throw PreconditionError("all degrees must be at least 2");
        BigRat b(BigInt(d * d - 1), BigInt(d * d));
        b.canonicalize();
        s.B = std::max(s.B, b);
    }
    const BigRat floor = std::max(BigRat(hDelta + 1), BigRat(2 * C + 1));
    for (unsigned j = 0; j <= maxExponent; ++j) {
        const BigRat M(p_power(2, j));
        if (M <= floor) continue;
        const BigRat a = 1 / (1 - 2 * C / M);
        const BigRat a2B = a * a * s.B;
        if (a2B < 1) {
            s.M = M;
            s.aM = a;
            s.a2B = a2B;
            s.valid = true;
            return s;
        }
    }
    throw ResourceError("no valid M up to 2^" + std::to_string(maxExponent) + "; C is too large");
}

inline SemigroupConstants semigroup_constants(const std::vector<RatMapP1>& maps, const BigRat& C, const BigRat& hDelta) {
    std::vector<long> degrees;
    for (const auto& f : maps) degrees.push_back(f.degree());
    return semigroup_constants(degrees, C, hDelta);
}

/// Point-level stand-in for the curve constant C: the largest B0 over the maps, rounded up to a rational.
inline BigRat surrogate_C(const std::vector<RatMapP1>& maps) {
    double c = 0;
    for (const auto& f : maps) c = std::max(c, height_comparison_constants(f).B0());
    return rat_from_double(std::nextafter(c, std::numeric_limits<double>::infinity()));
}

/// Fills B0, B1 = max canonical height over T, and the threshold 3 B0 + B1.
inline void attach_point_bounds(SemigroupConstants& s, const std::vector<RatMapP1>& maps, const std::vector<PointP1>& T, double tol) {
    double b0 = 0, b1 = 0;
    for (const auto& f : maps) {
        const HeightComparison hc = height_comparison_constants(f);
        b0 = std::max(b0, hc.B0());
        for (const auto& x : T) {
            const CanonicalHeightValue v = canonical_height(f, x, tol, hc);
            b1 = std::max(b1, v.value + v.error);
        }
    }
    s.B0 = b0;
    s.B1 = b1;
    s.threshold = 3 * b0 + b1;
}

}  // namespace orbitcancel
